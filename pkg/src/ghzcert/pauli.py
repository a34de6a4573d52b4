"""Exact algebra of n-site Pauli products in a bitmask encoding.

A product of single-site Pauli factors is stored as two n-bit masks plus a
power of i:

    operator = i**phase_exp * prod_j X_j**x_j * Z_j**z_j

where bit ``j - 1`` of ``x_mask``/``z_mask`` holds the exponent for site j
(site 1 is the least significant bit) and the per-site factor is the matrix
product X^x Z^z, X on the left.  A site with both bits set is therefore
XZ = -i*sigma_y.  The label grammar uses the opposite bookkeeping for 'y':
the character 'y' denotes the factor i*sigma_y = -XZ, so each 'y' adds 2 to
``phase_exp``.  With that convention a label containing an even number of
'y' characters and a +1 sign parses to phase_exp = 0.

Everything here is immutable and pure; values can be shared freely across
threads.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError

MAX_SITES = 64

_LABEL_BITS = {"I": (0, 0), "x": (1, 0), "y": (1, 1), "z": (0, 1)}
_BITS_LABEL = {v: k for k, v in _LABEL_BITS.items()}


@dataclass(frozen=True)
class PauliString:
    """A signed n-site Pauli product in (x_mask, z_mask, phase_exp) form."""

    n: int
    x_mask: int
    z_mask: int
    phase_exp: int = 0

    def __post_init__(self):
        if not 1 <= self.n <= MAX_SITES:
            raise InputError(f"site count must be in [1, {MAX_SITES}], got {self.n}")
        full = (1 << self.n) - 1
        if not 0 <= self.x_mask <= full or not 0 <= self.z_mask <= full:
            raise InputError(f"masks must use only the low {self.n} bits")
        if not 0 <= self.phase_exp <= 3:
            raise InputError(f"phase exponent must be in [0, 3], got {self.phase_exp}")

    @property
    def is_real_signed(self) -> bool:
        """True when the overall factor is +1 or -1 (no residual i)."""
        return self.phase_exp % 2 == 0

    @property
    def is_hermitian(self) -> bool:
        """Hermiticity test: the count of XZ sites must match phase parity."""
        return (self.x_mask & self.z_mask).bit_count() % 2 == self.phase_exp % 2

    @property
    def is_identity(self) -> bool:
        return self.x_mask == 0 and self.z_mask == 0 and self.phase_exp == 0

    def sign(self) -> int:
        """+1 or -1 for real-signed strings."""
        if not self.is_real_signed:
            raise InputError(f"string has residual phase i**{self.phase_exp}")
        return 1 if self.phase_exp == 0 else -1

    def label(self) -> str:
        """Site characters in site order, without the sign prefix."""
        chars = []
        for j in range(self.n):
            chars.append(_BITS_LABEL[(self.x_mask >> j) & 1, (self.z_mask >> j) & 1])
        return "".join(chars)

    def __str__(self) -> str:
        prefix = {0: "+", 1: "+i", 2: "-", 3: "-i"}[
            (self.phase_exp + 2 * ((self.x_mask & self.z_mask).bit_count() % 2)) % 4
        ]
        return prefix + self.label()


def identity(n: int) -> PauliString:
    return PauliString(n, 0, 0, 0)


def pauli_from_label(n: int, label: str, sign: int = 1) -> PauliString:
    """Parse a site-ordered label over {I, x, y, z} into a PauliString.

    'x'/'z' set the corresponding mask bit, 'y' sets both bits and stands
    for the factor i*sigma_y, contributing 2 to the phase exponent; `sign`
    of -1 contributes another 2.
    """
    if len(label) != n:
        raise InputError(f"label {label!r} has length {len(label)}, expected {n}")
    if sign not in (1, -1):
        raise InputError(f"sign must be +1 or -1, got {sign}")
    x_mask = z_mask = 0
    phase = 0 if sign == 1 else 2
    for j, ch in enumerate(label):
        try:
            x, z = _LABEL_BITS[ch]
        except KeyError:
            raise InputError(
                f"invalid character {ch!r} at site {j + 1}; expected one of I, x, y, z"
            ) from None
        x_mask |= x << j
        z_mask |= z << j
        if x and z:
            phase += 2
    return PauliString(n, x_mask, z_mask, phase % 4)


def multiply(a: PauliString, b: PauliString) -> PauliString:
    """Product a*b with exact phase tracking.

    Per site, (X^a Z^b)(X^c Z^d) = (-1)^(b c) X^(a xor c) Z^(b xor d); the
    sign flips accumulate as 2 * popcount(a.z & b.x) in the phase exponent.
    """
    if a.n != b.n:
        raise InputError(f"size mismatch: {a.n} vs {b.n}")
    phase = (a.phase_exp + b.phase_exp + 2 * (a.z_mask & b.x_mask).bit_count()) % 4
    return PauliString(a.n, a.x_mask ^ b.x_mask, a.z_mask ^ b.z_mask, phase)


def commutes(a: PauliString, b: PauliString) -> bool:
    """True iff the symplectic product of the two strings vanishes mod 2."""
    if a.n != b.n:
        raise InputError(f"size mismatch: {a.n} vs {b.n}")
    anti = (a.x_mask & b.z_mask).bit_count() + (a.z_mask & b.x_mask).bit_count()
    return anti % 2 == 0
