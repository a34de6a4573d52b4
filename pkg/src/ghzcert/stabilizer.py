"""The commutative stabilizer group of the n-party GHZ state.

Group elements are Pauli products with a uniform x-pattern (sigma_x on
every site or on none) and an even-parity z-mask; there are 2**n of them
and they form a group isomorphic to (Z_2)**n under bitwise XOR of the
(b0, z_mask) encoding.  Every element fixes the GHZ vector.

Index convention: the element of index p reads the n-bit big-endian
representation of p as b_0 b_1 ... b_{n-1}; b_0 is the x-flag, b_j is the
z-bit of site j for j < n, and the z-bit of site n completes the parity.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError, NegatedElementError, NotInGroupError
from .pauli import MAX_SITES, PauliString


@dataclass(frozen=True)
class GroupElement:
    """One stabilizer-group element in (b0, z_mask) form."""

    n: int
    b0: int
    z_mask: int

    def __post_init__(self):
        if not 1 <= self.n <= MAX_SITES:
            raise InputError(f"site count must be in [1, {MAX_SITES}], got {self.n}")
        if self.b0 not in (0, 1):
            raise InputError(f"b0 must be 0 or 1, got {self.b0}")
        if not 0 <= self.z_mask < (1 << self.n):
            raise InputError(f"z_mask must use only the low {self.n} bits")
        if self.z_mask.bit_count() % 2 != 0:
            raise InputError(f"z_mask {self.z_mask:#x} has odd parity")

    @property
    def is_identity(self) -> bool:
        return self.b0 == 0 and self.z_mask == 0

    def to_pauli(self) -> PauliString:
        x_mask = (1 << self.n) - 1 if self.b0 else 0
        return PauliString(self.n, x_mask, self.z_mask, 0)

    def index(self) -> int:
        """Inverse of element_from_index."""
        p = self.b0
        for j in range(1, self.n):
            p = (p << 1) | ((self.z_mask >> (j - 1)) & 1)
        return p

    def bit_vector(self) -> int:
        """(n+1)-bit GF(2) coordinates: b0 in the top bit, z_mask below."""
        return (self.b0 << self.n) | self.z_mask

    def label(self) -> str:
        return self.to_pauli().label()

    def __str__(self) -> str:
        return "O_" + self.label()


def element_from_index(n: int, p: int) -> GroupElement:
    """Construct the group element of index p in [0, 2**n)."""
    if not 0 <= p < (1 << n):
        raise InputError(f"index {p} out of range [0, {1 << n}) for n={n}")
    b0 = (p >> (n - 1)) & 1
    z_mask = 0
    parity = 0
    for j in range(1, n):
        bj = (p >> (n - 1 - j)) & 1
        z_mask |= bj << (j - 1)
        parity ^= bj
    z_mask |= parity << (n - 1)
    return GroupElement(n, b0, z_mask)


def group_product(a: GroupElement, b: GroupElement) -> GroupElement:
    """Group law: componentwise XOR.  Sign-free by the parity invariant."""
    if a.n != b.n:
        raise InputError(f"size mismatch: {a.n} vs {b.n}")
    return GroupElement(a.n, a.b0 ^ b.b0, a.z_mask ^ b.z_mask)


def enumerate_group(n: int) -> list[GroupElement]:
    """All 2**n elements in index order."""
    return [element_from_index(n, p) for p in range(1 << n)]


def canonical_generators(n: int) -> list[GroupElement]:
    """The all-x element plus the n-1 elements with z at sites j and n."""
    if n < 2:
        raise InputError(f"canonical generators need n >= 2, got {n}")
    gens = [GroupElement(n, 1, 0)]
    for j in range(1, n):
        gens.append(GroupElement(n, 0, (1 << (j - 1)) | (1 << (n - 1))))
    return gens


def membership(s: PauliString) -> GroupElement:
    """Return the group element that equals s, or raise.

    NegatedElementError signals that -s (equivalently, flipping the input
    sign) is in the group; NotInGroupError covers every other failure.
    """
    full = (1 << s.n) - 1
    if s.x_mask not in (0, full):
        raise NotInGroupError(
            f"{s} has a non-uniform x-pattern (sigma_x must act on all sites or none)"
        )
    if s.z_mask.bit_count() % 2 != 0:
        raise NotInGroupError(f"{s} has an odd number of sigma_z factors")
    if s.phase_exp == 2:
        raise NegatedElementError(f"{s} is minus one times a group element")
    if s.phase_exp != 0:
        raise NotInGroupError(f"{s} carries a residual phase i**{s.phase_exp}")
    return GroupElement(s.n, 1 if s.x_mask else 0, s.z_mask)


@dataclass(frozen=True)
class Gf2Basis:
    """Result of GF(2) elimination over a list of group elements.

    ``basis_indices`` selects an independent subset of the inputs; for each
    input i, ``decompositions[i]`` is the subset of ``basis_indices`` whose
    product reproduces input i (as a frozenset of input positions).
    """

    rank: int
    basis_indices: tuple[int, ...]
    decompositions: tuple[frozenset[int], ...]


def rank_gf2(elements: list[GroupElement]) -> Gf2Basis:
    """Gaussian elimination over the (b0, z_mask) bit vectors.

    Tracks, for every input, the combination of chosen basis inputs that
    reproduces it, so callers get rank, basis, and decompositions from a
    single pass.  The identity element decomposes over the empty set.
    """
    if not elements:
        raise InputError("rank_gf2 needs at least one element")
    n = elements[0].n
    if any(e.n != n for e in elements):
        raise InputError("mixed site counts in rank_gf2 input")

    # Echelon rows: (reduced vector, set of basis input indices XORing to it).
    rows: list[tuple[int, frozenset[int]]] = []
    basis: list[int] = []
    decomps: list[frozenset[int]] = []
    for i, elem in enumerate(elements):
        residue = elem.bit_vector()
        used: frozenset[int] = frozenset()
        for vec, sel in rows:
            if residue & (1 << (vec.bit_length() - 1)):
                residue ^= vec
                used ^= sel
        if residue == 0:
            decomps.append(used)
        else:
            rows.append((residue, used | {i}))
            rows.sort(key=lambda r: r[0].bit_length(), reverse=True)
            basis.append(i)
            decomps.append(frozenset({i}))
    return Gf2Basis(len(basis), tuple(basis), tuple(decomps))
