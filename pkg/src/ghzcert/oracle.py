"""Dense-matrix ground truth for every claim the fast path makes.

Everything here builds explicit complex matrices by site-wise Kronecker
products (site 1 is the most significant qubit, matching bit 0 = site 1
in the mask encoding) and checks the bitmask algebra, the character
spectrum, and the bound formulas against eigendecompositions.  Dimension
caps keep accidental 2**20 dense allocations out of reach; every cap is
overridable per call.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import InputError, NotInClassError, OracleError
from .observable import Observable, build_observable, check_class_membership, spectrum
from .pauli import PauliString, commutes, multiply
from .stabilizer import (
    GroupElement,
    canonical_generators,
    element_from_index,
    enumerate_group,
)

_SITE_MATS = {
    (0, 0): np.eye(2, dtype=complex),
    (1, 0): np.array([[0, 1], [1, 0]], dtype=complex),
    (0, 1): np.array([[1, 0], [0, -1]], dtype=complex),
    (1, 1): np.array([[0, -1], [1, 0]], dtype=complex),  # X @ Z
}

DENSE_CAP = 12


def _check_cap(n: int, cap: int, what: str) -> None:
    if n > cap:
        raise InputError(
            f"{what} supports n <= max_n = {cap}, got n = {n}; pass a larger max_n"
        )


def dense_matrix(x, *, max_n: int = DENSE_CAP) -> np.ndarray:
    """Explicit 2**n x 2**n matrix of a PauliString, GroupElement, or
    Observable.  Site 1 occupies the leftmost Kronecker slot."""
    if isinstance(x, Observable):
        _check_cap(x.n, max_n, "dense_matrix")
        total = np.zeros((1 << x.n, 1 << x.n), dtype=complex)
        for alpha, elem in x.terms:
            total += alpha * dense_matrix(elem, max_n=max_n)
        return total
    if isinstance(x, GroupElement):
        x = x.to_pauli()
    if not isinstance(x, PauliString):
        raise InputError(f"cannot build a dense matrix from {type(x).__name__}")
    _check_cap(x.n, max_n, "dense_matrix")
    mats = []
    for site in range(1, x.n + 1):
        bit = 1 << (site - 1)
        mats.append(_SITE_MATS[(int(bool(x.x_mask & bit)), int(bool(x.z_mask & bit)))])
    return (1j**x.phase_exp) * reduce(np.kron, mats)


def ghz_vector(n: int) -> np.ndarray:
    """(e_first + e_last)/sqrt(2): equal superposition of all-0 and all-1."""
    dim = 1 << n
    vec = np.zeros(dim, dtype=complex)
    vec[0] = vec[dim - 1] = 1 / np.sqrt(2)
    return vec


def ghz_basis(n: int = 3) -> np.ndarray:
    """Joint eigenbasis of the stabilizer group, as matrix columns.

    Column k is (e_a + s*e_{comp(a)})/sqrt(2) with s = +1 for the first
    2**(n-1) columns and -1 after; column 0 is the GHZ vector.  For n = 3
    the columns follow the published eight-state listing, which pairs the
    plus states in the order 000, 100, 010, 001 and mirrors it for the
    minus states.
    """
    dim = 1 << n
    reps = list(range(1 << (n - 1)))
    if n == 3:
        plus_reps = [0, 3, 2, 1]  # pairs {0,7}, {3,4}, {2,5}, {1,6}
        minus_reps = [1, 2, 3, 0]
    else:
        plus_reps = reps
        minus_reps = reps[::-1]
    cols = np.zeros((dim, dim), dtype=complex)
    root = 1 / np.sqrt(2)
    for k, a in enumerate(plus_reps):
        cols[a, k] = root
        cols[dim - 1 - a, k] += root
    for k, a in enumerate(minus_reps):
        cols[a, k + (dim >> 1)] = root
        cols[dim - 1 - a, k + (dim >> 1)] -= root
    return cols


def projector_expansion_check(n: int, *, max_n: int = 10) -> float:
    """Max-entry residual between the GHZ projector and the uniform sum of
    all 2**n group-element matrices divided by 2**n."""
    _check_cap(n, max_n, "projector_expansion_check")
    dim = 1 << n
    total = np.zeros((dim, dim), dtype=complex)
    for elem in enumerate_group(n):
        total += dense_matrix(elem, max_n=max_n)
    total /= dim
    ghz = ghz_vector(n)
    return float(np.max(np.abs(total - np.outer(ghz, ghz.conj()))))


def dense_spectrum(obs: Observable, *, max_n: int = 10) -> list[float]:
    """Eigenvalues of the dense observable, descending with multiplicity."""
    _check_cap(obs.n, max_n, "dense_spectrum")
    mat = dense_matrix(obs, max_n=max_n)
    if np.max(np.abs(mat - mat.conj().T)) > 1e-12:
        raise OracleError("observable matrix is not Hermitian")
    return [float(v) for v in np.linalg.eigvalsh(mat)[::-1]]


def _expectation(state: np.ndarray, mat: np.ndarray) -> float:
    value = np.trace(state @ mat)
    if abs(value.imag) > 1e-9:
        raise OracleError(f"expectation has imaginary part {value.imag:g}")
    return float(value.real)


def _check_density_matrix(state: np.ndarray) -> None:
    if abs(np.trace(state) - 1) > 1e-9:
        raise InputError("density matrix trace differs from 1")
    if np.max(np.abs(state - state.conj().T)) > 1e-9:
        raise InputError("density matrix is not Hermitian")
    if float(np.linalg.eigvalsh(state)[0]) < -1e-9:
        raise InputError("density matrix is not positive semidefinite")


def lemma_margins(
    state: np.ndarray, x: PauliString, y: PauliString
) -> tuple[float, float]:
    """Slack of the two-sided correlation inequality for commuting binary
    observables: (1 - |<X> - <Y>| - <XY>, <XY> - <X> - <Y> + 1).

    Both must be nonnegative for any density matrix; returning the slacks
    lets sweeps assert a numeric floor instead of a bare boolean.
    """
    if not commutes(x, y):
        raise InputError("lemma requires a commuting pair")
    if not (x.is_real_signed and x.is_hermitian and y.is_real_signed and y.is_hermitian):
        raise InputError("lemma requires real-signed Hermitian strings")
    _check_density_matrix(state)
    mx = dense_matrix(x)
    my = dense_matrix(y)
    ex = _expectation(state, mx)
    ey = _expectation(state, my)
    exy = _expectation(state, dense_matrix(multiply(x, y)))
    return (1 - abs(ex - ey) - exy, exy - ex - ey + 1)


def lemma_check(
    state: np.ndarray, x: PauliString, y: PauliString, *, tol: float = 1e-10
) -> bool:
    upper_slack, lower_slack = lemma_margins(state, x, y)
    return upper_slack >= -tol and lower_slack >= -tol


def proposition1_check(obs: Observable, *, max_n: int = 8) -> bool:
    """True iff the dense top eigenvalue is simple and its eigenvector is
    the GHZ vector up to phase.  Requires class membership."""
    _check_cap(obs.n, max_n, "proposition1_check")
    report = check_class_membership(obs)
    if not report.in_class:
        raise NotInClassError(report.failures)
    mat = dense_matrix(obs, max_n=max_n)
    vals, vecs = np.linalg.eigh(mat)
    scale = max(1.0, float(sum(abs(a) for a in obs.coefficients)))
    if vals[-1] - vals[-2] <= 1e-9 * scale:
        return False
    overlap = abs(np.vdot(vecs[:, -1], ghz_vector(obs.n))) ** 2
    return overlap >= 1 - 1e-10


@dataclass(frozen=True)
class WernerExpectations:
    """Mean and GHZ fidelity of a visibility-V GHZ/maximally-mixed mixture,
    analytically and (for small n) by dense trace."""

    mean: float
    fidelity: float
    dense_mean: float | None
    dense_fidelity: float | None


def werner_expectations(
    n: int, visibility: float, obs: Observable, *, dense_max_n: int = 8
) -> WernerExpectations:
    """For rho = V*P_GHZ + (1-V)*I/2**n: every non-identity group element
    has expectation V and the identity 1, so the mean is a coefficient sum;
    the fidelity is V + (1-V)/2**n."""
    if not 0 <= visibility <= 1:
        raise InputError(f"visibility must be in [0, 1], got {visibility}")
    if obs.n != n:
        raise InputError(f"observable has n = {obs.n}, expected {n}")
    mean = 0.0
    for alpha, elem in obs.terms:
        mean += alpha * (1.0 if elem.index() == 0 else visibility)
    fidelity = visibility + (1 - visibility) / (1 << n)

    dense_mean = dense_fidelity = None
    if n <= dense_max_n:
        dim = 1 << n
        ghz = ghz_vector(n)
        proj = np.outer(ghz, ghz.conj())
        rho = visibility * proj + (1 - visibility) * np.eye(dim) / dim
        dense_mean = _expectation(rho, dense_matrix(obs, max_n=dense_max_n))
        dense_fidelity = _expectation(rho, proj)
    return WernerExpectations(mean, fidelity, dense_mean, dense_fidelity)


def random_density_matrix(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Trace-normalized G @ G.conj().T from a complex Gaussian G."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def _random_class_observable(
    n: int, rng: np.random.Generator, extra: int = 2
) -> Observable:
    """Random class member: canonical generators plus random extra
    elements, positive coefficients in (0, 5]."""
    elems = list(canonical_generators(n))
    pool = [p for p in range(1 << n)]
    for p in rng.choice(pool, size=min(extra, len(pool)), replace=False):
        elem = element_from_index(n, int(p))
        if elem not in elems:
            elems.append(elem)
    coeffs = 5.0 - rng.uniform(0.0, 5.0, size=len(elems))  # (0, 5]
    return build_observable(n, list(zip(coeffs, elems)))


def _random_observable(n: int, rng: np.random.Generator) -> Observable:
    """Random group subset (any size, any rank) with positive coefficients."""
    m = int(rng.integers(1, min(1 << n, 12) + 1))
    indices = rng.choice(1 << n, size=m, replace=False)
    elems = [element_from_index(n, int(p)) for p in indices]
    coeffs = 5.0 - rng.uniform(0.0, 5.0, size=m)
    return build_observable(n, list(zip(coeffs, elems)))


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    detail: str


def verify_all(
    *, max_n: int = 8, trials: int = 1000, seed: int | None = None
) -> list[SuiteResult]:
    """Run every dense cross-check suite; one result row per suite."""
    rng = np.random.default_rng(seed)
    results = []

    def run(name, fn):
        try:
            detail = fn()
            results.append(SuiteResult(name, True, detail))
        except AssertionError as exc:
            results.append(SuiteResult(name, False, str(exc)))

    def suite_multiply():
        count = max(20, trials // 20)
        worst = 0.0
        for _ in range(count):
            n = int(rng.integers(1, 7))
            a = _random_pauli(n, rng)
            b = _random_pauli(n, rng)
            lhs = dense_matrix(multiply(a, b))
            rhs = dense_matrix(a) @ dense_matrix(b)
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
        assert worst <= 1e-12, f"multiply residual {worst:g}"
        return f"{count} random products, max residual {worst:.2e}"

    def suite_elements():
        checked = 0
        for n in range(2, min(max_n, 6) + 1):
            ghz = ghz_vector(n)
            for elem in enumerate_group(n):
                mat = dense_matrix(elem)
                assert np.max(np.abs(mat.imag)) <= 1e-12, "complex entries"
                assert np.max(np.abs(mat - mat.T.conj())) <= 1e-12, "not Hermitian"
                dim = 1 << n
                assert np.max(np.abs(mat @ mat - np.eye(dim))) <= 1e-12, "not an involution"
                assert np.max(np.abs(mat @ ghz - ghz)) <= 1e-12, "does not fix GHZ"
                checked += 1
        return f"{checked} group elements Hermitian, real, involutive, GHZ-fixing"

    def suite_closure():
        pairs = 0
        for n in range(1, min(max_n, 6) + 1):
            group = enumerate_group(n)
            for a in group:
                for b in group:
                    prod = multiply(a.to_pauli(), b.to_pauli())
                    expect = element_from_index(n, a.index() ^ b.index())
                    assert prod == expect.to_pauli(), (
                        f"n={n}: O_{a.index()} O_{b.index()} != O_{a.index() ^ b.index()}"
                    )
                    pairs += 1
        return f"{pairs} products close with sign +1"

    def suite_projector():
        worst = 0.0
        top = min(max_n, 10)
        for n in range(2, top + 1):
            worst = max(worst, projector_expansion_check(n))
        assert worst <= 1e-10, f"projector residual {worst:g}"
        return f"n = 2..{top}, max residual {worst:.2e}"

    def suite_spectrum():
        count = max(10, trials // 10)
        worst = 0.0
        for _ in range(count):
            n = int(rng.integers(2, min(max_n, 8) + 1))
            obs = _random_observable(n, rng)
            fast = spectrum(obs, materialize=True)
            flat = []
            for value, mult in fast.distinct_values:
                flat.extend([value] * mult)
            dense = dense_spectrum(obs)
            worst = max(worst, max(abs(f - d) for f, d in zip(flat, dense)))
        assert worst <= 1e-9, f"spectrum mismatch {worst:g}"
        return f"{count} random observables, max eigenvalue gap {worst:.2e}"

    def suite_lemma():
        group = enumerate_group(3)
        worst = float("inf")
        for _ in range(trials):
            rho = random_density_matrix(8, rng)
            i, j = rng.choice(len(group), size=2, replace=False)
            slacks = lemma_margins(rho, group[i].to_pauli(), group[j].to_pauli())
            worst = min(worst, *slacks)
            assert min(slacks) >= -1e-10, f"lemma violated, slack {min(slacks):g}"
        return f"{trials} instances, min slack {worst:.2e}"

    def suite_proposition1():
        count = max(10, trials // 20)
        for _ in range(count):
            n = int(rng.integers(2, min(max_n, 6) + 1))
            obs = _random_class_observable(n, rng)
            assert proposition1_check(obs), "top eigenvector is not the GHZ vector"
        return f"{count} class observables with simple GHZ top eigenvalue"

    def suite_werner():
        worst = 0.0
        for n in range(2, min(max_n, 6) + 1):
            for v in (0.0, 0.25, 0.5, 0.75, 1.0):
                obs = _random_class_observable(n, rng)
                w = werner_expectations(n, v, obs)
                worst = max(
                    worst, abs(w.mean - w.dense_mean), abs(w.fidelity - w.dense_fidelity)
                )
        assert worst <= 1e-10, f"werner analytic/dense gap {worst:g}"
        return f"analytic vs dense agree to {worst:.2e}"

    run("pauli multiply vs dense product", suite_multiply)
    run("group element matrix properties", suite_elements)
    run("group closure with sign +1", suite_closure)
    run("projector expansion residual", suite_projector)
    run("character vs dense spectrum", suite_spectrum)
    run("correlation inequality sweep", suite_lemma)
    run("top eigenvector is GHZ for class observables", suite_proposition1)
    run("werner analytic vs dense", suite_werner)
    return results


def _random_pauli(n: int, rng: np.random.Generator) -> PauliString:
    return PauliString(
        n,
        int(rng.integers(0, 1 << n)),
        int(rng.integers(0, 1 << n)),
        int(rng.integers(0, 4)),
    )
