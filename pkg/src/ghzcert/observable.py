"""Weighted stabilizer-group observables, class membership, and spectra.

An observable is a real linear combination of stabilizer-group elements.
Because all group elements share the 2**n joint eigenvectors, the spectrum
is computed without any matrix algebra: pick a GF(2) basis of the group,
enumerate all 2**n sign assignments (characters), and read each term's
sign off its basis decomposition.  The sign assignment that is +1 on every
basis element is the "trivial" character; its eigenvector is the GHZ
vector and its eigenvalue is the coefficient sum.

For n above ``MATERIALIZE_MAX_N`` the full multiset of 2**n values is not
stored; a chunked streaming pass keeps only the extreme distinct values
(all the downstream bound formulas need) plus the trivial multiplicity.
The chunk reduction is associative, so results do not depend on chunking.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSpectrumError, InputError
from .pauli import PauliString
from .stabilizer import (
    GroupElement,
    canonical_generators,
    membership,
    rank_gf2,
)

MATERIALIZE_MAX_N = 20
_CHUNK_BITS = 20


@dataclass(frozen=True)
class Observable:
    """Validated weighted sum of stabilizer-group elements."""

    n: int
    terms: tuple[tuple[float, GroupElement], ...]
    sigmas: tuple[float, ...] | None = None

    @property
    def coefficients(self) -> tuple[float, ...]:
        return tuple(alpha for alpha, _ in self.terms)

    @property
    def elements(self) -> tuple[GroupElement, ...]:
        return tuple(elem for _, elem in self.terms)

    @property
    def coefficient_sum(self) -> float:
        return float(sum(alpha for alpha, _ in self.terms))


def build_observable(
    n: int,
    terms,
    sigmas=None,
) -> Observable:
    """Validate and normalize terms into an Observable.

    Terms are (coefficient, element) pairs where the element may be a
    GroupElement or any PauliString that passes the group membership test.
    Duplicate elements are merged by summing coefficients; uncertainties
    merge in quadrature weighted by coefficient.  Zero-coefficient terms
    (given or produced by merging) are dropped with a warning.
    """
    terms = list(terms)
    if not terms:
        raise InputError("observable needs at least one term")
    sigma_list = None if sigmas is None else [float(s) for s in sigmas]
    if sigma_list is not None and len(sigma_list) != len(terms):
        raise InputError(
            f"got {len(sigma_list)} uncertainties for {len(terms)} terms"
        )

    merged: dict[GroupElement, float] = {}
    merged_var: dict[GroupElement, float] = {}
    order: list[GroupElement] = []
    for i, (alpha, elem) in enumerate(terms):
        alpha = float(alpha)
        if not np.isfinite(alpha):
            raise InputError(f"coefficient is not finite: {alpha}", path=f"terms[{i}]")
        if isinstance(elem, PauliString):
            if elem.n != n:
                raise InputError(
                    f"term has {elem.n} sites, expected {n}", path=f"terms[{i}]"
                )
            try:
                elem = membership(elem)
            except InputError as exc:
                raise type(exc)(str(exc), path=f"terms[{i}]") from None
        elif isinstance(elem, GroupElement):
            if elem.n != n:
                raise InputError(
                    f"term has {elem.n} sites, expected {n}", path=f"terms[{i}]"
                )
        else:
            raise InputError(
                f"term element must be a GroupElement or PauliString, got {type(elem).__name__}",
                path=f"terms[{i}]",
            )
        if elem not in merged:
            order.append(elem)
            merged[elem] = 0.0
            merged_var[elem] = 0.0
        merged[elem] += alpha
        if sigma_list is not None:
            sigma = sigma_list[i]
            if sigma < 0:
                raise InputError(f"uncertainty must be >= 0, got {sigma}", path=f"terms[{i}]")
            merged_var[elem] += (alpha * sigma) ** 2

    out_terms = []
    out_sigmas = []
    for elem in order:
        alpha = merged[elem]
        if alpha == 0.0:
            warnings.warn(
                f"dropping zero-coefficient term O_{elem.label()}", stacklevel=2
            )
            continue
        out_terms.append((alpha, elem))
        out_sigmas.append(merged_var[elem] ** 0.5 / abs(alpha))
    if not out_terms:
        raise InputError("all terms have zero coefficient")
    return Observable(
        n,
        tuple(out_terms),
        tuple(out_sigmas) if sigma_list is not None else None,
    )


@dataclass(frozen=True)
class ClassReport:
    """Outcome of the certification-class test."""

    in_class: bool
    rank: int
    failures: tuple[str, ...]


def check_class_membership(obs: Observable) -> ClassReport:
    """In class iff all coefficients are positive and the terms generate
    the full group (GF(2) rank n)."""
    failures = []
    for i, (alpha, elem) in enumerate(obs.terms):
        if alpha <= 0:
            failures.append(
                f"term {i} (O_{elem.label()}): coefficient {alpha:g} is not positive"
            )
    m = len(obs.terms)
    if m < obs.n:
        failures.append(f"term count {m} < n = {obs.n}")
    rank = rank_gf2(list(obs.elements)).rank
    if rank < obs.n:
        failures.append(f"generator rank {rank} < n = {obs.n}")
    return ClassReport(not failures, rank, tuple(failures))


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues of an Observable, grouped into distinct values.

    ``distinct_values`` is a descending (value, multiplicity) tuple whose
    multiplicities sum to 2**n; it is None when the spectrum was computed
    in streaming mode, in which case only the key values survive.
    """

    n: int
    distinct_values: tuple[tuple[float, int], ...] | None
    trivial_value: float
    trivial_multiplicity: int
    max_value: float
    second_value: float | None
    min_value: float
    grouping_tol: float
    value_tol: float
    class_report: ClassReport

    @property
    def total(self) -> int:
        return 1 << self.n

    @property
    def in_class(self) -> bool:
        return self.class_report.in_class

    def bracket(self, mean: float) -> tuple[float, ...]:
        """Distinct value(s) adjacent to ``mean``: a single value when mean
        coincides with one (within value_tol), else the bracketing pair.

        ``mean`` must be feasible.  In streaming mode only the regions
        derivable from the key values are supported.
        """
        if self.distinct_values is not None:
            values = [v for v, _ in self.distinct_values]  # descending
            for v in values:
                if abs(mean - v) <= self.value_tol:
                    return (v,)
            for hi, lo in zip(values, values[1:]):
                if lo < mean < hi:
                    return (lo, hi)
            raise InputError(f"mean {mean} outside the spectrum range")
        # Streaming summary: only the top gap and the endpoints are known.
        if abs(mean - self.max_value) <= self.value_tol:
            return (self.max_value,)
        if abs(mean - self.min_value) <= self.value_tol:
            return (self.min_value,)
        if self.second_value is not None:
            if abs(mean - self.second_value) <= self.value_tol:
                return (self.second_value,)
            if self.second_value < mean < self.max_value:
                return (self.second_value, self.max_value)
        raise InputError(
            "interior eigenvalues were not materialized for this spectrum; "
            "recompute with spectrum(obs, materialize=True)"
        )


def _character_masks(obs: Observable) -> tuple[list[int], int]:
    """Basis decomposition bitmasks for each term, over a full group basis.

    Runs one GF(2) elimination over the term elements followed by the
    canonical generators, so rank-deficient term sets get completed to a
    full basis without affecting the terms' own decompositions.
    """
    n = obs.n
    elems = list(obs.elements)
    if n >= 2:
        candidates = canonical_generators(n)
    else:
        candidates = [GroupElement(1, 1, 0)]
    basis = rank_gf2(elems + candidates)
    if basis.rank != n:
        raise AssertionError("basis completion failed to reach full rank")
    position = {input_index: k for k, input_index in enumerate(basis.basis_indices)}
    masks = []
    for i in range(len(elems)):
        mask = 0
        for j in basis.decompositions[i]:
            mask |= 1 << position[j]
        masks.append(mask)
    return masks, basis.rank


def _term_values(ks: np.ndarray, alphas, masks, dtype) -> np.ndarray:
    """Eigenvalues of the characters indexed by ``ks``."""
    vals = np.zeros(ks.shape, dtype=dtype)
    one = np.ones((), dtype=dtype)
    for alpha, mask in zip(alphas, masks):
        parity = np.bitwise_count(ks & np.uint64(mask)).astype(dtype) % 2
        vals += alpha * (one - 2 * parity)
    return vals


def spectrum(
    obs: Observable,
    *,
    materialize: bool | None = None,
    completion: list[GroupElement] | None = None,
) -> Spectrum:
    """Exact spectrum via character enumeration.

    The term elements need not generate the full group; missing directions
    are filled from ``completion`` (default: the canonical generators), a
    choice that cannot change the eigenvalue multiset.  With materialize
    False (the default above n = 20) only min/max/second-max and the
    trivial multiplicity are tracked, in chunks of 2**20 characters.
    """
    n = obs.n
    report = check_class_membership(obs)
    if completion is None:
        masks, _ = _character_masks(obs)
    else:
        basis = rank_gf2(list(obs.elements) + list(completion))
        if basis.rank != n:
            raise InputError("completion elements do not reach full rank")
        position = {idx: k for k, idx in enumerate(basis.basis_indices)}
        masks = []
        for i in range(len(obs.terms)):
            mask = 0
            for j in basis.decompositions[i]:
                mask |= 1 << position[j]
            masks.append(mask)

    alphas = [alpha for alpha, _ in obs.terms]
    trivial_value = float(sum(alphas))
    coeff_scale = float(sum(abs(a) for a in alphas))
    grouping_tol = 1e-9 * max(1.0, coeff_scale)
    value_tol = 1e-9 * max(1.0, abs(trivial_value))
    integral = all(float(a).is_integer() for a in alphas) and coeff_scale < 2**62
    dtype = np.int64 if integral else np.float64
    if integral:
        alphas = [int(a) for a in alphas]

    if materialize is None:
        materialize = n <= MATERIALIZE_MAX_N

    if materialize:
        ks = np.arange(1 << n, dtype=np.uint64)
        vals = _term_values(ks, alphas, masks, dtype)
        distinct, trivial_mult = _group_values(vals, float(vals[0]), grouping_tol, integral)
        max_value = distinct[0][0]
        second_value = distinct[1][0] if len(distinct) > 1 else None
        min_value = distinct[-1][0]
        return Spectrum(
            n=n,
            distinct_values=distinct,
            trivial_value=trivial_value,
            trivial_multiplicity=trivial_mult,
            max_value=max_value,
            second_value=second_value,
            min_value=min_value,
            grouping_tol=grouping_tol,
            value_tol=value_tol,
            class_report=report,
        )

    # Streaming reduction over character chunks.
    max_value = None
    second_value = None
    min_value = None
    trivial_mult = 0
    chunk = 1 << min(_CHUNK_BITS, n)
    for start in range(0, 1 << n, chunk):
        ks = np.arange(start, start + chunk, dtype=np.uint64)
        vals = _term_values(ks, alphas, masks, dtype).astype(np.float64)
        trivial_mult += int(np.count_nonzero(np.abs(vals - trivial_value) <= grouping_tol))
        c_max = float(vals.max())
        c_min = float(vals.min())
        below = vals[vals <= c_max - grouping_tol]
        c_second = float(below.max()) if below.size else None
        candidates = [v for v in (max_value, second_value, c_max, c_second) if v is not None]
        max_value = max(candidates)
        seconds = [v for v in candidates if v <= max_value - grouping_tol]
        second_value = max(seconds) if seconds else None
        min_value = c_min if min_value is None else min(min_value, c_min)
    return Spectrum(
        n=n,
        distinct_values=None,
        trivial_value=trivial_value,
        trivial_multiplicity=trivial_mult,
        max_value=max_value,
        second_value=second_value,
        min_value=min_value,
        grouping_tol=grouping_tol,
        value_tol=value_tol,
        class_report=report,
    )


def _group_values(
    vals: np.ndarray, trivial_val: float, tol: float, integral: bool
) -> tuple[tuple[tuple[float, int], ...], int]:
    """Group a full eigenvalue array into descending distinct values and
    return them with the multiplicity of the trivial character's value."""
    if integral:
        uniq, counts = np.unique(vals, return_counts=True)
        distinct = tuple(
            (float(v), int(c)) for v, c in zip(uniq[::-1], counts[::-1])
        )
        trivial_mult = int(counts[np.searchsorted(uniq, int(round(trivial_val)))])
        return distinct, trivial_mult

    order = np.sort(vals)  # ascending
    gaps = np.nonzero(np.diff(order) > tol)[0]
    starts = np.concatenate(([0], gaps + 1))
    ends = np.concatenate((gaps + 1, [order.size]))
    reps = [float(order[s:e].mean()) for s, e in zip(starts, ends)]
    counts = [int(e - s) for s, e in zip(starts, ends)]
    trivial_mult = 0
    for (s, e), count in zip(zip(starts, ends), counts):
        if order[s] - tol <= trivial_val <= order[e - 1] + tol:
            trivial_mult = count
            break
    distinct = tuple(zip(reps[::-1], counts[::-1]))
    return distinct, trivial_mult


def key_eigenvalues(spec: Spectrum) -> tuple[float, float, float]:
    """(largest, second largest, smallest) distinct eigenvalues."""
    if spec.second_value is None:
        raise DegenerateSpectrumError(
            "spectrum has a single distinct eigenvalue; the observable is a "
            "multiple of the identity"
        )
    return spec.max_value, spec.second_value, spec.min_value
