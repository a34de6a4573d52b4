"""Fidelity bounds, entanglement witness, and extremal spectral models.

Everything here consumes a Spectrum plus a measured mean value.  For an
observable in the certification class the fidelity window is closed-form
in the three key eigenvalues.  The minimum-variance construction and the
general fidelity range are small linear programs over the eigenvalue
simplex whose optima sit on at most two distinct values, so they are
solved by direct vertex inspection rather than an LP solver.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InfeasibleMeanError, InputError, NotInClassError
from .observable import Observable, Spectrum, key_eigenvalues


@dataclass(frozen=True)
class FidelityInterval:
    """Raw and [0, 1]-clamped fidelity window."""

    lower: float
    upper: float
    lower_clamped: float
    upper_clamped: float

    @classmethod
    def from_raw(cls, lower: float, upper: float) -> "FidelityInterval":
        return cls(
            lower=lower,
            upper=upper,
            lower_clamped=min(1.0, max(0.0, lower)),
            upper_clamped=min(1.0, max(0.0, upper)),
        )


def _require_feasible(spec: Spectrum, mean: float) -> float:
    """Clamp a mean within tolerance of the spectral range, else raise."""
    lo, hi = spec.min_value, spec.max_value
    if mean < lo - spec.value_tol or mean > hi + spec.value_tol:
        raise InfeasibleMeanError(
            f"mean {mean:g} lies outside the spectral range [{lo:g}, {hi:g}]"
        )
    return min(hi, max(lo, mean))


def fidelity_bounds(spec: Spectrum, mean: float) -> FidelityInterval:
    """Sharp fidelity window for a certification-class observable.

    lower = (mean - r2) / (M - r2), upper = (mean - rs) / (M - rs), where
    M > r2 are the two largest distinct eigenvalues and rs the smallest.
    Sharpness (and M belonging to the GHZ vector alone) is what class
    membership buys; outside the class the formulas are meaningless and a
    NotInClassError is raised instead.
    """
    if not spec.in_class:
        raise NotInClassError(spec.class_report.failures)
    mean = _require_feasible(spec, mean)
    big, second, small = key_eigenvalues(spec)
    lower = (mean - second) / (big - second)
    upper = (mean - small) / (big - small)
    return FidelityInterval.from_raw(lower, upper)


@dataclass(frozen=True)
class WitnessVerdict:
    """Biseparability witness outcome.

    gme_certified is True only when the clamped lower fidelity bound
    strictly exceeds 1/2; witness_value = 1/2 - lower bound, so negative
    values certify genuine multipartite entanglement.
    """

    witness_value: float
    gme_certified: bool
    lower_bound: float


def witness_verdict(interval: FidelityInterval) -> WitnessVerdict:
    lower = interval.lower_clamped
    return WitnessVerdict(
        witness_value=0.5 - lower,
        gme_certified=lower > 0.5,
        lower_bound=lower,
    )


@dataclass(frozen=True)
class MinVarianceResult:
    """Least-variance eigenvalue distribution compatible with a mean.

    support: ((value, probability), ...) with descending values, at most
    two entries.  fidelity: the GHZ fidelity forced by the distribution;
    a (low, high) tuple when the trivial eigenvalue is degenerate and the
    weight on it can be shared with other eigenvectors.
    """

    mean: float
    support: tuple[tuple[float, float], ...]
    variance: float
    fidelity: float | tuple[float, float]


def min_variance_distribution(spec: Spectrum, mean: float) -> MinVarianceResult:
    """Probability assignment over distinct eigenvalues with the given mean
    and minimal variance: a single eigenvalue when the mean hits one, else
    the lever rule on the two adjacent distinct values bracketing it."""
    mean = _require_feasible(spec, mean)
    bracket = spec.bracket(mean)
    if len(bracket) == 1:
        support = ((bracket[0], 1.0),)
        variance = 0.0
    else:
        lo, hi = bracket
        p_hi = (mean - lo) / (hi - lo)
        support = ((hi, p_hi), (lo, 1.0 - p_hi))
        variance = (hi - mean) * (mean - lo)
    fidelity = _support_fidelity(spec, support)
    return MinVarianceResult(mean=mean, support=support, variance=variance, fidelity=fidelity)


def _support_fidelity(
    spec: Spectrum, support: tuple[tuple[float, float], ...]
) -> float | tuple[float, float]:
    """GHZ-vector weight implied by a distribution over distinct values.

    The trivial character owns the GHZ vector.  If its eigenvalue is
    absent from the support the fidelity is exactly 0; if present with
    probability q it is exactly q when no other character shares that
    eigenvalue, and anywhere in [0, q] when some does.
    """
    for value, prob in support:
        if abs(value - spec.trivial_value) <= spec.value_tol:
            if spec.trivial_multiplicity <= 1:
                return prob
            return (0.0, prob)
    return 0.0


def min_variance_fidelity(spec: Spectrum, mean: float) -> MinVarianceResult:
    """Alias producing the same result; kept for call-site readability."""
    return min_variance_distribution(spec, mean)


def lp_fidelity_range(spec: Spectrum, mean: float) -> FidelityInterval:
    """Extremal GHZ fidelities over all spectral distributions matching the
    mean, for any group observable (class membership not required).

    Characters other than the trivial one can realize any distinct
    eigenvalue except the trivial one when it is non-degenerate.  Both
    optima therefore mix the trivial value with a single other distinct
    value, or avoid the trivial value entirely, so scanning those
    two-point vertices is exact.
    """
    if spec.distinct_values is None:
        raise InputError(
            "full spectrum required for the general fidelity range; "
            "recompute with spectrum(obs, materialize=True)"
        )
    mean = _require_feasible(spec, mean)
    star = spec.trivial_value
    tol = spec.value_tol

    # Distinct values reachable with zero GHZ weight.
    others = []
    for value, mult in spec.distinct_values:
        if abs(value - star) <= tol:
            if mult > 1:
                others.append(value)
        else:
            others.append(value)

    if abs(mean - star) <= tol:
        upper = 1.0
    else:
        upper = 0.0
        for value in others:
            if abs(star - value) <= tol:
                continue
            ratio = (mean - value) / (star - value)
            if -1e-9 <= ratio <= 1 + 1e-9:
                upper = max(upper, min(1.0, ratio))

    # A lone distinct value has multiplicity 2**n > 1, so others is never
    # empty and the hull below is well defined.
    hull_lo, hull_hi = min(others), max(others)
    if hull_lo - tol <= mean <= hull_hi + tol:
        lower = 0.0
    elif mean > hull_hi:
        lower = (mean - hull_hi) / (star - hull_hi)
    else:
        lower = (hull_lo - mean) / (hull_lo - star)
    lower = min(1.0, max(0.0, lower))
    return FidelityInterval.from_raw(lower, upper)


def propagate_uncertainty(obs: Observable, sigmas=None) -> float:
    """Standard error of the observable mean from per-term uncertainties:
    sqrt(sum_i (alpha_i * sigma_i)**2), assuming independent terms."""
    if sigmas is None:
        sigmas = obs.sigmas
    if sigmas is None:
        raise InputError("no per-term uncertainties provided")
    sigmas = [float(s) for s in sigmas]
    if len(sigmas) != len(obs.terms):
        raise InputError(
            f"got {len(sigmas)} uncertainties for {len(obs.terms)} terms"
        )
    for i, s in enumerate(sigmas):
        if s < 0:
            raise InputError(f"uncertainty must be >= 0, got {s}", path=f"sigmas[{i}]")
    total = 0.0
    for (alpha, _), s in zip(obs.terms, sigmas):
        total += (alpha * s) ** 2
    return total**0.5
