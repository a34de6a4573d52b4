"""Input parsing, the end-to-end analysis pipeline, and report rendering.

The input document carries per-term measured correlations; the mean is
their coefficient-weighted sum (a `mean_override` field skips that step
for what-if runs).  A term's `sign` records the lab convention for the
measured correlation and flips the expectation value, not the operator:
the analyzed observable always has the group element itself as the term.

Reports are plain dicts whose floats are pre-rounded to 12 significant
digits, so the JSON rendering round-trips to an identical data model.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from importlib import resources

import jsonschema
import numpy as np

from .bounds import (
    FidelityInterval,
    fidelity_bounds,
    lp_fidelity_range,
    min_variance_fidelity,
    propagate_uncertainty,
    witness_verdict,
)
from .errors import InputError
from .observable import Observable, build_observable, spectrum
from .pauli import pauli_from_label
from .stabilizer import canonical_generators, membership

SCHEMA_VERSION = 1
REPORT_VERSION = 1
_DISTINCT_JSON_CAP = 1024

PRESETS = {
    "pan2000": (3, ["xyy", "yxy", "yyx", "xxx"]),
    "case1": (3, ["xyy", "yxy"]),
    "case2": (3, ["xyy", "yxy", "zzI"]),
    "case3": (3, ["xyy", "yxy", "yyx"]),
}


def input_schema() -> dict:
    with resources.files("ghzcert.schemas").joinpath("input.v1.json").open() as fh:
        return json.load(fh)


@dataclass(frozen=True)
class TermInput:
    setting: str
    coefficient: float
    sign: int
    expectation: float | None
    sigma: float | None


@dataclass(frozen=True)
class Options:
    format: str = "text"
    clamp: bool = True
    sigma_k: float = 1.0


@dataclass(frozen=True)
class AnalysisRequest:
    n: int
    terms: tuple[TermInput, ...]
    mean_override: float | None
    options: Options


def _json_path(error: jsonschema.ValidationError) -> str:
    parts = ["$"]
    for p in error.absolute_path:
        parts.append(f"[{p}]" if isinstance(p, int) else f".{p}")
    return "".join(parts)


def parse_input(document: str, *, require_expectations: bool = True) -> AnalysisRequest:
    """Parse and validate an input document into an AnalysisRequest.

    With require_expectations False (the simulate path) per-term
    expectations may be absent; otherwise they are mandatory unless a
    mean_override is present.
    """
    try:
        data = json.loads(document)
    except json.JSONDecodeError as exc:
        raise InputError(f"not valid JSON: {exc}") from None
    try:
        jsonschema.validate(data, input_schema())
    except jsonschema.ValidationError as exc:
        raise InputError(exc.message, path=_json_path(exc)) from None

    n = data["n"]
    mean_override = data.get("mean_override")
    terms = []
    for i, raw in enumerate(data["terms"]):
        setting = raw["setting"]
        path = f"$.terms[{i}]"
        if len(setting) != n:
            raise InputError(
                f"setting '{setting}' has {len(setting)} sites, expected {n}",
                path=path + ".setting",
            )
        try:
            membership(pauli_from_label(n, setting))
        except InputError as exc:
            raise type(exc)(str(exc), path=path + ".setting") from None
        expectation = raw.get("expectation")
        if expectation is not None and not -1 <= expectation <= 1:
            raise InputError(
                f"expectation {expectation} outside [-1, 1]", path=path + ".expectation"
            )
        if expectation is None and require_expectations and mean_override is None:
            raise InputError(
                "expectation is required (no mean_override present)",
                path=path + ".expectation",
            )
        terms.append(
            TermInput(
                setting=setting,
                coefficient=float(raw.get("coefficient", 1.0)),
                sign=int(raw.get("sign", 1)),
                expectation=None if expectation is None else float(expectation),
                sigma=None if raw.get("sigma") is None else float(raw["sigma"]),
            )
        )

    with_sigma = [i for i, t in enumerate(terms) if t.sigma is not None]
    if with_sigma and len(with_sigma) != len(terms):
        missing = [i for i in range(len(terms)) if i not in with_sigma]
        raise InputError(
            f"sigma must be given for all terms or none; missing at indices {missing}",
            path="$.terms",
        )

    raw_options = data.get("options", {})
    options = Options(
        format=raw_options.get("format", "text"),
        clamp=bool(raw_options.get("clamp", True)),
        sigma_k=float(raw_options.get("sigma_k", 1.0)),
    )
    return AnalysisRequest(
        n=n,
        terms=tuple(terms),
        mean_override=None if mean_override is None else float(mean_override),
        options=options,
    )


def request_observable(req: AnalysisRequest) -> Observable:
    pairs = [
        (t.coefficient, pauli_from_label(req.n, t.setting)) for t in req.terms
    ]
    sigmas = None
    if req.mean_override is None and all(t.sigma is not None for t in req.terms):
        sigmas = [t.sigma for t in req.terms]
    return build_observable(req.n, pairs, sigmas=sigmas)


def request_mean(req: AnalysisRequest) -> float:
    """Coefficient-weighted sum of sign-corrected correlations."""
    if req.mean_override is not None:
        return req.mean_override
    return float(
        sum(t.coefficient * t.sign * t.expectation for t in req.terms)
    )


def _sig(x) -> float:
    """Round to the 12 significant digits the serialization promises."""
    return float(f"{float(x):.12g}")


def _interval_dict(interval: FidelityInterval) -> dict:
    return {
        "fidelity_lower": _sig(interval.lower_clamped),
        "fidelity_upper": _sig(interval.upper_clamped),
        "fidelity_lower_raw": _sig(interval.lower),
        "fidelity_upper_raw": _sig(interval.upper),
    }


def _echo_request(req: AnalysisRequest) -> dict:
    terms = []
    for t in req.terms:
        entry = {"setting": t.setting, "coefficient": _sig(t.coefficient), "sign": t.sign}
        if t.expectation is not None:
            entry["expectation"] = _sig(t.expectation)
        if t.sigma is not None:
            entry["sigma"] = _sig(t.sigma)
        terms.append(entry)
    echo = {"n": req.n, "terms": terms}
    if req.mean_override is not None:
        echo["mean_override"] = _sig(req.mean_override)
    echo["options"] = {
        "format": req.options.format,
        "clamp": req.options.clamp,
        "sigma_k": _sig(req.options.sigma_k),
    }
    return echo


def run_analysis(req: AnalysisRequest, *, sigma_k: float | None = None) -> dict:
    """Full pipeline: observable, class test, spectrum, fidelity window,
    witness, minimum-variance model, uncertainty propagation."""
    notes = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        obs = request_observable(req)
    for w in caught:
        notes.append(str(w.message))

    mean = request_mean(req)
    if req.mean_override is not None:
        note = "mean taken from mean_override"
        if any(t.expectation is not None for t in req.terms):
            note += "; per-term expectations ignored"
        notes.append(note)
    k = req.options.sigma_k if sigma_k is None else float(sigma_k)
    sigma_mean = propagate_uncertainty(obs) if obs.sigmas is not None else None

    spec = spectrum(obs)
    if spec.in_class:
        method = "closed_form"

        def bound(value):
            return fidelity_bounds(spec, value)

    else:
        method = "lp_range"
        notes.append(
            "observable is not in the certification class; reporting the "
            "general fidelity range instead of the closed-form bounds"
        )

        def bound(value):
            return lp_fidelity_range(spec, value)

    central = bound(mean)
    shifted = {"minus_k_sigma": None, "plus_k_sigma": None}
    if sigma_mean is not None:
        for key, offset in (("minus_k_sigma", -k * sigma_mean), ("plus_k_sigma", k * sigma_mean)):
            target = mean + offset
            clamped = min(spec.max_value, max(spec.min_value, target))
            if clamped != target:
                notes.append(
                    f"mean {target:.6g} at {key.replace('_', ' ')} clamped to the "
                    f"spectral range before bounding"
                )
            shifted[key] = _interval_dict(bound(clamped))

    witness = witness_verdict(central)
    minvar = min_variance_fidelity(spec, mean)
    if isinstance(minvar.fidelity, tuple):
        minvar_fid = [_sig(minvar.fidelity[0]), _sig(minvar.fidelity[1])]
    else:
        minvar_fid = _sig(minvar.fidelity)

    if spec.distinct_values is None:
        distinct = None
        notes.append("spectrum computed in streaming mode; distinct values not listed")
    elif len(spec.distinct_values) > _DISTINCT_JSON_CAP:
        distinct = None
        notes.append(
            f"{len(spec.distinct_values)} distinct eigenvalues exceed the "
            f"report cap of {_DISTINCT_JSON_CAP}; listing suppressed"
        )
    else:
        distinct = [[_sig(v), m] for v, m in spec.distinct_values]

    return {
        "report_version": REPORT_VERSION,
        "request": _echo_request(req),
        "mean": _sig(mean),
        "sigma_mean": None if sigma_mean is None else _sig(sigma_mean),
        "class": {
            "in_class": spec.in_class,
            "rank": spec.class_report.rank,
            "failures": list(spec.class_report.failures),
        },
        "spectrum": {
            "materialized": spec.distinct_values is not None,
            "distinct": distinct,
            "max": _sig(spec.max_value),
            "second": None if spec.second_value is None else _sig(spec.second_value),
            "min": _sig(spec.min_value),
            "trivial_value": _sig(spec.trivial_value),
            "trivial_multiplicity": spec.trivial_multiplicity,
        },
        "fidelity": {
            "method": method,
            "sigma_k": _sig(k),
            "central": _interval_dict(central),
            "minus_k_sigma": shifted["minus_k_sigma"],
            "plus_k_sigma": shifted["plus_k_sigma"],
        },
        "witness": {
            "value": _sig(witness.witness_value),
            "gme_certified": witness.gme_certified,
        },
        "min_variance": {
            "support": [[_sig(v), _sig(p)] for v, p in minvar.support],
            "variance": _sig(minvar.variance),
            "fidelity": minvar_fid,
        },
        "notes": notes,
    }


def render_report(report: dict, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    if fmt != "text":
        raise InputError(f"unknown report format '{fmt}'")
    return _render_text(report)


def parse_report(text: str) -> dict:
    """Inverse of render_report(report, 'json')."""
    return json.loads(text)


def _fmt(x) -> str:
    if x is None:
        return "n/a"
    return f"{x:.12g}"


def _render_text(report: dict) -> str:
    req = report["request"]
    spec = report["spectrum"]
    fid = report["fidelity"]
    clamp = req["options"]["clamp"]
    suffix = "" if clamp else "_raw"
    lines = []
    lines.append(f"GHZ fidelity analysis (n = {req['n']}, {len(req['terms'])} terms)")
    lines.append(f"  mean <A> = {_fmt(report['mean'])}"
                 + (f" +- {_fmt(report['sigma_mean'])}" if report["sigma_mean"] is not None else ""))
    cls = report["class"]
    if cls["in_class"]:
        lines.append(f"  class: in certification class (rank {cls['rank']})")
    else:
        lines.append(f"  class: NOT in certification class (rank {cls['rank']})")
        for failure in cls["failures"]:
            lines.append(f"    - {failure}")
    lines.append(
        f"  spectrum: max = {_fmt(spec['max'])}, second = {_fmt(spec['second'])}, "
        f"min = {_fmt(spec['min'])}, trivial value = {_fmt(spec['trivial_value'])} "
        f"(multiplicity {spec['trivial_multiplicity']})"
    )
    central = fid["central"]
    lo = central["fidelity_lower" + suffix]
    hi = central["fidelity_upper" + suffix]
    if fid["method"] == "closed_form":
        m, r2, rs = spec["max"], spec["second"], spec["min"]
        mean = report["mean"]
        lines.append(
            f"  lower = (<A> - r2)/(M - r2) = ({_fmt(mean)} - {_fmt(r2)})/({_fmt(m)} - {_fmt(r2)})"
            f" = {_fmt(central['fidelity_lower_raw'])}"
        )
        lines.append(
            f"  upper = (<A> - rs)/(M - rs) = ({_fmt(mean)} - {_fmt(rs)})/({_fmt(m)} - {_fmt(rs)})"
            f" = {_fmt(central['fidelity_upper_raw'])}"
        )
    else:
        lines.append("  bounds from the general fidelity range (not closed form)")
    lines.append(f"  fidelity window: [{_fmt(lo)}, {_fmt(hi)}]")
    for key, label in (("minus_k_sigma", "-"), ("plus_k_sigma", "+")):
        if fid[key] is not None:
            lines.append(
                f"  at <A> {label} {_fmt(fid['sigma_k'])} sigma: "
                f"[{_fmt(fid[key]['fidelity_lower' + suffix])}, "
                f"{_fmt(fid[key]['fidelity_upper' + suffix])}]"
            )
    wit = report["witness"]
    verdict = "genuine multipartite entanglement CERTIFIED" if wit["gme_certified"] else "not certified"
    lines.append(f"  witness 1/2 - f_lower = {_fmt(wit['value'])} -> {verdict}")
    mv = report["min_variance"]
    support = ", ".join(f"P[{_fmt(v)}] = {_fmt(p)}" for v, p in mv["support"])
    lines.append(f"  minimum-variance model: {support}; variance = {_fmt(mv['variance'])}")
    if isinstance(mv["fidelity"], list):
        lines.append(
            f"  minimum-variance fidelity: in [{_fmt(mv['fidelity'][0])}, {_fmt(mv['fidelity'][1])}]"
        )
    else:
        lines.append(f"  minimum-variance fidelity: {_fmt(mv['fidelity'])}")
    for note in report["notes"]:
        lines.append(f"  note: {note}")
    return "\n".join(lines) + "\n"


def simulate_request(
    n: int,
    visibility: float,
    terms: list[tuple[float, str]],
    *,
    shots: int | None = None,
    rng: np.random.Generator | None = None,
) -> dict:
    """Input document for a visibility-V GHZ/maximally-mixed mixture.

    terms are (coefficient, setting) pairs.  Without shots the per-term
    expectations are exact (V, or 1 for the identity); with shots each is
    replaced by a binomial sample of `shots` +-1 outcomes and a plug-in
    standard error sqrt((1 - e**2)/shots).
    """
    if not 0 <= visibility <= 1:
        raise InputError(f"visibility must be in [0, 1], got {visibility}")
    if shots is not None and shots < 1:
        raise InputError(f"shots must be >= 1, got {shots}")
    if rng is None:
        rng = np.random.default_rng()
    doc_terms = []
    for coeff, setting in terms:
        elem = membership(pauli_from_label(n, setting))
        exact = 1.0 if elem.is_identity else visibility
        entry = {"setting": setting, "coefficient": _sig(coeff), "sign": 1}
        if shots is None:
            entry["expectation"] = _sig(exact)
        else:
            hits = int(rng.binomial(shots, (1 + exact) / 2))
            estimate = 2 * hits / shots - 1
            entry["expectation"] = _sig(estimate)
            entry["sigma"] = _sig(((1 - estimate**2) / shots) ** 0.5)
        doc_terms.append(entry)
    return {"schema_version": SCHEMA_VERSION, "n": n, "terms": doc_terms}


def preset_terms(name: str, n: int | None = None) -> tuple[int, list[tuple[float, str]]]:
    """Bundled observable templates: the named three-party cases, or
    'canonical' for unit-weight canonical generators at the given n."""
    if name == "canonical":
        if n is None or n < 2:
            raise InputError("preset 'canonical' needs n >= 2")
        return n, [(1.0, g.label()) for g in canonical_generators(n)]
    if name in PRESETS:
        preset_n, labels = PRESETS[name]
        if n is not None and n != preset_n:
            raise InputError(f"preset '{name}' is fixed at n = {preset_n}, got n = {n}")
        return preset_n, [(1.0, label) for label in labels]
    raise InputError(
        f"unknown preset '{name}'; available: canonical, " + ", ".join(sorted(PRESETS))
    )
