"""Command-line interface.

Exit codes: 0 success, 2 schema or validation error, 3 infeasible mean,
4 not in the certification class (check-class only), 5 oracle failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .analysis import (
    parse_input,
    preset_terms,
    render_report,
    request_observable,
    run_analysis,
    simulate_request,
)
from .errors import (
    GhzCertError,
    InfeasibleMeanError,
    InputError,
    NotInClassError,
    OracleError,
)
from .observable import check_class_membership, spectrum
from .oracle import verify_all

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INFEASIBLE = 3
EXIT_NOT_IN_CLASS = 4
EXIT_ORACLE = 5


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _cmd_analyze(args) -> int:
    req = parse_input(_read(args.file))
    report = run_analysis(req, sigma_k=args.sigma_k)
    fmt = args.format if args.format is not None else req.options.format
    sys.stdout.write(render_report(report, fmt))
    return EXIT_OK


def _cmd_spectrum(args) -> int:
    req = parse_input(_read(args.file), require_expectations=False)
    spec = spectrum(request_observable(req))
    print(f"n = {spec.n}, {spec.total} eigenvalues, trivial value {spec.trivial_value:.12g} "
          f"(multiplicity {spec.trivial_multiplicity})")
    if spec.distinct_values is None:
        print(f"streaming summary: max = {spec.max_value:.12g}, "
              f"second = {spec.second_value:.12g}, min = {spec.min_value:.12g}")
    else:
        print(f"{len(spec.distinct_values)} distinct values:")
        for value, mult in spec.distinct_values:
            print(f"  {value:.12g}  x{mult}")
    return EXIT_OK


def _cmd_check_class(args) -> int:
    req = parse_input(_read(args.file), require_expectations=False)
    report = check_class_membership(request_observable(req))
    print(f"rank = {report.rank}")
    if report.in_class:
        print("in certification class")
        return EXIT_OK
    print("NOT in certification class:")
    for failure in report.failures:
        print(f"  - {failure}")
    return EXIT_NOT_IN_CLASS


def _cmd_oracle_verify(args) -> int:
    results = verify_all(max_n=args.max_n, trials=args.trials, seed=args.seed)
    failed = 0
    for result in results:
        status = "ok  " if result.passed else "FAIL"
        print(f"{status}  {result.name}: {result.detail}")
        failed += 0 if result.passed else 1
    if failed:
        print(f"{failed} of {len(results)} suites failed")
        return EXIT_ORACLE
    print(f"all {len(results)} suites passed")
    return EXIT_OK


def _cmd_simulate(args) -> int:
    source = args.observable
    if Path(source).suffix == ".json" or Path(source).exists():
        req = parse_input(_read(source), require_expectations=False)
        if args.n is not None and args.n != req.n:
            raise InputError(f"--n {args.n} conflicts with the file's n = {req.n}")
        n = req.n
        terms = [(t.coefficient, t.setting) for t in req.terms]
    else:
        n, terms = preset_terms(source, args.n)
    doc = simulate_request(
        n,
        args.visibility,
        terms,
        shots=args.shots,
        rng=np.random.default_rng(),
    )
    json.dump(doc, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ghzcert",
        description="GHZ fidelity bounds and entanglement certification "
        "from stabilizer correlation measurements",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="full pipeline: bounds, witness, minimum-variance model")
    p.add_argument("file", help="input JSON document")
    p.add_argument("--format", choices=["text", "json"], default=None)
    p.add_argument("--sigma-k", type=float, default=None, dest="sigma_k",
                   help="uncertainty multiplier for the shifted bounds (default 1.0)")
    p.set_defaults(fn=_cmd_analyze)

    p = sub.add_parser("spectrum", help="eigenvalues with multiplicities")
    p.add_argument("file")
    p.set_defaults(fn=_cmd_spectrum)

    p = sub.add_parser("check-class", help="certification-class diagnostics")
    p.add_argument("file")
    p.set_defaults(fn=_cmd_check_class)

    p = sub.add_parser("oracle-verify", help="run the dense-matrix cross-check suites")
    p.add_argument("--max-n", type=int, default=8, dest="max_n")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(fn=_cmd_oracle_verify)

    p = sub.add_parser("simulate", help="emit a synthetic input document for a "
                       "visibility-V GHZ/maximally-mixed mixture")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--visibility", type=float, required=True)
    p.add_argument("--observable", required=True,
                   help="input document path, or preset: canonical, pan2000, case1, case2, case3")
    p.add_argument("--shots", type=int, default=None,
                   help="add binomial sampling noise and per-term sigma")
    p.set_defaults(fn=_cmd_simulate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except InfeasibleMeanError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except NotInClassError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_IN_CLASS
    except OracleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except GhzCertError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
