"""Command-line front end: algebras, module dumps, verification suites and isomorphism checks."""

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

from algebra import repcore, superalg
from algebra.exactnum import fmt
from algebra.taumod import is_evaluation, iso_check_G, iso_check_Gprime
from errors import SpecFileError, SuperloopError
from reporter import generate_report
from runner import VerificationRunner, failed_reports
from services import checks, suites
from services.specfile import (
    IsoPair,
    build_algebra,
    build_instance,
    load,
    load_spec,
    parse_window,
    to_tau_spec,
)

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


def emit(payload: Any, output_format: str = "json", stream=None) -> None:
    """Results to stdout: sorted-key JSON, or ``key: value`` lines."""
    stream = stream or sys.stdout
    if output_format == "json":
        stream.write(json.dumps(payload, sort_keys=True, ensure_ascii=False) + "\n")
        return
    for key in sorted(payload):
        value = payload[key]
        if isinstance(value, (dict, list)):
            value = json.dumps(value, sort_keys=True, ensure_ascii=False)
        stream.write(f"{key}: {value}\n")


def _descriptor(text: str) -> Dict[str, Any]:
    path = Path(text)
    try:
        data = json.loads(path.read_text(encoding="utf-8")) if path.exists() else json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecFileError(f"descriptor {text!r} is neither a file nor JSON") from exc
    if isinstance(data, dict) and "algebra" in data:
        data = data["algebra"]
    if not isinstance(data, dict):
        raise SpecFileError("an algebra descriptor is a JSON object")
    return data


def cmd_algebra_info(descriptor: Dict[str, Any]) -> Dict[str, Any]:
    A = build_algebra(descriptor)
    datum = superalg.root_datum(A)
    _, _, _, grading = superalg.triangular(A)
    return {
        "algebra": A.name,
        "descriptor": A.descriptor(),
        "dim": A.dim,
        "rank": len(A.cartan),
        "even_positive_roots": len(datum.even_positive),
        "odd_positive_roots": len(datum.odd_positive),
        "simple_roots": [repcore.weight_to_json(r) for r in datum.simple],
        "coordinates": list(A.coord_names),
        "gram": [[fmt(x) for x in row] for row in datum.gram],
        "z": [fmt(x) for x in A.z.diagonal_entries()],
        "grading": {
            "-1": len(grading.minus_indices),
            "0": len(grading.zero_indices),
            "1": len(grading.plus_indices),
        },
    }


def _slices(inst, window, with_weights: bool) -> Dict[str, Any]:
    out = {}
    for s in range(window[0], window[1] + 1):
        character = inst.graded.slice_character(s)
        entry: Dict[str, Any] = {"dim": sum(character.values())}
        if with_weights:
            entry["weights"] = [
                {"weight": repcore.weight_to_json(w), "d": fmt(d), "mult": k}
                for (w, d), k in sorted(character.items(), key=lambda item: tuple(item[0][0]))
            ]
        out[str(s)] = entry
    return out


def cmd_module_build(
    spec_path: str, weights: bool = False, window: Optional[str] = None
) -> Dict[str, Any]:
    spec = load_spec(spec_path)
    degrees = parse_window(window) if window else spec.window
    inst = build_instance(spec)
    M = inst.module
    tau_spec = inst.tau_spec or to_tau_spec(spec)
    ideal = M.algebra.ideal
    radical = ideal.radical()
    extracted = checks.extract_highest_weight_data(M)
    dump = {
        "name": spec.name,
        "algebra": inst.algebra.name,
        "kind": spec.kind,
        "dim": M.dim,
        "period": inst.period,
        "evaluation": is_evaluation(tau_spec.tau),
        "irreducible": repcore.is_irreducible(M),
        "integrable": repcore.is_integrable(M),
        "annihilator": {
            "ideal": ideal.to_json(),
            "witness": checks.annihilator_witness(M, ideal),
            "radical": radical.to_json(),
            "radical_witness": checks.annihilator_witness(M, radical),
        },
        "slices": _slices(inst, degrees, weights),
        "spec": {
            "a": [fmt(a) for a in extracted.points],
            "mults": extracted.mults,
            "lambda": [repcore.weight_to_json(w) for w in extracted.lambdas],
            "tau_window": [fmt(x) for x in extracted.tau_window],
            "b_offset": fmt(spec.offset),
        },
        "warnings": list(inst.warnings),
    }
    if inst.induced_dim is not None:
        dump["induced_dim"] = inst.induced_dim
    if weights:
        dump["weights"] = {
            json.dumps(repcore.weight_to_json(w)): k
            for w, k in sorted(repcore.weight_multiplicities(M).items())
        }
    return dump


def cmd_verify(
    suite: str,
    spec_files: Sequence[str] = (),
    corpus: str = "corpus",
    results: str = "results",
    ignore_cache: bool = False,
) -> Dict[str, Any]:
    if suite != "all" and suite not in suites.SUITE_NAMES:
        raise SpecFileError(f"unknown suite {suite!r}; choose from {', '.join(suites.SUITE_NAMES)}")
    selected = suites.SUITE_NAMES if suite == "all" else (suite,)
    runner = VerificationRunner(corpus, results, ignore_cache=ignore_cache)
    return runner.run_all(selected, spec_files)


def _iso_verdict(left, right) -> Dict[str, Any]:
    witness = iso_check_G(left, right)
    out: Dict[str, Any] = {"iso": witness is not None, "iso_prime": iso_check_Gprime(left, right)}
    if witness is not None:
        kappa, sigma = witness
        out["kappa"] = fmt(kappa)
        out["sigma"] = list(sigma)
    return out


def cmd_iso(spec_a: str, spec_b: Optional[str] = None) -> Dict[str, Any]:
    """Verdict for two spec files, or for the two sides of one pair file."""
    if spec_b is None:
        pair = load(spec_a)
        if not isinstance(pair, IsoPair):
            raise SpecFileError("a single argument to iso must be a pair file")
        return _iso_verdict(to_tau_spec(pair.left), to_tau_spec(pair.right))
    return _iso_verdict(*(to_tau_spec(load_spec(p)) for p in (spec_a, spec_b)))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="superloop", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    parser.add_argument("--format", choices=("json", "text"), default="json")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)
    common.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS)
    commands = parser.add_subparsers(dest="command", required=True)

    algebra = commands.add_parser("algebra", help="algebra structure data")
    algebra_commands = algebra.add_subparsers(dest="action", required=True)
    info = algebra_commands.add_parser(
        "info", parents=[common], help="dimension, roots, z and Z-grading"
    )
    info.add_argument("descriptor", help='JSON such as {"type":"sl","m":2,"n":1}, or a spec file')

    module = commands.add_parser("module", help="module construction")
    module_commands = module.add_subparsers(dest="action", required=True)
    build = module_commands.add_parser(
        "build", parents=[common], help="build a module from a spec file"
    )
    build.add_argument("spec")
    build.add_argument("--weights", action="store_true", help="include weight multiplicities")
    build.add_argument("--window", help="degree window LO..HI (default: the spec's, or -2..2)")

    verify = commands.add_parser("verify", parents=[common], help="run verification suites")
    verify.add_argument("suite", nargs="?", default="all")
    verify.add_argument("--spec", action="append", default=[], help="extra spec file")
    verify.add_argument("--corpus", default="corpus")
    verify.add_argument("--results", default="results")
    verify.add_argument(
        "--ignore-cache",
        action="store_true",
        help="Ignore cached results and re-run all checks while still updating the cache",
    )

    iso = commands.add_parser(
        "iso", parents=[common], help="compare two tau-module specs (or one pair file)"
    )
    iso.add_argument("specs", nargs="+")

    report = commands.add_parser(
        "report", parents=[common], help="render cached verification results"
    )
    report.add_argument("--results", default="results")
    report.add_argument("--output", default="docs/index.html")
    report.add_argument("--template")
    return parser


def _run(args: argparse.Namespace) -> int:
    if args.command == "algebra":
        emit(cmd_algebra_info(_descriptor(args.descriptor)), args.format)
        return EXIT_OK
    if args.command == "module":
        dump = cmd_module_build(args.spec, args.weights, args.window)
        emit(dump, args.format)
        return EXIT_OK
    if args.command == "verify":
        results = cmd_verify(args.suite, args.spec, args.corpus, args.results, args.ignore_cache)
        for suite, data in sorted(results["suites"].items()):
            for name, reports in sorted(data["instances"].items()):
                for report in reports:
                    emit({"suite": suite, **report}, args.format)
        for suite, data in sorted(results["suites"].items()):
            emit({"suite": suite, "summary": data["summary"]}, args.format)
        return EXIT_FAILED if failed_reports(results) else EXIT_OK
    if args.command == "iso":
        if len(args.specs) > 2:
            raise SpecFileError("iso takes two spec files or one pair file")
        emit(cmd_iso(*args.specs), args.format)
        return EXIT_OK
    if args.command == "report":
        generate_report(args.results, args.output, args.template, args.format)
        return EXIT_OK
    return EXIT_USAGE


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    level = logging.DEBUG if args.verbose or os.environ.get("VERBOSE") else logging.WARNING
    logging.basicConfig(
        level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s"
    )
    try:
        return _run(args)
    except SuperloopError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
