"""Command-line entry point.

Machine output is JSON on stdout; diagnostics go to stderr.  Exit status is
0 on success, 1 when the input is well-formed but rejected (an inadmissible
pair where one is required, an oracle mismatch), 2 on input or I/O errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .conditions import check_matrix, check_pair
from .matrix import IDENTITY, Mat3, MatrixParseError, matrix_to_json, parse_matrix_text, render_matrix
from .search import SearchConfig, SearchError, conjecture_report, read_records, run_search
from .torus import MAX_GRID, brute_force_fixed_count, fixed_locus, predicted_grid_count

EXIT_OK = 0
EXIT_REJECTED = 1
EXIT_INPUT = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def parse_matrix(source: str) -> Mat3:
    """Read a matrix from literal text or from a file holding that text."""
    text = source
    if not source.lstrip().startswith(("[", "{")):
        path = Path(source)
        try:
            text = path.read_text()
        except OSError as exc:
            raise MatrixParseError(f"cannot read matrix file {source!r}: {exc.strerror}") from None
    return parse_matrix_text(text)


def _emit(data, pretty: bool) -> None:
    if pretty:
        print(json.dumps(data, indent=2))
    else:
        print(json.dumps(data, separators=(",", ":")))


def _cmd_analyze(args) -> int:
    report = check_matrix(parse_matrix(args.matrix))
    _emit(report.to_json(), args.pretty)
    return EXIT_OK


def _cmd_verify_pair(args) -> int:
    report = check_pair(parse_matrix(args.a1), parse_matrix(args.a2))
    _emit(report.to_json(), args.pretty)
    return EXIT_OK if report.pair_admissible else EXIT_REJECTED


def _cmd_euler(args) -> int:
    report = check_pair(parse_matrix(args.a1), parse_matrix(args.a2))
    if not report.pair_admissible:
        failed = [name for name, ok in report.conditions.items() if not ok]
        print(f"pair is not admissible; failed conditions: {', '.join(failed)}", file=sys.stderr)
        _emit({"pair_admissible": False, "failed_conditions": failed}, args.pretty)
        return EXIT_REJECTED
    _emit(report.euler.to_json(), args.pretty)
    return EXIT_OK


def _cmd_oracle(args) -> int:
    m = parse_matrix(args.matrix)
    if args.sub_identity:
        m = m - IDENTITY
    if not 1 <= args.grid <= MAX_GRID:
        raise UsageError(f"--grid must be between 1 and {MAX_GRID}")
    locus = fixed_locus(m + IDENTITY)
    brute = brute_force_fixed_count(m, args.grid)
    predicted = predicted_grid_count(m, args.grid)
    match = brute == predicted
    if args.pretty:
        print(f"brute: {brute}, predicted: {predicted}, {'MATCH' if match else 'MISMATCH'}")
    else:
        _emit(
            {
                "matrix": matrix_to_json(m),
                "text": render_matrix(m),
                "grid": args.grid,
                "invariant_factors": [d.to_json() for d in locus.invariant_factors],
                "complex_dimension": locus.complex_dimension,
                "component_count": locus.component_count,
                "brute": brute,
                "predicted": predicted,
                "match": match,
                "verdict": "MATCH" if match else "MISMATCH",
            },
            False,
        )
    return EXIT_OK if match else EXIT_REJECTED


def _cmd_search(args) -> int:
    workers = args.workers
    if workers is None:
        env = os.environ.get("CY4_WORKERS", "1")
        try:
            workers = int(env)
        except ValueError:
            raise UsageError(f"CY4_WORKERS must be an integer, got {env!r}") from None
    config = SearchConfig(
        coeff_bound=args.bound,
        output_path=args.out,
        workers=workers,
        checkpoint_path=args.checkpoint,
        dedup=not args.no_dedup,
        max_pairs=args.max_pairs,
    )

    def progress(done, total):
        logging.getLogger("cy4fold").debug("pairs %d/%d", done, total)

    summary = run_search(config, progress=progress)
    _emit(summary, args.pretty)
    return EXIT_OK


def _cmd_report(args) -> int:
    report = conjecture_report(read_records(args.input))
    if args.pretty:
        print(report["verdict"], file=sys.stderr)
    _emit(report, args.pretty)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cy4fold", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--pretty", action="store_true", help="indented / human-readable output")
        p.set_defaults(func=func)
        return p

    p = add("analyze", _cmd_analyze, "report on a single matrix")
    p.add_argument("--matrix", required=True)

    p = add("verify-pair", _cmd_verify_pair, "check the five admissibility conditions for a pair")
    p.add_argument("--a1", required=True)
    p.add_argument("--a2", required=True)

    p = add("euler", _cmd_euler, "Euler numbers for an admissible pair")
    p.add_argument("--a1", required=True)
    p.add_argument("--a2", required=True)

    p = add("search", _cmd_search, "exhaustive pair search")
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--workers", type=int, default=None, help="default: $CY4_WORKERS or 1")
    p.add_argument("--checkpoint", default=None)
    p.add_argument("--no-dedup", action="store_true")
    p.add_argument("--max-pairs", type=int, default=None, help="stop after this many pairs")

    p = add("oracle", _cmd_oracle, "compare brute-force grid count with the Smith-form prediction")
    p.add_argument("--matrix", required=True)
    p.add_argument("--grid", type=int, required=True)
    p.add_argument("--sub-identity", action="store_true", help="use matrix - I")

    p = add("report", _cmd_report, "summarize chi(M) over a search output file")
    p.add_argument("--in", dest="input", required=True)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INPUT
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"cy4fold: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except MatrixParseError as exc:
        print(f"cy4fold: bad matrix: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (SearchError, OSError) as exc:
        print(f"cy4fold: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
