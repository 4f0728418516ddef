"""Command-line front end: ``real-conic-bundles <command> SPEC``."""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

import polars as pl

from . import __version__
from .bundle import realize
from .cohom import GroupInvariants
from .config import DEFAULT_ORACLE_SAMPLES, DEFAULT_REFINE_BITS, MAX_ORACLE_SAMPLES, AnalysisOptions
from .errors import ConicBundleError
from .io import read_spec
from .report import (
    EXIT_INVALID,
    EXIT_MISMATCH,
    EXIT_OK,
    analyze,
    analyze_directory,
    exit_code_for,
    oracle_check,
)

logger = logging.getLogger(__name__)


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("spec", help="spec document (JSON); a directory for batch analyze")
    common.add_argument("--format", choices=("human", "json"), default="human", help="report format")
    common.add_argument(
        "--refine-bits",
        type=int,
        default=DEFAULT_REFINE_BITS,
        help="isolating intervals are refined to width 2^-N (default: %(default)s)",
    )
    common.add_argument(
        "--samples",
        type=int,
        default=DEFAULT_ORACLE_SAMPLES,
        help="initial oracle grid size (default: %(default)s)",
    )
    common.add_argument(
        "--max-samples",
        type=int,
        default=MAX_ORACLE_SAMPLES,
        help="largest oracle grid tried before giving up (default: %(default)s)",
    )
    common.add_argument("--jobs", type=int, default=1, help="worker processes for batch analyze")
    common.add_argument("--no-progress", action="store_true", help="hide the batch progress bar")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="real-conic-bundles",
        description="Topology, cohomology and approximation decisions for real conic bundles.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("analyze", parents=[common], help="full report (file or directory)")
    commands.add_parser("gamma", parents=[common], help="Gamma and its closed form")
    approx = commands.add_parser("approx", parents=[common], help="decide one map to S^2")
    approx.add_argument("--map", required=True, dest="map_name", help="name of a map in the document")
    commands.add_parser("validate", parents=[common], help="check a document without analysing it")
    commands.add_parser("oracle-check", parents=[common], help="float cross-check of an explicit g")
    return parser


def _options(args: argparse.Namespace) -> AnalysisOptions:
    return AnalysisOptions(
        refine_bits=args.refine_bits,
        oracle_samples=args.samples,
        oracle_max_samples=args.max_samples,
        show_progress=not args.no_progress,
        jobs=args.jobs,
    )


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n")
    else:
        sys.stdout.write(text)


def _group_text(group: Optional[GroupInvariants]) -> str:
    return "none" if group is None else str(group)


def _run_batch(args, options: AnalysisOptions) -> int:
    summary = analyze_directory(args.spec, options)
    if args.format == "json":
        sys.stdout.write(json.dumps(summary.to_dicts(), indent=2, sort_keys=True, ensure_ascii=False) + "\n")
    else:
        with pl.Config(tbl_rows=-1, tbl_hide_dataframe_shape=True, fmt_str_lengths=80):
            sys.stdout.write(f"{summary}\n")
    return summary.conic_ext.worst_exit_code()


def _run(args: argparse.Namespace) -> int:
    options = _options(args)
    if args.command == "analyze" and Path(args.spec).is_dir():
        return _run_batch(args, options)

    doc = read_spec(args.spec, options.refine_bits)
    if args.command == "validate":
        state = realize(doc.spec, options.refine_bits)
        _emit(
            args,
            {"valid": True, "components": len(state.components)},
            f"valid: {len(state.components)} real component(s)\n",
        )
        return EXIT_OK

    if args.command == "oracle-check":
        check = oracle_check(doc, options)
        _emit(args, check.to_dict(), check.render())
        return EXIT_OK

    report = analyze(doc, options)
    if args.command == "analyze":
        _emit(args, report.to_dict(), report.render())
    elif args.command == "gamma":
        g = report.gamma
        _emit(
            args,
            {**g.to_dict(), "mismatches": report.mismatches},
            f"Gamma: {g.group}\nclosed form: {_group_text(g.predicted)} ({g.rule})\n",
        )
        return EXIT_MISMATCH if g.matches is False else EXIT_OK
    elif args.command == "approx":
        result = report.map_result(args.map_name)
        verdict = "approximable" if result.decision.approximable else "not approximable"
        text = f"{result.name}: {verdict}\n" + "".join(f"  - {r}\n" for r in result.decision.reasons)
        _emit(args, result.to_dict(), text)
        return EXIT_OK if result.match else EXIT_MISMATCH
    return report.exit_code


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s - %(levelname)s - %(message)s",
    )
    try:
        return _run(args)
    except ConicBundleError as e:
        sys.stderr.write(f"error: {e}\n")
        return exit_code_for(e)
    except ValueError as e:
        # bad option values rejected by AnalysisOptions
        sys.stderr.write(f"error: {e}\n")
        return EXIT_INVALID
    except OSError as e:
        sys.stderr.write(f"error: cannot read {args.spec}: {e.strerror or e}\n")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
