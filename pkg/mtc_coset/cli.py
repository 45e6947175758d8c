#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Command-line interface for mtc-coset.

Exit codes: 0 when every check passes, 1 when a check fails or an analysis
step cannot be completed, 2 when the input is malformed.
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Callable, Sequence

from mtc_coset import __version__
from mtc_coset.branching import BranchingBounds, solve_branching
from mtc_coset.config import load_tolerances
from mtc_coset.coset import CosetSystem, analyze, spectral_verification
from mtc_coset.errors import ConfigError, FileFormatError, MtcCosetError, StructuralError
from mtc_coset.fixtures import diagonal_coset, double_system, ising_coset, trivial_system
from mtc_coset.generators import minimal_model, pointed_cyclic, su2_level
from mtc_coset.modular_core import ModularData, deligne_product, validate
from mtc_coset.reporting import AnalysisReport, render_json, render_markdown, render_validation, write_text
from mtc_coset.serialization import (
    load_coset,
    load_modular_data,
    save_coset,
    save_modular_data,
    save_solutions,
)
from mtc_coset.utils import setup_file_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_MALFORMED = 2

# Errors that mean the input itself is unusable.
MALFORMED_INPUT = (FileFormatError, StructuralError, ConfigError)


def _emit(report: AnalysisReport, args: argparse.Namespace) -> int:
    text = render_markdown(report)
    print(text, end="")
    if getattr(args, "report", None):
        write_text(text, args.report)
    if getattr(args, "json", None):
        write_text(render_json(report), args.json)
    return EXIT_OK if report.passed else EXIT_VIOLATION


def cmd_generate(args: argparse.Namespace) -> int:
    md: ModularData
    if args.kind == "su2":
        md = su2_level(args.level)
    elif args.kind == "minimal":
        md = minimal_model(args.p, args.q)
    elif args.kind == "pointed":
        md = pointed_cyclic(args.n, args.t)
    else:
        md = deligne_product(load_modular_data(args.first), load_modular_data(args.second))
    save_modular_data(md, args.output)
    print(f"Wrote {md.name} (rank {md.rank}) to {args.output}")
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    md = load_modular_data(args.path)
    report = validate(md, load_tolerances())
    print(render_validation(report), end="")
    if args.json:
        write_text(render_json(report), args.json)
    return EXIT_OK if report.passed else EXIT_VIOLATION


def cmd_coset_analyze(args: argparse.Namespace) -> int:
    cs = load_coset(args.system)
    return _emit(analyze(cs, load_tolerances()), args)


def cmd_solve_branching(args: argparse.Namespace) -> int:
    md1 = load_modular_data(args.c1)
    md2 = load_modular_data(args.c2)
    mdc = load_modular_data(args.ambient)
    bounds = BranchingBounds(
        entry_bound=args.bound, max_free=args.max_free, max_candidates=args.max_candidates
    )
    solutions = solve_branching(md1, md2, mdc, bounds, load_tolerances())
    save_solutions(solutions, args.output)
    print(f"Found {len(solutions)} solution(s); written to {args.output}")
    return EXIT_OK


def cmd_coset_fixture(args: argparse.Namespace) -> int:
    cs: CosetSystem
    if args.name == "ising":
        cs = ising_coset()
    elif args.name == "diagonal":
        cs = diagonal_coset(args.level)
    elif args.name == "trivial":
        cs = trivial_system(minimal_model(3, 4))
    else:
        cs = double_system(minimal_model(3, 4))
    save_coset(cs, args.output)
    print(f"Wrote fixture {cs.name} to {args.output}")
    return EXIT_OK


def cmd_spectral_verify(args: argparse.Namespace) -> int:
    cs = load_coset(args.system)
    return _emit(spectral_verification(cs, load_tolerances()), args)


def _add_report_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--report", type=str, help="Write the markdown report to this path")
    parser.add_argument("--json", type=str, help="Write the JSON report to this path")


def _add_product_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("first", help="Modular data file of the first factor")
    parser.add_argument("second", help="Modular data file of the second factor")
    parser.add_argument("-o", "--output", required=True, help="Output modular data file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mtc-coset",
        description="Verify coset constructions of modular tensor categories from modular data",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "-d",
        "--debug",
        action="store_true",
        help="Enable debug logging (overrides --log-level)",
    )
    parser.add_argument(
        "-l",
        "--log-level",
        type=str,
        default="WARNING",
        choices=["CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG"],
        help="Logging level (ignored if --debug is set)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="Write generated modular data")
    gen_sub = gen.add_subparsers(dest="kind", required=True)
    p = gen_sub.add_parser("su2", help="Affine su(2) at level k")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("-o", "--output", required=True)
    p = gen_sub.add_parser("minimal", help="Virasoro minimal model M(p, q)")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("-o", "--output", required=True)
    p = gen_sub.add_parser("pointed", help="Pointed modular data on Z_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("-o", "--output", required=True)
    _add_product_args(gen_sub.add_parser("product", help="Deligne product of two files"))
    gen.set_defaults(func=cmd_generate)

    p = sub.add_parser("validate", help="Check every modular data invariant")
    p.add_argument("path")
    p.add_argument("--json", type=str, help="Write the JSON report to this path")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("product", help="Deligne product of two modular data files")
    _add_product_args(p)
    p.set_defaults(func=cmd_generate, kind="product")

    coset = sub.add_parser("coset", help="Coset systems")
    coset_sub = coset.add_subparsers(dest="action", required=True)
    p = coset_sub.add_parser("analyze", help="Run every coset check")
    p.add_argument("system", help="Coset system file")
    _add_report_flags(p)
    p.set_defaults(func=cmd_coset_analyze)
    p = coset_sub.add_parser("solve-branching", help="Search for branching matrices")
    p.add_argument("c1")
    p.add_argument("c2")
    p.add_argument("ambient", help="Modular data of the coset category C")
    defaults = BranchingBounds()
    p.add_argument("--bound", type=int, default=defaults.entry_bound, help="Largest multiplicity")
    p.add_argument("--max-free", type=int, default=defaults.max_free)
    p.add_argument("--max-candidates", type=int, default=defaults.max_candidates)
    p.add_argument("-o", "--output", required=True, help="Solutions file")
    p.set_defaults(func=cmd_solve_branching)
    p = coset_sub.add_parser("fixture", help="Write a reference coset system")
    p.add_argument("name", choices=["ising", "diagonal", "trivial", "double"])
    p.add_argument("--level", type=int, default=2, help="k for the diagonal fixture")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_coset_fixture)

    spectral = sub.add_parser("spectral", help="Spectral checks on the coset algebra")
    spectral_sub = spectral.add_subparsers(dest="action", required=True)
    p = spectral_sub.add_parser("verify", help="Diagonalize the module fusion operators")
    p.add_argument("system", help="Coset system file")
    _add_report_flags(p)
    p.set_defaults(func=cmd_spectral_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point of the ``mtc-coset`` console script."""
    parser = build_parser()
    args = parser.parse_args(argv)

    level = logging.DEBUG if args.debug else getattr(logging, args.log_level)
    logging.basicConfig(level=level, format="%(levelname)s: %(message)s")
    try:
        setup_file_logging(level=level)
    except OSError as e:
        logger.warning(f"File logging disabled: {e}")
    logger.debug("Entered main() with args: %s", args)

    func: Callable[[argparse.Namespace], int] = args.func
    try:
        return func(args)
    except MALFORMED_INPUT as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_MALFORMED
    except MtcCosetError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
