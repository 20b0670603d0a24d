#!/usr/bin/env python3
"""Command-line front end for the plane-curve arrangement analyzer."""

import argparse
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

# Load environment variables
from dotenv import load_dotenv

from algebra.polycore import DEFAULT_PRIME
from analyzer import Analyzer, AnalyzerConfig

# Look for .env in current dir, then parent dir
if Path(".env").exists():
    load_dotenv()
else:
    parent_env = Path(__file__).parent.parent / ".env"
    if parent_env.exists():
        load_dotenv(parent_env)
    else:
        load_dotenv()  # Will search up the directory tree


def _truthy(value: Optional[str]) -> bool:
    return (value or "").strip().lower() in ("1", "true", "yes", "on")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="seed for charts and random members")
    common.add_argument(
        "--prime",
        type=int,
        nargs="?",
        const=DEFAULT_PRIME,
        help=f"compute over GF(p) (default p = {DEFAULT_PRIME} when given without a value)",
    )
    common.add_argument("--json", metavar="OUT", help="write the machine-readable report")
    common.add_argument("--markdown", metavar="OUT", help="export the report as markdown")
    common.add_argument("--timings", action="store_true", help="include step timings in the reports")
    common.add_argument("--verbose", action="store_true", help="print step progress")
    common.add_argument("--enable-logfire", action="store_true", help="send spans to Logfire")

    parser = argparse.ArgumentParser(
        prog="arrangement_analyzer",
        description="Freeness, singularities and curve additions for plane-curve arrangements.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", parents=[common], help="analyze an arrangement file")
    analyze.add_argument("path")

    find = sub.add_parser("find-curve", parents=[common], help="find a smooth curve through Sing(A)")
    find.add_argument("path")
    find.add_argument("--degree", type=int, required=True)
    find.add_argument("--out", help="augmented arrangement file (default <stem>_plus_deg<d>.arr)")

    add = sub.add_parser("add", parents=[common], help="add a curve and compare both routes")
    add.add_argument("path")
    add.add_argument("--curve", required=True)

    corpus = sub.add_parser("corpus", parents=[common], help="diff the bundled corpus against its goldens")
    corpus.add_argument("--golden-dir", help="directory of golden *.json reports")
    return parser


def command_arguments(args: argparse.Namespace) -> dict:
    if args.command == "analyze":
        return {"path": args.path}
    if args.command == "find-curve":
        arguments = {"path": args.path, "degree": args.degree}
        if args.out:
            arguments["out"] = args.out
        return arguments
    if args.command == "add":
        return {"path": args.path, "curve": args.curve}
    return {"golden_dir": args.golden_dir} if args.golden_dir else {}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one analyzer command and return its exit code."""
    args = build_parser().parse_args(argv)
    try:
        config = AnalyzerConfig.from_env().with_overrides(
            seed=args.seed,
            prime=args.prime,
            include_timings=args.timings or None,
        )
    except ValueError as e:
        print(f"Error: {e}", file=sys.stderr)
        return 2

    enable_logfire = args.enable_logfire or _truthy(os.environ.get("ARRANGEMENT_ENABLE_LOGFIRE"))
    try:
        analyzer = Analyzer(config=config, verbose=args.verbose, enable_logfire=enable_logfire)
    except Exception as e:
        print(f"\nWarning: Failed to initialize with Logfire: {e}")
        print("   Running without observability...")
        analyzer = Analyzer(config=config, verbose=args.verbose, enable_logfire=False)

    result = analyzer.run(args.command, **command_arguments(args))
    analyzer.render(result)
    if args.json:
        analyzer.console.print(f"[dim]{analyzer.save_report(result.content, args.json)}[/dim]")
    if args.markdown:
        analyzer.console.print(f"[dim]{analyzer.export_markdown(result.content, args.markdown)}[/dim]")
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
