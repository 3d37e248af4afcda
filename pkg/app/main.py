"""
Active Learning Benchmark - command-line entry point
Pool-based query strategies evaluated under a fixed cycle protocol
"""

import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from app.commands.gen_dataset import cmd_gen_dataset
from app.commands.plot import cmd_plot
from app.commands.run import cmd_run
from app.commands.verify import cmd_verify
from app.core.exceptions import BenchmarkError, ConfigurationError, SuiteError, TableParseError
from app.core.logging import setup_logging
from app.models.run import Overrides
from app.models.strategy import StrategyName
from app.pooldata.generators import PRESETS

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2

# Failures caused by the input rather than by the run itself
USAGE_ERRORS = (ConfigurationError, TableParseError, ValidationError)


def seed_list(value: str) -> List[int]:
    try:
        seeds = [int(item) for item in value.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{value}'")
    if not seeds:
        raise argparse.ArgumentTypeError("at least one seed is required")
    return seeds


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--log-level", default=argparse.SUPPRESS, help="Override LOG_LEVEL")
    common.add_argument(
        "--log-format", choices=["json", "plain"], default=argparse.SUPPRESS, help="Override LOG_FORMAT"
    )

    parser = argparse.ArgumentParser(
        prog="active-learning-bench",
        description="Pool-based active learning query strategies and benchmark harness",
        parents=[common],
    )
    commands = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
        ("run", "Run every configured strategy and write results"),
        ("verify", "Run with a fully-trained oracle producing every query"),
    ):
        command = commands.add_parser(name, help=help_text, parents=[common])
        command.add_argument("--config", required=True, help="Benchmark file")
        command.add_argument("--out", help="Result directory")
        command.add_argument("--seeds", type=seed_list, help="Comma-separated master seeds")
        command.add_argument(
            "--strategy",
            action="append",
            choices=[strategy.value for strategy in StrategyName],
            help="Strategy to run (repeatable); replaces the file's list",
        )
        command.add_argument("--cycles", type=int, help="Number of cycles")
        command.add_argument("--fraction", type=float, help="Budget fraction per cycle")

    plot = commands.add_parser("plot", help="Render curves.csv as an SVG chart", parents=[common])
    plot.add_argument("results_dir", help="Directory holding curves.csv")
    plot.add_argument("--out", help="SVG path (default: <results_dir>/curves.svg)")

    gen = commands.add_parser("gen-dataset", help="Write a generated dataset as a table", parents=[common])
    gen.add_argument("--config", help="Benchmark file whose [dataset] section is generated")
    gen.add_argument("--preset", choices=sorted(PRESETS), help="Named dataset regime")
    gen.add_argument("--scale", type=float, default=1.0, help="Class-count multiplier for --preset")
    gen.add_argument("--seed", type=int, default=0, help="Generator seed for --preset")
    gen.add_argument("--out", help="Table path")
    return parser


def dispatch(args: argparse.Namespace) -> int:
    if args.command in ("run", "verify"):
        overrides = Overrides(
            seeds=args.seeds,
            strategies=args.strategy,
            cycles=args.cycles,
            budget_fraction=args.fraction,
            out=args.out,
        )
        handler = cmd_run if args.command == "run" else cmd_verify
        return handler(args.config, overrides)
    if args.command == "plot":
        return cmd_plot(args.results_dir, args.out)
    return cmd_gen_dataset(
        config_path=args.config,
        preset=args.preset,
        scale=args.scale,
        seed=args.seed,
        out=args.out,
    )


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_request:
        return exit_request.code if isinstance(exit_request.code, int) else EXIT_USAGE

    setup_logging(level=getattr(args, "log_level", None), log_format=getattr(args, "log_format", None))

    try:
        return dispatch(args)
    except USAGE_ERRORS as error:
        logger.error(f"Invalid input: {error}", extra={"mode": args.command})
        return EXIT_USAGE
    except SuiteError as error:
        logger.error(f"Suite failed: {error}", extra={"seed": error.seed, "mode": args.command})
        return EXIT_USAGE if isinstance(error.cause, USAGE_ERRORS) else EXIT_RUNTIME
    except BenchmarkError as error:
        logger.error(f"Run failed: {error}", extra={"mode": args.command})
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
