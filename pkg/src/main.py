"""
htmobility command line.

Subcommands: analyze, synth, compare, report. Errors go to stderr as one
`error_code: message` line; the exit code follows the error class
(2 config, 3 format, 4 contract violation).
"""

import argparse
import sys
import uuid
from collections.abc import Sequence
from pathlib import Path
from typing import Any, NoReturn

from pydantic import ValidationError

from src import __version__
from src.config.settings import ServiceSettings, load_run_config, validation_message
from src.errors import ConfigError, MobilityError
from src.handlers.command_handler import Command, CommandHandler
from src.logger.logger import get_logger, init_logger
from src.logger.stream_writer import StreamWriter
from src.logger.types import Category, Level, category, param

LOG_LEVELS = ("trace", "debug", "info", "warn", "error")


class _Parser(argparse.ArgumentParser):
    """Usage errors become ConfigError instead of argparse's own exit."""

    def error(self, message: str) -> NoReturn:
        raise ConfigError(message)


def _add_run_options(parser: argparse.ArgumentParser) -> None:
    """Flags mirroring RunConfig; anything left unset comes from --config, env or defaults."""
    parser.add_argument("--config", type=Path, help="YAML config (or a saved report) supplying any flag")
    parser.add_argument("-i", "--input", dest="inputs", type=Path, action="append", help="Input file (repeatable)")
    parser.add_argument("--kind", choices=["cdr", "wifi", "normalized"])
    parser.add_argument("--timezone", help="IANA zone for calendar days and naive timestamps")

    cols = parser.add_argument_group("columns")
    cols.add_argument("--user-column", dest="user_id")
    cols.add_argument("--timestamp-column", dest="timestamp")
    cols.add_argument("--place-column", dest="place_id")
    cols.add_argument("--channel-column", dest="channel")
    cols.add_argument("--delimiter")
    cols.add_argument("--timestamp-format", choices=["auto", "iso", "epoch"])
    parser.add_argument("--max-malformed-fraction", type=float)
    parser.add_argument("--window-start", help="First day of the observation window (YYYY-MM-DD)")
    parser.add_argument("--window-end", help="Last day of the observation window (YYYY-MM-DD)")

    pre = parser.add_argument_group("preprocess")
    pre.add_argument("--min-pause", type=int, help="Seconds a stay must exceed (default 900)")
    pre.add_argument("--merge-gap", type=int, help="Max seconds between merged stays (default 60)")
    pre.add_argument("--active-mode", choices=["strict", "fraction"])
    pre.add_argument("--active-fraction", type=float)

    htb = parser.add_argument_group("classification")
    htb.add_argument("--d-total-mode", choices=["active-days", "window-span"])
    htb.add_argument("--head-limit", type=float)
    htb.add_argument("--averaging", choices=["macro", "micro"])
    htb.add_argument("--focus-groups", type=int, nargs="+")
    htb.add_argument("--no-comparison", dest="comparison", action="store_const", const=False)
    htb.add_argument("--truth", type=Path, help="truth.csv from synth; adds a recovery section to the report")

    km = parser.add_argument_group("k-means")
    km.add_argument("--k", type=int)
    km.add_argument("--restarts", type=int)
    km.add_argument("--tol", type=float)
    km.add_argument("--max-iter", type=int)

    parser.add_argument("--out-dir", type=Path)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--workers", type=int)


def build_parser() -> argparse.ArgumentParser:
    """Construct the argument parser for the CLI."""
    parser = _Parser(prog="htmobility", description="Head/Tail breaks mining of place relevance")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", choices=LOG_LEVELS, help="Minimum level of JSON log lines on stderr")

    sub = parser.add_subparsers(dest="command", metavar="command", required=True)
    _add_run_options(sub.add_parser("analyze", help="Run the full pipeline and write report.yaml + curves"))
    _add_run_options(sub.add_parser("compare", help="Compare Head/Tail breaks with the K-means baseline"))

    synth = sub.add_parser("synth", help="Generate a synthetic cohort with planted tiers")
    synth.add_argument("--spec", dest="spec_file", type=Path, help="Cohort spec YAML (default spec if omitted)")
    synth.add_argument("--seed", type=int)
    synth.add_argument("--out-dir", type=Path, default=Path("out"))
    synth.add_argument("--workers", type=int, default=1)

    report = sub.add_parser("report", help="Validate a saved report and re-render its curve files")
    report.add_argument("--report", dest="report_file", type=Path, required=True)
    report.add_argument("--out-dir", type=Path, default=Path("out"))
    return parser


def _compact(values: dict[str, Any]) -> dict[str, Any]:
    return {k: v for k, v in values.items() if v is not None}


def run_overrides(args: argparse.Namespace) -> dict[str, Any]:
    """RunConfig overrides from parsed flags (unset flags omitted)."""
    ns = vars(args)
    overrides = _compact(
        {
            key: ns.get(key)
            for key in (
                "inputs", "kind", "timezone", "max_malformed_fraction", "window_start", "window_end",
                "min_pause", "merge_gap", "active_mode", "active_fraction", "d_total_mode", "head_limit",
                "averaging", "focus_groups", "comparison", "truth", "out_dir", "seed", "workers",
            )
        }
    )
    columns = _compact(
        {k: ns.get(k) for k in ("user_id", "timestamp", "place_id", "channel", "delimiter", "timestamp_format")}
    )
    kmeans = _compact({k: ns.get(k) for k in ("k", "restarts", "tol", "max_iter")})
    if columns:
        overrides["columns"] = columns
    if kmeans:
        overrides["kmeans"] = kmeans
    return overrides


def to_command(args: argparse.Namespace) -> Command:
    """Turn parsed arguments into a Command (loading RunConfig where needed)."""
    if args.command in ("analyze", "compare"):
        config = load_run_config(args.config, run_overrides(args))
        return Command(args.command, config=config, out_dir=config.out_dir, workers=config.workers)
    if args.command == "synth":
        if args.workers < 1:
            raise ConfigError("--workers must be >= 1")
        return Command("synth", out_dir=args.out_dir, spec_file=args.spec_file, seed=args.seed, workers=args.workers)
    return Command("report", out_dir=args.out_dir, report_file=args.report_file)


def _init_logging(level: str | None) -> None:
    try:
        settings = ServiceSettings()
    except ValidationError as e:
        raise ConfigError(f"invalid service settings: {validation_message(e)}") from e
    init_logger(
        service_name=settings.service_name,
        environment=settings.environment,
        writer=StreamWriter(),
        min_level=Level(level or settings.log_level),
        run_id=uuid.uuid4().hex[:12],
    )


def main(argv: Sequence[str] | None = None) -> int:
    """CLI entry point; returns the process exit code."""
    try:
        args = build_parser().parse_args(argv)
        _init_logging(args.log_level)
        logger = get_logger()
        logger.debug("Starting htmobility", category(Category.CLI), param("version", __version__))

        result = CommandHandler().handle(to_command(args))
    except SystemExit as e:
        # --help / --version
        return e.code if isinstance(e.code, int) else 0
    except MobilityError as e:
        print(e.line(), file=sys.stderr)
        return e.exit_code
    except Exception as e:
        get_logger().error("Unexpected failure", e, category(Category.CLI))
        print(MobilityError(str(e) or type(e).__name__).line(), file=sys.stderr)
        return MobilityError.exit_code

    for path in result.outputs:
        print(path)
    return 0


def run() -> None:
    """Console script entry point."""
    sys.exit(main())


if __name__ == "__main__":
    run()
