"""Command line front end: kg-lab run | scenarios | validate.

Exit codes: 0 success, 2 invalid configuration, 3 bandwidth or support
violation, 4 I/O failure. Failures emit a one-line JSON error record on
stderr so callers can parse the reason without scraping text.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .errors import BandwidthError, ConfigError
from .scenarios import (
    BLURBS,
    RunResult,
    SUMMARY_COLUMNS,
    default_config,
    run_scenario,
    scenario_names,
    validate_config,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BANDWIDTH = 3
EXIT_IO = 4


def _error_record(exc: Exception) -> None:
    record = {"error": type(exc).__name__, "message": str(exc)}
    print(json.dumps(record, sort_keys=True), file=sys.stderr)


def _print_run(result: RunResult) -> None:
    print(f"scenario: {result.scenario}")
    for name, series in sorted(result.series.items()):
        label = "" if name == "main" else f" [{name}]"
        print("  " + " ".join(SUMMARY_COLUMNS) + label)
        for row in series.summary:
            print("  " + " ".join(format(row[c], ".6g") for c in SUMMARY_COLUMNS))
    for path in result.files:
        print(f"wrote {path}")


def _cmd_run(args: argparse.Namespace) -> int:
    text = Path(args.config).read_text(encoding="utf-8")
    config = validate_config(text, output_override=args.out, format_override=args.format)
    result = run_scenario(config)
    if not args.quiet:
        _print_run(result)
    return EXIT_OK


def _cmd_scenarios(_args: argparse.Namespace) -> int:
    for name in scenario_names():
        print(f"{name}: {BLURBS[name]}")
    return EXIT_OK


def _cmd_validate(args: argparse.Namespace) -> int:
    text = Path(args.config).read_text(encoding="utf-8")
    config = validate_config(text)
    print(f"OK: {config.scenario} "
          f"(n={config.grid.n}, length={config.grid.length:g}, "
          f"{len(config.times)} sample times, format={config.fmt})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kg-lab",
        description="Spectral wave-packet laboratory: run shipped scenarios from JSON configs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one scenario config")
    run_p.add_argument("config", help="path to a JSON scenario config")
    run_p.add_argument("--out", default=None, help="output directory (overrides config)")
    run_p.add_argument("--format", choices=("csv", "json"), default=None,
                       help="data file format (overrides config)")
    run_p.add_argument("--quiet", action="store_true", help="suppress the summary table")
    run_p.set_defaults(func=_cmd_run)

    sc_p = sub.add_parser("scenarios", help="list the shipped scenario catalog")
    sc_p.set_defaults(func=_cmd_scenarios)

    val_p = sub.add_parser("validate", help="validate a config without running it")
    val_p.add_argument("config", help="path to a JSON scenario config")
    val_p.set_defaults(func=_cmd_validate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        _error_record(exc)
        return EXIT_CONFIG
    except BandwidthError as exc:
        _error_record(exc)
        return EXIT_BANDWIDTH
    except OSError as exc:
        _error_record(exc)
        return EXIT_IO


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
