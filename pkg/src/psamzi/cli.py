"""Command-line interface: figure scans and single-point queries.

Exit codes: 0 on success, 2 on configuration errors, 3 when every emitted
scan row is a dark-point sentinel.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .config import ScanSpec, load_config
from .errors import ConfigError
from .runner import (
    Table,
    render_csv,
    render_record_json,
    render_table_json,
    run_fig2,
    run_fig3,
    run_fig4,
    run_single,
    self_check,
)

_FIG_RUNNERS = {"fig2": run_fig2, "fig3": run_fig3, "fig4": run_fig4}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="psamzi",
        description="Postselected-amplification interferometer scans "
        "(deterministic CSV/JSON output)",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("fig2", "amplified phase vs postselection angle"),
        ("fig3", "sensitivity and uncertainty band vs shot count"),
        ("fig4", "saturation error ratio vs postselection angle"),
        ("single", "one record with every derived quantity"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", help="JSON config file")
        cmd.add_argument(
            "--scan",
            nargs=4,
            metavar=("VAR", "START", "STOP", "POINTS"),
            help="override the scan grid, e.g. --scan theta2 0.05 0.78 200",
        )
        cmd.add_argument("--seed", type=int, help="seed for Monte-Carlo columns")
        cmd.add_argument("--out", help="output file (default: stdout)")
        cmd.add_argument("--format", choices=("csv", "json"), dest="fmt")
        cmd.add_argument(
            "--workers",
            type=int,
            default=1,
            help="evaluate scan points across this many threads",
        )
        if name == "single":
            cmd.add_argument(
                "--self-check",
                metavar="EXPECTED_JSON",
                help="compare the record against stored expected values",
            )
    return parser


def _parse_scan_flag(values: list[str]) -> ScanSpec:
    variable, start, stop, points = values
    if variable not in ("theta2", "chi", "gamma", "m", "n"):
        raise ConfigError(f"unknown scan variable {variable!r}")
    try:
        start_f, stop_f, n = float(start), float(stop), int(points)
    except ValueError as exc:
        raise ConfigError(f"bad --scan values: {exc}") from exc
    if n < 1:
        raise ConfigError("--scan POINTS must be >= 1")
    if n > 1 and start_f == stop_f:
        raise ConfigError("--scan START and STOP must differ for a monotone grid")
    grid = [float(x) for x in np.linspace(start_f, stop_f, n)]
    return ScanSpec(variable=variable, grid=grid)


def _write_output(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8", newline="\n")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        scan = _parse_scan_flag(args.scan) if args.scan else None
        config = load_config(
            args.config, scan=scan, seed=args.seed, out=args.out, fmt=args.fmt
        )

        if args.command == "single":
            record = run_single(config)
            if getattr(args, "self_check", None):
                expected_path = Path(args.self_check)
                if not expected_path.exists():
                    raise ConfigError(f"expected-values file not found: {expected_path}")
                expected = json.loads(expected_path.read_text(encoding="utf-8"))
                mismatches = self_check(record, expected)
                if mismatches:
                    for line in mismatches:
                        print(f"self-check mismatch: {line}", file=sys.stderr)
                    return 1
                print("self-check passed")
                return 0
            _write_output(render_record_json(record), config.output.path)
            return 0

        table: Table = _FIG_RUNNERS[args.command](config, workers=args.workers)
        if config.output.format == "json":
            text = render_table_json(table, config.output.precision)
        else:
            text = render_csv(table, config.output.precision)
        _write_output(text, config.output.path)
        return 3 if table.sentinel_only else 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
