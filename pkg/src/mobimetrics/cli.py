"""Command-line interface.

Subcommands:

* ``measures table --cells n_ll,n_lh,n_hl,n_hh [--mode ...]`` - measures
  of one table, as JSON.  Cell order is row-major: child-low row first.
* ``pipeline run --manifest M [--config C] --out DIR [--format csv|json]``
  - full census pipeline; writes the series file and an ingest report.
* ``scenario interpolate --margins a,b,c,d --lambda x [--mode ...]`` -
  benchmark-interpolated table and its measures.
* ``scenario shift-demo --lambda x --margins-a ... --margins-b ...`` -
  same interpolation position under two margin sets, side by side.
* ``report reversals --series FILE`` - ranking-reversal report for an
  emitted series.

Margins are given as ``n_l_row,n_h_row,n_l_col,n_h_col`` (young adults'
low/high totals, then parents').  Exit codes: 0 success, 1 usage error,
2 data error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import MobilityError
from .ingest import PipelineConfig, load_config, load_manifest, run_pipeline
from .measures import ContingencyTable, Mode, TableMargins, margins, measure_set
from .report import detect_reversals, emit_series, load_series
from .scenarios import ScenarioSpec, interpolate, shift_marginals_demo

__all__ = ["cli_dispatch", "main"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; this CLI reserves 2 for data errors.
    def error(self, message):
        raise _UsageError(message)


def _parse_numbers(text: str, label: str, expected: int) -> list[float | int]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != expected:
        raise _UsageError(f"{label} needs {expected} comma-separated numbers, got {text!r}")
    values: list[float | int] = []
    for part in parts:
        try:
            values.append(int(part))
        except ValueError:
            try:
                values.append(float(part))
            except ValueError:
                raise _UsageError(f"{label} has a non-numeric entry: {part!r}") from None
    return values


def _build_parser() -> _Parser:
    parser = _Parser(prog="mobimetrics", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_measures = sub.add_parser("measures", help="measures of ad-hoc tables")
    m_sub = p_measures.add_subparsers(dest="subcommand", required=True)
    p_table = m_sub.add_parser("table", help="measure set of one 2x2 table")
    p_table.add_argument(
        "--cells",
        required=True,
        help="n_ll,n_lh,n_hl,n_hh (row-major: child-low row, then child-high row)",
    )
    p_table.add_argument("--mode", choices=["integer", "continuous"], default="integer")

    p_pipeline = sub.add_parser("pipeline", help="census pipeline")
    pl_sub = p_pipeline.add_subparsers(dest="subcommand", required=True)
    p_run = pl_sub.add_parser("run", help="run the pipeline over a manifest")
    p_run.add_argument("--manifest", help="manifest JSON (files + years)")
    p_run.add_argument("--config", help="pipeline config JSON")
    p_run.add_argument("--out", required=True, help="output directory")
    p_run.add_argument("--format", choices=["csv", "json"], default="csv")

    p_scenario = sub.add_parser("scenario", help="benchmark scenarios")
    sc_sub = p_scenario.add_subparsers(dest="subcommand", required=True)
    p_interp = sc_sub.add_parser("interpolate", help="table between the two benchmarks")
    p_interp.add_argument("--margins", required=True, help="n_l_row,n_h_row,n_l_col,n_h_col")
    p_interp.add_argument("--lambda", dest="lam", type=float, required=True)
    p_interp.add_argument("--mode", choices=["integer", "continuous"], default="continuous")
    p_shift = sc_sub.add_parser("shift-demo", help="same lambda under two margin sets")
    p_shift.add_argument("--lambda", dest="lam", type=float, required=True)
    p_shift.add_argument("--margins-a", required=True, help="n_l_row,n_h_row,n_l_col,n_h_col")
    p_shift.add_argument("--margins-b", required=True, help="n_l_row,n_h_row,n_l_col,n_h_col")
    p_shift.add_argument("--mode", choices=["integer", "continuous"], default="continuous")

    p_report = sub.add_parser("report", help="series reports")
    rp_sub = p_report.add_subparsers(dest="subcommand", required=True)
    p_rev = rp_sub.add_parser("reversals", help="ranking reversals in a series file")
    p_rev.add_argument("--series", required=True, help="series CSV or JSON from the pipeline")

    return parser


def _cmd_measures_table(args) -> int:
    cells = _parse_numbers(args.cells, "--cells", 4)
    table = ContingencyTable(*cells, mode=Mode(args.mode))
    out = measure_set(table).to_dict()
    out["margins"] = margins(table).to_dict()
    print(json.dumps(out, indent=2))
    return EXIT_OK


def _cmd_pipeline_run(args) -> int:
    config = load_config(args.config) if args.config else PipelineConfig()
    manifest = load_manifest(args.manifest) if args.manifest else None
    result = run_pipeline(manifest=manifest, config=config)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    series_path = out_dir / f"series.{args.format}"
    emit_series(result.points, fmt=args.format, destination=series_path)
    report_path = out_dir / "ingest_report.json"
    report_path.write_text(
        json.dumps(result.report.to_dict(), indent=2) + "\n", encoding="utf-8"
    )

    gaps = sum(1 for p in result.points if p.is_gap())
    print(f"wrote {series_path}")
    print(f"wrote {report_path}")
    print(f"{len(result.points)} points ({gaps} gaps), {result.report.rows_read} rows read")
    return EXIT_OK


def _cmd_scenario_interpolate(args) -> int:
    values = _parse_numbers(args.margins, "--margins", 4)
    ms = TableMargins.from_totals(*values, mode=Mode(args.mode))
    table = interpolate(ScenarioSpec(ms, args.lam, Mode(args.mode)))
    out = {
        "lambda": args.lam,
        "mode": args.mode,
        "table": table.to_dict(),
        "measures": measure_set(table).to_dict(),
    }
    print(json.dumps(out, indent=2))
    return EXIT_OK


def _cmd_scenario_shift_demo(args) -> int:
    margins_a = TableMargins.from_totals(
        *_parse_numbers(args.margins_a, "--margins-a", 4), mode=Mode(args.mode)
    )
    margins_b = TableMargins.from_totals(
        *_parse_numbers(args.margins_b, "--margins-b", 4), mode=Mode(args.mode)
    )
    demo = shift_marginals_demo(args.lam, margins_a, margins_b, mode=Mode(args.mode))
    out = {"lambda": args.lam, "mode": args.mode}
    out.update(demo.to_dict())
    print(json.dumps(out, indent=2))
    return EXIT_OK


def _cmd_report_reversals(args) -> int:
    series = load_series(args.series)
    report = detect_reversals(series)
    print(json.dumps(report.to_dict(), indent=2))
    return EXIT_OK


_HANDLERS = {
    ("measures", "table"): _cmd_measures_table,
    ("pipeline", "run"): _cmd_pipeline_run,
    ("scenario", "interpolate"): _cmd_scenario_interpolate,
    ("scenario", "shift-demo"): _cmd_scenario_shift_demo,
    ("report", "reversals"): _cmd_report_reversals,
}


def cli_dispatch(argv: "list[str] | None" = None) -> int:
    """Run one CLI invocation; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        handler = _HANDLERS[(args.command, args.subcommand)]
        return handler(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # argparse --help
        return int(exc.code or 0)
    except (MobilityError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA


def main() -> None:
    sys.exit(cli_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
