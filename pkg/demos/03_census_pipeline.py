#!/usr/bin/env python3
# End-to-end run over the bundled synthetic census extracts: parse, recode,
# aggregate, measure, emit a plot-ready series, and check for ranking
# reversals between the measures.

import tempfile
from pathlib import Path

from mobimetrics import (
    detect_reversals,
    emit_series,
    load_config,
    load_manifest,
    run_pipeline,
)

fixture = Path(__file__).resolve().parent.parent / "data" / "synthetic_census"
manifest = load_manifest(fixture / "manifest.json")
config = load_config(fixture / "config.json")

result = run_pipeline(manifest, config)
report = result.report
print(f"read {report.rows_read} rows, {report.rows_in_cohort} in the 30-40 cohort")
print(f"dropped for missing codes: {report.rows_dropped_missing}")
print(f"built {report.tables_built} tables -> {len(result.points)} series points")

# The series, year by year for the mother line.
print("\nyear  classification  liu_lu   igpc_beta  phi      n")
for p in result.points:
    if p.parent_line != "mother":
        continue
    ms = p.measures
    print(f"{p.year}  {p.classification:<14}  {ms.liu_lu:.4f}   {ms.igpc.beta:.4f}     "
          f"{ms.phi:.4f}  {p.n_effective:.0f}")

# Do the measures agree which classification carries more inequality of
# opportunity?  Flag the years where they rank them in opposite order.
ranking = detect_reversals(result.points)
reversals = ranking.reversal_years("igpc")
print(f"\nliu_lu vs igpc ranking reversals: {reversals or 'none'}")
for row in ranking.rows:
    marker = "  <-- reversal" if row.reversal_ll_igpc else ""
    print(f"  {row.year} {row.parent_line:<6} ll: {row.ll_ranking:<7} "
          f"igpc: {row.igpc_ranking:<7}{marker}")

# Emit the plot-ready CSV (the figure scripts under frontend/ consume this).
out_dir = Path(tempfile.mkdtemp(prefix="mobimetrics_demo_"))
series_path = out_dir / "series.csv"
emit_series(result.points, "csv", series_path)
print(f"\nseries written to {series_path}")
print("render with: node frontend/dist/cli.js --input", series_path,
      "--measure liu_lu --out-dir", out_dir)
