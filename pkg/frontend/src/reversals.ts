/**
 * Ranking-reversal years, recomputed from an emitted series.
 *
 * A year reverses when the Liu-Lu measure ranks the two classifications
 * one way and the comparison measure (igpc_beta or phi) strictly the
 * other way.  Differences within the tie tolerance never flag.
 */

import type { MeasureColumn, SeriesRow } from "./series.js";

export const TIE_TOLERANCE = 1e-9;

export type Ranking = "HS>COL" | "COL>HS" | "tie";

const HS = "high_school";
const COL = "college";

function rank(hsValue: number, colValue: number, tolerance: number): Ranking {
  if (Math.abs(hsValue - colValue) <= tolerance) return "tie";
  return hsValue > colValue ? "HS>COL" : "COL>HS";
}

function measureAt(
  rows: SeriesRow[],
  year: number,
  parentLine: string,
  classification: string,
  measure: MeasureColumn,
): number | null {
  const row = rows.find(
    (r) => r.year === year && r.parent_line === parentLine && r.classification === classification,
  );
  return row ? row[measure] : null;
}

/**
 * Years (for one parent line) where the Liu-Lu ranking and the comparison
 * measure's ranking are strict and opposite.  Years with a gap under
 * either classification are skipped.
 */
export function reversalYears(
  rows: SeriesRow[],
  parentLine: string,
  against: Exclude<MeasureColumn, "liu_lu">,
  tolerance: number = TIE_TOLERANCE,
): number[] {
  const years: number[] = [];
  for (const row of rows) {
    if (row.parent_line !== parentLine || years.includes(row.year)) continue;
    const llHs = measureAt(rows, row.year, parentLine, HS, "liu_lu");
    const llCol = measureAt(rows, row.year, parentLine, COL, "liu_lu");
    const otherHs = measureAt(rows, row.year, parentLine, HS, against);
    const otherCol = measureAt(rows, row.year, parentLine, COL, against);
    if (llHs === null || llCol === null || otherHs === null || otherCol === null) continue;
    const llRank = rank(llHs, llCol, tolerance);
    const otherRank = rank(otherHs, otherCol, tolerance);
    if (llRank !== "tie" && otherRank !== "tie" && llRank !== otherRank) {
      years.push(row.year);
    }
  }
  return years.sort((a, b) => a - b);
}
