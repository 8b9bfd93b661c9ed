/**
 * Series CSV model and parsing.
 *
 * The pipeline emits one row per (year, parent line, classification) with
 * the fixed column set below; measure cells are empty on gap rows, which
 * carry a gap_reason instead.
 */

import Papa from "papaparse";

export const SERIES_COLUMNS = [
  "year",
  "parent_line",
  "classification",
  "liu_lu",
  "liu_lu_simplified",
  "igpc_beta",
  "igpc_alpha",
  "phi",
  "n_effective",
  "gap_reason",
] as const;

export const MEASURE_COLUMNS = ["liu_lu", "igpc_beta", "phi"] as const;
export type MeasureColumn = (typeof MEASURE_COLUMNS)[number];

export interface SeriesRow {
  year: number;
  parent_line: string;
  classification: string;
  liu_lu: number | null;
  liu_lu_simplified: number | null;
  igpc_beta: number | null;
  igpc_alpha: number | null;
  phi: number | null;
  n_effective: number;
  gap_reason: string | null;
}

export class SeriesFormatError extends Error {}

function numberOrNull(raw: string | undefined): number | null {
  if (raw === undefined || raw === "") return null;
  const value = Number(raw);
  if (!Number.isFinite(value)) {
    throw new SeriesFormatError(`non-numeric measure cell: ${JSON.stringify(raw)}`);
  }
  return value;
}

/** Parse an emitted series CSV; rejects inputs missing schema columns. */
export function parseSeriesCsv(text: string): SeriesRow[] {
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    throw new SeriesFormatError(`CSV parse error at row ${first.row}: ${first.message}`);
  }
  const header = parsed.meta.fields ?? [];
  const missing = SERIES_COLUMNS.filter((column) => !header.includes(column));
  if (missing.length > 0) {
    throw new SeriesFormatError(`series CSV is missing columns: ${missing.join(", ")}`);
  }
  return parsed.data.map((row, index) => {
    const year = Number(row.year);
    if (!Number.isInteger(year)) {
      throw new SeriesFormatError(`row ${index + 1}: bad year ${JSON.stringify(row.year)}`);
    }
    return {
      year,
      parent_line: row.parent_line,
      classification: row.classification,
      liu_lu: numberOrNull(row.liu_lu),
      liu_lu_simplified: numberOrNull(row.liu_lu_simplified),
      igpc_beta: numberOrNull(row.igpc_beta),
      igpc_alpha: numberOrNull(row.igpc_alpha),
      phi: numberOrNull(row.phi),
      n_effective: Number(row.n_effective ?? "0"),
      gap_reason: row.gap_reason === "" || row.gap_reason === undefined ? null : row.gap_reason,
    };
  });
}

export function isMeasureColumn(name: string): name is MeasureColumn {
  return (MEASURE_COLUMNS as readonly string[]).includes(name);
}

/** Distinct values in first-seen order (stable across runs). */
export function distinct(values: string[]): string[] {
  const seen: string[] = [];
  for (const value of values) {
    if (!seen.includes(value)) seen.push(value);
  }
  return seen;
}

export function parentLines(rows: SeriesRow[]): string[] {
  return distinct(rows.map((row) => row.parent_line));
}

export function classifications(rows: SeriesRow[]): string[] {
  return distinct(rows.map((row) => row.classification));
}
