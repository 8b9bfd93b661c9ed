/**
 * SVG line charts from a measure series.
 *
 * One figure per parent line: x is the census year, y the chosen measure.
 * Line style encodes the classification: dashed for high_school, solid
 * for college (other classification names fall back to solid and are
 * still legible via the legend, whose labels come straight from the CSV
 * values).  Gap rows break the line.  The y axis is pinned to [-1, 1]
 * for liu_lu and phi and fitted to the data for igpc_beta.
 */

import { reversalYears } from "./reversals.js";
import { classifications, type MeasureColumn, type SeriesRow } from "./series.js";

export interface FigureSpec {
  measure: MeasureColumn;
  parentLine: string;
  width?: number;
  height?: number;
  /** Draw vertical markers at years where liu_lu and this measure disagree. */
  annotateReversals?: "igpc_beta" | "phi" | null;
}

export class FigureError extends Error {}

const MARGIN = { top: 46, right: 180, bottom: 44, left: 56 };
const DASHED = "7 4";

interface Scale {
  (value: number): number;
}

function linearScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const span = d1 - d0 || 1;
  return (value: number) => r0 + ((value - d0) / span) * (r1 - r0);
}

function niceTicks(lo: number, hi: number, count = 5): number[] {
  const span = hi - lo || 1;
  const rawStep = span / Math.max(1, count - 1);
  const magnitude = 10 ** Math.floor(Math.log10(rawStep));
  const step = [1, 2, 2.5, 5, 10].map((m) => m * magnitude).find((s) => s >= rawStep) ?? rawStep;
  const first = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let v = first; v <= hi + step / 1e6; v += step) {
    ticks.push(Number(v.toFixed(10)));
  }
  return ticks;
}

function fmt(value: number): string {
  return Number(value.toFixed(2)).toString();
}

function px(value: number): string {
  return value.toFixed(2);
}

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function yDomain(measure: MeasureColumn, values: number[]): [number, number] {
  if (measure === "liu_lu" || measure === "phi") return [-1, 1];
  // igpc_beta: fit the data, keep zero visible, pad a little
  let lo = Math.min(0, ...values);
  let hi = Math.max(0, ...values);
  const pad = (hi - lo || 1) * 0.1;
  return [lo - pad, hi + pad];
}

/** Path "M x y L x y ..." per run of consecutive non-gap points. */
function segmentPaths(
  points: Array<{ x: number; y: number | null }>,
): string[] {
  const paths: string[] = [];
  let current: string[] = [];
  for (const point of points) {
    if (point.y === null) {
      if (current.length > 1) paths.push(current.join(" "));
      current = [];
      continue;
    }
    current.push(`${current.length === 0 ? "M" : "L"} ${px(point.x)} ${px(point.y)}`);
  }
  if (current.length > 1) paths.push(current.join(" "));
  return paths;
}

export function renderFigure(rows: SeriesRow[], spec: FigureSpec): string {
  const width = spec.width ?? 860;
  const height = spec.height ?? 460;
  const panelRows = rows.filter((row) => row.parent_line === spec.parentLine);
  if (panelRows.length === 0) {
    throw new FigureError(`no rows for parent_line=${JSON.stringify(spec.parentLine)}`);
  }

  const years = [...new Set(panelRows.map((row) => row.year))].sort((a, b) => a - b);
  const values = panelRows
    .map((row) => row[spec.measure])
    .filter((v): v is number => v !== null);
  if (values.length === 0) {
    throw new FigureError(
      `every ${spec.measure} cell is a gap for parent_line=${spec.parentLine}`,
    );
  }

  const [yLo, yHi] = yDomain(spec.measure, values);
  const x = linearScale(years[0], years[years.length - 1], MARGIN.left, width - MARGIN.right);
  const y = linearScale(yLo, yHi, height - MARGIN.bottom, MARGIN.top);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`,
  );
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  parts.push(
    `<text x="${px(MARGIN.left)}" y="24" font-size="16" fill="#111">` +
      `${escapeXml(spec.measure)} &#8212; ${escapeXml(spec.parentLine)} line</text>`,
  );

  // gridlines + y axis
  for (const tick of niceTicks(yLo, yHi)) {
    const ty = y(tick);
    parts.push(
      `<line x1="${px(MARGIN.left)}" y1="${px(ty)}" x2="${px(width - MARGIN.right)}" ` +
        `y2="${px(ty)}" stroke="#ddd" stroke-width="1"/>`,
    );
    parts.push(
      `<text x="${px(MARGIN.left - 8)}" y="${px(ty + 4)}" font-size="11" ` +
        `fill="#444" text-anchor="end">${fmt(tick)}</text>`,
    );
  }
  // x axis: one tick per census year
  for (const year of years) {
    const tx = x(year);
    parts.push(
      `<line x1="${px(tx)}" y1="${px(height - MARGIN.bottom)}" x2="${px(tx)}" ` +
        `y2="${px(height - MARGIN.bottom + 5)}" stroke="#444" stroke-width="1"/>`,
    );
    parts.push(
      `<text x="${px(tx)}" y="${px(height - MARGIN.bottom + 20)}" font-size="11" ` +
        `fill="#444" text-anchor="middle">${year}</text>`,
    );
  }
  parts.push(
    `<line x1="${px(MARGIN.left)}" y1="${px(height - MARGIN.bottom)}" ` +
      `x2="${px(width - MARGIN.right)}" y2="${px(height - MARGIN.bottom)}" ` +
      `stroke="#444" stroke-width="1"/>`,
  );

  // reversal markers first, so the series lines draw on top
  if (spec.annotateReversals) {
    for (const year of reversalYears(rows, spec.parentLine, spec.annotateReversals)) {
      const tx = x(year);
      parts.push(
        `<line x1="${px(tx)}" y1="${px(MARGIN.top)}" x2="${px(tx)}" ` +
          `y2="${px(height - MARGIN.bottom)}" stroke="#c0392b" stroke-width="1" ` +
          `stroke-dasharray="2 3" class="reversal-marker"/>`,
      );
      parts.push(
        `<text x="${px(tx + 3)}" y="${px(MARGIN.top + 10)}" font-size="10" ` +
          `fill="#c0392b">${year}</text>`,
      );
    }
  }

  // one line per classification, in data order
  const names = classifications(panelRows);
  names.forEach((name, index) => {
    const dashed = name === "high_school";
    const byYear = new Map(
      panelRows.filter((row) => row.classification === name).map((row) => [row.year, row]),
    );
    const points = years.map((year) => {
      const row = byYear.get(year);
      const value = row ? row[spec.measure] : null;
      return { x: x(year), y: value === null || value === undefined ? null : y(value) };
    });
    const dash = dashed ? ` stroke-dasharray="${DASHED}"` : "";
    for (const d of segmentPaths(points)) {
      parts.push(
        `<path d="${d}" fill="none" stroke="#1a1a1a" stroke-width="1.8"${dash} ` +
          `class="series-${escapeXml(name)}"/>`,
      );
    }
    for (const point of points) {
      if (point.y === null) continue;
      parts.push(
        `<circle cx="${px(point.x)}" cy="${px(point.y)}" r="2.6" fill="#1a1a1a"/>`,
      );
    }
    // legend entry (labels come from the data, nothing hardcoded)
    const lx = width - MARGIN.right + 14;
    const ly = MARGIN.top + 8 + index * 22;
    parts.push(
      `<line x1="${px(lx)}" y1="${px(ly)}" x2="${px(lx + 30)}" y2="${px(ly)}" ` +
        `stroke="#1a1a1a" stroke-width="1.8"${dash}/>`,
    );
    parts.push(
      `<text x="${px(lx + 36)}" y="${px(ly + 4)}" font-size="12" fill="#111">` +
        `${escapeXml(name)}</text>`,
    );
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
