import { describe, expect, it } from "vitest";

import { reversalYears } from "../src/reversals.js";
import type { SeriesRow } from "../src/series.js";

function row(
  year: number,
  classification: string,
  liuLu: number | null,
  igpcBeta: number | null,
  phi: number | null = liuLu,
): SeriesRow {
  return {
    year,
    parent_line: "mother",
    classification,
    liu_lu: liuLu,
    liu_lu_simplified: liuLu,
    igpc_beta: igpcBeta,
    igpc_alpha: 0.3,
    phi,
    n_effective: 100,
    gap_reason: liuLu === null ? "DegenerateMargins" : null,
  };
}

describe("reversalYears", () => {
  it("flags a year where liu_lu and igpc rank oppositely", () => {
    // the derived pair: liu_lu 0.5 vs 0.4 (HS first), beta 0.25 vs 1/3 (COL first)
    const rows = [
      row(1990, "high_school", 0.5, 0.25),
      row(1990, "college", 0.4, 1 / 3),
    ];
    expect(reversalYears(rows, "mother", "igpc_beta")).toEqual([1990]);
  });

  it("does not flag agreeing years", () => {
    const rows = [
      row(1990, "high_school", 0.5, 0.4),
      row(1990, "college", 0.4, 0.3),
    ];
    expect(reversalYears(rows, "mother", "igpc_beta")).toEqual([]);
  });

  it("ties never flag", () => {
    const rows = [
      row(1990, "high_school", 0.5, 0.3 + 1e-12),
      row(1990, "college", 0.4, 0.3),
    ];
    expect(reversalYears(rows, "mother", "igpc_beta")).toEqual([]);
  });

  it("skips years with gaps", () => {
    const rows = [
      row(1990, "high_school", null, null),
      row(1990, "college", 0.4, 1 / 3),
    ];
    expect(reversalYears(rows, "mother", "igpc_beta")).toEqual([]);
  });

  it("supports phi as the comparison measure", () => {
    const rows = [
      row(1990, "high_school", 0.5, 0.4, 0.2),
      row(1990, "college", 0.4, 0.3, 0.3),
    ];
    expect(reversalYears(rows, "mother", "phi")).toEqual([1990]);
  });

  it("returns sorted years across multiple flagged points", () => {
    const rows = [
      row(2000, "high_school", 0.5, 0.25),
      row(2000, "college", 0.4, 1 / 3),
      row(1990, "high_school", 0.5, 0.25),
      row(1990, "college", 0.4, 1 / 3),
    ];
    expect(reversalYears(rows, "mother", "igpc_beta")).toEqual([1990, 2000]);
  });
});
