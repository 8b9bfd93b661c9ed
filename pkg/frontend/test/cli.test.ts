import { execFileSync } from "node:child_process";
import { existsSync, mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

const CLI = join(__dirname, "..", "dist", "cli.js");
const FIXTURE = join(__dirname, "fixtures", "series.csv");

function run(args: string[]): { code: number; stdout: string; stderr: string } {
  try {
    const stdout = execFileSync("node", [CLI, ...args], { encoding: "utf8" });
    return { code: 0, stdout, stderr: "" };
  } catch (error: any) {
    return {
      code: error.status ?? 1,
      stdout: error.stdout?.toString() ?? "",
      stderr: error.stderr?.toString() ?? "",
    };
  }
}

describe("figures CLI", () => {
  it("renders one SVG per measure per parent line on the fixture", () => {
    const outDir = mkdtempSync(join(tmpdir(), "figs-"));
    const result = run(["--input", FIXTURE, "--measure", "all", "--out-dir", outDir]);
    expect(result.code).toBe(0);
    for (const measure of ["liu_lu", "igpc_beta", "phi"]) {
      for (const parent of ["mother", "father"]) {
        expect(existsSync(join(outDir, `${measure}_${parent}.svg`))).toBe(true);
      }
    }
    const svg = readFileSync(join(outDir, "liu_lu_mother.svg"), "utf8");
    expect(svg).toContain("stroke-dasharray");
    expect(svg.startsWith("<svg")).toBe(true);
  });

  it("accepts a single measure", () => {
    const outDir = mkdtempSync(join(tmpdir(), "figs-"));
    const result = run(["--input", FIXTURE, "--measure", "phi", "--out-dir", outDir]);
    expect(result.code).toBe(0);
    expect(existsSync(join(outDir, "phi_mother.svg"))).toBe(true);
    expect(existsSync(join(outDir, "liu_lu_mother.svg"))).toBe(false);
  });

  it("exits nonzero on input missing a schema column", () => {
    const outDir = mkdtempSync(join(tmpdir(), "figs-"));
    const broken = join(outDir, "broken.csv");
    const text = readFileSync(FIXTURE, "utf8")
      .split("\n")
      .map((line) => line.split(",").filter((_, i) => i !== 7).join(","))  // drop phi
      .join("\n");
    writeFileSync(broken, text);
    const result = run(["--input", broken, "--measure", "liu_lu", "--out-dir", outDir]);
    expect(result.code).toBe(2);
    expect(result.stderr).toMatch(/missing columns.*phi/);
  });

  it("exits nonzero on an unknown measure name", () => {
    const result = run(["--input", FIXTURE, "--measure", "zeta", "--out-dir", tmpdir()]);
    expect(result.code).toBe(2);
    expect(result.stderr).toContain("unknown measure");
  });

  it("exits nonzero on an unreadable input path", () => {
    const result = run(["--input", "/nowhere/series.csv", "--measure", "phi", "--out-dir", tmpdir()]);
    expect(result.code).toBe(2);
    expect(result.stderr).toContain("cannot read");
  });

  it("exits nonzero on empty input", () => {
    const outDir = mkdtempSync(join(tmpdir(), "figs-"));
    const empty = join(outDir, "empty.csv");
    writeFileSync(empty, readFileSync(FIXTURE, "utf8").split("\n")[0] + "\n");
    const result = run(["--input", empty, "--measure", "phi", "--out-dir", outDir]);
    expect(result.code).toBe(2);
    expect(result.stderr).toContain("no data rows");
  });

  it("exits nonzero on a usage error", () => {
    const result = run(["--measure", "phi"]);  // no --input / --out-dir
    expect(result.code).toBe(1);
    expect(result.stderr).toContain("usage error");
  });

  it("writes reversal markers when asked", () => {
    const outDir = mkdtempSync(join(tmpdir(), "figs-"));
    const result = run([
      "--input", FIXTURE,
      "--measure", "liu_lu",
      "--out-dir", outDir,
      "--annotate-reversals", "igpc_beta",
    ]);
    expect(result.code).toBe(0);
    const svg = readFileSync(join(outDir, "liu_lu_mother.svg"), "utf8");
    expect(svg).toContain("reversal-marker");
  });
});
