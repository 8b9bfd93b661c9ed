#!/usr/bin/env node
/**
 * Render figure SVGs from a mobimetrics series CSV.
 *
 *   node dist/cli.js --input series.csv --measure liu_lu --out-dir figs/
 *
 * Writes one SVG per requested measure per parent line found in the data
 * ({measure}_{parent_line}.svg), dashed line for the high_school
 * classification, solid for college.  Exit codes: 0 success, 1 usage
 * error, 2 data error (missing column, unreadable or empty input).
 */

import { mkdirSync, readFileSync, writeFileSync } from "node:fs";
import { join } from "node:path";
import yargs from "yargs";

import { FigureError, renderFigure } from "./figure.js";
import {
  MEASURE_COLUMNS,
  SeriesFormatError,
  isMeasureColumn,
  parentLines,
  parseSeriesCsv,
  type MeasureColumn,
} from "./series.js";

export async function main(argv: string[]): Promise<number> {
  const parser = yargs(argv)
    .usage("$0 --input <series.csv> --measure <name|all> --out-dir <dir>")
    .option("input", { type: "string", demandOption: true, describe: "series CSV path" })
    .option("measure", {
      type: "string",
      array: true,
      demandOption: true,
      describe: `measure column(s) to plot: ${MEASURE_COLUMNS.join(", ")}, or "all"`,
    })
    .option("out-dir", { type: "string", demandOption: true, describe: "output directory" })
    .option("annotate-reversals", {
      type: "string",
      choices: ["igpc_beta", "phi"] as const,
      describe: "mark years where liu_lu and this measure rank the classifications oppositely",
    })
    .option("width", { type: "number", default: 860 })
    .option("height", { type: "number", default: 460 })
    .strict()
    .exitProcess(false)
    .fail(false)
    .help();

  let args;
  try {
    args = await parser.parse();
  } catch (error) {
    console.error(`usage error: ${error instanceof Error ? error.message : error}`);
    return 1;
  }
  if (args.help) return 0;

  const requested = args.measure.flatMap((m) => (m === "all" ? [...MEASURE_COLUMNS] : [m]));
  const measures: MeasureColumn[] = [];
  for (const name of requested) {
    if (!isMeasureColumn(name)) {
      console.error(
        `error: unknown measure column ${JSON.stringify(name)} ` +
          `(expected ${MEASURE_COLUMNS.join(", ")}, or all)`,
      );
      return 2;
    }
    if (!measures.includes(name)) measures.push(name);
  }

  let text: string;
  try {
    text = readFileSync(args.input, "utf8");
  } catch (error) {
    console.error(`error: cannot read ${args.input}: ${(error as Error).message}`);
    return 2;
  }

  try {
    const rows = parseSeriesCsv(text);
    if (rows.length === 0) {
      console.error(`error: ${args.input} has no data rows`);
      return 2;
    }
    mkdirSync(args.outDir, { recursive: true });
    for (const measure of measures) {
      for (const parentLine of parentLines(rows)) {
        const svg = renderFigure(rows, {
          measure,
          parentLine,
          width: args.width,
          height: args.height,
          annotateReversals:
            (args.annotateReversals as "igpc_beta" | "phi" | undefined) ?? null,
        });
        const path = join(args.outDir, `${measure}_${parentLine}.svg`);
        writeFileSync(path, svg, "utf8");
        console.log(`wrote ${path}`);
      }
    }
    return 0;
  } catch (error) {
    if (error instanceof SeriesFormatError || error instanceof FigureError) {
      console.error(`error: ${error.message}`);
      return 2;
    }
    throw error;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (invokedDirectly) {
  main(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
