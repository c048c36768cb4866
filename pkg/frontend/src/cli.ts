#!/usr/bin/env node
/** Command-line front end: `render --csv PATH --x h --y err_sa --out fig.svg`. */

import { parseArgs } from "node:util";
import { pathToFileURL } from "node:url";

import { NoDataError, SchemaError } from "./errors.js";
import { renderConvergenceFigure } from "./figure.js";
import { AXES, METRICS, type Axis, type Metric } from "./slopes.js";

const USAGE =
  "usage: wkbsplit-figures render --csv PATH --x {h|dx|eps} " +
  "--y {err_rho|err_psi|err_sa} --out PATH.svg [--guides 1,2]";

export function main(argv: readonly string[]): number {
  const [command, ...rest] = argv;
  if (command !== "render") {
    process.stderr.write(`${USAGE}\n`);
    return 2;
  }

  let values: Record<string, string | undefined>;
  try {
    values = parseArgs({
      args: [...rest],
      options: {
        csv: { type: "string" },
        x: { type: "string" },
        y: { type: "string" },
        out: { type: "string" },
        guides: { type: "string" },
      },
      strict: true,
    }).values;
  } catch (error) {
    process.stderr.write(`argument error: ${(error as Error).message}\n${USAGE}\n`);
    return 2;
  }

  const { csv, x, y, out, guides } = values;
  if (csv === undefined || x === undefined || y === undefined || out === undefined) {
    process.stderr.write(`argument error: --csv, --x, --y, --out are required\n${USAGE}\n`);
    return 2;
  }
  if (!(AXES as readonly string[]).includes(x)) {
    process.stderr.write(`argument error: --x must be one of ${AXES.join(", ")}\n`);
    return 2;
  }
  if (!(METRICS as readonly string[]).includes(y)) {
    process.stderr.write(`argument error: --y must be one of ${METRICS.join(", ")}\n`);
    return 2;
  }
  let guideSlopes: number[] = [];
  if (guides !== undefined) {
    guideSlopes = guides.split(",").map((part) => Number(part.trim()));
    if (guideSlopes.some((v) => !Number.isFinite(v) || v <= 0)) {
      process.stderr.write(`argument error: --guides must be positive numbers, got "${guides}"\n`);
      return 2;
    }
  }

  try {
    const result = renderConvergenceFigure({
      csvPath: csv,
      x: x as Axis,
      y: y as Metric,
      outPath: out,
      guides: guideSlopes,
    });
    process.stdout.write(
      `wrote ${result.svgPath} and ${result.tablePath} ` +
        `(${result.summary.curves.length} curves, ${result.summary.used} rows)\n`,
    );
    return 0;
  } catch (error) {
    if (error instanceof SchemaError) {
      process.stderr.write(`schema error: ${error.message}\n`);
      return 2;
    }
    if (error instanceof NoDataError) {
      process.stderr.write(`no data: ${error.message}\n`);
      return 3;
    }
    if (isIoError(error)) {
      process.stderr.write(`i/o error: ${(error as Error).message}\n`);
      return 4;
    }
    throw error;
  }
}

function isIoError(error: unknown): boolean {
  return (
    error instanceof Error &&
    typeof (error as NodeJS.ErrnoException).code === "string"
  );
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === pathToFileURL(process.argv[1]).href;
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
