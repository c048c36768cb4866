/** Figure specification and the render operation: CSV in, SVG + slope table out. */

import * as fs from "node:fs";
import * as path from "node:path";

import { SchemaError } from "./errors.js";
import { parseSweepCsv } from "./schema.js";
import {
  AXES,
  METRICS,
  defaultGroupBy,
  fitCurves,
  type Axis,
  type FitSummary,
  type GroupColumn,
  type Metric,
} from "./slopes.js";
import { buildLogLogSvg } from "./svg.js";

export interface FigureSpec {
  /** Sweep CSV produced by the solver harness. */
  csvPath: string;
  x: Axis;
  y: Metric;
  /** Destination for the vector image; the slope table lands next to it. */
  outPath: string;
  /** One curve per combination; defaults to the sweep variables not driving x. */
  groupBy?: readonly GroupColumn[];
  /** Reference-slope guide lines to draw, e.g. [1, 2]. */
  guides?: readonly number[];
}

export interface RenderResult {
  svgPath: string;
  tablePath: string;
  summary: FitSummary;
}

export function sidecarPath(outPath: string): string {
  return outPath.replace(/\.svg$/i, "") + ".slopes.txt";
}

/**
 * Render one log-log panel plus a plain-text table of per-curve slopes.
 *
 * Rows with status != ok are excluded and counted in the table header; a CSV
 * with nothing left to plot raises NoDataError, and a header that deviates
 * from the sweep schema raises SchemaError.
 */
export function renderConvergenceFigure(spec: FigureSpec): RenderResult {
  if (!(AXES as readonly string[]).includes(spec.x)) {
    throw new SchemaError(`unknown column "${spec.x}" for the x axis`);
  }
  if (!(METRICS as readonly string[]).includes(spec.y)) {
    throw new SchemaError(`unknown column "${spec.y}" for the y axis`);
  }
  const text = fs.readFileSync(spec.csvPath, "utf8");
  const rows = parseSweepCsv(text);
  const groupBy = spec.groupBy ?? defaultGroupBy(spec.x);
  const summary = fitCurves(rows, spec.x, spec.y, groupBy);

  const svg = buildLogLogSvg({
    title: `${spec.y} vs ${spec.x}`,
    xLabel: spec.x,
    yLabel: spec.y,
    curves: summary.curves,
    guides: spec.guides ?? [],
  });
  fs.writeFileSync(spec.outPath, svg);

  const tablePath = sidecarPath(spec.outPath);
  fs.writeFileSync(tablePath, buildSlopeTable(spec, summary));
  return { svgPath: spec.outPath, tablePath, summary };
}

/** Plain-text slope table; values carry full double precision. */
export function buildSlopeTable(spec: FigureSpec, summary: FitSummary): string {
  const lines: string[] = [];
  lines.push(`# ${spec.y} vs ${spec.x}, log-log least-squares slopes`);
  lines.push(`# source: ${path.basename(spec.csvPath)}`);
  lines.push(
    `# rows: ${summary.used} used, ${summary.statusExcluded} status-excluded, ` +
      `${summary.nonPlottable} non-plottable`,
  );
  for (const curve of summary.curves) {
    lines.push(
      `${curve.label} n=${curve.points.length} slope=${formatSlope(curve.slope)}`,
    );
  }
  return lines.join("\n") + "\n";
}

function formatSlope(value: number): string {
  return Number.isFinite(value) ? value.toPrecision(17) : "nan";
}
