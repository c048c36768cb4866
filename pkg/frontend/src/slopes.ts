/** Curve grouping and log-log least-squares slope fitting. */

import { NoDataError } from "./errors.js";
import type { SweepRow } from "./schema.js";

export const AXES = ["h", "dx", "eps"] as const;
export const METRICS = ["err_rho", "err_psi", "err_sa"] as const;

export type Axis = (typeof AXES)[number];
export type Metric = (typeof METRICS)[number];
export type GroupColumn = "scheme" | "eps" | "nx" | "nt";

export interface Point {
  x: number;
  y: number;
}

export interface CurveFit {
  /** Human label: the varying group components, e.g. "eps=0.25". */
  label: string;
  /** Full group key, unique within the figure. */
  key: string;
  /** Plottable points sorted by ascending x. */
  points: Point[];
  /** Log-log least-squares slope; NaN when the curve has fewer than 2 points. */
  slope: number;
}

export interface FitSummary {
  curves: CurveFit[];
  /** Rows that contributed points. */
  used: number;
  /** Rows dropped because status != ok. */
  statusExcluded: number;
  /** ok-rows dropped because x or y was not a positive finite number. */
  nonPlottable: number;
}

/**
 * The sweep variables not driving the x axis: one curve per combination.
 * h is driven by nt and dx by nx, so those columns drop out of their own
 * grouping.
 */
export function defaultGroupBy(x: Axis): GroupColumn[] {
  if (x === "h") {
    return ["scheme", "eps", "nx"];
  }
  if (x === "dx") {
    return ["scheme", "eps", "nt"];
  }
  return ["scheme", "nx", "nt"];
}

/** Slope of the least-squares line through (ln x, ln y). */
export function leastSquaresSlope(points: readonly Point[]): number {
  if (points.length < 2) {
    return NaN;
  }
  const lx = points.map((p) => Math.log(p.x));
  const ly = points.map((p) => Math.log(p.y));
  const mx = mean(lx);
  const my = mean(ly);
  let sxx = 0;
  let sxy = 0;
  for (let i = 0; i < points.length; i++) {
    const dx = (lx[i] as number) - mx;
    sxx += dx * dx;
    sxy += dx * ((ly[i] as number) - my);
  }
  if (sxx === 0) {
    return NaN;
  }
  return sxy / sxx;
}

function mean(values: readonly number[]): number {
  let total = 0;
  for (const v of values) {
    total += v;
  }
  return total / values.length;
}

/**
 * Group ok-rows into curves along the chosen axes and fit each curve.
 *
 * Log scales cannot place zero or negative values, so such points are
 * dropped and counted; an entirely empty result raises NoDataError.
 */
export function fitCurves(
  rows: readonly SweepRow[],
  x: Axis,
  y: Metric,
  groupBy: readonly GroupColumn[],
): FitSummary {
  const okRows = rows.filter((r) => r.status === "ok");
  const statusExcluded = rows.length - okRows.length;
  const plottable = okRows.filter(
    (r) => isPositiveFinite(r[x]) && isPositiveFinite(r[y]),
  );
  const nonPlottable = okRows.length - plottable.length;
  if (plottable.length === 0) {
    throw new NoDataError(
      `no plottable rows for ${y} vs ${x} ` +
        `(${statusExcluded} excluded by status, ${nonPlottable} non-plottable)`,
    );
  }

  const varying = new Set<GroupColumn>();
  for (const column of groupBy) {
    const distinct = new Set(plottable.map((r) => String(r[column])));
    if (distinct.size > 1) {
      varying.add(column);
    }
  }

  const curves = new Map<string, { label: string; points: Point[] }>();
  const order: string[] = [];
  for (const row of plottable) {
    const key = groupBy.map((c) => `${c}=${row[c]}`).join(" ");
    let curve = curves.get(key);
    if (curve === undefined) {
      const labelParts = groupBy
        .filter((c) => varying.has(c))
        .map((c) => `${c}=${row[c]}`);
      curve = { label: labelParts.join(" ") || "all", points: [] };
      curves.set(key, curve);
      order.push(key);
    }
    curve.points.push({ x: row[x], y: row[y] });
  }

  return {
    curves: order.map((key) => {
      const { label, points } = curves.get(key) as {
        label: string;
        points: Point[];
      };
      points.sort((a, b) => a.x - b.x);
      return { label, key, points, slope: leastSquaresSlope(points) };
    }),
    used: plottable.length,
    statusExcluded,
    nonPlottable,
  };
}

function isPositiveFinite(value: number): boolean {
  return Number.isFinite(value) && value > 0;
}
