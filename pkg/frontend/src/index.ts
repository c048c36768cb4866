/** Public surface of the figure pipeline. */

export { NoDataError, SchemaError } from "./errors.js";
export { SWEEP_COLUMNS, parseSweepCsv } from "./schema.js";
export type { SweepColumn, SweepRow } from "./schema.js";
export {
  AXES,
  METRICS,
  defaultGroupBy,
  fitCurves,
  leastSquaresSlope,
} from "./slopes.js";
export type {
  Axis,
  CurveFit,
  FitSummary,
  GroupColumn,
  Metric,
  Point,
} from "./slopes.js";
export { buildLogLogSvg } from "./svg.js";
export type { PanelOptions } from "./svg.js";
export {
  buildSlopeTable,
  renderConvergenceFigure,
  sidecarPath,
} from "./figure.js";
export type { FigureSpec, RenderResult } from "./figure.js";
export { main } from "./cli.js";
