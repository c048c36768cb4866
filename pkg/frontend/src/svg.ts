/** Deterministic log-log SVG panel builder (no DOM, pure string assembly). */

import type { CurveFit } from "./slopes.js";

export interface PanelOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  curves: readonly CurveFit[];
  /** Reference-slope guide lines, e.g. [1, 2]. */
  guides: readonly number[];
}

const WIDTH = 780;
const HEIGHT = 520;
const MARGIN = { left: 78, right: 230, top: 46, bottom: 58 };
const PLOT_W = WIDTH - MARGIN.left - MARGIN.right;
const PLOT_H = HEIGHT - MARGIN.top - MARGIN.bottom;

const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
  "#17becf",
  "#7f7f7f",
];

interface LogRange {
  lo: number;
  hi: number;
}

export function buildLogLogSvg(options: PanelOptions): string {
  const xs: number[] = [];
  const ys: number[] = [];
  for (const curve of options.curves) {
    for (const p of curve.points) {
      xs.push(Math.log10(p.x));
      ys.push(Math.log10(p.y));
    }
  }
  const xr = padded(range(xs));
  const yr = padded(range(ys));
  const sx = (logValue: number): number =>
    MARGIN.left + ((logValue - xr.lo) / (xr.hi - xr.lo)) * PLOT_W;
  const sy = (logValue: number): number =>
    MARGIN.top + ((yr.hi - logValue) / (yr.hi - yr.lo)) * PLOT_H;

  const parts: string[] = [];
  parts.push('<?xml version="1.0" encoding="UTF-8"?>');
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">`,
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  parts.push(
    `<text x="${MARGIN.left + PLOT_W / 2}" y="${MARGIN.top - 18}" ` +
      `text-anchor="middle" font-size="16">${escapeXml(options.title)}</text>`,
  );

  parts.push(...gridAndTicks(xr, yr, sx, sy, options.xLabel, options.yLabel));
  parts.push(...guideLines(options.guides, xr, yr, sx, sy));

  options.curves.forEach((curve, index) => {
    const color = PALETTE[index % PALETTE.length] as string;
    const coords = curve.points
      .map((p) => `${sx(Math.log10(p.x)).toFixed(2)},${sy(Math.log10(p.y)).toFixed(2)}`)
      .join(" ");
    parts.push(
      `<polyline points="${coords}" fill="none" stroke="${color}" stroke-width="1.8"/>`,
    );
    for (const p of curve.points) {
      parts.push(
        `<circle cx="${sx(Math.log10(p.x)).toFixed(2)}" ` +
          `cy="${sy(Math.log10(p.y)).toFixed(2)}" r="3" fill="${color}"/>`,
      );
    }
  });

  parts.push(...legend(options.curves));
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}

function range(values: readonly number[]): LogRange {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    lo = Math.min(lo, v);
    hi = Math.max(hi, v);
  }
  return { lo, hi };
}

function padded(r: LogRange): LogRange {
  if (r.lo === r.hi) {
    return { lo: r.lo - 0.5, hi: r.hi + 0.5 };
  }
  const pad = 0.04 * (r.hi - r.lo);
  return { lo: r.lo - pad, hi: r.hi + pad };
}

function gridAndTicks(
  xr: LogRange,
  yr: LogRange,
  sx: (v: number) => number,
  sy: (v: number) => number,
  xLabel: string,
  yLabel: string,
): string[] {
  const parts: string[] = [];
  const x0 = MARGIN.left;
  const x1 = MARGIN.left + PLOT_W;
  const y0 = MARGIN.top;
  const y1 = MARGIN.top + PLOT_H;

  for (const exponent of decades(xr)) {
    const px = sx(exponent).toFixed(2);
    parts.push(
      `<line x1="${px}" y1="${y0}" x2="${px}" y2="${y1}" stroke="#dddddd"/>`,
    );
    parts.push(
      `<text x="${px}" y="${y1 + 20}" text-anchor="middle" font-size="12">1e${exponent}</text>`,
    );
  }
  for (const exponent of decades(yr)) {
    const py = sy(exponent).toFixed(2);
    parts.push(
      `<line x1="${x0}" y1="${py}" x2="${x1}" y2="${py}" stroke="#dddddd"/>`,
    );
    parts.push(
      `<text x="${x0 - 8}" y="${py}" text-anchor="end" dominant-baseline="middle" ` +
        `font-size="12">1e${exponent}</text>`,
    );
  }
  parts.push(
    `<rect x="${x0}" y="${y0}" width="${PLOT_W}" height="${PLOT_H}" ` +
      `fill="none" stroke="#333333"/>`,
  );
  parts.push(
    `<text x="${x0 + PLOT_W / 2}" y="${HEIGHT - 12}" text-anchor="middle" ` +
      `font-size="14">${escapeXml(xLabel)}</text>`,
  );
  parts.push(
    `<text x="20" y="${y0 + PLOT_H / 2}" text-anchor="middle" font-size="14" ` +
      `transform="rotate(-90 20 ${y0 + PLOT_H / 2})">${escapeXml(yLabel)}</text>`,
  );
  return parts;
}

function decades(r: LogRange): number[] {
  const result: number[] = [];
  for (let e = Math.ceil(r.lo); e <= Math.floor(r.hi); e++) {
    result.push(e);
  }
  if (result.length === 0) {
    result.push(Math.round((r.lo + r.hi) / 2));
  }
  return result;
}

function guideLines(
  guides: readonly number[],
  xr: LogRange,
  yr: LogRange,
  sx: (v: number) => number,
  sy: (v: number) => number,
): string[] {
  const parts: string[] = [];
  for (const slope of guides) {
    if (!Number.isFinite(slope) || slope <= 0) {
      continue;
    }
    // Each guide rises to the right at the given decades-per-decade rate,
    // anchored just above the panel's lower-right region and trimmed on the
    // left so both endpoints stay inside the axes.
    const xHi = xr.hi - 0.04;
    const yLo = yr.lo + 0.1;
    const maxRun = (yr.hi - 0.1 - yLo) / slope;
    const xLo = Math.max(xr.lo + 0.04, xHi - maxRun);
    const yHi = yLo + slope * (xHi - xLo);
    parts.push(
      `<line x1="${sx(xLo).toFixed(2)}" y1="${sy(yLo).toFixed(2)}" ` +
        `x2="${sx(xHi).toFixed(2)}" y2="${sy(yHi).toFixed(2)}" ` +
        `stroke="#999999" stroke-dasharray="6 4"/>`,
    );
    parts.push(
      `<text x="${(sx(xHi) + 4).toFixed(2)}" y="${sy(yHi).toFixed(2)}" ` +
        `font-size="11" fill="#666666">slope ${slope}</text>`,
    );
  }
  return parts;
}

function legend(curves: readonly CurveFit[]): string[] {
  const parts: string[] = [];
  const x = WIDTH - MARGIN.right + 16;
  let y = MARGIN.top + 8;
  for (let i = 0; i < curves.length; i++) {
    const curve = curves[i] as CurveFit;
    const color = PALETTE[i % PALETTE.length] as string;
    parts.push(
      `<line x1="${x}" y1="${y}" x2="${x + 22}" y2="${y}" stroke="${color}" stroke-width="2"/>`,
    );
    const slopeText = Number.isFinite(curve.slope)
      ? curve.slope.toFixed(2)
      : "n/a";
    parts.push(
      `<text x="${x + 28}" y="${y + 4}" font-size="12">` +
        `${escapeXml(curve.label)} (slope ${slopeText})</text>`,
    );
    y += 18;
  }
  return parts;
}

function escapeXml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}
