/** Shared builders for synthetic sweep CSVs. */

import { SWEEP_COLUMNS } from "../src/index.js";

export const HEADER = SWEEP_COLUMNS.join(",");

export interface RowOverrides {
  scheme?: string;
  eps?: number;
  nx?: number;
  nt?: number;
  h?: number;
  dx?: number;
  t_final?: number;
  err_rho?: number | string;
  err_psi?: number | string;
  err_sa?: number | string;
  mass_drift_rel?: number | string;
  wallclock_seconds?: number;
  status?: string;
  reference_id?: string;
}

export function makeRow(overrides: RowOverrides = {}): string {
  const nt = overrides.nt ?? 64;
  const nx = overrides.nx ?? 128;
  const tFinal = overrides.t_final ?? 0.2;
  const row = {
    scheme: "lie",
    eps: 0.25,
    nx,
    nt,
    h: tFinal / nt,
    dx: (2 * Math.PI) / nx,
    t_final: tFinal,
    err_rho: 1e-3,
    err_psi: 1e-3,
    err_sa: 1e-3,
    mass_drift_rel: 0,
    wallclock_seconds: 0.01,
    status: "ok",
    reference_id: "ref",
    ...overrides,
  };
  return SWEEP_COLUMNS.map((column) => String(row[column])).join(",");
}

export function makeCsv(rows: readonly RowOverrides[]): string {
  return [HEADER, ...rows.map(makeRow)].join("\n") + "\n";
}
