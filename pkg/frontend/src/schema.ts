/** Sweep-CSV schema: the fixed record layout written by the solver harness. */

import Papa from "papaparse";

import { SchemaError } from "./errors.js";

export const SWEEP_COLUMNS = [
  "scheme",
  "eps",
  "nx",
  "nt",
  "h",
  "dx",
  "t_final",
  "err_rho",
  "err_psi",
  "err_sa",
  "mass_drift_rel",
  "wallclock_seconds",
  "status",
  "reference_id",
] as const;

export type SweepColumn = (typeof SWEEP_COLUMNS)[number];

export interface SweepRow {
  scheme: string;
  eps: number;
  nx: number;
  nt: number;
  h: number;
  dx: number;
  t_final: number;
  err_rho: number;
  err_psi: number;
  err_sa: number;
  mass_drift_rel: number;
  wallclock_seconds: number;
  status: string;
  reference_id: string;
}

const NUMERIC_COLUMNS = [
  "eps",
  "nx",
  "nt",
  "h",
  "dx",
  "t_final",
  "err_rho",
  "err_psi",
  "err_sa",
  "mass_drift_rel",
  "wallclock_seconds",
] as const;

/** Columns that must be finite in every row; the error and drift columns may
 * legitimately hold NaN on rows whose integration diverged. */
const ALWAYS_FINITE = new Set<string>([
  "eps",
  "nx",
  "nt",
  "h",
  "dx",
  "t_final",
  "wallclock_seconds",
]);

/**
 * Parse sweep-CSV text into typed rows.
 *
 * The header must carry exactly the schema's columns (any order); an extra
 * column or a missing one raises SchemaError. A header-only file yields an
 * empty list -- deciding whether that is an error belongs to the caller.
 */
export function parseSweepCsv(text: string): SweepRow[] {
  const parsed = Papa.parse<Record<string, string>>(text, {
    header: true,
    skipEmptyLines: true,
  });
  const fields = parsed.meta.fields ?? [];
  const known = new Set<string>(SWEEP_COLUMNS);
  for (const field of fields) {
    if (!known.has(field)) {
      throw new SchemaError(`unknown column "${field}"`);
    }
  }
  for (const column of SWEEP_COLUMNS) {
    if (!fields.includes(column)) {
      throw new SchemaError(`missing column "${column}"`);
    }
  }
  return parsed.data.map((raw, index) => convertRow(raw, index));
}

function convertRow(raw: Record<string, string>, index: number): SweepRow {
  const line = index + 2; // 1-based, after the header line
  const row: Record<string, string | number> = {
    scheme: raw.scheme ?? "",
    status: raw.status ?? "",
    reference_id: raw.reference_id ?? "",
  };
  for (const column of NUMERIC_COLUMNS) {
    const text = (raw[column] ?? "").trim();
    const value = text === "" ? NaN : Number(text);
    if (!Number.isFinite(value) && ALWAYS_FINITE.has(column)) {
      throw new SchemaError(
        `line ${line}: column "${column}" must be numeric, got "${text}"`,
      );
    }
    row[column] = value;
  }
  return row as unknown as SweepRow;
}
