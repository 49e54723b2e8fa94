import { readFileSync } from "node:fs";

/** Column order written by the simulator CLI. */
export const CSV_COLUMNS = [
  "time",
  "kinetic",
  "e1_energy",
  "e2_energy",
  "b_energy",
  "total",
  "total_err",
  "modified_err",
  "gauss_residual",
  "p1",
  "p2",
  "p1_ref",
  "p2_ref",
] as const;

export type ColumnName = (typeof CSV_COLUMNS)[number];

export type Diagnostics = Record<ColumnName, Float64Array>;

/**
 * Parse one diagnostics CSV. The header must contain every expected column
 * (extra columns are tolerated) and at least one data row must follow;
 * failures name the offending file.
 */
export function readDiagnostics(path: string): Diagnostics {
  const text = readFileSync(path, "utf8");
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new Error(`${path}: empty file`);
  }
  const header = lines[0].split(",").map((s) => s.trim());
  const index = new Map(header.map((name, i) => [name, i] as const));
  const missing = CSV_COLUMNS.filter((name) => !index.has(name));
  if (missing.length > 0) {
    throw new Error(`${path}: missing columns ${missing.join(", ")}`);
  }
  if (lines.length === 1) {
    throw new Error(`${path}: no data rows after the header`);
  }
  const n = lines.length - 1;
  const out = Object.fromEntries(
    CSV_COLUMNS.map((name) => [name, new Float64Array(n)]),
  ) as Diagnostics;
  for (let r = 0; r < n; r++) {
    const fields = lines[r + 1].split(",");
    if (fields.length < header.length) {
      throw new Error(`${path}: row ${r + 2} has ${fields.length} fields`);
    }
    for (const name of CSV_COLUMNS) {
      const value = Number(fields[index.get(name)!]);
      if (!Number.isFinite(value) && !Number.isNaN(value)) {
        // infinities would break the log axes later; reject early
        throw new Error(`${path}: non-finite ${name} in row ${r + 2}`);
      }
      out[name][r] = value;
    }
  }
  return out;
}
