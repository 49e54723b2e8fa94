import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { CSV_COLUMNS, readDiagnostics } from "../src/csv.js";

const HEADER = CSV_COLUMNS.join(",");

function tmpCsv(name: string, content: string): string {
  const dir = mkdtempSync(join(tmpdir(), "vmpic-plots-"));
  const path = join(dir, name);
  writeFileSync(path, content);
  return path;
}

function row(values: Partial<Record<string, number>>, time: number): string {
  return CSV_COLUMNS.map((c) => (c === "time" ? time : values[c] ?? 0)).join(",");
}

describe("readDiagnostics", () => {
  it("parses a well-formed file", () => {
    const path = tmpCsv("ok.csv", [
      HEADER,
      row({ b_energy: 1e-8, total: 0.5 }, 0),
      row({ b_energy: 2e-8, total: 0.5 }, 0.05),
    ].join("\n"));
    const data = readDiagnostics(path);
    expect(Array.from(data.time)).toEqual([0, 0.05]);
    expect(Array.from(data.b_energy)).toEqual([1e-8, 2e-8]);
  });

  it("rejects a header-only file and names it", () => {
    const path = tmpCsv("empty.csv", HEADER + "\n");
    expect(() => readDiagnostics(path)).toThrowError(path);
  });

  it("reports missing columns with the offending path", () => {
    const path = tmpCsv("short.csv", "time,kinetic\n0,1\n");
    expect(() => readDiagnostics(path)).toThrowError(/missing columns.*e1_energy/);
    expect(() => readDiagnostics(path)).toThrowError(path);
  });

  it("tolerates extra columns", () => {
    const path = tmpCsv("extra.csv", [
      HEADER + ",extra",
      row({}, 0) + ",42",
    ].join("\n"));
    expect(readDiagnostics(path).time[0]).toBe(0);
  });

  it("round-trips full-precision floats", () => {
    const value = 0.1 + 0.2; // 0.30000000000000004
    const path = tmpCsv("prec.csv", [
      HEADER,
      row({ total: value }, 0),
    ].join("\n"));
    expect(readDiagnostics(path).total[0]).toBe(value);
  });
});
