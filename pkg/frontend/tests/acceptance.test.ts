/**
 * Figure-regeneration acceptance: drive the simulator CLI for real CSVs,
 * render all four figures from them, and check that the growth-overlay fit
 * agrees with the simulator's own reported fit to 1e-12.
 */

import { execFileSync } from "node:child_process";
import { existsSync, mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { renderFigure } from "../src/figures.js";

const LONG = { timeout: 600_000 };

interface SimResult {
  csv: string;
  growthRate?: number;
}

function runSimulator(dir: string, name: string, args: string[]): SimResult {
  const csv = join(dir, `${name}.csv`);
  const stdout = execFileSync(
    "vmpic",
    [...args, "--out", csv],
    { encoding: "utf8" },
  );
  const match = stdout.match(/^growth_rate_1=(.*)$/m);
  return {
    csv,
    growthRate: match ? Number(match[1]) : undefined,
  };
}

describe("figure regeneration from simulator output", () => {
  const dir = mkdtempSync(join(tmpdir(), "vmpic-accept-"));
  const window: [number, number] = [10, 45];

  it("regenerates all four figures and matches the reported fit", LONG, () => {
    // a small transverse-instability run: enough steps for a fit window
    const base = runSimulator(dir, "weibel", [
      "--case", "weibel", "--particles", "4000", "--t-end", "50",
      "--fit-window", String(window[0]), String(window[1]),
      "--fit-field", "b", "--fit-peaks", "false",
    ]);
    expect(base.growthRate).toBeDefined();

    // two extra time steps for the convergence figure
    const dt2 = runSimulator(dir, "weibel_dt2", [
      "--case", "weibel", "--particles", "4000", "--t-end", "20",
      "--dt", "0.1",
    ]);
    const dt3 = runSimulator(dir, "weibel_dt3", [
      "--case", "weibel", "--particles", "4000", "--t-end", "20",
      "--dt", "0.025",
    ]);

    const growth = renderFigure({
      figureId: "growth",
      csvPaths: [base.csv],
      outputPath: join(dir, "growth.png"),
      analyticRate: 0.02784,
      fitWindow: window,
      fitField: "b_energy",
    });
    renderFigure({
      figureId: "energy_error",
      csvPaths: [base.csv, dt2.csv, dt3.csv],
      outputPath: join(dir, "energy_error.png"),
    });
    renderFigure({
      figureId: "bea_convergence",
      csvPaths: [base.csv, dt2.csv, dt3.csv],
      outputPath: join(dir, "bea.png"),
    });
    renderFigure({
      figureId: "momentum",
      csvPaths: [base.csv],
      outputPath: join(dir, "momentum.png"),
    });

    for (const name of ["growth.png", "energy_error.png", "bea.png", "momentum.png"]) {
      expect(existsSync(join(dir, name)), name).toBe(true);
    }

    // the overlay fit must reproduce the simulator's reported rate
    expect(growth.fit).toBeDefined();
    expect(Math.abs(growth.fit!.rate - base.growthRate!)).toBeLessThan(1e-12);
  });
});
