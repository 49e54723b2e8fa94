import { basename } from "node:path";

import { readDiagnostics, type Diagnostics } from "./csv.js";
import { fitGrowthRate, localMaxima, loglogSlope, type FitResult } from "./fit.js";
import { Axes, color, type Mapper } from "./plot.js";

export const FIGURE_IDS = [
  "growth",
  "energy_error",
  "bea_convergence",
  "momentum",
] as const;

export type FigureId = (typeof FIGURE_IDS)[number];

export interface FigureSpec {
  figureId: FigureId;
  csvPaths: string[];
  outputPath: string;
  /** Analytic field growth rate overlaid on the growth figure. */
  analyticRate?: number;
  /** Window used to anchor the overlay and to fit the data. */
  fitWindow?: [number, number];
  /** Energy series the fit runs on (growth figure). */
  fitField?: "e1_energy" | "e2_energy" | "b_energy";
  /** Fit through local maxima instead of the raw series. */
  fitPeaks?: boolean;
}

export interface FigureReport {
  figureId: FigureId;
  outputPath: string;
  /** Fit computed from the CSV data, when a window was given. */
  fit?: FitResult;
  /** Log-log slopes of the convergence figure, by series name. */
  slopes?: Record<string, number>;
}

/** Render one figure; returns what was computed along the way. */
export function renderFigure(spec: FigureSpec): FigureReport {
  if (spec.csvPaths.length === 0) {
    throw new Error("at least one CSV path is required");
  }
  switch (spec.figureId) {
    case "growth":
      return growthFigure(spec);
    case "energy_error":
      return energyErrorFigure(spec);
    case "bea_convergence":
      return beaFigure(spec);
    case "momentum":
      return momentumFigure(spec);
    default:
      throw new Error(`unknown figure id ${spec.figureId}`);
  }
}

function growthFigure(spec: FigureSpec): FigureReport {
  const data = readDiagnostics(spec.csvPaths[0]);
  const t = Array.from(data.time);
  const axes = new Axes({
    title: "Field energies and growth rate",
    xLabel: "time",
    yLabel: "energy",
    yLog: true,
  });
  axes.add({ x: t, y: Array.from(data.e1_energy), color: color(0), label: "E1 energy" });
  axes.add({ x: t, y: Array.from(data.e2_energy), color: color(2), label: "E2 energy" });
  axes.add({ x: t, y: Array.from(data.b_energy), color: color(1), label: "B energy" });

  const report: FigureReport = { figureId: "growth", outputPath: spec.outputPath };
  const field = spec.fitField ?? "b_energy";
  if (spec.fitWindow) {
    let ft: ArrayLike<number> = data.time;
    let fv: ArrayLike<number> = data[field];
    if (spec.fitPeaks) {
      const peaks = localMaxima(ft, fv);
      ft = peaks.times;
      fv = peaks.values;
    }
    report.fit = fitGrowthRate(ft, fv, spec.fitWindow);
  }
  const rate = spec.analyticRate ?? report.fit?.rate;
  if (rate !== undefined && spec.fitWindow) {
    // overlay exp(2*rate*t) anchored at the fitted intercept in the window
    const anchor = report.fit
      ? report.fit.logIntercept
      : anchorIntercept(data, field, spec.fitWindow, rate);
    const [a, b] = spec.fitWindow;
    const xs: number[] = [];
    const ys: number[] = [];
    for (let i = 0; i <= 50; i++) {
      const x = a + ((b - a) * i) / 50;
      xs.push(x);
      ys.push(Math.exp(anchor + 2 * rate * x));
    }
    axes.add({
      x: xs, y: ys, color: "#000000", dashed: true,
      label: `slope 2g, g=${rate.toPrecision(4)}`,
    });
  }
  axes.render(spec.outputPath);
  return report;
}

function anchorIntercept(
  data: Diagnostics,
  field: keyof Diagnostics,
  window: [number, number],
  rate: number,
): number {
  // least-squares intercept of log(w) - 2*rate*t inside the window
  let sum = 0;
  let count = 0;
  for (let i = 0; i < data.time.length; i++) {
    const t = data.time[i];
    const w = data[field][i];
    if (t >= window[0] && t <= window[1] && w > 0) {
      sum += Math.log(w) - 2 * rate * t;
      count += 1;
    }
  }
  if (count === 0) {
    throw new Error("fit window contains no positive samples");
  }
  return sum / count;
}

function energyErrorFigure(spec: FigureSpec): FigureReport {
  const axes = new Axes({
    title: "Total energy error",
    xLabel: "time",
    yLabel: "|H(t) - H(0)|",
    yLog: true,
  });
  spec.csvPaths.forEach((path, i) => {
    const data = readDiagnostics(path);
    axes.add({
      x: Array.from(data.time),
      y: Array.from(data.total_err, Math.abs),
      color: color(i),
      label: seriesName(path),
    });
  });
  axes.render(spec.outputPath);
  return { figureId: "energy_error", outputPath: spec.outputPath };
}

function beaFigure(spec: FigureSpec): FigureReport {
  if (spec.csvPaths.length < 2) {
    throw new Error("bea_convergence needs runs at two or more time steps");
  }
  const dts: number[] = [];
  const errH: number[] = [];
  const errMod: number[] = [];
  for (const path of spec.csvPaths) {
    const data = readDiagnostics(path);
    if (data.time.length < 2) {
      throw new Error(`${path}: need at least two records to infer dt`);
    }
    dts.push(data.time[1] - data.time[0]);
    errH.push(Math.max(...Array.from(data.total_err, Math.abs)));
    errMod.push(Math.max(...Array.from(data.modified_err, Math.abs)));
  }
  const order = dts.map((_, i) => i).sort((a, b) => dts[a] - dts[b]);
  const sdt = order.map((i) => dts[i]);
  const sh = order.map((i) => errH[i]);
  const sm = order.map((i) => errMod[i]);

  const axes = new Axes({
    title: "Energy-error convergence",
    xLabel: "time step",
    yLabel: "max energy error",
    xLog: true,
    yLog: true,
  });
  axes.add({ x: sdt, y: sh, color: color(0), label: "H", markers: true });
  axes.add({ x: sdt, y: sm, color: color(1), label: "H + dt corr.", markers: true });
  slopeTriangle(axes, sdt, sh, 1);
  slopeTriangle(axes, sdt, sm, 2);
  axes.render(spec.outputPath);
  return {
    figureId: "bea_convergence",
    outputPath: spec.outputPath,
    slopes: {
      energy: loglogSlope(sdt, sh),
      modified: loglogSlope(sdt, sm),
    },
  };
}

function slopeTriangle(
  axes: Axes,
  dts: number[],
  errs: number[],
  order: number,
): void {
  // right triangle under the first segment showing dt^order scaling
  const x0 = dts[0];
  const x1 = dts[1] ?? dts[0] * 2;
  const y0 = errs[0] * 0.55;
  const y1 = y0 * Math.pow(x1 / x0, order);
  axes.annotate((ctx, map: Mapper) => {
    ctx.strokeStyle = "#444444";
    ctx.lineWidth = 1.2;
    ctx.beginPath();
    ctx.moveTo(map.x(x0), map.y(y0));
    ctx.lineTo(map.x(x1), map.y(y0));
    ctx.lineTo(map.x(x1), map.y(y1));
    ctx.closePath();
    ctx.stroke();
    ctx.fillStyle = "#444444";
    ctx.font = "12px sans-serif";
    ctx.textAlign = "center";
    ctx.fillText(String(order), map.x(x1) + 9, (map.y(y0) + map.y(y1)) / 2);
  });
}

function momentumFigure(spec: FigureSpec): FigureReport {
  const axes = new Axes({
    title: "Momentum error against the time-integrated reference",
    xLabel: "time",
    yLabel: "|P - P_ref|",
    yLog: true,
  });
  spec.csvPaths.forEach((path, i) => {
    const data = readDiagnostics(path);
    const t = Array.from(data.time);
    const dev1 = t.map((_, r) => Math.abs(data.p1[r] - data.p1_ref[r]));
    const dev2 = t.map((_, r) => Math.abs(data.p2[r] - data.p2_ref[r]));
    const tag = spec.csvPaths.length > 1 ? ` (${seriesName(path)})` : "";
    axes.add({ x: t, y: dev1, color: color(2 * i), label: `P1${tag}` });
    axes.add({ x: t, y: dev2, color: color(2 * i + 1), label: `P2${tag}` });
  });
  axes.render(spec.outputPath);
  return { figureId: "momentum", outputPath: spec.outputPath };
}

function seriesName(path: string): string {
  return basename(path).replace(/\.csv$/i, "");
}
