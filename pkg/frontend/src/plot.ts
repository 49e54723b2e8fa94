import { createCanvas } from "@napi-rs/canvas";
import { writeFileSync } from "node:fs";

export interface Series {
  x: number[];
  y: number[];
  color: string;
  label?: string;
  dashed?: boolean;
  markers?: boolean;
}

export interface AxesOptions {
  width?: number;
  height?: number;
  title: string;
  xLabel: string;
  yLabel: string;
  xLog?: boolean;
  yLog?: boolean;
}

const MARGIN = { left: 72, right: 16, top: 32, bottom: 46 };
const PALETTE = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
  "#17becf", "#7f7f7f",
];

export function color(i: number): string {
  return PALETTE[i % PALETTE.length];
}

/**
 * Minimal deterministic chart: linear or logarithmic axes, polylines,
 * decade/linear ticks with labels, a legend, and PNG output.
 */
export class Axes {
  private readonly opts: Required<AxesOptions>;
  private readonly series: Series[] = [];
  private readonly annotations: Array<(ctx: Ctx, map: Mapper) => void> = [];

  constructor(opts: AxesOptions) {
    this.opts = {
      width: 900,
      height: 560,
      xLog: false,
      yLog: false,
      ...opts,
    };
  }

  add(series: Series): void {
    const { x, y } = series;
    if (x.length !== y.length) {
      throw new Error("series x and y lengths differ");
    }
    this.series.push(series);
  }

  /** Arbitrary draw callback in data space (used for slope triangles). */
  annotate(draw: (ctx: Ctx, map: Mapper) => void): void {
    this.annotations.push(draw);
  }

  render(path: string): void {
    const { width, height, xLog, yLog } = this.opts;
    const canvas = createCanvas(width, height);
    const ctx = canvas.getContext("2d");
    ctx.fillStyle = "#ffffff";
    ctx.fillRect(0, 0, width, height);

    const map = this.mapper();
    this.drawFrame(ctx, map);
    for (const s of this.series) {
      this.drawSeries(ctx, map, s);
    }
    for (const draw of this.annotations) {
      draw(ctx, map);
    }
    this.drawLegend(ctx);
    writeFileSync(path, canvas.toBuffer("image/png"));
  }

  private mapper(): Mapper {
    const { width, height, xLog, yLog } = this.opts;
    let xMin = Infinity;
    let xMax = -Infinity;
    let yMin = Infinity;
    let yMax = -Infinity;
    for (const s of this.series) {
      for (let i = 0; i < s.x.length; i++) {
        const xv = s.x[i];
        const yv = s.y[i];
        if (xLog && xv <= 0) continue;
        if (yLog && yv <= 0) continue;
        if (!Number.isFinite(xv) || !Number.isFinite(yv)) continue;
        xMin = Math.min(xMin, xv);
        xMax = Math.max(xMax, xv);
        yMin = Math.min(yMin, yv);
        yMax = Math.max(yMax, yv);
      }
    }
    if (!Number.isFinite(xMin) || !Number.isFinite(yMin)) {
      throw new Error("nothing plottable: all points fall outside the axes");
    }
    if (xMax === xMin) {
      xMax = xMin + 1;
    }
    if (yMax === yMin) {
      yMax = yMin === 0 ? 1 : yMin * (yLog ? 10 : 2);
    }
    const fx = (v: number) => (xLog ? Math.log10(v) : v);
    const fy = (v: number) => (yLog ? Math.log10(v) : v);
    const pad = (lo: number, hi: number) => {
      const d = 0.04 * (hi - lo);
      return [lo - d, hi + d];
    };
    const [x0, x1] = pad(fx(xMin), fx(xMax));
    const [y0, y1] = pad(fy(yMin), fy(yMax));
    const plotW = this.opts.width - MARGIN.left - MARGIN.right;
    const plotH = this.opts.height - MARGIN.top - MARGIN.bottom;
    return {
      x: (v: number) => MARGIN.left + ((fx(v) - x0) / (x1 - x0)) * plotW,
      y: (v: number) =>
        MARGIN.top + plotH - ((fy(v) - y0) / (y1 - y0)) * plotH,
      xRange: [x0, x1],
      yRange: [y0, y1],
      xLog,
      yLog,
    };
  }

  private drawFrame(ctx: Ctx, map: Mapper): void {
    const { width, height, title, xLabel, yLabel } = this.opts;
    const left = MARGIN.left;
    const right = width - MARGIN.right;
    const top = MARGIN.top;
    const bottom = height - MARGIN.bottom;

    ctx.strokeStyle = "#000000";
    ctx.lineWidth = 1;
    ctx.strokeRect(left, top, right - left, bottom - top);

    ctx.fillStyle = "#000000";
    ctx.font = "15px sans-serif";
    ctx.textAlign = "center";
    ctx.fillText(title, (left + right) / 2, top - 12);
    ctx.font = "13px sans-serif";
    ctx.fillText(xLabel, (left + right) / 2, height - 10);
    ctx.save();
    ctx.translate(14, (top + bottom) / 2);
    ctx.rotate(-Math.PI / 2);
    ctx.fillText(yLabel, 0, 0);
    ctx.restore();

    for (const [value, label] of ticks(map.xRange, map.xLog)) {
      const px = left + ((value - map.xRange[0]) /
        (map.xRange[1] - map.xRange[0])) * (right - left);
      ctx.strokeStyle = "#cccccc";
      ctx.beginPath();
      ctx.moveTo(px, top);
      ctx.lineTo(px, bottom);
      ctx.stroke();
      ctx.fillStyle = "#000000";
      ctx.textAlign = "center";
      ctx.font = "12px sans-serif";
      ctx.fillText(label, px, bottom + 16);
    }
    for (const [value, label] of ticks(map.yRange, map.yLog)) {
      const py = bottom - ((value - map.yRange[0]) /
        (map.yRange[1] - map.yRange[0])) * (bottom - top);
      ctx.strokeStyle = "#cccccc";
      ctx.beginPath();
      ctx.moveTo(left, py);
      ctx.lineTo(right, py);
      ctx.stroke();
      ctx.fillStyle = "#000000";
      ctx.textAlign = "right";
      ctx.font = "12px sans-serif";
      ctx.fillText(label, left - 6, py + 4);
    }
  }

  private drawSeries(ctx: Ctx, map: Mapper, s: Series): void {
    ctx.strokeStyle = s.color;
    ctx.fillStyle = s.color;
    ctx.lineWidth = 1.6;
    ctx.setLineDash(s.dashed ? [7, 4] : []);
    ctx.beginPath();
    let pen = false;
    for (let i = 0; i < s.x.length; i++) {
      const xv = s.x[i];
      const yv = s.y[i];
      const skip =
        (map.xLog && xv <= 0) || (map.yLog && yv <= 0) ||
        !Number.isFinite(xv) || !Number.isFinite(yv);
      if (skip) {
        pen = false;
        continue;
      }
      const px = map.x(xv);
      const py = map.y(yv);
      if (s.markers) {
        ctx.fillRect(px - 2.5, py - 2.5, 5, 5);
      }
      if (pen) {
        ctx.lineTo(px, py);
      } else {
        ctx.moveTo(px, py);
        pen = true;
      }
    }
    if (!s.markers || s.x.length > 1) {
      ctx.stroke();
    }
    ctx.setLineDash([]);
  }

  private drawLegend(ctx: Ctx): void {
    const entries = this.series.filter((s) => s.label);
    if (entries.length === 0) {
      return;
    }
    ctx.font = "12px sans-serif";
    ctx.textAlign = "left";
    const w = Math.max(...entries.map((s) => ctx.measureText(s.label!).width));
    const x0 = this.opts.width - MARGIN.right - w - 40;
    let y = MARGIN.top + 14;
    ctx.fillStyle = "#ffffff";
    ctx.fillRect(x0 - 8, y - 12, w + 42, entries.length * 17 + 8);
    ctx.strokeStyle = "#999999";
    ctx.strokeRect(x0 - 8, y - 12, w + 42, entries.length * 17 + 8);
    for (const s of entries) {
      ctx.strokeStyle = s.color;
      ctx.lineWidth = 2;
      ctx.setLineDash(s.dashed ? [7, 4] : []);
      ctx.beginPath();
      ctx.moveTo(x0, y - 4);
      ctx.lineTo(x0 + 24, y - 4);
      ctx.stroke();
      ctx.setLineDash([]);
      ctx.fillStyle = "#000000";
      ctx.fillText(s.label!, x0 + 30, y);
      y += 17;
    }
  }
}

type Ctx = ReturnType<ReturnType<typeof createCanvas>["getContext"]>;

export interface Mapper {
  x: (v: number) => number;
  y: (v: number) => number;
  xRange: [number, number];
  yRange: [number, number];
  xLog: boolean;
  yLog: boolean;
}

function ticks(range: [number, number], log: boolean): Array<[number, string]> {
  const [lo, hi] = range;
  if (log) {
    const out: Array<[number, string]> = [];
    const step = Math.max(1, Math.ceil((hi - lo) / 8));
    for (let d = Math.ceil(lo); d <= Math.floor(hi); d += step) {
      out.push([d, `1e${d}`]);
    }
    return out;
  }
  const span = hi - lo;
  const raw = span / 6;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => span / s <= 7)!;
  const out: Array<[number, string]> = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + 1e-12 * span; v += step) {
    out.push([v, formatTick(v, step)]);
  }
  return out;
}

function formatTick(v: number, step: number): string {
  if (Math.abs(v) < 1e-12 * step) {
    return "0";
  }
  if (Math.abs(v) >= 1e4 || Math.abs(v) < 1e-3) {
    return v.toExponential(0);
  }
  const decimals = Math.max(0, -Math.floor(Math.log10(step)));
  return v.toFixed(decimals);
}
