/** Growth-rate fitting mirrored from the simulator's diagnostics. */

export interface FitResult {
  /** Field growth rate (the energy-series slope halved). */
  rate: number;
  /** Intercept of the log-linear fit, for anchoring overlay lines. */
  logIntercept: number;
  window: [number, number];
  samples: number;
}

/**
 * Least-squares slope of log(values) against time inside a window, halved
 * because the fitted series is an energy (~ exp(2 * rate * t)).
 */
export function fitGrowthRate(
  times: ArrayLike<number>,
  values: ArrayLike<number>,
  window: [number, number],
): FitResult {
  const t: number[] = [];
  const y: number[] = [];
  for (let i = 0; i < times.length; i++) {
    const ti = times[i];
    if (ti >= window[0] && ti <= window[1]) {
      const vi = values[i];
      if (vi <= 0) {
        throw new Error(`non-positive value at t=${ti} inside the fit window`);
      }
      t.push(ti);
      y.push(Math.log(vi));
    }
  }
  if (t.length < 4) {
    throw new Error(`fit window [${window}] holds ${t.length} samples, need >= 4`);
  }
  const tMean = t.reduce((a, b) => a + b, 0) / t.length;
  const yMean = y.reduce((a, b) => a + b, 0) / y.length;
  let sxy = 0;
  let sxx = 0;
  for (let i = 0; i < t.length; i++) {
    sxy += (t[i] - tMean) * (y[i] - yMean);
    sxx += (t[i] - tMean) * (t[i] - tMean);
  }
  const slope = sxy / sxx;
  return {
    rate: 0.5 * slope,
    logIntercept: yMean - slope * tMean,
    window,
    samples: t.length,
  };
}

/**
 * Strict local maxima over a three-sample window; oscillatory energy series
 * are fitted through these peaks.
 */
export function localMaxima(
  times: ArrayLike<number>,
  values: ArrayLike<number>,
): { times: number[]; values: number[] } {
  const outT: number[] = [];
  const outV: number[] = [];
  for (let i = 1; i + 1 < values.length; i++) {
    if (values[i] > values[i - 1] && values[i] > values[i + 1]) {
      outT.push(times[i]);
      outV.push(values[i]);
    }
  }
  return { times: outT, values: outV };
}

/** Log-log slope through (x, y) pairs, for convergence-order readouts. */
export function loglogSlope(x: number[], y: number[]): number {
  const lx = x.map(Math.log);
  const ly = y.map(Math.log);
  const xm = lx.reduce((a, b) => a + b, 0) / lx.length;
  const ym = ly.reduce((a, b) => a + b, 0) / ly.length;
  let sxy = 0;
  let sxx = 0;
  for (let i = 0; i < lx.length; i++) {
    sxy += (lx[i] - xm) * (ly[i] - ym);
    sxx += (lx[i] - xm) * (lx[i] - xm);
  }
  return sxy / sxx;
}
