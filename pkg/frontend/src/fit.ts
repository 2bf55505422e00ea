/**
 * Power-law fitting: least-squares slope of log2(y) against log2(x).
 */

import { InputDataError } from "./csv.js";

export interface PowerLawFit {
  slope: number;
  intercept: number;
}

/** Fit y = 2^intercept * x^slope by least squares in log2-log2 space. */
export function fitPowerLaw(x: number[], y: number[]): PowerLawFit {
  if (x.length !== y.length || x.length < 2) {
    throw new InputDataError("power-law fit needs at least two (x, y) pairs");
  }
  if (x.some((v) => !(v > 0)) || y.some((v) => !(v > 0) || !Number.isFinite(v))) {
    throw new InputDataError("power-law fit needs positive finite data");
  }
  const lx = x.map(Math.log2);
  const ly = y.map(Math.log2);
  const meanX = lx.reduce((a, b) => a + b, 0) / lx.length;
  const meanY = ly.reduce((a, b) => a + b, 0) / ly.length;
  let sxy = 0;
  let sxx = 0;
  for (let i = 0; i < lx.length; i++) {
    const dx = (lx[i] as number) - meanX;
    sxy += dx * ((ly[i] as number) - meanY);
    sxx += dx * dx;
  }
  if (sxx === 0) {
    throw new InputDataError("power-law fit needs at least two distinct x values");
  }
  const slope = sxy / sxx;
  return { slope, intercept: meanY - slope * meanX };
}
