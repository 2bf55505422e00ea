/**
 * Axis scales and tick generation for the SVG charts.
 */

export interface Scale {
  /** Map a domain value to a pixel coordinate. */
  map(value: number): number;
  domain: [number, number];
  range: [number, number];
}

/** Affine map from a numeric domain onto a pixel range. */
export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  return {
    map: (value: number) => r0 + ((value - d0) / span) * (r1 - r0),
    domain,
    range,
  };
}

export interface Tick {
  value: number;
  label: string;
}

/** Round tick steps (1/2/5 x 10^k) covering [lo, hi] with about `count` ticks. */
export function linearTicks(lo: number, hi: number, count = 6): Tick[] {
  if (!(hi > lo)) return [{ value: lo, label: formatNumber(lo) }];
  const rawStep = (hi - lo) / Math.max(count - 1, 1);
  const power = Math.floor(Math.log10(rawStep));
  const base = Math.pow(10, power);
  let step = base;
  for (const mult of [1, 2, 5, 10]) {
    step = mult * base;
    if ((hi - lo) / step <= count) break;
  }
  const ticks: Tick[] = [];
  const start = Math.ceil(lo / step) * step;
  for (let v = start; v <= hi + step * 1e-9; v += step) {
    const value = Math.abs(v) < step * 1e-9 ? 0 : v;
    ticks.push({ value, label: formatNumber(value) });
  }
  return ticks;
}

/** Ticks at integer powers of two between lo and hi (given in linear units). */
export function pow2Ticks(lo: number, hi: number, maxCount = 8): Tick[] {
  const eLo = Math.ceil(Math.log2(lo) - 1e-9);
  const eHi = Math.floor(Math.log2(hi) + 1e-9);
  const exponents: number[] = [];
  for (let e = eLo; e <= eHi; e++) exponents.push(e);
  const step = Math.max(1, Math.ceil(exponents.length / maxCount));
  return exponents
    .filter((_, i) => i % step === 0)
    .map((e) => ({ value: e, label: `2^${e}` }));
}

/** Ticks at integer powers of ten between lo and hi (given in linear units). */
export function decadeTicks(lo: number, hi: number, maxCount = 8): Tick[] {
  const eLo = Math.ceil(Math.log10(lo) - 1e-9);
  const eHi = Math.floor(Math.log10(hi) + 1e-9);
  const exponents: number[] = [];
  for (let e = eLo; e <= eHi; e++) exponents.push(e);
  const step = Math.max(1, Math.ceil(exponents.length / maxCount));
  return exponents
    .filter((_, i) => i % step === 0)
    .map((e) => ({ value: e, label: e === 0 ? "1" : `1e${e}` }));
}

/** Compact label without float noise ("0.30000000000000004" -> "0.3"). */
export function formatNumber(value: number): string {
  if (value === 0) return "0";
  if (!Number.isFinite(value)) return String(value);
  return String(Number(value.toPrecision(10)));
}
