/**
 * Density figure: the histogram tables of a report overlaid as curves.
 * Time-indexed histograms (histogram_<t>.csv) form the main overlay;
 * per-init terminal histograms (histogram_final_<label>.csv) join dashed.
 */

import { readdirSync } from "node:fs";
import { join } from "node:path";

import { Chart, LegendEntry, PALETTE, plotScales } from "../chart.js";
import { InputDataError, numericColumn, readTable } from "../csv.js";
import { linearTicks } from "../scale.js";

export interface DensityFigure {
  svg: string;
  curveLabels: string[];
  smoothWindow: number;
}

interface Curve {
  label: string;
  dashed: boolean;
  centers: number[];
  density: number[];
}

const HIST_PATTERN = /^histogram_(.+)\.csv$/;

function movingAverage(values: number[], window: number): number[] {
  if (window === 1) return values;
  const half = Math.floor(window / 2);
  return values.map((_, i) => {
    let sum = 0;
    for (let k = i - half; k < i - half + window; k++) {
      sum += k >= 0 && k < values.length ? (values[k] as number) : 0;
    }
    return sum / window;
  });
}

function loadCurve(dir: string, file: string, label: string, dashed: boolean, window: number): Curve {
  const table = readTable(join(dir, file));
  const left = numericColumn(table, "bin_left");
  const right = numericColumn(table, "bin_right");
  const density = movingAverage(numericColumn(table, "density"), window);
  const centers = left.map((l, i) => 0.5 * (l + (right[i] as number)));
  return { label, dashed, centers, density };
}

export function renderDensity(reportDir: string, smoothWindow = 1): DensityFigure {
  if (!Number.isInteger(smoothWindow) || smoothWindow < 1) {
    throw new InputDataError("smooth_window must be an integer >= 1");
  }
  let files: string[];
  try {
    files = readdirSync(reportDir).filter((f) => HIST_PATTERN.test(f)).sort();
  } catch {
    throw new InputDataError(`cannot read report directory ${reportDir}`);
  }
  const timed: { t: number; file: string }[] = [];
  const finals: { label: string; file: string }[] = [];
  for (const file of files) {
    const label = (HIST_PATTERN.exec(file) as RegExpExecArray)[1] as string;
    if (label.startsWith("final_")) {
      finals.push({ label: label.slice("final_".length), file });
      continue;
    }
    const t = Number(label);
    if (Number.isNaN(t)) {
      finals.push({ label, file });
    } else {
      timed.push({ t, file });
    }
  }
  if (timed.length === 0 && finals.length === 0) {
    throw new InputDataError(`no histogram_<t>.csv tables in ${reportDir}`);
  }
  timed.sort((a, b) => a.t - b.t);

  const curves: Curve[] = [
    ...timed.map((item) =>
      loadCurve(reportDir, item.file, `t=${item.t}`, false, smoothWindow),
    ),
    ...finals.map((item) =>
      loadCurve(reportDir, item.file, `terminal, init ${item.label}`, true, smoothWindow),
    ),
  ];

  const allX = curves.flatMap((c) => c.centers);
  const allY = curves.flatMap((c) => c.density);
  const yMax = Math.max(...allY);
  const xDomain: [number, number] = [Math.min(...allX), Math.max(...allX)];
  const yDomain: [number, number] = [0, (yMax || 1) * 1.08];
  const scales = plotScales(xDomain, yDomain);

  const chart = new Chart(scales.x, scales.y);
  chart.xTicks(linearTicks(xDomain[0], xDomain[1]));
  chart.yTicks(linearTicks(0, yDomain[1]));
  const legend: LegendEntry[] = [];
  curves.forEach((curve, i) => {
    const color = PALETTE[i % PALETTE.length] as string;
    chart.line(curve.centers, curve.density, {
      stroke: color,
      dash: curve.dashed ? "6 4" : undefined,
    });
    legend.push({
      label: curve.label,
      color,
      dash: curve.dashed ? "6 4" : undefined,
    });
  });
  chart.title(`Empirical densities (smoothing window = ${smoothWindow} bins)`);
  chart.xLabel("state");
  chart.yLabel("density");
  chart.legend(legend);
  return { svg: chart.render(), curveLabels: curves.map((c) => c.label), smoothWindow };
}
