/**
 * Strong-convergence figure: log2 RMSE against log2 step size, the fitted
 * slope in the legend, and a half-order reference line for comparison.
 */

import { join } from "node:path";

import { Chart, PALETTE, plotScales } from "../chart.js";
import { InputDataError, numericColumn, readTable } from "../csv.js";
import { fitPowerLaw } from "../fit.js";
import { pow2Ticks } from "../scale.js";

export interface ConvergenceFigure {
  svg: string;
  slope: number;
  /** Exact legend text carrying the slope, three decimals. */
  legendSlopeLabel: string;
}

export function renderConvergence(reportDir: string): ConvergenceFigure {
  const table = readTable(join(reportDir, "rmse.csv"));
  const dtColumn = numericColumn(table, "dt");
  const rmseColumn = numericColumn(table, "rmse");
  const pairs = dtColumn
    .map((dt, i) => ({ dt, rmse: rmseColumn[i] as number }))
    .sort((a, b) => a.dt - b.dt);
  if (pairs.length < 2) {
    throw new InputDataError("rmse.csv holds a single row; a slope needs at least two");
  }
  const dt = pairs.map((p) => p.dt);
  const rmse = pairs.map((p) => p.rmse);
  const fit = fitPowerLaw(dt, rmse);

  const lx = dt.map(Math.log2);
  const ly = rmse.map(Math.log2);
  const largest = dt.length - 1;
  const anchor = (rmse[largest] as number) / Math.sqrt(dt[largest] as number);
  const refY = dt.map((v) => Math.log2(anchor * Math.sqrt(v)));

  const yAll = ly.concat(refY);
  const pad = 0.5;
  const xDomain: [number, number] = [Math.min(...lx) - pad, Math.max(...lx) + pad];
  const yDomain: [number, number] = [Math.min(...yAll) - pad, Math.max(...yAll) + pad];
  const scales = plotScales(xDomain, yDomain);

  const legendSlopeLabel = `measured, slope=${fit.slope.toFixed(3)}`;
  const chart = new Chart(scales.x, scales.y);
  chart.xTicks(pow2Ticks(Math.pow(2, xDomain[0]), Math.pow(2, xDomain[1])));
  chart.yTicks(pow2Ticks(Math.pow(2, yDomain[0]), Math.pow(2, yDomain[1])));
  chart.line(lx, ly, { stroke: PALETTE[0], markers: true });
  chart.line(lx, refY, { stroke: "#808080", dash: "6 4" });
  chart.title("Strong convergence");
  chart.xLabel("step size");
  chart.yLabel("terminal RMSE");
  chart.legend([
    { label: legendSlopeLabel, color: PALETTE[0] },
    { label: "reference slope 0.5", color: "#808080", dash: "6 4" },
  ]);
  return { svg: chart.render(), slope: fit.slope, legendSlopeLabel };
}
