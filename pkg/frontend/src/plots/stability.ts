/**
 * Stability figure: empirical second moment of the truncated scheme next to
 * the plain scheme on a log axis.  The plain scheme's curve stops at its
 * last finite value, marked with a red cross when it left the finite range
 * before the horizon.
 */

import { join } from "node:path";

import { Chart, LegendEntry, PALETTE, plotScales } from "../chart.js";
import { numericColumn, readTable } from "../csv.js";
import { decadeTicks, formatNumber, linearTicks } from "../scale.js";

export interface StabilityFigure {
  svg: string;
  /** Time of the plain scheme's last finite value, when it diverged. */
  blowupTime: number | null;
}

interface Series {
  t: number[];
  logValue: number[];
}

function finiteSeries(t: number[], values: number[]): Series {
  const out: Series = { t: [], logValue: [] };
  for (let i = 0; i < t.length; i++) {
    const v = values[i] as number;
    if (Number.isFinite(v) && v > 0) {
      out.t.push(t[i] as number);
      out.logValue.push(Math.log10(v));
    }
  }
  return out;
}

export function renderStability(reportDir: string): StabilityFigure {
  const table = readTable(join(reportDir, "moments.csv"));
  const t = numericColumn(table, "t");
  const tem = finiteSeries(t, numericColumn(table, "tem_mean_sq"));
  const em = finiteSeries(t, numericColumn(table, "em_mean_sq"));
  const emDiverged = em.t.length > 0 && em.t.length < t.length;
  const blowupTime = emDiverged ? (em.t[em.t.length - 1] as number) : null;

  const logs = tem.logValue.concat(em.logValue);
  const yPad = 0.5;
  const yDomain: [number, number] = [
    Math.min(...logs) - yPad,
    Math.max(...logs) + yPad,
  ];
  const xDomain: [number, number] = [t[0] as number, t[t.length - 1] as number];
  const scales = plotScales(xDomain, yDomain);

  const chart = new Chart(scales.x, scales.y);
  chart.xTicks(linearTicks(xDomain[0], xDomain[1]));
  chart.yTicks(decadeTicks(Math.pow(10, yDomain[0]), Math.pow(10, yDomain[1])));
  chart.line(tem.t, tem.logValue, { stroke: PALETTE[0] });
  chart.line(em.t, em.logValue, { stroke: PALETTE[1] });
  const legend: LegendEntry[] = [
    { label: "truncated scheme", color: PALETTE[0] },
    { label: "plain scheme", color: PALETTE[1] },
  ];
  if (blowupTime !== null) {
    chart.cross(blowupTime, em.logValue[em.logValue.length - 1] as number, "#d62728");
    legend.push({
      label: `plain scheme non-finite after t=${formatNumber(blowupTime)}`,
      color: "#d62728",
      symbol: "cross",
    });
  }
  chart.title("Mean-square stability");
  chart.xLabel("t");
  chart.yLabel("empirical second moment");
  chart.legend(legend);
  return { svg: chart.render(), blowupTime };
}
