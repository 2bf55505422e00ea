/**
 * Particle-path figure: the recorded particles' trajectories, with the
 * ensemble mean-square curve overlaid when moments.csv is present.
 */

import { existsSync } from "node:fs";
import { join } from "node:path";

import { Chart, LegendEntry, PALETTE, plotScales } from "../chart.js";
import { numericColumn, readTable } from "../csv.js";
import { linearTicks } from "../scale.js";

export interface PathsFigure {
  svg: string;
  particles: number[];
}

export function renderPaths(reportDir: string): PathsFigure {
  const table = readTable(join(reportDir, "paths.csv"));
  const t = numericColumn(table, "t");
  const particle = numericColumn(table, "particle");
  const value = numericColumn(table, "value");

  const byParticle = new Map<number, { t: number[]; value: number[] }>();
  for (let i = 0; i < t.length; i++) {
    const p = particle[i] as number;
    let series = byParticle.get(p);
    if (!series) {
      series = { t: [], value: [] };
      byParticle.set(p, series);
    }
    series.t.push(t[i] as number);
    series.value.push(value[i] as number);
  }
  const particles = [...byParticle.keys()].sort((a, b) => a - b);

  let overlay: { t: number[]; value: number[] } | null = null;
  const momentsPath = join(reportDir, "moments.csv");
  if (existsSync(momentsPath)) {
    const moments = readTable(momentsPath);
    overlay = {
      t: numericColumn(moments, "t"),
      value: numericColumn(moments, "mean_sq"),
    };
  }

  const allT = t.concat(overlay ? overlay.t : []);
  const allV = value.concat(overlay ? overlay.value : []);
  const vMin = Math.min(...allV);
  const vMax = Math.max(...allV);
  const vPad = (vMax - vMin || 1) * 0.05;
  const xDomain: [number, number] = [Math.min(...allT), Math.max(...allT)];
  const yDomain: [number, number] = [vMin - vPad, vMax + vPad];
  const scales = plotScales(xDomain, yDomain);

  const chart = new Chart(scales.x, scales.y);
  chart.xTicks(linearTicks(xDomain[0], xDomain[1]));
  chart.yTicks(linearTicks(yDomain[0], yDomain[1]));
  const legend: LegendEntry[] = [];
  particles.forEach((p, i) => {
    const series = byParticle.get(p) as { t: number[]; value: number[] };
    const order = series.t.map((_, k) => k).sort((a, b) => (series.t[a] as number) - (series.t[b] as number));
    const color = PALETTE[i % PALETTE.length] as string;
    chart.line(
      order.map((k) => series.t[k] as number),
      order.map((k) => series.value[k] as number),
      { stroke: color, strokeWidth: 1.0 },
    );
    legend.push({ label: `particle ${p}`, color });
  });
  if (overlay) {
    chart.line(overlay.t, overlay.value, { stroke: "#000000", strokeWidth: 2.0 });
    legend.push({ label: "ensemble mean square", color: "#000000" });
  }
  chart.title("Particle paths");
  chart.xLabel("t");
  chart.yLabel("state");
  chart.legend(legend);
  return { svg: chart.render(), particles };
}
