/**
 * SVG figure rendering for experiment report directories.
 *
 * Consumes only the files a report directory publishes (report.json and the
 * CSV tables); nothing here re-simulates or needs the producing package.
 */

export { Cell, InputDataError, Table, column, numericColumn, parseCsv, readTable } from "./csv.js";
export { ReportMeta, readReport } from "./report.js";
export { PowerLawFit, fitPowerLaw } from "./fit.js";
export { Scale, Tick, decadeTicks, formatNumber, linearScale, linearTicks, pow2Ticks } from "./scale.js";
export { Chart, PALETTE, plotScales } from "./chart.js";
export { ConvergenceFigure, renderConvergence } from "./plots/convergence.js";
export { StabilityFigure, renderStability } from "./plots/stability.js";
export { PathsFigure, renderPaths } from "./plots/paths.js";
export { DensityFigure, renderDensity } from "./plots/density.js";

import { renderConvergence } from "./plots/convergence.js";
import { renderDensity } from "./plots/density.js";
import { renderPaths } from "./plots/paths.js";
import { renderStability } from "./plots/stability.js";

export const FIGURE_KINDS = ["convergence", "stability", "paths", "density"] as const;

export type FigureKind = (typeof FIGURE_KINDS)[number];

/** Render one figure kind from a report directory to an SVG string. */
export function renderFigure(
  kind: FigureKind,
  reportDir: string,
  options: { smoothWindow?: number } = {},
): string {
  switch (kind) {
    case "convergence":
      return renderConvergence(reportDir).svg;
    case "stability":
      return renderStability(reportDir).svg;
    case "paths":
      return renderPaths(reportDir).svg;
    case "density":
      return renderDensity(reportDir, options.smoothWindow ?? 1).svg;
  }
}
