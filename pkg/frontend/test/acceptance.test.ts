/**
 * Acceptance gate for the plot suite: every figure kind renders from the
 * shipped example reports, and the convergence legend carries the fitted
 * slope recorded in report.json to three decimals.
 */

import { join } from "node:path";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

import { FIGURE_KINDS, FigureKind, renderFigure } from "../src/index.js";
import { renderConvergence } from "../src/plots/convergence.js";
import { readReport } from "../src/report.js";

const SAMPLES = fileURLToPath(new URL("../../sample_reports", import.meta.url));

const SAMPLE_DIR: Record<FigureKind, string> = {
  convergence: join(SAMPLES, "convergence"),
  stability: join(SAMPLES, "stability"),
  paths: join(SAMPLES, "paths"),
  density: join(SAMPLES, "invariant"),
};

function check(name: string, passed: boolean, detail: string): void {
  console.info(`${passed ? "[PASS]" : "[FAIL]"} ${name}: ${detail}`);
  expect(passed, `${name}: ${detail}`).toBe(true);
}

describe("plot suite acceptance", () => {
  it("renders all four figure kinds from the shipped example reports", () => {
    const sizes: string[] = [];
    for (const kind of FIGURE_KINDS) {
      const svg = renderFigure(kind, SAMPLE_DIR[kind]);
      check(
        `render ${kind}`,
        svg.startsWith("<svg ") && svg.includes("</svg>") && svg.length > 2000,
        `SVG document of ${svg.length} bytes`,
      );
      sizes.push(`${kind}=${svg.length}B`);
    }
    check("render all kinds", sizes.length === FIGURE_KINDS.length, sizes.join(", "));
  });

  it("matches the convergence legend slope to report.json at 3 decimals", () => {
    const dir = SAMPLE_DIR.convergence;
    const recorded = readReport(dir).stats.slope as number;
    const figure = renderConvergence(dir);
    const expected = `measured, slope=${recorded.toFixed(3)}`;
    check(
      "legend slope vs report.json",
      figure.legendSlopeLabel === expected && figure.svg.includes(expected),
      `legend '${figure.legendSlopeLabel}' vs recorded slope ${recorded}`,
    );
  });
});
