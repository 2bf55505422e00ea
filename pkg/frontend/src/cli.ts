#!/usr/bin/env node
/**
 * Command line: render one SVG figure from an experiment report directory.
 *
 *   mvtem-plots <kind> --report DIR --out FILE.svg [--smooth-window N]
 *
 * Kinds: convergence, stability, paths, density.  Input problems print a
 * one-line JSON record to stderr and exit 2, mirroring the producer CLI.
 */

import { mkdirSync, writeFileSync } from "node:fs";
import { dirname } from "node:path";
import { pathToFileURL } from "node:url";
import { parseArgs } from "node:util";

import { InputDataError } from "./csv.js";
import { FIGURE_KINDS, FigureKind } from "./index.js";
import { renderConvergence } from "./plots/convergence.js";
import { renderDensity } from "./plots/density.js";
import { renderPaths } from "./plots/paths.js";
import { renderStability } from "./plots/stability.js";

const USAGE =
  "usage: mvtem-plots <kind> --report DIR --out FILE.svg [--smooth-window N]\n" +
  `kinds: ${FIGURE_KINDS.join(", ")}`;

function fail(name: string, message: string, exitCode: number): number {
  console.error(JSON.stringify({ error: name, message, exit_code: exitCode }));
  return exitCode;
}

export function main(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      allowPositionals: true,
      options: {
        report: { type: "string" },
        out: { type: "string" },
        "smooth-window": { type: "string" },
        help: { type: "boolean", short: "h" },
      },
    });
  } catch (err) {
    return fail("UsageError", `${(err as Error).message}\n${USAGE}`, 2);
  }
  if (parsed.values.help) {
    console.log(USAGE);
    return 0;
  }
  const kind = parsed.positionals[0];
  if (parsed.positionals.length !== 1 || !FIGURE_KINDS.includes(kind as FigureKind)) {
    return fail("UsageError", USAGE, 2);
  }
  const report = parsed.values.report;
  const out = parsed.values.out;
  if (!report || !out) {
    return fail("UsageError", `--report and --out are required\n${USAGE}`, 2);
  }
  const smoothWindow = Number(parsed.values["smooth-window"] ?? "1");

  try {
    let svg: string;
    let slopeLine: string | null = null;
    switch (kind as FigureKind) {
      case "convergence": {
        const figure = renderConvergence(report);
        svg = figure.svg;
        slopeLine = `[INFO] fitted slope = ${figure.slope.toPrecision(6)}`;
        break;
      }
      case "stability":
        svg = renderStability(report).svg;
        break;
      case "paths":
        svg = renderPaths(report).svg;
        break;
      default:
        svg = renderDensity(report, smoothWindow).svg;
        break;
    }
    mkdirSync(dirname(out), { recursive: true });
    writeFileSync(out, svg);
    console.log(`[INFO] wrote ${out}`);
    if (slopeLine) console.log(slopeLine);
    return 0;
  } catch (err) {
    if (err instanceof InputDataError) {
      return fail(err.name, err.message, 2);
    }
    return fail((err as Error).name ?? "Error", String(err), 1);
  }
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exitCode = main(process.argv.slice(2));
}
