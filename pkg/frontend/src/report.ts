/**
 * report.json access.
 *
 * A report directory holds report.json (kind, seed, stats, resolved config,
 * table name -> file map) next to the CSV tables.  Non-finite stats are
 * serialized as the strings "inf", "-inf", and "nan" and are revived here.
 */

import { readFileSync } from "node:fs";
import { join } from "node:path";

import { InputDataError } from "./csv.js";

export interface ReportMeta {
  kind: string;
  version: string;
  seed: number;
  stats: Record<string, unknown>;
  config: Record<string, unknown>;
  tables: Record<string, string>;
}

function reviveNonFinite(value: unknown): unknown {
  if (value === "inf") return Infinity;
  if (value === "-inf") return -Infinity;
  if (value === "nan") return NaN;
  if (Array.isArray(value)) return value.map(reviveNonFinite);
  if (value !== null && typeof value === "object") {
    return Object.fromEntries(
      Object.entries(value).map(([k, v]) => [k, reviveNonFinite(v)]),
    );
  }
  return value;
}

/** Parse report.json from a report directory. */
export function readReport(reportDir: string): ReportMeta {
  const path = join(reportDir, "report.json");
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch {
    throw new InputDataError(`no report.json in ${reportDir}`);
  }
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch (err) {
    throw new InputDataError(`report.json in ${reportDir} is not valid JSON: ${err}`);
  }
  return reviveNonFinite(raw) as ReportMeta;
}
