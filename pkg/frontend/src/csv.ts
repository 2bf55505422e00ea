/**
 * Reading the delimited tables of a report directory.
 *
 * Tables are plain comma-separated files with one header row.  Floats are
 * written by the producer with full round-trip precision; non-finite values
 * appear as the literals `inf`, `-inf`, and `nan`.  Label columns (e.g. the
 * init column of w2_matrix.csv) stay strings.
 */

import { readFileSync } from "node:fs";
import { basename } from "node:path";

/** A table fails to parse or lacks what a figure needs. */
export class InputDataError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "InputDataError";
  }
}

export type Cell = number | string;

export interface Table {
  /** File the table came from, for error messages. */
  name: string;
  header: string[];
  rows: Cell[][];
}

/** Convert one CSV cell: numbers where possible, `inf`/`nan` included. */
export function parseCell(raw: string): Cell {
  const text = raw.trim();
  if (text === "inf") return Infinity;
  if (text === "-inf") return -Infinity;
  if (text === "nan") return NaN;
  if (text === "") return raw;
  const value = Number(text);
  return Number.isNaN(value) ? raw : value;
}

/** Parse CSV text into header and typed rows; rejects ragged rows. */
export function parseCsv(text: string, name: string): Table {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new InputDataError(`table ${name} is empty`);
  }
  const header = (lines[0] as string).split(",").map((h) => h.trim());
  if (lines.length === 1) {
    throw new InputDataError(`table ${name} has a header but no rows`);
  }
  const rows: Cell[][] = [];
  for (const line of lines.slice(1)) {
    const cells = line.split(",");
    if (cells.length !== header.length) {
      throw new InputDataError(`ragged row in ${name}`);
    }
    rows.push(cells.map(parseCell));
  }
  return { name, header, rows };
}

/** Read and parse one table file. */
export function readTable(path: string): Table {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch {
    throw new InputDataError(`missing table ${path}`);
  }
  return parseCsv(text, basename(path));
}

/** One column by name; throws when the header lacks it. */
export function column(table: Table, name: string): Cell[] {
  const index = table.header.indexOf(name);
  if (index < 0) {
    throw new InputDataError(`table ${table.name} lacks column '${name}'`);
  }
  return table.rows.map((row) => row[index] as Cell);
}

/** A column that must be entirely numeric (non-finite values allowed). */
export function numericColumn(table: Table, name: string): number[] {
  return column(table, name).map((cell) => {
    if (typeof cell !== "number") {
      throw new InputDataError(
        `table ${table.name} column '${name}' holds non-numeric cell '${cell}'`,
      );
    }
    return cell;
  });
}
