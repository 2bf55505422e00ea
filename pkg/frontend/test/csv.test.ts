import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import {
  InputDataError,
  column,
  numericColumn,
  parseCell,
  parseCsv,
  readTable,
} from "../src/csv.js";

describe("parseCell", () => {
  it("parses round-trip floats exactly", () => {
    expect(parseCell("6.103515625e-05")).toBe(6.103515625e-5);
    expect(parseCell("0.1")).toBe(0.1);
    expect(parseCell("-2")).toBe(-2);
  });

  it("parses the non-finite sentinels", () => {
    expect(parseCell("inf")).toBe(Infinity);
    expect(parseCell("-inf")).toBe(-Infinity);
    expect(parseCell("nan")).toBeNaN();
  });

  it("keeps labels as strings", () => {
    expect(parseCell("c1")).toBe("c1");
    expect(parseCell("n0s1")).toBe("n0s1");
  });
});

describe("parseCsv", () => {
  it("splits header and typed rows", () => {
    const table = parseCsv("dt,rmse\n0.5,0.25\n0.25,0.125\n", "rmse.csv");
    expect(table.header).toEqual(["dt", "rmse"]);
    expect(table.rows).toEqual([
      [0.5, 0.25],
      [0.25, 0.125],
    ]);
  });

  it("rejects empty text", () => {
    expect(() => parseCsv("", "t.csv")).toThrow(InputDataError);
  });

  it("rejects header-only tables", () => {
    expect(() => parseCsv("dt,rmse\n", "t.csv")).toThrow(/header but no rows/);
  });

  it("rejects ragged rows", () => {
    expect(() => parseCsv("a,b\n1,2\n3\n", "t.csv")).toThrow(/ragged/);
  });
});

describe("readTable", () => {
  it("reads a file from disk", () => {
    const dir = mkdtempSync(join(tmpdir(), "mvtem-plots-"));
    writeFileSync(join(dir, "t.csv"), "v\n1\ninf\n");
    const table = readTable(join(dir, "t.csv"));
    expect(numericColumn(table, "v")).toEqual([1, Infinity]);
  });

  it("throws on a missing file", () => {
    expect(() => readTable("/nonexistent/t.csv")).toThrow(/missing table/);
  });
});

describe("columns", () => {
  const table = parseCsv("init,value\nc1,0.5\nc-5,1.5\n", "w2.csv");

  it("extracts by name", () => {
    expect(column(table, "init")).toEqual(["c1", "c-5"]);
    expect(numericColumn(table, "value")).toEqual([0.5, 1.5]);
  });

  it("names the missing column", () => {
    expect(() => column(table, "nope")).toThrow(/lacks column 'nope'/);
  });

  it("rejects labels in numeric columns", () => {
    expect(() => numericColumn(table, "init")).toThrow(/non-numeric/);
  });
});
