/**
 * A small 2-D chart: one plot frame with ticks, labels, line marks, point
 * markers, and a legend box, rendered to an SVG string.  All coordinates the
 * marks receive are domain values; the chart owns the scales.
 */

import { Scale, Tick, linearScale } from "./scale.js";
import { Attrs, el, px, svgDocument, textEl } from "./svg.js";

/** Default qualitative palette (10 distinguishable hues). */
export const PALETTE = [
  "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
] as const;

export const CANVAS = { width: 640, height: 480 } as const;
export const MARGIN = { top: 42, right: 24, bottom: 54, left: 72 } as const;

/** The x/y scales every chart uses, mapping domains onto the plot frame. */
export function plotScales(
  xDomain: [number, number],
  yDomain: [number, number],
): { x: Scale; y: Scale } {
  return {
    x: linearScale(xDomain, [MARGIN.left, CANVAS.width - MARGIN.right]),
    y: linearScale(yDomain, [CANVAS.height - MARGIN.bottom, MARGIN.top]),
  };
}

export interface LineOptions {
  stroke: string;
  strokeWidth?: number;
  dash?: string;
  markers?: boolean;
}

export interface LegendEntry {
  label: string;
  color: string;
  dash?: string;
  symbol?: "line" | "cross";
}

const FONT = "font-family=\"sans-serif\"";

export class Chart {
  readonly width = CANVAS.width;
  readonly height = CANVAS.height;
  readonly margin = MARGIN;
  private marks: string[] = [];
  private legendEntries: LegendEntry[] = [];
  private titleText = "";
  private xLabelText = "";
  private yLabelText = "";
  private xTickList: Tick[] = [];
  private yTickList: Tick[] = [];

  constructor(private xScale: Scale, private yScale: Scale) {}

  get plotLeft(): number {
    return this.margin.left;
  }

  get plotRight(): number {
    return this.width - this.margin.right;
  }

  get plotTop(): number {
    return this.margin.top;
  }

  get plotBottom(): number {
    return this.height - this.margin.bottom;
  }

  title(text: string): void {
    this.titleText = text;
  }

  xLabel(text: string): void {
    this.xLabelText = text;
  }

  yLabel(text: string): void {
    this.yLabelText = text;
  }

  xTicks(ticks: Tick[]): void {
    this.xTickList = ticks;
  }

  yTicks(ticks: Tick[]): void {
    this.yTickList = ticks;
  }

  /** Polyline through (x, y) domain points, optionally with circle markers. */
  line(xs: number[], ys: number[], options: LineOptions): void {
    const points = xs
      .map((x, i) => `${px(this.xScale.map(x))},${px(this.yScale.map(ys[i] as number))}`)
      .join(" ");
    const attrs: Attrs = {
      points,
      fill: "none",
      stroke: options.stroke,
      "stroke-width": options.strokeWidth ?? 1.5,
    };
    if (options.dash) attrs["stroke-dasharray"] = options.dash;
    this.marks.push(el("polyline", attrs));
    if (options.markers) {
      for (let i = 0; i < xs.length; i++) {
        this.marks.push(
          el("circle", {
            cx: px(this.xScale.map(xs[i] as number)),
            cy: px(this.yScale.map(ys[i] as number)),
            r: 3,
            fill: options.stroke,
          }),
        );
      }
    }
  }

  /** An x-shaped marker at one domain point. */
  cross(x: number, y: number, color: string, size = 6): void {
    const cx = px(this.xScale.map(x));
    const cy = px(this.yScale.map(y));
    const attrs = { stroke: color, "stroke-width": 2 };
    this.marks.push(
      el("line", { x1: cx - size, y1: cy - size, x2: cx + size, y2: cy + size, ...attrs }),
      el("line", { x1: cx - size, y1: cy + size, x2: cx + size, y2: cy - size, ...attrs }),
    );
  }

  legend(entries: LegendEntry[]): void {
    this.legendEntries = entries;
  }

  private axes(): string[] {
    const parts: string[] = [];
    parts.push(
      el("rect", {
        x: this.plotLeft,
        y: this.plotTop,
        width: this.plotRight - this.plotLeft,
        height: this.plotBottom - this.plotTop,
        fill: "none",
        stroke: "#444444",
      }),
    );
    for (const tick of this.xTickList) {
      const x = px(this.xScale.map(tick.value));
      parts.push(
        el("line", {
          x1: x, y1: this.plotTop, x2: x, y2: this.plotBottom,
          stroke: "#dddddd",
        }),
        el("line", {
          x1: x, y1: this.plotBottom, x2: x, y2: this.plotBottom + 5,
          stroke: "#444444",
        }),
        `<text x="${x}" y="${this.plotBottom + 18}" ${FONT} font-size="11" text-anchor="middle">${tick.label}</text>`,
      );
    }
    for (const tick of this.yTickList) {
      const y = px(this.yScale.map(tick.value));
      parts.push(
        el("line", {
          x1: this.plotLeft, y1: y, x2: this.plotRight, y2: y,
          stroke: "#dddddd",
        }),
        el("line", {
          x1: this.plotLeft - 5, y1: y, x2: this.plotLeft, y2: y,
          stroke: "#444444",
        }),
        `<text x="${this.plotLeft - 8}" y="${y + 4}" ${FONT} font-size="11" text-anchor="end">${tick.label}</text>`,
      );
    }
    return parts;
  }

  private chrome(): string[] {
    const parts: string[] = [];
    const midX = (this.plotLeft + this.plotRight) / 2;
    if (this.titleText) {
      parts.push(
        textEl(
          {
            x: midX, y: this.plotTop - 16, "font-family": "sans-serif",
            "font-size": 15, "text-anchor": "middle", "font-weight": "bold",
          },
          this.titleText,
        ),
      );
    }
    if (this.xLabelText) {
      parts.push(
        textEl(
          {
            x: midX, y: this.height - 14, "font-family": "sans-serif",
            "font-size": 13, "text-anchor": "middle",
          },
          this.xLabelText,
        ),
      );
    }
    if (this.yLabelText) {
      const y = (this.plotTop + this.plotBottom) / 2;
      parts.push(
        textEl(
          {
            x: 20, y, "font-family": "sans-serif", "font-size": 13,
            "text-anchor": "middle", transform: `rotate(-90 20 ${y})`,
          },
          this.yLabelText,
        ),
      );
    }
    return parts;
  }

  private legendBox(): string[] {
    if (this.legendEntries.length === 0) return [];
    const rowHeight = 17;
    const charWidth = 6.4;
    const maxLabel = Math.max(...this.legendEntries.map((e) => e.label.length));
    const boxWidth = 34 + maxLabel * charWidth + 8;
    const boxHeight = this.legendEntries.length * rowHeight + 8;
    const x0 = this.plotRight - boxWidth - 8;
    const y0 = this.plotTop + 8;
    const parts: string[] = [
      el("rect", {
        x: x0, y: y0, width: boxWidth, height: boxHeight,
        fill: "white", "fill-opacity": 0.85, stroke: "#888888",
      }),
    ];
    this.legendEntries.forEach((entry, i) => {
      const cy = y0 + 8 + rowHeight * i + rowHeight / 2 - 4;
      if (entry.symbol === "cross") {
        const cx = x0 + 16;
        parts.push(
          el("line", {
            x1: cx - 5, y1: cy - 5, x2: cx + 5, y2: cy + 5,
            stroke: entry.color, "stroke-width": 2,
          }),
          el("line", {
            x1: cx - 5, y1: cy + 5, x2: cx + 5, y2: cy - 5,
            stroke: entry.color, "stroke-width": 2,
          }),
        );
      } else {
        const attrs: Attrs = {
          x1: x0 + 6, y1: cy, x2: x0 + 26, y2: cy,
          stroke: entry.color, "stroke-width": 2,
        };
        if (entry.dash) attrs["stroke-dasharray"] = entry.dash;
        parts.push(el("line", attrs));
      }
      parts.push(
        textEl(
          {
            x: x0 + 32, y: cy + 4, "font-family": "sans-serif", "font-size": 12,
          },
          entry.label,
        ),
      );
    });
    return parts;
  }

  render(): string {
    const clipped = [
      `<g clip-path="url(#plot-area)">`,
      ...this.marks,
      "</g>",
    ];
    const defs = el(
      "defs",
      {},
      el(
        "clipPath",
        { id: "plot-area" },
        el("rect", {
          x: this.plotLeft, y: this.plotTop,
          width: this.plotRight - this.plotLeft,
          height: this.plotBottom - this.plotTop,
        }),
      ),
    );
    return svgDocument(this.width, this.height, [
      defs,
      ...this.axes(),
      ...clipped,
      ...this.chrome(),
      ...this.legendBox(),
    ]);
  }
}
