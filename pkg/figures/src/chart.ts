/**
 * Shared chart furniture: the framed plot area, tick marks, axis labels,
 * legends, and the fixed style constants every figure kind uses.
 */

import type { Scale } from "./scale.js";
import { line, rect, text } from "./svg.js";

export const WIDTH = 640;
export const HEIGHT = 420;
export const MARGIN = { top: 42, right: 22, bottom: 52, left: 68 };

/** Okabe-Ito palette (colorblind safe); black is reserved for mean curves. */
export const PALETTE = ["#0072b2", "#d55e00", "#009e73", "#cc79a7", "#e69f00", "#56b4e9", "#7f7f7f"];

export interface PlotArea {
  x0: number;
  y0: number;
  x1: number;
  y1: number;
}

export function plotArea(): PlotArea {
  return {
    x0: MARGIN.left,
    y0: MARGIN.top,
    x1: WIDTH - MARGIN.right,
    y1: HEIGHT - MARGIN.bottom,
  };
}

// ── Frame ───────────────────────────────────────────────

export interface FrameOpts {
  title: string;
  xLabel: string;
  yLabel: string;
  xs: Scale;
  ys: Scale;
}

/** Border, ticks, tick labels, axis labels, and title for one plot area. */
export function frame(area: PlotArea, opts: FrameOpts): string[] {
  const { x0, y0, x1, y1 } = area;
  const parts: string[] = [];
  parts.push(rect(x0, y0, x1 - x0, y1 - y0, { fill: "none", stroke: "#333333", "stroke-width": 1 }));
  for (const v of opts.xs.ticks()) {
    const px = opts.xs.map(v);
    parts.push(line(px, y1, px, y1 + 5, { stroke: "#333333", "stroke-width": 1 }));
    parts.push(text(px, y1 + 18, opts.xs.fmt(v), { "text-anchor": "middle", "font-size": 11, fill: "#333333" }));
  }
  for (const v of opts.ys.ticks()) {
    const py = opts.ys.map(v);
    parts.push(line(x0 - 5, py, x0, py, { stroke: "#333333", "stroke-width": 1 }));
    parts.push(text(x0 - 8, py + 4, opts.ys.fmt(v), { "text-anchor": "end", "font-size": 11, fill: "#333333" }));
  }
  parts.push(text((x0 + x1) / 2, HEIGHT - 14, opts.xLabel, { "text-anchor": "middle", "font-size": 13, fill: "#111111" }));
  parts.push(
    text(0, 0, opts.yLabel, {
      "text-anchor": "middle",
      "font-size": 13,
      fill: "#111111",
      transform: `translate(18 ${fmtMid(y0, y1)}) rotate(-90)`,
    }),
  );
  parts.push(text((x0 + x1) / 2, 24, opts.title, { "text-anchor": "middle", "font-size": 15, "font-weight": "bold", fill: "#111111" }));
  return parts;
}

function fmtMid(a: number, b: number): string {
  return ((a + b) / 2).toFixed(2);
}

// ── Legend ──────────────────────────────────────────────

export interface LegendEntry {
  label: string;
  color: string;
  dash?: string;
}

/** Boxed legend with its top-left corner at (x, y). */
export function legend(x: number, y: number, entries: LegendEntry[]): string[] {
  const rowH = 16;
  const swatch = 20;
  const width = legendWidth(entries);
  const height = entries.length * rowH + 8;
  const parts: string[] = [];
  parts.push(rect(x, y, width, height, { fill: "#ffffff", stroke: "#999999", "stroke-width": 0.8 }));
  entries.forEach((e, i) => {
    const cy = y + 8 + i * rowH + rowH / 2 - 4;
    const attrs: Record<string, string | number> = { stroke: e.color, "stroke-width": 2 };
    if (e.dash) attrs["stroke-dasharray"] = e.dash;
    parts.push(line(x + 6, cy, x + 6 + swatch, cy, attrs));
    parts.push(text(x + 6 + swatch + 6, cy + 4, e.label, { "font-size": 11, fill: "#111111" }));
  });
  return parts;
}

export function legendWidth(entries: LegendEntry[]): number {
  const maxLabel = Math.max(...entries.map((e) => e.label.length));
  return 38 + Math.ceil(maxLabel * 6.2);
}

export function legendHeight(entries: LegendEntry[]): number {
  return entries.length * 16 + 8;
}
