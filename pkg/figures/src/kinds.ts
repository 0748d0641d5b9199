/**
 * The five figure renderers. Each takes parsed CSV tables and returns a
 * complete SVG document string; all numbers plotted come straight from the
 * input files (fit overlays are least-squares lines over plotted points,
 * nothing else is derived).
 *
 * Expected inputs, by kind:
 *   fidelity_curves       trajectories.csv [+ summary.csv for the dashed mean]
 *   log_infidelity_inset  summary.csv
 *   observable_traces     trajectories.csv
 *   angle_vs_epsilon      sweep.csv
 *   t90_scaling           sweep.csv
 */

import { column, FigureError, num, requireColumns, type Table } from "./csv.js";
import {
  frame,
  HEIGHT,
  legend,
  legendHeight,
  legendWidth,
  PALETTE,
  plotArea,
  WIDTH,
  type LegendEntry,
  type PlotArea,
} from "./chart.js";
import { leastSquares } from "./fit.js";
import { linearScale, logScale, niceDomain, type Scale } from "./scale.js";
import { circle, line, polyline, rect, svgDoc, text, type Attrs } from "./svg.js";

type Pt = [number, number];

// ── Shared helpers ──────────────────────────────────────

/** Rows keyed by traj_id in first-appearance order, each sorted by step. */
function groupTrajectories(table: Table, valueColumn: string): Map<string, Pt[]> {
  const groups = new Map<string, Pt[]>();
  for (const row of table.rows) {
    const key = row["traj_id"] ?? "";
    let pts = groups.get(key);
    if (pts === undefined) {
      pts = [];
      groups.set(key, pts);
    }
    pts.push([num(row["step"]), num(row[valueColumn])]);
  }
  for (const pts of groups.values()) pts.sort((a, b) => a[0] - b[0]);
  return groups;
}

function maxStep(groups: Iterable<Pt[]>): number {
  let hi = 0;
  for (const pts of groups) {
    for (const [s] of pts) if (Number.isFinite(s) && s > hi) hi = s;
  }
  if (hi === 0) throw new FigureError('column "step" has no finite values');
  return hi;
}

/** Finite paired points from two equal-length arrays. */
function finitePairs(xs: number[], ys: number[]): Pt[] {
  const out: Pt[] = [];
  for (let i = 0; i < xs.length; i += 1) {
    const x = xs[i] as number;
    const y = ys[i] as number;
    if (Number.isFinite(x) && Number.isFinite(y)) out.push([x, y]);
  }
  return out;
}

function toPixels(pts: Pt[], xs: Scale, ys: Scale): Pt[] {
  return pts.map(([x, y]) => [xs.map(x), ys.map(y)] as Pt);
}

// ── fidelity_curves ─────────────────────────────────────

/** Per-trajectory fidelity (solid) with the ensemble mean (dashed) when a summary table is supplied. */
export function renderFidelityCurves(traj: Table, summary?: Table): string {
  requireColumns(traj, ["traj_id", "step", "fidelity"]);
  if (summary !== undefined) requireColumns(summary, ["step", "mean_fidelity"]);
  const groups = groupTrajectories(traj, "fidelity");
  const area = plotArea();
  const xs = linearScale([0, maxStep(groups.values()) * 1.02], [area.x0, area.x1]);
  const ys = linearScale([0, 1.04], [area.y1, area.y0]);
  const parts = frame(area, { title: "Fidelity per trajectory", xLabel: "step", yLabel: "fidelity", xs, ys });
  let i = 0;
  for (const pts of groups.values()) {
    parts.push(
      polyline(toPixels(pts, xs, ys), {
        stroke: PALETTE[i % PALETTE.length] as string,
        "stroke-width": 1.3,
        "stroke-opacity": 0.85,
      }),
    );
    i += 1;
  }
  const entries: LegendEntry[] = [{ label: `trajectories (${groups.size})`, color: PALETTE[0] as string }];
  if (summary !== undefined) {
    const meanPts = finitePairs(column(summary, "step"), column(summary, "mean_fidelity"));
    parts.push(polyline(toPixels(meanPts, xs, ys), { stroke: "#000000", "stroke-width": 2.2, "stroke-dasharray": "7 4" }));
    entries.push({ label: "ensemble mean", color: "#000000", dash: "7 4" });
  }
  parts.push(...legend(area.x1 - legendWidth(entries) - 8, area.y1 - legendHeight(entries) - 8, entries));
  return svgDoc(WIDTH, HEIGHT, parts);
}

// ── log_infidelity_inset ────────────────────────────────

/** Ensemble mean fidelity with an inset of ln(1-F) against step. */
export function renderLogInfidelityInset(summary: Table): string {
  requireColumns(summary, ["step", "mean_fidelity", "log_infidelity"]);
  const steps = column(summary, "step");
  const meanPts = finitePairs(steps, column(summary, "mean_fidelity"));
  const logPts = finitePairs(steps, column(summary, "log_infidelity"));
  if (meanPts.length < 2) throw new FigureError(`column "mean_fidelity" has fewer than 2 finite values in ${summary.path}`);
  if (logPts.length < 2) throw new FigureError(`column "log_infidelity" has fewer than 2 finite values in ${summary.path}`);

  const area = plotArea();
  const hi = Math.max(...meanPts.map(([s]) => s)) * 1.02;
  const xs = linearScale([0, hi], [area.x0, area.x1]);
  const ys = linearScale([0, 1.04], [area.y1, area.y0]);
  const parts = frame(area, { title: "Ensemble mean fidelity", xLabel: "step", yLabel: "mean fidelity", xs, ys });
  parts.push(polyline(toPixels(meanPts, xs, ys), { stroke: "#0072b2", "stroke-width": 2 }));

  // Inset occupies the lower-right quadrant of the plot area.
  const inset: PlotArea = {
    x0: area.x0 + (area.x1 - area.x0) * 0.52,
    y0: area.y0 + (area.y1 - area.y0) * 0.5,
    x1: area.x1 - 10,
    y1: area.y1 - 12,
  };
  parts.push(...renderInset(inset, logPts, hi));
  return svgDoc(WIDTH, HEIGHT, parts);
}

function renderInset(box: PlotArea, logPts: Pt[], stepHi: number): string[] {
  const parts: string[] = [];
  parts.push(rect(box.x0, box.y0, box.x1 - box.x0, box.y1 - box.y0, { fill: "#ffffff", stroke: "#666666", "stroke-width": 0.8 }));
  const ix0 = box.x0 + 34;
  const iy1 = box.y1 - 20;
  const xs = linearScale([0, stepHi], [ix0, box.x1 - 8], 3);
  const ys = linearScale(niceDomain(logPts.map(([, v]) => v)), [iy1, box.y0 + 8], 3);
  for (const v of xs.ticks()) {
    const px = xs.map(v);
    parts.push(line(px, iy1, px, iy1 + 3, { stroke: "#666666", "stroke-width": 0.8 }));
    parts.push(text(px, iy1 + 12, xs.fmt(v), { "text-anchor": "middle", "font-size": 9, fill: "#444444" }));
  }
  for (const v of ys.ticks()) {
    const py = ys.map(v);
    parts.push(line(ix0 - 3, py, ix0, py, { stroke: "#666666", "stroke-width": 0.8 }));
    parts.push(text(ix0 - 5, py + 3, ys.fmt(v), { "text-anchor": "end", "font-size": 9, fill: "#444444" }));
  }
  parts.push(line(ix0, box.y0 + 8, ix0, iy1, { stroke: "#666666", "stroke-width": 0.8 }));
  parts.push(line(ix0, iy1, box.x1 - 8, iy1, { stroke: "#666666", "stroke-width": 0.8 }));
  parts.push(polyline(toPixels(logPts, xs, ys), { stroke: "#d55e00", "stroke-width": 1.6 }));
  parts.push(
    text(0, 0, "ln(1-F)", {
      "text-anchor": "middle",
      "font-size": 10,
      fill: "#444444",
      transform: `translate(${(box.x0 + 10).toFixed(2)} ${((box.y0 + box.y1) / 2).toFixed(2)}) rotate(-90)`,
    }),
  );
  return parts;
}

// ── observable_traces ───────────────────────────────────

const TRAJECTORY_COLUMNS = ["traj_id", "step", "fidelity"];

/** Every observable column of a trajectory table, one line per trajectory, colored by observable. */
export function renderObservableTraces(traj: Table): string {
  requireColumns(traj, ["traj_id", "step"]);
  const names = traj.columns.filter((c) => !TRAJECTORY_COLUMNS.includes(c));
  if (names.length === 0) {
    throw new FigureError(`no observable columns in ${traj.path} (only ${TRAJECTORY_COLUMNS.join(", ")} found)`);
  }
  const byName = names.map((name) => groupTrajectories(traj, name));
  const allValues: number[] = [];
  for (const groups of byName) {
    for (const pts of groups.values()) for (const [, v] of pts) if (Number.isFinite(v)) allValues.push(v);
  }
  if (allValues.length === 0) throw new FigureError(`column "${names[0]}" has no finite values in ${traj.path}`);

  const area = plotArea();
  const xs = linearScale([0, maxStep((byName[0] as Map<string, Pt[]>).values()) * 1.02], [area.x0, area.x1]);
  const ys = linearScale(niceDomain(allValues), [area.y1, area.y0]);
  const parts = frame(area, { title: "Observable traces", xLabel: "step", yLabel: "expectation value", xs, ys });
  if (ys.map(0) >= area.y0 && ys.map(0) <= area.y1) {
    parts.push(line(area.x0, ys.map(0), area.x1, ys.map(0), { stroke: "#bbbbbb", "stroke-width": 0.8, "stroke-dasharray": "3 3" }));
  }
  byName.forEach((groups, j) => {
    for (const pts of groups.values()) {
      parts.push(
        polyline(toPixels(pts, xs, ys), {
          stroke: PALETTE[j % PALETTE.length] as string,
          "stroke-width": 1.2,
          "stroke-opacity": 0.7,
        }),
      );
    }
  });
  const entries = names.map((name, j) => ({ label: name, color: PALETTE[j % PALETTE.length] as string }));
  parts.push(...legend(area.x1 - legendWidth(entries) - 8, area.y0 + 8, entries));
  return svgDoc(WIDTH, HEIGHT, parts);
}

// ── angle_vs_epsilon ────────────────────────────────────

/** Correction angles against measurement strength, with least-squares fit overlays. */
export function renderAngleVsEpsilon(sweep: Table): string {
  requireColumns(sweep, ["epsilon", "theta0", "theta1"]);
  const eps = column(sweep, "epsilon");
  const series = ["theta0", "theta1"].map((name) => {
    const pts = finitePairs(eps, column(sweep, name));
    if (pts.length < 2) throw new FigureError(`column "${name}" has fewer than 2 finite values in ${sweep.path}`);
    return { name, pts };
  });

  const area = plotArea();
  const allEps = series.flatMap((s) => s.pts.map(([x]) => x));
  const allTheta = series.flatMap((s) => s.pts.map(([, y]) => y));
  const xs = linearScale([0, Math.max(...allEps) * 1.1], [area.x0, area.x1]);
  const [tLo, tHi] = niceDomain([...allTheta, 0], 0.1);
  const ys = linearScale([tLo, tHi], [area.y1, area.y0]);
  const parts = frame(area, { title: "Correction angles", xLabel: "epsilon", yLabel: "angle (rad)", xs, ys });
  parts.push(line(area.x0, ys.map(0), area.x1, ys.map(0), { stroke: "#bbbbbb", "stroke-width": 0.8, "stroke-dasharray": "3 3" }));

  const entries: { label: string; color: string }[] = [];
  series.forEach((s, j) => {
    const color = PALETTE[j % PALETTE.length] as string;
    const fit = leastSquares(s.pts.map(([x]) => x), s.pts.map(([, y]) => y));
    const [d0, d1] = [0, Math.max(...allEps) * 1.1];
    parts.push(
      line(xs.map(d0), ys.map(fit.intercept + fit.slope * d0), xs.map(d1), ys.map(fit.intercept + fit.slope * d1), {
        stroke: color,
        "stroke-width": 1.2,
      }),
    );
    for (const [x, y] of s.pts) parts.push(circle(xs.map(x), ys.map(y), 3.5, { fill: color }));
    entries.push({ label: `${s.name} (slope ${fit.slope.toFixed(3)})`, color });
  });
  parts.push(...legend(area.x0 + 10, area.y0 + 8, entries));
  return svgDoc(WIDTH, HEIGHT, parts);
}

// ── t90_scaling ─────────────────────────────────────────

/** Mean threshold-crossing step against the swept value, log-log, with a power-law fit. */
export function renderT90Scaling(sweep: Table): string {
  requireColumns(sweep, ["value", "mean_t90"]);
  const values = column(sweep, "value");
  const t90 = column(sweep, "mean_t90");
  const censored = sweep.columns.includes("censored") ? column(sweep, "censored") : values.map(() => 0);
  const pts: Array<{ x: number; y: number; censored: boolean }> = [];
  for (let i = 0; i < values.length; i += 1) {
    const x = values[i] as number;
    const y = t90[i] as number;
    if (Number.isFinite(x) && x > 0 && Number.isFinite(y) && y > 0) {
      pts.push({ x, y, censored: (censored[i] as number) > 0 });
    }
  }
  if (pts.length < 2) throw new FigureError(`column "mean_t90" has fewer than 2 positive finite values in ${sweep.path}`);

  const area = plotArea();
  const xsData = pts.map((p) => p.x);
  const ysData = pts.map((p) => p.y);
  const xs = logScale([Math.min(...xsData) / 1.15, Math.max(...xsData) * 1.15], [area.x0, area.x1]);
  const ys = logScale([Math.min(...ysData) / 1.25, Math.max(...ysData) * 1.25], [area.y1, area.y0]);
  const parts = frame(area, { title: "Steps to threshold", xLabel: "sweep value", yLabel: "mean T90", xs, ys });

  const fit = leastSquares(xsData.map(Math.log10), ysData.map(Math.log10));
  const lineX = [Math.min(...xsData), Math.max(...xsData)];
  parts.push(
    line(
      xs.map(lineX[0] as number),
      ys.map(Math.pow(10, fit.intercept + fit.slope * Math.log10(lineX[0] as number))),
      xs.map(lineX[1] as number),
      ys.map(Math.pow(10, fit.intercept + fit.slope * Math.log10(lineX[1] as number))),
      { stroke: "#d55e00", "stroke-width": 1.6 },
    ),
  );
  for (const p of pts) {
    // Censored points (some trajectories never crossed) are drawn open.
    const attrs: Attrs = p.censored
      ? { fill: "#ffffff", stroke: "#0072b2", "stroke-width": 1.6 }
      : { fill: "#0072b2" };
    parts.push(circle(xs.map(p.x), ys.map(p.y), 4, attrs));
  }
  parts.push(text(area.x0 + 12, area.y0 + 20, `fit slope ${fit.slope.toFixed(2)}`, { "font-size": 12, fill: "#111111" }));
  return svgDoc(WIDTH, HEIGHT, parts);
}
