/**
 * Renderer content checks: every kind draws the elements its contract
 * promises, errors name the offending column, and output is deterministic.
 */

import { rmSync } from "node:fs";
import { afterAll, describe, expect, it } from "vitest";
import { loadTable } from "../src/csv.js";
import {
  renderAngleVsEpsilon,
  renderFidelityCurves,
  renderLogInfidelityInset,
  renderObservableTraces,
  renderT90Scaling,
} from "../src/kinds.js";
import { fixture, scratchCsv, scratchDir } from "./helpers.js";

const dir = scratchDir();
afterAll(() => rmSync(dir, { recursive: true, force: true }));

function countOf(haystack: string, needle: string): number {
  return haystack.split(needle).length - 1;
}

const trajectories = () => loadTable(fixture("run", "trajectories.csv"));
const summary = () => loadTable(fixture("run", "summary.csv"));
const epsSweep = () => loadTable(fixture("sweep_eps", "sweep.csv"));
const dimSweep = () => loadTable(fixture("sweep_dim", "sweep.csv"));

describe("fidelity_curves", () => {
  it("draws one solid polyline per trajectory plus a dashed mean", () => {
    const svg = renderFidelityCurves(trajectories(), summary());
    expect(countOf(svg, "<polyline")).toBe(7);
    // Dashed style appears on the mean curve and its legend swatch.
    expect(countOf(svg, 'stroke-dasharray="7 4"')).toBe(2);
    expect(svg).toContain("ensemble mean");
    expect(svg).toContain("trajectories (6)");
  });

  it("omits the mean when no summary table is given", () => {
    const svg = renderFidelityCurves(trajectories());
    expect(countOf(svg, "<polyline")).toBe(6);
    expect(svg).not.toContain("stroke-dasharray=\"7 4\"");
  });

  it("is deterministic", () => {
    expect(renderFidelityCurves(trajectories(), summary())).toBe(renderFidelityCurves(trajectories(), summary()));
  });

  it("names a missing column", () => {
    expect(() => renderFidelityCurves(epsSweep())).toThrow(/missing column "traj_id"/);
  });
});

describe("log_infidelity_inset", () => {
  it("draws the mean curve with a labelled inset", () => {
    const svg = renderLogInfidelityInset(summary());
    expect(svg).toContain("ln(1-F)");
    expect(countOf(svg, "<polyline")).toBe(2);
    expect(svg).toContain("Ensemble mean fidelity");
  });

  it("rejects a table whose log column is never finite", () => {
    const p = scratchCsv(dir, "allinf.csv", "step,mean_fidelity,log_infidelity\n1,1,-inf\n2,1,-inf\n");
    expect(() => renderLogInfidelityInset(loadTable(p))).toThrow(/"log_infidelity" has fewer than 2 finite values/);
  });

  it("names a missing column", () => {
    const p = scratchCsv(dir, "nolog.csv", "step,mean_fidelity\n1,0.5\n");
    expect(() => renderLogInfidelityInset(loadTable(p))).toThrow(/missing column "log_infidelity"/);
  });
});

describe("observable_traces", () => {
  it("plots every observable column with a legend entry", () => {
    const svg = renderObservableTraces(trajectories());
    expect(countOf(svg, "<polyline")).toBe(6);
    expect(svg).toContain(">Z</text>");
    expect(svg).toContain("Observable traces");
  });

  it("rejects a table without observable columns", () => {
    const p = scratchCsv(dir, "noobs.csv", "traj_id,step,fidelity\n0,1,0.5\n");
    expect(() => renderObservableTraces(loadTable(p))).toThrow(/no observable columns/);
  });
});

describe("angle_vs_epsilon", () => {
  it("draws both angle series with fit overlays", () => {
    const svg = renderAngleVsEpsilon(epsSweep());
    expect(countOf(svg, "<circle")).toBe(6);
    expect(svg).toContain("theta0 (slope ");
    expect(svg).toContain("theta1 (slope ");
  });

  it("works on a dimension sweep too (angles at the picked epsilons)", () => {
    const svg = renderAngleVsEpsilon(dimSweep());
    expect(countOf(svg, "<circle")).toBe(4);
  });

  it("needs two finite points per series", () => {
    const p = scratchCsv(dir, "onerow.csv", "value,epsilon,theta0,theta1\n0.1,0.1,-0.1,0.08\n");
    expect(() => renderAngleVsEpsilon(loadTable(p))).toThrow(/"theta0" has fewer than 2 finite values/);
  });

  it("names a missing column", () => {
    const p = scratchCsv(dir, "notheta.csv", "value,epsilon,theta0\n0.1,0.1,-0.1\n");
    expect(() => renderAngleVsEpsilon(loadTable(p))).toThrow(/missing column "theta1"/);
  });
});

describe("t90_scaling", () => {
  it("draws log-log points with a power-law fit annotation", () => {
    const svg = renderT90Scaling(epsSweep());
    expect(countOf(svg, "<circle")).toBe(3);
    expect(svg).toMatch(/fit slope -?\d+\.\d\d/);
  });

  it("marks censored rows as open circles", () => {
    const p = scratchCsv(
      dir,
      "censored.csv",
      "value,mean_t90,censored\n4,20,0\n8,45,2\n16,90,0\n",
    );
    const svg = renderT90Scaling(loadTable(p));
    expect(countOf(svg, 'fill="#ffffff" stroke="#0072b2"')).toBe(1);
  });

  it("skips rows that cannot sit on a log axis", () => {
    const p = scratchCsv(dir, "zeros.csv", "value,mean_t90\n4,0\n8,45\n16,90\n");
    const svg = renderT90Scaling(loadTable(p));
    expect(countOf(svg, "<circle")).toBe(2);
  });

  it("needs two usable points", () => {
    const p = scratchCsv(dir, "short.csv", "value,mean_t90\n4,20\n");
    expect(() => renderT90Scaling(loadTable(p))).toThrow(/"mean_t90" has fewer than 2 positive finite values/);
  });

  it("names a missing column", () => {
    const p = scratchCsv(dir, "not90.csv", "value,epsilon\n4,0.1\n8,0.2\n");
    expect(() => renderT90Scaling(loadTable(p))).toThrow(/missing column "mean_t90"/);
  });
});
