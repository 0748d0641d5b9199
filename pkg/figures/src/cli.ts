/**
 * Command-line entry: `figures <kind> --in CSV [--in CSV2] --out IMG`.
 *
 * Exit codes: 0 rendered, 1 data error (unreadable/empty input, missing or
 * unusable column), 2 usage error. On any error the output file is never
 * written.
 */

import { mkdirSync, writeFileSync } from "node:fs";
import { dirname, resolve } from "node:path";
import { parseArgs } from "node:util";
import { FigureError, loadTable, type Table } from "./csv.js";
import {
  renderAngleVsEpsilon,
  renderFidelityCurves,
  renderLogInfidelityInset,
  renderObservableTraces,
  renderT90Scaling,
} from "./kinds.js";

interface KindSpec {
  minInputs: number;
  maxInputs: number;
  render(tables: Table[]): string;
}

export const KINDS: Record<string, KindSpec> = {
  fidelity_curves: {
    minInputs: 1,
    maxInputs: 2,
    render: (t) => renderFidelityCurves(t[0] as Table, t[1]),
  },
  log_infidelity_inset: { minInputs: 1, maxInputs: 1, render: (t) => renderLogInfidelityInset(t[0] as Table) },
  observable_traces: { minInputs: 1, maxInputs: 1, render: (t) => renderObservableTraces(t[0] as Table) },
  angle_vs_epsilon: { minInputs: 1, maxInputs: 1, render: (t) => renderAngleVsEpsilon(t[0] as Table) },
  t90_scaling: { minInputs: 1, maxInputs: 1, render: (t) => renderT90Scaling(t[0] as Table) },
};

const USAGE = `usage: figures <kind> --in CSV [--in CSV2] --out IMG
kinds: ${Object.keys(KINDS).join(", ")}`;

export type Log = (message: string) => void;

// ── Entry point ─────────────────────────────────────────

/** Run one invocation; returns the process exit code. */
export function runCli(argv: string[], log: Log = (m) => console.error(m)): number {
  let kind: string;
  let ins: string[];
  let out: string;
  try {
    const parsed = parseArgs({
      args: argv,
      options: {
        in: { type: "string", multiple: true },
        out: { type: "string" },
      },
      allowPositionals: true,
    });
    if (parsed.positionals.length !== 1) throw new Error("expected exactly one figure kind");
    kind = parsed.positionals[0] as string;
    ins = parsed.values.in ?? [];
    if (parsed.values.out === undefined) throw new Error("--out is required");
    out = parsed.values.out;
  } catch (e) {
    log(`figures: ${(e as Error).message}`);
    log(USAGE);
    return 2;
  }

  const spec = KINDS[kind];
  if (spec === undefined) {
    log(`figures: unknown figure kind "${kind}"`);
    log(USAGE);
    return 2;
  }
  if (ins.length < spec.minInputs || ins.length > spec.maxInputs) {
    const want = spec.minInputs === spec.maxInputs ? `${spec.minInputs}` : `${spec.minInputs} to ${spec.maxInputs}`;
    log(`figures: ${kind} takes ${want} --in file(s), got ${ins.length}`);
    log(USAGE);
    return 2;
  }

  let svg: string;
  try {
    svg = spec.render(ins.map(loadTable));
  } catch (e) {
    if (e instanceof FigureError) {
      log(`figures: ${e.message}`);
      return 1;
    }
    throw e;
  }
  mkdirSync(dirname(resolve(out)), { recursive: true });
  writeFileSync(out, svg);
  return 0;
}
