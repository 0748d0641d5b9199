/**
 * CSV loading for simulator artifacts.
 *
 * Artifacts are plain comma-separated files with a header row, LF endings,
 * and 17-significant-digit floats. Non-finite values appear as the strings
 * "inf", "-inf", "nan" (the producer's float formatting).
 */

import { readFileSync } from "node:fs";
import Papa from "papaparse";

/** Error class for every data-level failure; the CLI maps it to exit 1. */
export class FigureError extends Error {}

export interface Table {
  path: string;
  columns: string[];
  rows: Record<string, string>[];
}

// ── Loading ─────────────────────────────────────────────

/** Read and parse one CSV file. Throws FigureError on unreadable, unparsable, or empty (no data rows) input. */
export function loadTable(path: string): Table {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch (e) {
    throw new FigureError(`cannot read ${path}: ${(e as NodeJS.ErrnoException).code ?? (e as Error).message}`);
  }
  const parsed = Papa.parse<Record<string, string>>(text, {
    header: true,
    delimiter: ",",
    skipEmptyLines: true,
  });
  const columns = parsed.meta.fields ?? [];
  if (columns.length === 0 || parsed.data.length === 0) {
    throw new FigureError(`empty CSV: ${path}`);
  }
  return { path, columns, rows: parsed.data };
}

/** Fail with the first missing column named, per the external error contract. */
export function requireColumns(table: Table, names: string[]): void {
  for (const name of names) {
    if (!table.columns.includes(name)) {
      throw new FigureError(`missing column "${name}" in ${table.path}`);
    }
  }
}

// ── Numeric conversion ──────────────────────────────────

/** Parse one cell; maps the producer's "inf"/"-inf"/"nan" spellings, everything unparsable becomes NaN. */
export function num(raw: string | undefined): number {
  if (raw === undefined) return NaN;
  const s = raw.trim();
  if (s === "") return NaN;
  const low = s.toLowerCase();
  if (low === "inf" || low === "+inf" || low === "infinity") return Infinity;
  if (low === "-inf" || low === "-infinity") return -Infinity;
  if (low === "nan" || low === "-nan") return NaN;
  return Number(s);
}

/** One column as numbers, row order preserved. */
export function column(table: Table, name: string): number[] {
  return table.rows.map((row) => num(row[name]));
}
