/**
 * Shared test plumbing: fixture lookup and temp-dir scratch files.
 * Fixtures under test/fixtures are unmodified artifacts of the simulator CLI.
 */

import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";

export function fixture(...segments: string[]): string {
  return fileURLToPath(new URL(join("fixtures", ...segments), import.meta.url));
}

export function scratchDir(): string {
  return mkdtempSync(join(tmpdir(), "figures-test-"));
}

/** Write a throwaway CSV and return its path. */
export function scratchCsv(dir: string, name: string, content: string): string {
  const path = join(dir, name);
  writeFileSync(path, content);
  return path;
}

/** Collecting logger for runCli. */
export function collector(): { log: (m: string) => void; messages: string[] } {
  const messages: string[] = [];
  return { log: (m) => messages.push(m), messages };
}
