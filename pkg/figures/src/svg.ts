/**
 * Minimal deterministic SVG builder.
 *
 * Coordinates are emitted with exactly two decimals and attribute order is
 * the call-site order, so equal inputs produce byte-identical documents.
 */

export type Attrs = Record<string, string | number>;

/** Two-decimal coordinate, negative zero normalized. */
export function fmtN(v: number): string {
  const s = v.toFixed(2);
  return s === "-0.00" ? "0.00" : s;
}

export function esc(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

// ── Elements ────────────────────────────────────────────

export function tag(name: string, attrs: Attrs, body?: string): string {
  let open = `<${name}`;
  for (const [k, v] of Object.entries(attrs)) {
    open += ` ${k}="${typeof v === "number" ? fmtN(v) : esc(v)}"`;
  }
  return body === undefined ? `${open}/>` : `${open}>${body}</${name}>`;
}

export function line(x1: number, y1: number, x2: number, y2: number, attrs: Attrs): string {
  return tag("line", { x1, y1, x2, y2, ...attrs });
}

export function rect(x: number, y: number, w: number, h: number, attrs: Attrs): string {
  return tag("rect", { x, y, width: w, height: h, ...attrs });
}

export function circle(cx: number, cy: number, r: number, attrs: Attrs): string {
  return tag("circle", { cx, cy, r, ...attrs });
}

export function text(x: number, y: number, s: string, attrs: Attrs): string {
  return tag("text", { x, y, ...attrs }, esc(s));
}

/** Open polyline through the finite points only. */
export function polyline(pts: Array<[number, number]>, attrs: Attrs): string {
  const drawn = pts.filter(([x, y]) => Number.isFinite(x) && Number.isFinite(y));
  const points = drawn.map(([x, y]) => `${fmtN(x)},${fmtN(y)}`).join(" ");
  return tag("polyline", { points, fill: "none", ...attrs });
}

// ── Document ────────────────────────────────────────────

export function svgDoc(width: number, height: number, parts: string[]): string {
  const head =
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}"` +
    ` viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`;
  const bg = rect(0, 0, width, height, { fill: "#ffffff" });
  return [head, bg, ...parts, "</svg>"].join("\n") + "\n";
}
