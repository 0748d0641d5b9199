/**
 * Axis scales, tick placement, and number formatting.
 *
 * Everything here is a pure function of its inputs so rendered figures are
 * byte-identical across invocations.
 */

export interface Scale {
  map(v: number): number;
  ticks(): number[];
  fmt(v: number): string;
}

// ── Tick arithmetic ─────────────────────────────────────

/** 1-2-5 tick step covering span/target. */
function tickStep(span: number, target: number): number {
  const raw = span / Math.max(1, target);
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const norm = raw / mag;
  const factor = norm < 1.5 ? 1 : norm < 3.5 ? 2 : norm < 7.5 ? 5 : 10;
  return factor * mag;
}

/** Fixed-decimal label without a negative zero. */
function fmtFixed(v: number, decimals: number): string {
  const s = v.toFixed(decimals);
  return /^-0(\.0+)?$/.test(s) ? s.slice(1) : s;
}

/** Significant-digit label with trailing zeros trimmed. */
export function fmtSig(v: number, sig = 3): string {
  return String(parseFloat(v.toPrecision(sig)));
}

// ── Scales ──────────────────────────────────────────────

export function linearScale(domain: [number, number], range: [number, number], tickTarget = 5): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0;
  if (!(span > 0)) throw new Error(`degenerate linear domain [${d0}, ${d1}]`);
  const step = tickStep(span, tickTarget);
  const decimals = Math.max(0, -Math.floor(Math.log10(step) + 1e-9));
  return {
    map: (v) => r0 + ((v - d0) / span) * (r1 - r0),
    ticks: () => {
      const n0 = Math.ceil(d0 / step - 1e-9);
      const count = Math.floor((d1 - n0 * step) / step + 1e-9);
      // Snap away float noise such as 3 * 0.2 = 0.6000000000000001.
      return Array.from({ length: count + 1 }, (_, i) => Number(((n0 + i) * step).toFixed(decimals + 2)));
    },
    fmt: (v) => fmtFixed(v, decimals),
  };
}

export function logScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  if (!(d0 > 0 && d1 > d0)) throw new Error(`log scale needs 0 < lo < hi, got [${d0}, ${d1}]`);
  const [r0, r1] = range;
  const l0 = Math.log10(d0);
  const l1 = Math.log10(d1);
  return {
    map: (v) => r0 + ((Math.log10(v) - l0) / (l1 - l0)) * (r1 - r0),
    ticks: () => {
      const out: number[] = [];
      for (let k = Math.floor(l0); k <= Math.ceil(l1); k += 1) {
        for (const m of [1, 2, 5]) {
          const v = m * Math.pow(10, k);
          if (v >= d0 * (1 - 1e-12) && v <= d1 * (1 + 1e-12)) out.push(v);
        }
      }
      if (out.length < 2) {
        // Narrow decade without a 1-2-5 point: fall back to the endpoints.
        return Array.from(new Set([d0, ...out, d1])).sort((a, b) => a - b);
      }
      return out;
    },
    fmt: (v) => fmtSig(v, 3),
  };
}

// ── Domains ─────────────────────────────────────────────

/** Padded data domain from the finite entries of values. */
export function niceDomain(values: number[], padFrac = 0.06): [number, number] {
  const finite = values.filter(Number.isFinite);
  if (finite.length === 0) throw new Error("no finite values for a domain");
  let lo = Math.min(...finite);
  let hi = Math.max(...finite);
  if (lo === hi) {
    const pad = Math.abs(lo) * 0.1 || 1;
    return [lo - pad, hi + pad];
  }
  const pad = (hi - lo) * padFrac;
  return [lo - pad, hi + pad];
}
