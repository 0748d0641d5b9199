/**
 * Ordinary least squares for fit overlays. Overlays only decorate plots;
 * no physics is recomputed here.
 */

export interface LineFit {
  slope: number;
  intercept: number;
  r2: number;
}

export function leastSquares(xs: number[], ys: number[]): LineFit {
  const n = xs.length;
  if (n < 2 || n !== ys.length) throw new Error(`least squares needs >= 2 paired points, got ${n}`);
  const mx = xs.reduce((a, b) => a + b, 0) / n;
  const my = ys.reduce((a, b) => a + b, 0) / n;
  let sxx = 0;
  let sxy = 0;
  let syy = 0;
  for (let i = 0; i < n; i += 1) {
    const dx = (xs[i] as number) - mx;
    const dy = (ys[i] as number) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx === 0) throw new Error("least squares needs x spread");
  const slope = sxy / sxx;
  const intercept = my - slope * mx;
  const r2 = syy === 0 ? 1 : (sxy * sxy) / (sxx * syy);
  return { slope, intercept, r2 };
}
