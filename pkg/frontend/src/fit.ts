/**
 * Late-window growth exponent of R(t) ~ C (1+t)^b.
 *
 * Re-fitted here rather than read from verdicts so the report also works
 * on partial runs whose verdict file is stale or missing.
 */

export interface ExponentFit {
  b: number;
  stderr: number;
  tA: number;
  tB: number;
  nPoints: number;
}

/** Least-squares slope of log R vs log(1+t) over the last half of samples. */
export function fitGrowthExponent(ts: number[], rs: number[]): ExponentFit | null {
  if (ts.length !== rs.length || ts.length === 0) return null;
  const start = Math.floor(ts.length / 2);
  const xs: number[] = [];
  const ys: number[] = [];
  for (let i = start; i < ts.length; i++) {
    if (rs[i] > 0) {
      xs.push(Math.log1p(ts[i]));
      ys.push(Math.log(rs[i]));
    }
  }
  const n = xs.length;
  if (n < 5) return null;
  const mx = xs.reduce((a, b) => a + b, 0) / n;
  const my = ys.reduce((a, b) => a + b, 0) / n;
  let sxx = 0;
  let sxy = 0;
  for (let i = 0; i < n; i++) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx === 0) return null;
  const b = sxy / sxx;
  const a = my - b * mx;
  let ss = 0;
  for (let i = 0; i < n; i++) {
    const r = ys[i] - (a + b * xs[i]);
    ss += r * r;
  }
  const dof = Math.max(n - 2, 1);
  const stderr = Math.sqrt(ss / dof / sxx);
  return { b, stderr, tA: ts[start], tB: ts[ts.length - 1], nPoints: n };
}

/**
 * Reference exponents for annotation. The producer records the asymptotic
 * lower-bound exponent in its verdicts; the dimension is recovered from it.
 */
export interface ReferenceExponents {
  dim: number | null;
  lower: number | null;
  /** power-law upper exponent; null when the bound is exponential-type */
  upper: number | null;
  upperLabel: string;
}

export function referenceExponents(lowerFromVerdicts: number | null): ReferenceExponents {
  if (lowerFromVerdicts === null) {
    return { dim: null, lower: null, upper: null, upperLabel: "" };
  }
  const lower = lowerFromVerdicts;
  let dim: number | null = null;
  if (Math.abs(lower - 3 / 4) < 1e-9) dim = 3;
  else if (Math.abs(lower - 2 / 3) < 1e-9) dim = 4;
  else {
    for (let d = 5; d <= 32; d++) {
      if (Math.abs(lower - d / (d * d - 2 * d - 2)) < 1e-9) {
        dim = d;
        break;
      }
    }
  }
  if (dim === 3) {
    return { dim, lower, upper: 4, upperLabel: "(1+t)^4" };
  }
  if (dim === 4) {
    return { dim, lower, upper: null, upperLabel: "e^{Ct}" };
  }
  return { dim, lower, upper: null, upperLabel: "" };
}
