import { describe, expect, it } from "vitest";

import { fitGrowthExponent, referenceExponents } from "../src/fit.js";

describe("fitGrowthExponent", () => {
  it("recovers the exponent of an exact power law", () => {
    const ts = Array.from({ length: 10 }, (_, i) => i);
    const rs = ts.map((t) => (1 + t) ** 2);
    const fit = fitGrowthExponent(ts, rs)!;
    expect(fit.b).toBeCloseTo(2.0, 10);
    expect(Math.abs(fit.b - 2.0)).toBeLessThan(0.01);
  });

  it("returns zero for a constant series", () => {
    const ts = Array.from({ length: 12 }, (_, i) => i);
    const fit = fitGrowthExponent(
      ts,
      ts.map(() => 5),
    )!;
    expect(Math.abs(fit.b)).toBeLessThan(1e-12);
  });

  it("needs at least five late samples", () => {
    expect(fitGrowthExponent([0, 1, 2, 3], [1, 2, 3, 4])).toBeNull();
  });

  it("uses the last half of the samples", () => {
    const ts = Array.from({ length: 20 }, (_, i) => i);
    const fit = fitGrowthExponent(
      ts,
      ts.map((t) => (1 + t) ** 3),
    )!;
    expect(fit.tA).toBe(10);
    expect(fit.b).toBeCloseTo(3.0, 8);
  });
});

describe("referenceExponents", () => {
  it("maps the recorded lower exponent back to the dimension", () => {
    expect(referenceExponents(0.75)).toMatchObject({ dim: 3, upper: 4 });
    expect(referenceExponents(2 / 3)).toMatchObject({ dim: 4, upper: null });
    expect(referenceExponents(5 / 13)).toMatchObject({ dim: 5 });
  });

  it("degrades gracefully without verdicts", () => {
    expect(referenceExponents(null).lower).toBeNull();
  });
});
