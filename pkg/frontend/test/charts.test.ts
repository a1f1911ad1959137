import { describe, expect, it } from "vitest";

import type { SolveRecord } from "../src/api.js";
import { fmt, maskGridSvg, parallelCoordsSvg, resultTableHtml, scatterSvg } from "../src/charts.js";
import type { CriterionMeta } from "../src/state.js";

const two: CriterionMeta[] = [
  { name: "prey", zMin: 0, zMax: 10 },
  { name: "predator", zMin: 0, zMax: 20 },
];

const five: CriterionMeta[] = ["wtt", "carbon", "species_1", "species_2", "species_3"].map(
  (name) => ({ name, zMin: 0, zMax: 100 }),
);

function record(reference: number[], criteria: number[]): SolveRecord {
  return { token: "t", reference, criteria, status: "optimal", achievement: 0.2,
           decision: {}, timestamp: 0 };
}

describe("scatterSvg", () => {
  it("draws history points, a reference cross and the returned marker", () => {
    const svg = scatterSvg(two, [record([5, 10], [6, 12])], [5, 10], 0);
    expect(svg).toContain("history-point");
    expect(svg).toContain("reference-marker");
    expect(svg).toContain("returned-marker");
    expect(svg).toContain(">prey<");
    expect(svg).toContain(">predator<");
  });

  it("marks the selected history point", () => {
    const svg = scatterSvg(two, [record([1, 1], [2, 2]), record([3, 3], [4, 4])], [1, 1], 1);
    expect(svg).toContain('class="history-point" data-index="0"');
    expect(svg).toContain('class="history-point selected" data-index="1"');
  });
});

describe("parallelCoordsSvg", () => {
  it("draws one axis per criterion plus a dashed aspiration line", () => {
    const svg = parallelCoordsSvg(five, [record([10, 20, 30, 40, 50], [15, 25, 35, 45, 55])],
                                  [10, 20, 30, 40, 50], 0);
    expect((svg.match(/pc-axis/g) ?? []).length).toBe(5);
    expect(svg).toContain("pc-reference");
    expect(svg).toContain("pc-line selected");
  });
});

describe("maskGridSvg", () => {
  it("renders managed cells distinctly and preserves the grid shape", () => {
    const svg = maskGridSvg(["010", "000", "001"]);
    expect((svg.match(/class="cell"/g) ?? []).length).toBe(7);
    expect((svg.match(/class="cell managed"/g) ?? []).length).toBe(2);
  });

  it("handles an empty mask", () => {
    expect(maskGridSvg([])).toBe("<svg></svg>");
  });
});

describe("resultTableHtml", () => {
  it("prints requested, achieved and signed deltas verbatim", () => {
    const html = resultTableHtml(two, record([5, 10], [6.5, 9]));
    expect(html).toContain("<td>5</td>");
    expect(html).toContain("<td>6.5</td>");
    expect(html).toContain('class="delta-up">+1.5');
    expect(html).toContain('class="delta-down">-1');
  });
});

describe("fmt", () => {
  it("keeps ordinary numbers compact and readable", () => {
    expect(fmt(2)).toBe("2");
    expect(fmt(2.5)).toBe("2.5");
    expect(fmt(1 / 3)).toBe("0.33333");
  });

  it("switches to exponent form only at the extremes", () => {
    expect(fmt(123456)).toBe("1.235e+5");
    expect(fmt(0.0001)).toBe("1.000e-4");
    expect(fmt(0)).toBe("0");
  });
});
