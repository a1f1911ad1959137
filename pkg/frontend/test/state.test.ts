import { describe, expect, it } from "vitest";

import type { SessionInfo, SolveRecord } from "../src/api.js";
import { SessionState, clamp, criteriaFromSession, sliderRange } from "../src/state.js";

const info: SessionInfo = {
  id: "s1",
  criteria: ["f0", "f1"],
  bounds: { z_min: [0, 10], z_max: [2, 30], lambdas: [0.5, 0.05] },
  kind: "mdp",
};

function record(reference: number[], criteria: number[], token = "t"): SolveRecord {
  return {
    token,
    reference,
    criteria,
    status: "optimal",
    achievement: 0.1,
    decision: {},
    timestamp: 1,
  };
}

describe("slider ranges", () => {
  it("expand the bounds by 10% of the span on both sides", () => {
    const metas = criteriaFromSession(info);
    expect(sliderRange(metas[0])).toEqual({ lo: -0.2, hi: 2.2 });
    expect(sliderRange(metas[1])).toEqual({ lo: 8, hi: 32 });
  });

  it("clamp values into the expanded range", () => {
    const range = { lo: -0.2, hi: 2.2 };
    expect(clamp(5, range)).toBe(2.2);
    expect(clamp(-3, range)).toBe(-0.2);
    expect(clamp(1.5, range)).toBe(1.5);
  });
});

describe("SessionState", () => {
  it("starts at the midpoint aspiration", () => {
    const st = new SessionState(info);
    expect(st.sliders).toEqual([1, 20]);
  });

  it("setSlider clamps to the expanded range", () => {
    const st = new SessionState(info);
    expect(st.setSlider(0, 99)).toBe(2.2);
    expect(st.setSlider(1, -99)).toBe(8);
    expect(st.sliders).toEqual([2.2, 8]);
  });

  it("allows one in-flight solve per session", () => {
    const st = new SessionState(info);
    expect(st.beginSolve()).toBe(true);
    expect(st.beginSolve()).toBe(false);
    st.completeSolve(record([1, 20], [1.5, 22]));
    expect(st.beginSolve()).toBe(true);
    st.failSolve();
    expect(st.pending).toBe(false);
  });

  it("appends history and selects the newest entry", () => {
    const st = new SessionState(info);
    st.beginSolve();
    st.completeSolve(record([1, 20], [1.5, 22], "a"));
    st.beginSolve();
    st.completeSolve(record([0.5, 25], [1.0, 26], "b"));
    expect(st.history).toHaveLength(2);
    expect(st.selected).toBe(1);
  });

  it("history entries are never mutated by selection", () => {
    const st = new SessionState(info);
    st.beginSolve();
    const rec = record([0.5, 25], [1.0, 26]);
    st.completeSolve(rec);
    st.setSlider(0, 2.0);
    st.select(0);
    expect(st.sliders[0]).toBe(0.5);
    expect(st.sliders[1]).toBe(25);
    expect(rec.reference).toEqual([0.5, 25]);
    expect(st.history[0]).toBe(rec);
  });

  it("select restores sliders with clamping applied", () => {
    const st = new SessionState(info);
    st.beginSolve();
    st.completeSolve(record([99, 20], [2, 22])); // out-of-range aspiration stored by service
    st.select(0);
    expect(st.sliders[0]).toBe(2.2); // clamped into the slider range
  });

  it("deltas are achieved minus requested, verbatim", () => {
    const st = new SessionState(info);
    const rec = record([1, 20], [1.25, 19.5]);
    expect(st.deltas(rec)).toEqual([0.25, -0.5]);
  });

  it("replaceHistory mirrors the service history", () => {
    const st = new SessionState(info);
    st.replaceHistory([record([1, 20], [1.5, 22], "x")]);
    expect(st.history).toHaveLength(1);
    expect(st.selected).toBe(0);
  });
});
