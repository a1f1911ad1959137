// Client-side session state for the aspiration loop.
//
// History is a read-only mirror of the service's history: the only way it
// grows is a completed service round-trip, and selecting an entry copies
// its reference point back into the sliders without touching the record.

import type { SessionInfo, SolveRecord } from "./api.js";

export interface CriterionMeta {
  name: string;
  zMin: number;
  zMax: number;
}

export interface SliderRange {
  lo: number;
  hi: number;
}

/** Reference points outside the feasible box are legitimate aspirations,
 * so sliders run over the bounds expanded by 10% of each span. */
export function sliderRange(meta: CriterionMeta): SliderRange {
  const span = meta.zMax - meta.zMin;
  const pad = 0.1 * span;
  return { lo: meta.zMin - pad, hi: meta.zMax + pad };
}

export function clamp(value: number, range: SliderRange): number {
  return Math.min(range.hi, Math.max(range.lo, value));
}

export function criteriaFromSession(info: SessionInfo): CriterionMeta[] {
  return info.criteria.map((name, j) => ({
    name,
    zMin: info.bounds.z_min[j],
    zMax: info.bounds.z_max[j],
  }));
}

export class SessionState {
  readonly sessionId: string;
  readonly kind: string;
  readonly criteria: CriterionMeta[];
  readonly sliders: number[];
  history: SolveRecord[] = [];
  selected: number | null = null;
  pending = false;
  pendingToken: string | null = null;

  constructor(info: SessionInfo) {
    this.sessionId = info.id;
    this.kind = info.kind ?? "model";
    this.criteria = criteriaFromSession(info);
    // starting aspiration: the midpoint of every criterion's range
    this.sliders = this.criteria.map((m) => (m.zMin + m.zMax) / 2);
  }

  setSlider(index: number, value: number): number {
    const clamped = clamp(value, sliderRange(this.criteria[index]));
    this.sliders[index] = clamped;
    return clamped;
  }

  referencePoint(): number[] {
    return [...this.sliders];
  }

  /** One in-flight solve per session; returns false when one is running. */
  beginSolve(): boolean {
    if (this.pending) return false;
    this.pending = true;
    this.pendingToken = null;
    return true;
  }

  markPending(token: string): void {
    this.pendingToken = token;
  }

  completeSolve(record: SolveRecord): void {
    this.history = [...this.history, record];
    this.selected = this.history.length - 1;
    this.pending = false;
    this.pendingToken = null;
  }

  failSolve(): void {
    this.pending = false;
    this.pendingToken = null;
  }

  replaceHistory(records: SolveRecord[]): void {
    this.history = [...records];
    this.selected = records.length ? records.length - 1 : null;
  }

  /** Restore the sliders to a past entry's reference point. */
  select(index: number): void {
    if (index < 0 || index >= this.history.length) return;
    this.selected = index;
    const reference = this.history[index].reference;
    reference.forEach((value, j) => this.setSlider(j, value));
  }

  /** Achieved-minus-requested per criterion, straight off the payload. */
  deltas(record: SolveRecord): number[] {
    return record.criteria.map((value, j) => value - record.reference[j]);
  }
}
