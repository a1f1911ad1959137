// SVG builders, kept as pure functions from data to markup so they are
// testable without a DOM. Values are plotted exactly as received; only
// the printed labels are rounded.

import type { SolveRecord } from "./api.js";
import type { CriterionMeta } from "./state.js";
import { sliderRange } from "./state.js";

const W = 460;
const H = 340;
const PAD = 44;

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function fmt(value: number): string {
  if (!Number.isFinite(value)) return String(value);
  const abs = Math.abs(value);
  if (abs !== 0 && (abs >= 1e5 || abs < 1e-3)) return value.toExponential(3);
  return value.toPrecision(5).replace(/\.?0+$/, "");
}

interface Scale {
  (value: number): number;
}

function linear(lo: number, hi: number, outLo: number, outHi: number): Scale {
  const span = hi - lo || 1;
  return (v: number) => outLo + ((v - lo) / span) * (outHi - outLo);
}

/** Criteria-space scatter for bi-objective sessions: history points, the
 * current aspiration marker and the latest returned point. */
export function scatterSvg(
  criteria: CriterionMeta[],
  history: SolveRecord[],
  reference: number[],
  selected: number | null,
): string {
  const [cx, cy] = criteria;
  const rx = sliderRange(cx);
  const ry = sliderRange(cy);
  const sx = linear(rx.lo, rx.hi, PAD, W - PAD);
  const sy = linear(ry.lo, ry.hi, H - PAD, PAD);
  const parts: string[] = [];
  parts.push(`<rect x="0" y="0" width="${W}" height="${H}" class="chart-bg"/>`);
  // feasible-range box
  parts.push(
    `<rect x="${sx(cx.zMin)}" y="${sy(cy.zMax)}" width="${sx(cx.zMax) - sx(cx.zMin)}" ` +
      `height="${sy(cy.zMin) - sy(cy.zMax)}" class="bounds-box"/>`,
  );
  history.forEach((record, i) => {
    const cls = i === selected ? "history-point selected" : "history-point";
    parts.push(
      `<circle cx="${sx(record.criteria[0])}" cy="${sy(record.criteria[1])}" r="5" ` +
        `class="${cls}" data-index="${i}"><title>#${i} (${fmt(record.criteria[0])}, ` +
        `${fmt(record.criteria[1])})</title></circle>`,
    );
  });
  const refX = sx(reference[0]);
  const refY = sy(reference[1]);
  parts.push(
    `<path d="M ${refX - 7} ${refY} L ${refX + 7} ${refY} M ${refX} ${refY - 7} ` +
      `L ${refX} ${refY + 7}" class="reference-marker"/>`,
  );
  const latest = selected !== null ? history[selected] : history[history.length - 1];
  if (latest) {
    parts.push(
      `<circle cx="${sx(latest.criteria[0])}" cy="${sy(latest.criteria[1])}" r="8" ` +
        `class="returned-marker"/>`,
    );
  }
  parts.push(
    `<text x="${W / 2}" y="${H - 8}" class="axis-label">${esc(cx.name)}</text>`,
    `<text x="12" y="${H / 2}" class="axis-label" transform="rotate(-90 12 ${H / 2})">` +
      `${esc(cy.name)}</text>`,
  );
  return `<svg viewBox="0 0 ${W} ${H}" xmlns="http://www.w3.org/2000/svg">${parts.join("")}</svg>`;
}

/** Parallel-coordinates view for three or more criteria: one axis per
 * criterion, history polylines, the aspiration polyline dashed. */
export function parallelCoordsSvg(
  criteria: CriterionMeta[],
  history: SolveRecord[],
  reference: number[],
  selected: number | null,
): string {
  const p = criteria.length;
  const xs = criteria.map((_, j) => PAD + (j * (W - 2 * PAD)) / Math.max(1, p - 1));
  const scales = criteria.map((meta) => {
    const r = sliderRange(meta);
    return linear(r.lo, r.hi, H - PAD, PAD);
  });
  const line = (values: number[]): string =>
    values.map((v, j) => `${xs[j]},${scales[j](v)}`).join(" ");
  const parts: string[] = [];
  parts.push(`<rect x="0" y="0" width="${W}" height="${H}" class="chart-bg"/>`);
  criteria.forEach((meta, j) => {
    parts.push(
      `<line x1="${xs[j]}" y1="${PAD}" x2="${xs[j]}" y2="${H - PAD}" class="pc-axis"/>`,
      `<text x="${xs[j]}" y="${H - PAD + 16}" class="axis-label">${esc(meta.name)}</text>`,
      `<text x="${xs[j]}" y="${PAD - 8}" class="axis-tick">${fmt(meta.zMax)}</text>`,
      `<text x="${xs[j]}" y="${H - PAD + 30}" class="axis-tick">${fmt(meta.zMin)}</text>`,
    );
  });
  history.forEach((record, i) => {
    const cls = i === selected ? "pc-line selected" : "pc-line";
    parts.push(
      `<polyline points="${line(record.criteria)}" class="${cls}" data-index="${i}"/>`,
    );
  });
  parts.push(`<polyline points="${line(reference)}" class="pc-reference"/>`);
  return `<svg viewBox="0 0 ${W} ${H}" xmlns="http://www.w3.org/2000/svg">${parts.join("")}</svg>`;
}

/** Managed-cell heat grid from the service's row-major 0/1 mask. */
export function maskGridSvg(mask: string[]): string {
  const rows = mask.length;
  const cols = rows ? mask[0].length : 0;
  if (!rows || !cols) return "<svg></svg>";
  const cell = Math.min(18, Math.floor(320 / Math.max(rows, cols)));
  const parts: string[] = [];
  for (let i = 0; i < rows; i++) {
    for (let j = 0; j < cols; j++) {
      const managed = mask[i][j] === "1";
      parts.push(
        `<rect x="${j * cell}" y="${i * cell}" width="${cell - 1}" height="${cell - 1}" ` +
          `class="${managed ? "cell managed" : "cell"}"/>`,
      );
    }
  }
  return (
    `<svg viewBox="0 0 ${cols * cell} ${rows * cell}" ` +
    `xmlns="http://www.w3.org/2000/svg">${parts.join("")}</svg>`
  );
}

/** Requested-vs-achieved table rows with per-criterion deltas. */
export function resultTableHtml(
  criteria: CriterionMeta[],
  record: SolveRecord,
): string {
  const rows = criteria
    .map((meta, j) => {
      const requested = record.reference[j];
      const achieved = record.criteria[j];
      const delta = achieved - requested;
      const sign = delta >= 0 ? "delta-up" : "delta-down";
      return (
        `<tr><td>${esc(meta.name)}</td><td>${fmt(requested)}</td>` +
        `<td>${fmt(achieved)}</td><td class="${sign}">${delta >= 0 ? "+" : ""}${fmt(delta)}</td></tr>`
      );
    })
    .join("");
  return (
    `<table class="result-table"><thead><tr><th>criterion</th><th>requested</th>` +
    `<th>achieved</th><th>delta</th></tr></thead><tbody>${rows}</tbody></table>`
  );
}
