// HTML/SVG builders.  Pure string templates so rendering is unit-testable
// without a browser; main.ts assigns the output to innerHTML and wires
// events afterwards.

import {
  COMPARE_ROWS,
  expectedUError,
  formatErrorBadge,
  formatMean,
  formatStat,
  probabilityError,
  statError,
} from "./format.js";
import { bestSlotIndex } from "./highlight.js";
import type { SimulationReport } from "./types.js";

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Bar chart of the unicorn-count distribution, trimmed past the last mass. */
export function histogramSvg(report: SimulationReport, width = 560, height = 220): string {
  const { counts, M } = report.distribution;
  let lastNonZero = 0;
  counts.forEach((c, u) => {
    if (c > 0) lastNonZero = u;
  });
  const support = Math.min(counts.length, lastNonZero + 2);
  const pmf = counts.slice(0, support).map((c) => c / M);
  const peak = Math.max(...pmf, 1e-12);
  const margin = { left: 42, bottom: 26, top: 8, right: 8 };
  const plotW = width - margin.left - margin.right;
  const plotH = height - margin.top - margin.bottom;
  const barW = plotW / support;

  const bars = pmf
    .map((p, u) => {
      const barH = (p / peak) * plotH;
      const x = margin.left + u * barW + barW * 0.08;
      const y = margin.top + plotH - barH;
      return (
        `<rect class="bar" x="${x.toFixed(1)}" y="${y.toFixed(1)}" ` +
        `width="${(barW * 0.84).toFixed(1)}" height="${barH.toFixed(1)}">` +
        `<title>P(U=${u}) = ${(p * 100).toFixed(2)}%</title></rect>`
      );
    })
    .join("");
  const ticks = pmf
    .map((_, u) => {
      if (support > 20 && u % 2 === 1) return "";
      const x = margin.left + u * barW + barW / 2;
      return `<text class="tick" x="${x.toFixed(1)}" y="${height - 8}" text-anchor="middle">${u}</text>`;
    })
    .join("");
  const yLabel = `<text class="tick" x="6" y="${margin.top + 10}">P</text>`;
  const peakLabel = `<text class="tick" x="${margin.left - 4}" y="${margin.top + 10}" text-anchor="end">${(peak * 100).toFixed(0)}%</text>`;
  return (
    `<svg viewBox="0 0 ${width} ${height}" role="img" aria-label="unicorn count distribution">` +
    `${bars}${ticks}${yLabel}${peakLabel}</svg>`
  );
}

/** The run's provenance line: everything needed to reproduce it. */
export function provenanceLine(report: SimulationReport): string {
  const m = report.manifest;
  const sigma = (m.inputs["sigma_sha256"] ?? "").slice(0, 12);
  return (
    `seed ${m.seed} · M ${m.M.toLocaleString("en-US")} · mode ${m.mode} ` +
    `· Σ ${sigma} · engine ${m.engine_version}`
  );
}

/** Stats panel: E[U] plus the six statistics, each with its MC-error badge. */
export function statsPanel(report: SimulationReport): string {
  const dist = report.distribution;
  const rows: string[] = [];
  const expectedBadge = formatErrorBadge(
    { key: "expected_u", title: "E[U]", kind: "mean", betterWhen: "higher", conditionalK: 0 },
    expectedUError(dist),
  );
  rows.push(
    `<div class="stat"><span class="stat-name">E[U]</span>` +
      `<span class="stat-value">${formatMean(report.stats.expected_u)}</span>` +
      `<span class="stat-error">${expectedBadge}</span></div>`,
  );
  for (const row of COMPARE_ROWS) {
    const value = report.stats[row.key];
    const badge = formatErrorBadge(row, statError(row, report.stats, dist));
    rows.push(
      `<div class="stat"><span class="stat-name">${row.title}</span>` +
        `<span class="stat-value">${formatStat(row, value)}</span>` +
        `<span class="stat-error">${badge}</span></div>`,
    );
  }
  return (
    `<div class="stats-panel">${rows.join("")}</div>` +
    `<div class="provenance">${escapeHtml(provenanceLine(report))}</div>`
  );
}

/**
 * Side-by-side comparison of up to four saved slots.  Downside rows mark the
 * lowest value, upside rows the highest, and only when the margin over the
 * runner-up exceeds the combined displayed MC error.
 */
export function compareTable(slots: (SimulationReport | null)[]): string {
  const filled = slots.filter((s): s is SimulationReport => s !== null);
  if (filled.length === 0) {
    return `<p class="placeholder">Save a run into a slot to compare portfolios.</p>`;
  }
  const header =
    `<tr><th>statistic</th>` +
    slots
      .map((slot, i) =>
        slot === null
          ? `<th class="empty">slot ${i + 1}</th>`
          : `<th>${escapeHtml(slot.label)}</th>`,
      )
      .join("") +
    `</tr>`;
  const body = COMPARE_ROWS.map((row) => {
    const best = bestSlotIndex(row, slots);
    const cells = slots
      .map((slot, i) => {
        if (slot === null) return `<td class="empty"></td>`;
        const text = formatStat(row, slot.stats[row.key]);
        const badge = formatErrorBadge(row, statError(row, slot.stats, slot.distribution));
        const klass = i === best ? ` class="best"` : "";
        return `<td${klass}>${text} <span class="stat-error">${badge}</span></td>`;
      })
      .join("");
    return `<tr><th>${row.title}</th>${cells}</tr>`;
  }).join("");
  return `<table class="compare">${header}${body}</table>`;
}

/** Error badge preview used next to the M selector. */
export function precisionHint(iterations: number): string {
  const badge = probabilityError(0.3, iterations);
  return `±${(badge * 100).toFixed(2)}pp on a 30% probability`;
}
