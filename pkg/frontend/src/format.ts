// Number formatting and Monte Carlo error badges.  All statistics come from
// the service report; the only arithmetic here is presentation (rounding)
// and the sampling-uncertainty badges derived from the reported histogram.

import type { DistributionDoc, StatsDoc } from "./types.js";

export const UNDEFINED_MARK = "—"; // em dash: conditioning event never occurred

export function formatProbability(value: number | null): string {
  if (value === null) return UNDEFINED_MARK;
  return `${(value * 100).toFixed(1)}%`;
}

export function formatMean(value: number | null): string {
  if (value === null) return UNDEFINED_MARK;
  return value.toFixed(2);
}

/** Standard error of an estimated probability: sqrt(p(1-p)/M). */
export function probabilityError(p: number, iterations: number): number {
  return Math.sqrt(Math.max(p * (1 - p), 0) / iterations);
}

/**
 * Standard error of a reported conditional mean E[U | U >= k], taken from
 * the reported histogram: tail standard deviation over sqrt(tail count).
 * Null when the tail is empty (the statistic itself is undefined).
 */
export function conditionalMeanError(dist: DistributionDoc, k: number): number | null {
  let tail = 0;
  let sum = 0;
  for (let u = k; u < dist.counts.length; u++) {
    tail += dist.counts[u] ?? 0;
    sum += u * (dist.counts[u] ?? 0);
  }
  if (tail === 0) return null;
  const mean = sum / tail;
  let variance = 0;
  for (let u = k; u < dist.counts.length; u++) {
    variance += (dist.counts[u] ?? 0) * (u - mean) ** 2;
  }
  return Math.sqrt(variance / tail / tail);
}

/** Standard error of the reported E[U]: histogram standard deviation / sqrt(M). */
export function expectedUError(dist: DistributionDoc): number {
  return conditionalMeanError(dist, 0) ?? 0;
}

export type StatKey = keyof StatsDoc;

export interface StatDescriptor {
  key: StatKey;
  title: string;
  kind: "probability" | "mean";
  betterWhen: "lower" | "higher";
  conditionalK?: number;
}

/** The six comparison statistics, in display order. */
export const COMPARE_ROWS: StatDescriptor[] = [
  { key: "p_u_eq_0", title: "P(U=0)", kind: "probability", betterWhen: "lower" },
  { key: "p_u_le_1", title: "P(U≤1)", kind: "probability", betterWhen: "lower" },
  { key: "p_u_le_2", title: "P(U≤2)", kind: "probability", betterWhen: "lower" },
  { key: "e_u_given_ge_1", title: "E[U|U≥1]", kind: "mean", betterWhen: "higher", conditionalK: 1 },
  { key: "e_u_given_ge_2", title: "E[U|U≥2]", kind: "mean", betterWhen: "higher", conditionalK: 2 },
  { key: "e_u_given_ge_3", title: "E[U|U≥3]", kind: "mean", betterWhen: "higher", conditionalK: 3 },
];

export function formatStat(row: StatDescriptor, value: number | null): string {
  return row.kind === "probability" ? formatProbability(value) : formatMean(value);
}

/** The displayed MC error for one statistic of one report, in stat units. */
export function statError(
  row: StatDescriptor,
  stats: StatsDoc,
  dist: DistributionDoc,
): number | null {
  const value = stats[row.key];
  if (value === null) return null;
  if (row.kind === "probability") return probabilityError(value, dist.M);
  return conditionalMeanError(dist, row.conditionalK ?? 1);
}

/** Error badge text, e.g. "±0.2pp" for probabilities or "±0.01" for means. */
export function formatErrorBadge(row: StatDescriptor, error: number | null): string {
  if (error === null) return "";
  if (row.kind === "probability") return `±${(error * 100).toFixed(2)}pp`;
  return `±${error.toFixed(3)}`;
}
