// Best-in-row selection for the comparison table.
//
// A slot is highlighted only when it genuinely wins the row: its margin over
// the runner-up must exceed the combined displayed Monte Carlo error of the
// two cells.  Ties within noise get no highlight, and rows need at least two
// defined values to rank.

import { StatDescriptor, statError } from "./format.js";
import type { SimulationReport } from "./types.js";

export function bestSlotIndex(
  row: StatDescriptor,
  reports: (SimulationReport | null)[],
): number | null {
  const entries = reports
    .map((report, index) => {
      if (report === null) return null;
      const value = report.stats[row.key];
      if (value === null) return null;
      const error = statError(row, report.stats, report.distribution) ?? 0;
      return { index, value, error };
    })
    .filter((entry): entry is { index: number; value: number; error: number } => entry !== null);
  if (entries.length < 2) return null;

  const sign = row.betterWhen === "lower" ? 1 : -1;
  entries.sort((a, b) => sign * (a.value - b.value));
  const best = entries[0];
  const runnerUp = entries[1];
  if (best === undefined || runnerUp === undefined) return null;
  const margin = sign * (runnerUp.value - best.value);
  const combinedError = Math.hypot(best.error, runnerUp.error);
  return margin > combinedError ? best.index : null;
}
