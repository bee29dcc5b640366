// Composition drafts: the editable state behind the mix sliders.
//
// Editing one group's fraction redistributes the remainder proportionally
// across the *unlocked* groups of the same kind, so every edit leaves the
// mix summing to exactly 1 (the last adjusted group absorbs float dust).

import type { CompositionDoc } from "./types.js";

export type MixKind = "founder_mix" | "sector_mix" | "geography_mix";

export const MIX_KINDS: MixKind[] = ["founder_mix", "sector_mix", "geography_mix"];

export const MIN_SIZE = 1;
export const MAX_SIZE = 200;

export interface CompositionDraft {
  label: string;
  size: number;
  mixes: Record<MixKind, Record<string, number>>;
  locked: Record<MixKind, string[]>;
}

export function draftFromComposition(label: string, doc: CompositionDoc): CompositionDraft {
  return {
    label,
    size: clampSize(doc.size),
    mixes: {
      founder_mix: { ...doc.founder_mix },
      sector_mix: { ...doc.sector_mix },
      geography_mix: { ...doc.geography_mix },
    },
    locked: { founder_mix: [], sector_mix: [], geography_mix: [] },
  };
}

export function draftToComposition(draft: CompositionDraft): CompositionDoc {
  return {
    size: draft.size,
    founder_mix: { ...draft.mixes.founder_mix },
    sector_mix: { ...draft.mixes.sector_mix },
    geography_mix: { ...draft.mixes.geography_mix },
  };
}

export function clampSize(size: number): number {
  return Math.min(MAX_SIZE, Math.max(MIN_SIZE, Math.round(size)));
}

export function setSize(draft: CompositionDraft, size: number): CompositionDraft {
  return { ...draft, size: clampSize(size) };
}

export function isLocked(draft: CompositionDraft, kind: MixKind, group: string): boolean {
  return draft.locked[kind].includes(group);
}

export function toggleLock(draft: CompositionDraft, kind: MixKind, group: string): CompositionDraft {
  const locked = new Set(draft.locked[kind]);
  if (locked.has(group)) {
    locked.delete(group);
  } else {
    locked.add(group);
  }
  return { ...draft, locked: { ...draft.locked, [kind]: [...locked] } };
}

export function mixSum(mix: Record<string, number>): number {
  return Object.values(mix).reduce((total, f) => total + f, 0);
}

/**
 * Set one group's fraction and renormalize its kind back to a sum of 1.
 *
 * Locked groups keep their fractions; the remainder is spread across the
 * other unlocked groups in proportion to their current values (equally when
 * they are all zero).  The requested value is clamped so locked mass still
 * fits.  Negative fractions are rejected.
 */
export function setFraction(
  draft: CompositionDraft,
  kind: MixKind,
  group: string,
  value: number,
): CompositionDraft {
  if (!(group in draft.mixes[kind])) {
    throw new RangeError(`unknown group ${group} in ${kind}`);
  }
  if (isLocked(draft, kind, group)) {
    throw new RangeError(`${group} is locked`);
  }
  if (!Number.isFinite(value) || value < 0) {
    throw new RangeError(`fraction must be a number >= 0, got ${value}`);
  }
  const mix = { ...draft.mixes[kind] };
  const lockedSet = new Set(draft.locked[kind]);
  const lockedMass = Object.entries(mix)
    .filter(([g]) => lockedSet.has(g))
    .reduce((total, [, f]) => total + f, 0);
  const others = Object.keys(mix).filter((g) => g !== group && !lockedSet.has(g));

  const target = Math.min(value, Math.max(0, 1 - lockedMass));
  mix[group] = target;

  const remainder = 1 - lockedMass - target;
  const currentOther = others.reduce((total, g) => total + (mix[g] ?? 0), 0);
  let assigned = 0;
  others.forEach((g, index) => {
    let share: number;
    if (index === others.length - 1) {
      share = remainder - assigned; // last group absorbs residual float dust
    } else if (currentOther > 0) {
      share = (remainder * (mix[g] ?? 0)) / currentOther;
    } else {
      share = remainder / others.length;
    }
    mix[g] = Math.max(0, share);
    assigned += mix[g] ?? 0;
  });
  if (others.length === 0) {
    // nothing can absorb the remainder: clamp the edit itself
    mix[group] = Math.max(0, 1 - lockedMass);
  }
  return { ...draft, mixes: { ...draft.mixes, [kind]: mix } };
}

/** Percentage text for the mix-sum indicator; exact after any edit. */
export function displayedSumPercent(mix: Record<string, number>): string {
  return `${(mixSum(mix) * 100).toFixed(1)}%`;
}
