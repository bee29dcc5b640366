// App wiring: composer panel, simulation slot, and the comparison grid.
// All numbers on screen come from service reports; this file only moves
// state around and re-renders.

import { ServiceError, SimulationClient, SupersededError } from "./api.js";
import {
  CompositionDraft,
  MIX_KINDS,
  MixKind,
  displayedSumPercent,
  draftFromComposition,
  draftToComposition,
  isLocked,
  setFraction,
  setSize,
  toggleLock,
} from "./composition.js";
import { compareTable, histogramSvg, precisionHint, statsPanel } from "./render.js";
import type { DefaultsDoc, ModelMode, PresetEntry, SimulationReport } from "./types.js";

const DEFAULT_ITERATIONS = 100_000;   // sub-second feedback
const PRECISE_ITERATIONS = 1_000_000; // the "increase precision" re-run
const SLOT_COUNT = 4;

const client = new SimulationClient("");

interface AppState {
  draft: CompositionDraft | null;
  presets: PresetEntry[];
  mode: ModelMode;
  iterations: number;
  seed: number;
  lastReport: SimulationReport | null;
  slots: (SimulationReport | null)[];
  running: boolean;
}

const state: AppState = {
  draft: null,
  presets: [],
  mode: "multi_factor",
  iterations: DEFAULT_ITERATIONS,
  seed: 42,
  lastReport: null,
  slots: new Array(SLOT_COUNT).fill(null),
  running: false,
};

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const KIND_TITLES: Record<MixKind, string> = {
  founder_mix: "Founder types",
  sector_mix: "Sectors",
  geography_mix: "Geographies",
};

function renderMixEditors(): void {
  const host = el<HTMLDivElement>("mix-editors");
  if (!state.draft) {
    host.innerHTML = `<p class="placeholder">Load a preset to start composing.</p>`;
    return;
  }
  const draft = state.draft;
  host.innerHTML = MIX_KINDS.map((kind) => {
    const mix = draft.mixes[kind];
    const rows = Object.entries(mix)
      .map(([group, fraction]) => {
        const locked = isLocked(draft, kind, group);
        return (
          `<div class="mix-row">` +
          `<label class="mix-label">${group}</label>` +
          `<input type="number" min="0" max="100" step="0.5" ` +
          `value="${(fraction * 100).toFixed(1)}" ` +
          `data-kind="${kind}" data-group="${group}" class="mix-input" ` +
          `${locked ? "disabled" : ""}>` +
          `<span class="pct">%</span>` +
          `<label class="lock"><input type="checkbox" class="lock-box" ` +
          `data-kind="${kind}" data-group="${group}" ${locked ? "checked" : ""}>lock</label>` +
          `</div>`
        );
      })
      .join("");
    return (
      `<fieldset class="mix-editor"><legend>${KIND_TITLES[kind]} ` +
      `<span class="mix-sum">(sum ${displayedSumPercent(mix)})</span></legend>${rows}</fieldset>`
    );
  }).join("");

  host.querySelectorAll<HTMLInputElement>(".mix-input").forEach((input) => {
    input.addEventListener("change", () => {
      const kind = input.dataset["kind"] as MixKind;
      const group = input.dataset["group"] ?? "";
      const value = Number(input.value) / 100;
      if (!state.draft) return;
      if (!Number.isFinite(value) || value < 0) {
        input.setCustomValidity("fractions cannot be negative");
        input.reportValidity();
        input.value = ((state.draft.mixes[kind][group] ?? 0) * 100).toFixed(1);
        return;
      }
      input.setCustomValidity("");
      state.draft = setFraction(state.draft, kind, group, value);
      renderMixEditors();
    });
  });
  host.querySelectorAll<HTMLInputElement>(".lock-box").forEach((box) => {
    box.addEventListener("change", () => {
      if (!state.draft) return;
      const kind = box.dataset["kind"] as MixKind;
      state.draft = toggleLock(state.draft, kind, box.dataset["group"] ?? "");
      renderMixEditors();
    });
  });
}

function renderResult(): void {
  const chart = el<HTMLDivElement>("chart");
  const stats = el<HTMLDivElement>("stats");
  if (!state.lastReport) {
    chart.innerHTML = "";
    stats.innerHTML = `<p class="placeholder">Run a simulation to see the distribution.</p>`;
    return;
  }
  chart.innerHTML = histogramSvg(state.lastReport);
  stats.innerHTML = statsPanel(state.lastReport);
}

function renderSlots(): void {
  const bar = el<HTMLDivElement>("slot-buttons");
  bar.innerHTML = state.slots
    .map((slot, i) => {
      const label = slot ? `slot ${i + 1}: ${slot.label}` : `save to slot ${i + 1}`;
      return `<button class="slot-save" data-slot="${i}" ${state.lastReport ? "" : "disabled"}>${label}</button>`;
    })
    .join("");
  bar.querySelectorAll<HTMLButtonElement>(".slot-save").forEach((button) => {
    button.addEventListener("click", () => {
      const index = Number(button.dataset["slot"]);
      state.slots[index] = state.lastReport;
      renderSlots();
      el<HTMLDivElement>("compare").innerHTML = compareTable(state.slots);
    });
  });
  el<HTMLDivElement>("compare").innerHTML = compareTable(state.slots);
}

function showError(message: string | null): void {
  const box = el<HTMLDivElement>("error-box");
  box.textContent = message ?? "";
  box.style.display = message ? "block" : "none";
}

async function run(iterations: number): Promise<void> {
  if (!state.draft) return;
  state.iterations = iterations;
  state.running = true;
  el<HTMLButtonElement>("run").disabled = true;
  showError(null);
  try {
    const report = await client.simulate("composer", {
      label: state.draft.label,
      composition: draftToComposition(state.draft),
      mode: state.mode,
      iterations,
      seed: state.seed,
    });
    state.lastReport = report;
    renderResult();
    renderSlots();
  } catch (error) {
    if (error instanceof SupersededError) return; // a newer run owns the slot
    state.lastReport = null;
    renderResult(); // no stale chart behind an error message
    if (error instanceof ServiceError && error.status === 422) {
      showError(
        `Calibration infeasible: ${error.message} ` +
          `(the requested average pair correlation cannot be reached for this universe)`,
      );
    } else if (error instanceof ServiceError) {
      showError(`${error.error}: ${error.message}`);
    } else {
      showError(`request failed: ${String(error)}`);
    }
  } finally {
    state.running = false;
    el<HTMLButtonElement>("run").disabled = false;
  }
}

function loadPreset(preset: PresetEntry): void {
  state.draft = draftFromComposition(preset.label, preset.composition);
  el<HTMLInputElement>("size").value = String(state.draft.size);
  renderMixEditors();
}

async function boot(): Promise<void> {
  let defaults: DefaultsDoc;
  try {
    defaults = await client.defaults();
  } catch (error) {
    showError(`cannot reach the simulation service: ${String(error)}`);
    return;
  }
  state.presets = defaults.compositions;
  const presetBar = el<HTMLDivElement>("presets");
  presetBar.innerHTML = state.presets
    .map((p) => `<button class="preset" data-label="${p.label}">${p.label}</button>`)
    .join("");
  presetBar.querySelectorAll<HTMLButtonElement>(".preset").forEach((button) => {
    button.addEventListener("click", () => {
      const preset = state.presets.find((p) => p.label === button.dataset["label"]);
      if (preset) loadPreset(preset);
    });
  });

  el<HTMLInputElement>("size").addEventListener("change", (event) => {
    if (!state.draft) return;
    const input = event.target as HTMLInputElement;
    state.draft = setSize(state.draft, Number(input.value));
    input.value = String(state.draft.size);
  });
  el<HTMLSelectElement>("mode").addEventListener("change", (event) => {
    state.mode = (event.target as HTMLSelectElement).value as ModelMode;
  });
  el<HTMLInputElement>("seed").addEventListener("change", (event) => {
    state.seed = Number((event.target as HTMLInputElement).value) || 0;
  });
  el<HTMLSpanElement>("precision-hint").textContent = precisionHint(DEFAULT_ITERATIONS);
  el<HTMLButtonElement>("run").addEventListener("click", () => void run(DEFAULT_ITERATIONS));
  el<HTMLButtonElement>("run-precise").addEventListener("click", () => {
    el<HTMLSpanElement>("precision-hint").textContent = precisionHint(PRECISE_ITERATIONS);
    void run(PRECISE_ITERATIONS);
  });

  const first = state.presets.find((p) => p.label === "A") ?? state.presets[0];
  if (first) loadPreset(first);
  renderResult();
  renderSlots();
}

void boot();
