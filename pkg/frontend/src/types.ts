// Documents exchanged with the simulation service.  Field names mirror the
// service's JSON schema exactly; the UI renders these numbers and never
// recomputes them.

export type ModelMode = "uncorrelated" | "single_factor_sector" | "multi_factor";

export type GroupKind = "sector" | "geography" | "founder_type";

export interface DistributionDoc {
  counts: number[]; // counts[u] = iterations with exactly u unicorns
  M: number;
  N: number;
}

export interface StatsDoc {
  expected_u: number;
  p_u_eq_0: number;
  p_u_le_1: number;
  p_u_le_2: number;
  e_u_given_ge_1: number | null;
  e_u_given_ge_2: number | null;
  e_u_given_ge_3: number | null;
}

export interface RunManifest {
  command: string;
  engine_version: string;
  schema_version: number;
  seed: number;
  M: number;
  mode: string;
  inputs: Record<string, string>;
  outputs: string[];
}

export interface SimulationReport {
  schema_version: number;
  engine_version: string;
  label: string;
  mode: ModelMode;
  distribution: DistributionDoc;
  stats: StatsDoc;
  manifest: RunManifest;
}

export interface CompositionDoc {
  size: number;
  founder_mix: Record<string, number>;
  sector_mix: Record<string, number>;
  geography_mix: Record<string, number>;
}

export interface ScenarioRequest {
  label: string;
  composition: CompositionDoc;
  probabilities?: { homogeneous_p: number } | { rules: unknown };
  mode: ModelMode;
  iterations: number;
  seed: number;
}

export interface PresetEntry {
  label: string;
  composition: CompositionDoc;
}

export interface DefaultsDoc {
  rules: unknown;
  compositions: PresetEntry[];
  max_iterations: number;
  engine_version: string;
}

export interface UniverseGroup {
  label: string;
  kind: GroupKind;
}

export interface UniverseDoc {
  groups: UniverseGroup[];
  sigma: number[][];
  sigma_sha256: string;
}

export interface ServiceErrorBody {
  error: string;
  message: string;
}
