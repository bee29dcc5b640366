// Service client.  At most one simulation is in flight per slot: starting a
// new run aborts the slot's previous request, and stale responses are
// discarded by a per-slot sequence token, so the UI never renders a
// superseded result.

import type {
  DefaultsDoc,
  ScenarioRequest,
  ServiceErrorBody,
  SimulationReport,
  UniverseDoc,
} from "./types.js";

export class ServiceError extends Error {
  readonly status: number;
  readonly error: string;

  constructor(status: number, body: ServiceErrorBody) {
    super(body.message);
    this.status = status;
    this.error = body.error;
  }
}

export class SupersededError extends Error {
  constructor() {
    super("request superseded by a newer run for the same slot");
  }
}

interface InFlight {
  controller: AbortController;
  token: number;
}

export class SimulationClient {
  private readonly baseUrl: string;
  private readonly inFlight = new Map<string, InFlight>();
  private nextToken = 0;

  constructor(baseUrl = "") {
    this.baseUrl = baseUrl.replace(/\/$/, "");
  }

  async defaults(): Promise<DefaultsDoc> {
    return this.getJson<DefaultsDoc>("/defaults");
  }

  async universe(): Promise<UniverseDoc> {
    return this.getJson<UniverseDoc>("/universe");
  }

  async health(): Promise<{ status: string; engine_version: string }> {
    return this.getJson("/health");
  }

  /** Run one simulation for a slot, cancelling the slot's previous run. */
  async simulate(slot: string, scenario: ScenarioRequest): Promise<SimulationReport> {
    const previous = this.inFlight.get(slot);
    if (previous) previous.controller.abort();

    const controller = new AbortController();
    const token = ++this.nextToken;
    this.inFlight.set(slot, { controller, token });
    try {
      const response = await fetch(`${this.baseUrl}/simulate`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(scenario),
        signal: controller.signal,
      });
      if (this.inFlight.get(slot)?.token !== token) {
        throw new SupersededError();
      }
      if (!response.ok) {
        throw new ServiceError(response.status, (await response.json()) as ServiceErrorBody);
      }
      return (await response.json()) as SimulationReport;
    } catch (error) {
      if (error instanceof DOMException && error.name === "AbortError") {
        throw new SupersededError();
      }
      throw error;
    } finally {
      if (this.inFlight.get(slot)?.token === token) {
        this.inFlight.delete(slot);
      }
    }
  }

  private async getJson<T>(path: string): Promise<T> {
    const response = await fetch(`${this.baseUrl}${path}`);
    if (!response.ok) {
      throw new ServiceError(response.status, (await response.json()) as ServiceErrorBody);
    }
    return (await response.json()) as T;
  }
}
