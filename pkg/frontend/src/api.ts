/** Thin typed client over the decision service's HTTP JSON API. */

import type { JobSnapshot, Scenario, ServiceError } from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public payload: ServiceError,
  ) {
    super(payload.error);
  }
}

async function request<T>(base: string, path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(base + path, {
    headers: { "content-type": "application/json" },
    ...init,
  });
  const payload = await response.json();
  if (!response.ok) {
    throw new ApiError(response.status, payload as ServiceError);
  }
  return payload as T;
}

export class Client {
  constructor(readonly base: string = "") {}

  health(): Promise<{ status: string }> {
    return request(this.base, "/health");
  }

  submitAudit(scenario: Scenario, options: Record<string, unknown>): Promise<{ job_id: string }> {
    return request(this.base, "/audit", {
      method: "POST",
      body: JSON.stringify({ scenario, ...options }),
    });
  }

  submitOptimize(
    scenario: Scenario,
    options: Record<string, unknown>,
  ): Promise<{ job_id: string }> {
    const path = scenario.kind === "batting" ? "/optimize/batting" : "/optimize/bowling";
    return request(this.base, path, {
      method: "POST",
      body: JSON.stringify({ scenario, ...options }),
    });
  }

  job(jobId: string): Promise<JobSnapshot> {
    return request(this.base, `/jobs/${encodeURIComponent(jobId)}`);
  }
}
