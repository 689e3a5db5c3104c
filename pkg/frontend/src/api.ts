// Minimal typed client for the scoring service. Every number the UI shows
// comes out of this client; nothing is computed locally.

import type { ApiFieldError, ScoreRequest, ScoreResponse } from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly errors: ApiFieldError[],
  ) {
    super(errors.map((e) => `${e.field}: ${e.message}`).join("; ") || `HTTP ${status}`);
  }
}

export class OfflineError extends Error {
  constructor(cause: unknown) {
    super("scoring service unreachable");
    this.cause = cause;
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  async health(): Promise<boolean> {
    try {
      const response = await this.fetchImpl(`${this.baseUrl}/api/health`);
      return response.ok;
    } catch {
      return false;
    }
  }

  async score(request: ScoreRequest): Promise<ScoreResponse> {
    let response: Response;
    try {
      response = await this.fetchImpl(`${this.baseUrl}/api/score`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(request),
      });
    } catch (cause) {
      throw new OfflineError(cause);
    }
    if (!response.ok) {
      let errors: ApiFieldError[] = [];
      try {
        const payload = (await response.json()) as { errors?: ApiFieldError[] };
        errors = payload.errors ?? [];
      } catch {
        // non-JSON error body; status alone will have to do
      }
      throw new ApiError(response.status, errors);
    }
    return (await response.json()) as ScoreResponse;
  }
}
