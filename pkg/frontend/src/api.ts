/** Typed client for the dispute-resolution service.
 *
 * Every error becomes an ApiError carrying the service's {code, message}
 * body (or a synthesized one when the body isn't parseable), so callers
 * can branch on status and code without touching the transport.
 */

import type { CaseView, ErrorBody, PredictionPayload, QueueEntry } from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export interface ApiConfig {
  baseUrl: string;
  token: string | null;
  fetchFn?: FetchLike;
}

export class Api {
  private readonly fetchFn: FetchLike;

  constructor(private readonly cfg: ApiConfig) {
    this.fetchFn = cfg.fetchFn ?? ((url, init) => fetch(url, init));
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = {};
    if (this.cfg.token !== null) headers["Authorization"] = `Bearer ${this.cfg.token}`;
    if (body !== undefined) headers["Content-Type"] = "application/json";
    let response: Response;
    try {
      response = await this.fetchFn(this.cfg.baseUrl + path, {
        method,
        headers,
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (err) {
      throw new ApiError(0, "unreachable", `service unreachable: ${String(err)}`);
    }
    if (!response.ok) {
      let parsed: ErrorBody = { code: "error", message: `HTTP ${response.status}` };
      try {
        const raw = (await response.json()) as Partial<ErrorBody>;
        if (typeof raw.code === "string" && typeof raw.message === "string") {
          parsed = { code: raw.code, message: raw.message };
        }
      } catch {
        // keep the synthesized body
      }
      throw new ApiError(response.status, parsed.code, parsed.message);
    }
    return (await response.json()) as T;
  }

  async fetchQueue(limit?: number): Promise<QueueEntry[]> {
    const query = limit === undefined ? "" : `?limit=${limit}`;
    const body = await this.request<{ entries: QueueEntry[] }>("GET", `/queue${query}`);
    return body.entries;
  }

  fetchCase(caseId: string): Promise<CaseView> {
    return this.request("GET", `/cases/${encodeURIComponent(caseId)}`);
  }

  fetchPrediction(caseId: string): Promise<PredictionPayload> {
    return this.request("GET", `/cases/${encodeURIComponent(caseId)}/prediction`);
  }

  submitRuling(caseId: string, winner: string, summary: string): Promise<CaseView> {
    return this.request("POST", `/cases/${encodeURIComponent(caseId)}/ruling`, {
      winner,
      summary,
    });
  }

  fileAppeal(caseId: string, party: string): Promise<CaseView> {
    return this.request("POST", `/cases/${encodeURIComponent(caseId)}/appeal`, { party });
  }
}
