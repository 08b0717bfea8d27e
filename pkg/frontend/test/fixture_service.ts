/** In-memory stand-in for the dispute-resolution service.
 *
 * Implements the same routes, bodies, status codes, and state machine
 * as the real thing, exposed as a fetch-compatible function, so the
 * console's client and flows can be exercised without a network or a
 * model. Case dicts and prediction payloads come from fixtures captured
 * from the service itself.
 */

import { readFileSync } from "node:fs";

import type { FetchLike } from "../src/api.js";
import type { CaseDict, CaseView, PredictionPayload, QueueEntry } from "../src/types.js";

type StoredPayload = Omit<PredictionPayload, "model_version">;

interface CaseState {
  caseDict: CaseDict;
  status: string;
  winner: string | null;
  rulingSummary: string | null;
  appealCount: number;
  appeals: string[];
  predictions: Record<string, StoredPayload>;
}

export interface FixtureData {
  cases: CaseDict[];
  predictions: Record<string, StoredPayload>;
}

interface InjectedFailure {
  status: number;
  code: string;
  message: string;
}

const WINNERS = new Set(["SELLER_WINS", "BUYER_WINS"]);
const PARTIES = new Set(["BUYER", "SELLER"]);

function json(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

export class FixtureService {
  readonly states = new Map<string, CaseState>();
  private readonly order: string[] = [];
  private readonly payloads = new Map<string, StoredPayload>();
  private injected: InjectedFailure | null = null;
  modelVersion = "fixture-1";
  token: string | null = null;
  requests: string[] = [];

  constructor(data?: FixtureData) {
    if (data !== undefined) {
      for (const caseDict of data.cases) {
        this.ingest(caseDict, data.predictions[caseDict.case_id]);
      }
    }
  }

  ingest(caseDict: CaseDict, payload?: StoredPayload): void {
    if (this.states.has(caseDict.case_id)) {
      throw new Error(`duplicate case ${caseDict.case_id}`);
    }
    this.states.set(caseDict.case_id, {
      caseDict,
      status: "Pending",
      winner: null,
      rulingSummary: null,
      appealCount: caseDict.claim.appeal_count,
      appeals: [],
      predictions: {},
    });
    this.order.push(caseDict.case_id);
    if (payload !== undefined) this.payloads.set(caseDict.case_id, payload);
  }

  /** Another arbitrator beat the console to it. */
  rule(caseId: string, winner: string, summary: string): void {
    const state = this.states.get(caseId);
    if (state === undefined || state.status === "Ruled") {
      throw new Error(`cannot rule ${caseId}`);
    }
    state.status = "Ruled";
    state.winner = winner;
    state.rulingSummary = summary;
  }

  /** Make the next request fail with the given error, once. */
  failNextWith(status: number, code: string, message: string): void {
    this.injected = { status, code, message };
  }

  private view(state: CaseState): CaseView {
    return {
      case: state.caseDict,
      status: state.status,
      winner: state.winner,
      ruling_summary: state.rulingSummary,
      appeal_count: state.appealCount,
      appeals: [...state.appeals],
      predictions: JSON.parse(JSON.stringify(state.predictions)) as Record<
        string,
        StoredPayload
      >,
    };
  }

  private latestP(state: CaseState): number | null {
    const current = state.predictions[this.modelVersion];
    if (current !== undefined) return current.p_seller_wins;
    const versions = Object.keys(state.predictions);
    const last = versions[versions.length - 1];
    return last === undefined ? null : state.predictions[last]!.p_seller_wins;
  }

  private band(p: number | null): string {
    if (p === null) return "unscored";
    const certainty = Math.abs(p - 0.5);
    if (certainty >= 0.25) return "high";
    if (certainty >= 0.1) return "medium";
    return "low";
  }

  private queueEntries(limit: number | null): QueueEntry[] {
    const rows = this.order.map((caseId) => {
      const state = this.states.get(caseId)!;
      const p = this.latestP(state);
      return { case_id: caseId, p_seller_wins: p, band: this.band(p), status: state.status };
    });
    rows.sort((a, b) => {
      const aNull = a.p_seller_wins === null ? 1 : 0;
      const bNull = b.p_seller_wins === null ? 1 : 0;
      if (aNull !== bNull) return aNull - bNull;
      if (aNull === 1) return 0;
      return (
        Math.abs(a.p_seller_wins! - 0.5) - Math.abs(b.p_seller_wins! - 0.5)
      );
    });
    return limit === null ? rows : rows.slice(0, limit);
  }

  handle: FetchLike = (rawUrl, init) => {
    const url = new URL(rawUrl, "http://fixture");
    const method = (init?.method ?? "GET").toUpperCase();
    this.requests.push(`${method} ${url.pathname}`);

    if (this.injected !== null) {
      const fail = this.injected;
      this.injected = null;
      return Promise.resolve(
        json(fail.status, { code: fail.code, message: fail.message }),
      );
    }

    if (url.pathname !== "/healthz" && this.token !== null) {
      const headers = new Headers(init?.headers);
      if (headers.get("authorization") !== `Bearer ${this.token}`) {
        return Promise.resolve(
          json(401, { code: "unauthorized", message: "missing or bad token" }),
        );
      }
    }
    return Promise.resolve(this.route(url, method, init));
  };

  private route(url: URL, method: string, init?: RequestInit): Response {
    if (method === "GET" && url.pathname === "/healthz") {
      return json(200, { status: "ok", cases: this.states.size, model_loaded: true });
    }
    if (method === "GET" && url.pathname === "/queue") {
      const raw = url.searchParams.get("limit");
      return json(200, { entries: this.queueEntries(raw === null ? null : Number(raw)) });
    }

    const parts = url.pathname.split("/").filter((p) => p.length > 0);
    if (parts[0] !== "cases") {
      return json(404, { code: "not_found", message: `no route ${url.pathname}` });
    }

    if (method === "POST" && parts.length === 1) {
      const caseDict = JSON.parse(String(init?.body ?? "{}")) as CaseDict;
      if (caseDict.outcome !== null) {
        return json(400, { code: "invalid_request", message: "live cases are unresolved" });
      }
      if (this.states.has(caseDict.case_id)) {
        return json(409, { code: "conflict", message: `case ${caseDict.case_id} exists` });
      }
      this.ingest(caseDict);
      return json(201, { case_id: caseDict.case_id });
    }

    const caseId = decodeURIComponent(parts[1] ?? "");
    const state = this.states.get(caseId);
    if (state === undefined) {
      return json(404, { code: "not_found", message: `no case ${caseId}` });
    }

    if (method === "GET" && parts.length === 2) {
      return json(200, this.view(state));
    }

    if (method === "GET" && parts[2] === "prediction") {
      let stored = state.predictions[this.modelVersion];
      if (stored === undefined) {
        const payload = this.payloads.get(caseId);
        if (payload === undefined) {
          return json(503, { code: "model_not_ready", message: "no model is loaded" });
        }
        stored = payload;
        state.predictions[this.modelVersion] = payload;
      }
      return json(200, { model_version: this.modelVersion, ...stored });
    }

    if (method === "POST" && parts[2] === "ruling") {
      const body = JSON.parse(String(init?.body ?? "{}")) as {
        winner?: string;
        summary?: string;
      };
      if (body.winner === undefined || !WINNERS.has(body.winner)) {
        return json(400, {
          code: "invalid_request",
          message: `unknown winner ${JSON.stringify(body.winner)}`,
        });
      }
      if (state.status === "Ruled") {
        return json(409, {
          code: "invalid_state",
          message: `case ${caseId} is already ruled; file an appeal first`,
        });
      }
      state.status = "Ruled";
      state.winner = body.winner;
      state.rulingSummary = body.summary ?? "";
      return json(200, this.view(state));
    }

    if (method === "POST" && parts[2] === "appeal") {
      const body = JSON.parse(String(init?.body ?? "{}")) as { party?: string };
      if (body.party === undefined || !PARTIES.has(body.party)) {
        return json(400, {
          code: "invalid_request",
          message: `unknown party ${JSON.stringify(body.party)}`,
        });
      }
      if (state.status !== "Ruled") {
        return json(409, {
          code: "invalid_state",
          message: `case ${caseId} is ${state.status}; only a ruled case can be appealed`,
        });
      }
      state.status = "Appealed";
      state.appealCount += 1;
      state.appeals.push(body.party);
      return json(200, this.view(state));
    }

    return json(404, { code: "not_found", message: `no route ${url.pathname}` });
  }
}

let fixtureCache: FixtureData | null = null;

export function loadFixtures(): FixtureData {
  if (fixtureCache === null) {
    const url = new URL("./fixtures.json", import.meta.url);
    fixtureCache = JSON.parse(readFileSync(url, "utf8")) as FixtureData;
  }
  return fixtureCache;
}
