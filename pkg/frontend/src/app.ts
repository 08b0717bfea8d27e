/** Console state and actions: one arbitrator working the queue.
 *
 * All truth lives in the service; this object holds only what is on
 * screen. Mutations update the screen optimistically, then reconcile
 * against the API response: success replaces the guess with the
 * server's view, a 409 refetches the case and re-presents it, anything
 * else rolls back. Every failure lands in `notice`; nothing is dropped.
 */

import { Api, ApiError } from "./api.js";
import {
  type CaseView,
  type PredictionPayload,
  type QueueEntry,
  STATUS_APPEALED,
  STATUS_PENDING,
  STATUS_RULED,
} from "./types.js";

export interface OpenCase {
  view: CaseView;
  prediction: PredictionPayload | null;
  predictionError: string | null;
}

export interface ConsoleState {
  queue: QueueEntry[];
  queueLoaded: boolean;
  loadingQueue: boolean;
  queueError: string | null;
  pendingOnly: boolean;
  open: OpenCase | null;
  summaryDraft: string;
  busy: boolean;
  notice: string | null;
}

function freshState(): ConsoleState {
  return {
    queue: [],
    queueLoaded: false,
    loadingQueue: false,
    queueError: null,
    pendingOnly: true,
    open: null,
    summaryDraft: "",
    busy: false,
    notice: null,
  };
}

function describe(err: unknown): string {
  if (err instanceof ApiError) return `${err.code}: ${err.message}`;
  return String(err);
}

export class ConsoleApp {
  state: ConsoleState = freshState();

  constructor(
    private readonly api: Api,
    private readonly onChange: (state: ConsoleState) => void = () => {},
  ) {}

  private emit(): void {
    this.onChange(this.state);
  }

  /** Queue rows in server order (most uncertain first), optionally
   * narrowed to cases still awaiting a ruling. */
  visibleQueue(): QueueEntry[] {
    if (!this.state.pendingOnly) return this.state.queue;
    return this.state.queue.filter((e) => e.status === STATUS_PENDING);
  }

  togglePendingOnly(): void {
    this.state.pendingOnly = !this.state.pendingOnly;
    this.emit();
  }

  setSummaryDraft(text: string): void {
    this.state.summaryDraft = text;
    this.emit();
  }

  async loadQueue(): Promise<void> {
    this.state.loadingQueue = true;
    this.state.queueError = null;
    this.emit();
    try {
      this.state.queue = await this.api.fetchQueue();
      this.state.queueLoaded = true;
    } catch (err) {
      this.state.queueError = describe(err);
    } finally {
      this.state.loadingQueue = false;
      this.emit();
    }
  }

  async openCase(caseId: string): Promise<void> {
    try {
      const view = await this.api.fetchCase(caseId);
      this.state.open = { view, prediction: null, predictionError: null };
      this.state.summaryDraft = "";
      this.state.notice = null;
      this.emit();
    } catch (err) {
      this.state.notice = describe(err);
      this.emit();
      return;
    }
    // the case is reviewable even when the model is not
    try {
      this.state.open.prediction = await this.api.fetchPrediction(caseId);
    } catch (err) {
      this.state.open.predictionError = describe(err);
    }
    this.emit();
  }

  closeCase(): void {
    this.state.open = null;
    this.state.summaryDraft = "";
    this.emit();
  }

  private async refreshOpenCase(caseId: string): Promise<void> {
    const view = await this.api.fetchCase(caseId);
    let prediction: PredictionPayload | null = null;
    let predictionError: string | null = null;
    try {
      prediction = await this.api.fetchPrediction(caseId);
    } catch (err) {
      predictionError = describe(err);
    }
    this.state.open = { view, prediction, predictionError };
  }

  async submitRuling(winner: string): Promise<void> {
    const open = this.state.open;
    if (open === null || this.state.busy) return;
    const before = open.view;
    const caseId = before.case.case_id;
    const summary = this.state.summaryDraft;
    this.state.busy = true;
    this.state.notice = null;
    open.view = { ...before, status: STATUS_RULED, winner, ruling_summary: summary };
    this.emit();
    try {
      open.view = await this.api.submitRuling(caseId, winner, summary);
      this.state.summaryDraft = "";
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        // someone got there first: show what the case looks like now
        this.state.notice = `ruling not applied (${describe(err)}); showing the latest state`;
        await this.refreshOpenCase(caseId);
      } else {
        open.view = before;
        this.state.notice = describe(err);
      }
    } finally {
      this.state.busy = false;
      this.emit();
    }
    await this.loadQueue();
  }

  async fileAppeal(party: string): Promise<void> {
    const open = this.state.open;
    if (open === null || this.state.busy) return;
    const before = open.view;
    const caseId = before.case.case_id;
    this.state.busy = true;
    this.state.notice = null;
    open.view = {
      ...before,
      status: STATUS_APPEALED,
      appeal_count: before.appeal_count + 1,
      appeals: [...before.appeals, party],
    };
    this.emit();
    try {
      open.view = await this.api.fileAppeal(caseId, party);
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        this.state.notice = `appeal not filed (${describe(err)}); showing the latest state`;
        await this.refreshOpenCase(caseId);
      } else {
        open.view = before;
        this.state.notice = describe(err);
      }
    } finally {
      this.state.busy = false;
      this.emit();
    }
    await this.loadQueue();
  }
}
