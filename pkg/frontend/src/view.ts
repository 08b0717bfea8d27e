/** Pure views: console state in, a virtual node tree out.
 *
 * Prediction numbers pass through verbatim. Each rendered bar and
 * highlight carries the payload's exact weight in a data attribute;
 * the only arithmetic here is presentation scaling (bar widths and
 * highlight intensity are proportional to |weight| within the payload)
 * and number formatting for labels.
 */

import type { ConsoleState, OpenCase } from "./app.js";
import { segments, tokenSpans } from "./spans.js";
import {
  type CaseDict,
  type PredictionPayload,
  type QueueEntry,
  STATUS_PENDING,
  STATUS_RULED,
} from "./types.js";

export interface VNode {
  tag: string;
  attrs: Record<string, string>;
  on: Record<string, (event: Event) => void>;
  children: Array<VNode | string>;
}

export function h(
  tag: string,
  attrs: Record<string, string> = {},
  children: Array<VNode | string> = [],
  on: Record<string, (event: Event) => void> = {},
): VNode {
  return { tag, attrs, on, children };
}

export interface Actions {
  loadQueue(): void;
  openCase(caseId: string): void;
  closeCase(): void;
  togglePendingOnly(): void;
  setSummaryDraft(text: string): void;
  submitRuling(winner: string): void;
  fileAppeal(party: string): void;
}

const MAX_BARS = 10;

export function renderApp(state: ConsoleState, actions: Actions): VNode {
  const children: Array<VNode | string> = [
    h("header", { class: "topbar" }, [
      h("h1", {}, ["Dispute queue"]),
      h("button", { class: "refresh" }, ["Refresh"], {
        click: () => actions.loadQueue(),
      }),
    ]),
  ];
  if (state.notice !== null) {
    children.push(h("div", { class: "notice", role: "alert" }, [state.notice]));
  }
  children.push(
    h("main", { class: "layout" }, [
      renderQueuePanel(state, actions),
      state.open === null
        ? h("section", { class: "case-panel empty" }, ["Select a case to review."])
        : renderCasePanel(state.open, state, actions),
    ]),
  );
  return h("div", { class: "console" }, children);
}

export function renderQueuePanel(state: ConsoleState, actions: Actions): VNode {
  const entries = state.pendingOnly
    ? state.queue.filter((e) => e.status === STATUS_PENDING)
    : state.queue;
  let body: VNode;
  if (state.queueError !== null) {
    body = h("div", { class: "queue-error" }, [
      state.queueError,
      h("button", { class: "retry" }, ["Retry"], { click: () => actions.loadQueue() }),
    ]);
  } else if (entries.length === 0) {
    body = h("div", { class: "queue-empty" }, [
      state.loadingQueue ? "Loading…" : "No cases waiting.",
      h("button", { class: "retry" }, ["Retry"], { click: () => actions.loadQueue() }),
    ]);
  } else {
    body = h(
      "ul",
      { class: "queue-list" },
      entries.map((entry) => h("li", {}, [renderQueueRow(entry, actions)])),
    );
  }
  return h("section", { class: "queue-panel" }, [
    h("div", { class: "queue-header" }, [
      h("span", {}, [`${entries.length} shown`]),
      h(
        "label",
        { class: "pending-toggle" },
        [
          h(
            "input",
            {
              type: "checkbox",
              ...(state.pendingOnly ? { checked: "checked" } : {}),
            },
            [],
            { change: () => actions.togglePendingOnly() },
          ),
          "pending only",
        ],
      ),
    ]),
    body,
  ]);
}

function renderQueueRow(entry: QueueEntry, actions: Actions): VNode {
  const p = entry.p_seller_wins;
  return h(
    "button",
    {
      class: `queue-row band-${entry.band}`,
      "data-case-id": entry.case_id,
      "data-p": p === null ? "" : String(p),
      "data-band": entry.band,
      "data-status": entry.status,
    },
    [
      h("span", { class: "queue-id" }, [entry.case_id]),
      h("span", { class: "queue-p" }, [p === null ? "unscored" : `${(p * 100).toFixed(1)}%`]),
      h("span", { class: "queue-status" }, [entry.status]),
    ],
    { click: () => actions.openCase(entry.case_id) },
  );
}

export function renderCasePanel(open: OpenCase, state: ConsoleState, actions: Actions): VNode {
  const view = open.view;
  const children: Array<VNode | string> = [
    renderCaseHeader(view.case),
    renderPrediction(open),
    renderThread(view.case, open.prediction),
    renderRulingControls(view.status, state, actions),
    renderAppealHistory(view.appeal_count, view.appeals, view.winner, view.ruling_summary),
  ];
  return h(
    "section",
    { class: "case-panel", "data-status": view.status, "data-case-id": view.case.case_id },
    children,
  );
}

function renderCaseHeader(c: CaseDict): VNode {
  const price = `$${(c.transaction.item_price_cents / 100).toFixed(2)}`;
  return h("div", { class: "case-header" }, [
    h("h2", {}, [c.case_id]),
    h("dl", { class: "case-facts" }, [
      fact("Claim", c.claim.claim_type),
      fact("Price", price),
      fact("Seller", `${c.seller.seller_type}, ${c.seller.country}`),
      fact("Buyer", c.buyer.country),
      fact("Tracking", c.transaction.shipping_tracking_present ? "present" : "none"),
      fact("First escalated by", c.claim.first_escalating_party),
    ]),
  ]);
}

function fact(label: string, value: string): VNode {
  return h("div", { class: "fact" }, [h("dt", {}, [label]), h("dd", {}, [value])]);
}

function renderPrediction(open: OpenCase): VNode {
  if (open.prediction === null) {
    return h("div", { class: "prediction missing" }, [
      open.predictionError ?? "Prediction pending…",
    ]);
  }
  const payload = open.prediction;
  return h("div", { class: "prediction" }, [
    renderGauge(payload),
    renderContributionBars(payload),
  ]);
}

export function renderGauge(payload: PredictionPayload): VNode {
  const p = payload.p_seller_wins;
  return h(
    "div",
    { class: "gauge", "data-p": String(p), "data-model-version": payload.model_version },
    [
      h("div", { class: "gauge-fill", style: `width:${(p * 100).toFixed(2)}%` }, []),
      h("span", { class: "gauge-label" }, [`seller wins ${(p * 100).toFixed(1)}%`]),
    ],
  );
}

/** Top contribution bars, verbatim from the payload: same order, same
 * weights, at most ten, with the bias shown separately below. */
export function renderContributionBars(payload: PredictionPayload): VNode {
  const shown = payload.contributions.slice(0, MAX_BARS);
  const maxAbs = Math.max(...shown.map((c) => Math.abs(c.weight)), 0) || 1;
  const bars = shown.map((c) =>
    h(
      "div",
      {
        class: `bar-row ${c.weight >= 0 ? "toward-seller" : "toward-buyer"}`,
        "data-feature": c.feature,
        "data-weight": String(c.weight),
        "data-value": c.value === null ? "" : String(c.value),
      },
      [
        h("span", { class: "bar-feature" }, [c.feature]),
        h("div", { class: "bar-track" }, [
          h(
            "div",
            {
              class: "bar-fill",
              style: `width:${((Math.abs(c.weight) / maxAbs) * 100).toFixed(2)}%`,
            },
            [],
          ),
        ]),
        h("span", { class: "bar-weight" }, [c.weight.toFixed(3)]),
      ],
    ),
  );
  return h("div", { class: "contributions" }, [
    h("h3", {}, ["Why"]),
    ...bars,
    h("div", { class: "bias-row", "data-bias": String(payload.bias) }, [
      `baseline ${payload.bias.toFixed(3)}`,
    ]),
  ]);
}

/** The conversation, with payload tokens highlighted where they occur.
 * Highlight opacity scales with |weight| relative to the payload's
 * strongest token; the weight itself is attached verbatim. */
export function renderThread(c: CaseDict, payload: PredictionPayload | null): VNode {
  const tokens = payload?.tokens ?? [];
  const maxAbs = Math.max(...tokens.map((t) => Math.abs(t.weight)), 0) || 1;
  const messages = c.conversation.messages.map((m) => {
    const spans = tokenSpans(m.body, tokens);
    const body = segments(m.body, spans).map((seg) =>
      seg.span === null
        ? seg.text
        : h(
            "mark",
            {
              class: "token-hit",
              "data-token": seg.span.token,
              "data-weight": String(seg.span.weight),
              style: `--intensity:${(Math.abs(seg.span.weight) / maxAbs).toFixed(4)}`,
            },
            [seg.text],
          ),
    );
    return h("li", { class: `message from-${m.author.toLowerCase()}` }, [
      h("div", { class: "message-meta" }, [
        h("span", { class: "author" }, [m.author]),
        h("span", { class: "phase" }, [m.phase]),
        h("time", {}, [new Date(m.timestamp_ms).toISOString()]),
      ]),
      h("p", { class: "message-body" }, body),
    ]);
  });
  return h("div", { class: "thread" }, [
    h("h3", {}, ["Conversation"]),
    messages.length ? h("ul", { class: "messages" }, messages) : h("p", {}, ["No messages."]),
  ]);
}

function renderRulingControls(status: string, state: ConsoleState, actions: Actions): VNode {
  const busy = state.busy;
  if (status === STATUS_RULED) {
    return h("div", { class: "ruling-controls ruled" }, [
      h("h3", {}, ["Appeal"]),
      h(
        "button",
        { class: "appeal-buyer", ...(busy ? { disabled: "disabled" } : {}) },
        ["Appeal as buyer"],
        { click: () => actions.fileAppeal("BUYER") },
      ),
      h(
        "button",
        { class: "appeal-seller", ...(busy ? { disabled: "disabled" } : {}) },
        ["Appeal as seller"],
        { click: () => actions.fileAppeal("SELLER") },
      ),
    ]);
  }
  // Pending and Appealed cases both take a ruling
  return h("div", { class: "ruling-controls" }, [
    h("h3", {}, ["Ruling"]),
    h(
      "textarea",
      { class: "summary", placeholder: "Ruling summary", value: state.summaryDraft },
      [state.summaryDraft],
      {
        input: (ev) => actions.setSummaryDraft((ev.target as HTMLTextAreaElement).value),
      },
    ),
    h(
      "button",
      { class: "rule-seller", ...(busy ? { disabled: "disabled" } : {}) },
      ["Seller wins"],
      { click: () => actions.submitRuling("SELLER_WINS") },
    ),
    h(
      "button",
      { class: "rule-buyer", ...(busy ? { disabled: "disabled" } : {}) },
      ["Buyer wins"],
      { click: () => actions.submitRuling("BUYER_WINS") },
    ),
  ]);
}

function renderAppealHistory(
  count: number,
  appeals: readonly string[],
  winner: string | null,
  summary: string | null,
): VNode {
  const children: Array<VNode | string> = [h("h3", {}, ["History"])];
  if (winner !== null) {
    children.push(
      h("p", { class: "current-ruling", "data-winner": winner }, [
        `Current ruling: ${winner}${summary ? ` (${summary})` : ""}`,
      ]),
    );
  }
  children.push(h("p", { class: "appeal-count", "data-count": String(count) }, [
    `${count} appeal${count === 1 ? "" : "s"} on record`,
  ]));
  if (appeals.length > 0) {
    children.push(
      h(
        "ol",
        { class: "appeal-list" },
        appeals.map((by) => h("li", { "data-by": by }, [`appealed by ${by}`])),
      ),
    );
  }
  return h("div", { class: "appeal-history" }, children);
}

/** Walk a rendered tree, collecting nodes that satisfy a predicate. */
export function collect(root: VNode, match: (node: VNode) => boolean): VNode[] {
  const found: VNode[] = [];
  const walk = (node: VNode | string): void => {
    if (typeof node === "string") return;
    if (match(node)) found.push(node);
    node.children.forEach(walk);
  };
  walk(root);
  return found;
}

/** Concatenate the text content of a rendered tree. */
export function textOf(node: VNode | string): string {
  if (typeof node === "string") return node;
  return node.children.map(textOf).join("");
}
