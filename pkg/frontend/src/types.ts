/** Wire types, mirroring the service JSON field for field.
 *
 * The console renders these verbatim; nothing here is recomputed on the
 * client, so the shapes must stay in lockstep with the service.
 */

export interface MessageDict {
  author: string;
  timestamp_ms: number;
  body: string;
  phase: string;
}

export interface CaseDict {
  case_id: string;
  claim: {
    claim_type: string;
    first_escalating_party: string;
    recent_escalating_party: string;
    seller_responded: boolean;
    seller_responded_before_escalation: boolean;
    appeal_count: number;
    agent_summary: string;
  };
  transaction: {
    item_price_cents: number;
    category_id: number;
    shipping_tracking_present: boolean;
    auction: boolean;
    transaction_date: string;
  };
  seller: {
    tenure_days: number;
    seller_type: string;
    feedback_score: number | null;
    past_dispute_count: number;
    top_rated: boolean;
    account_confirmed: boolean;
    country: string;
    site_locale: string;
    info_last_modified_days_ago: number | null;
    credit_card_on_file: boolean;
    transaction_volume: number | null;
  };
  buyer: {
    tenure_days: number;
    past_dispute_count_last_year: number;
    country: string;
    anonymous_email: boolean;
    tax_status: string;
    transaction_volume: number | null;
  };
  conversation: { messages: MessageDict[] };
  outcome: string | null;
}

export interface Contribution {
  feature: string;
  value: number | null;
  weight: number;
}

export interface TokenWeight {
  token: string;
  weight: number;
}

/** GET /cases/{id}/prediction */
export interface PredictionPayload {
  model_version: string;
  case_id: string;
  p_seller_wins: number;
  bias: number;
  contributions: Contribution[];
  tokens: TokenWeight[];
  neutral_text: boolean;
}

/** GET /cases/{id}; also returned by ruling and appeal posts. */
export interface CaseView {
  case: CaseDict;
  status: string;
  winner: string | null;
  ruling_summary: string | null;
  appeal_count: number;
  appeals: string[];
  predictions: Record<string, Omit<PredictionPayload, "model_version">>;
}

/** One row of GET /queue. */
export interface QueueEntry {
  case_id: string;
  p_seller_wins: number | null;
  band: string;
  status: string;
}

export interface ErrorBody {
  code: string;
  message: string;
}

export const STATUS_PENDING = "Pending";
export const STATUS_RULED = "Ruled";
export const STATUS_APPEALED = "Appealed";
