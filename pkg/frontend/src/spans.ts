/** Map payload tokens onto raw message text as highlight spans.
 *
 * Offsets always index the original string: words are scanned in the
 * raw text and only the comparison lowercases and stems, so a span's
 * slice is exactly what the reader sees highlighted. Tokens that never
 * occur as words (author markers, stopword stems) simply match nothing.
 */

import { stableStem } from "./stem.js";
import type { TokenWeight } from "./types.js";

export interface HighlightSpan {
  start: number;
  end: number;
  /** The payload token this word matched. */
  token: string;
  /** The token's weight, verbatim from the payload. */
  weight: number;
}

const WORD_RE = /[A-Za-z0-9]+/g;

/** Non-overlapping spans over `text`, in order, one per word whose
 * stemmed lowercase form equals a payload token. */
export function tokenSpans(text: string, tokens: readonly TokenWeight[]): HighlightSpan[] {
  const weightOf = new Map<string, number>();
  for (const { token, weight } of tokens) {
    if (!weightOf.has(token)) weightOf.set(token, weight);
  }
  const spans: HighlightSpan[] = [];
  if (weightOf.size === 0) return spans;
  WORD_RE.lastIndex = 0;
  for (let m = WORD_RE.exec(text); m !== null; m = WORD_RE.exec(text)) {
    const token = stableStem(m[0].toLowerCase());
    const weight = weightOf.get(token);
    if (weight !== undefined) {
      spans.push({ start: m.index, end: m.index + m[0].length, token, weight });
    }
  }
  return spans;
}

/** Split `text` into plain and highlighted segments covering it exactly. */
export function segments(
  text: string,
  spans: readonly HighlightSpan[],
): Array<{ text: string; span: HighlightSpan | null }> {
  const out: Array<{ text: string; span: HighlightSpan | null }> = [];
  let cursor = 0;
  for (const span of spans) {
    if (span.start > cursor) out.push({ text: text.slice(cursor, span.start), span: null });
    out.push({ text: text.slice(span.start, span.end), span });
    cursor = span.end;
  }
  if (cursor < text.length) out.push({ text: text.slice(cursor), span: null });
  return out;
}
