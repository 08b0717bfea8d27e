"""Canonical JSONL serialization of dispute corpora.

One case per line, UTF-8, keys sorted, no whitespace padding: the same list of
cases always serializes to the same bytes, and every written corpus reads back
field-for-field identical.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable

from odr.domain import (
    BuyerProfile,
    BuyerTimeline,
    ClaimRecord,
    ClaimType,
    Conversation,
    DisputeCase,
    DomainError,
    Message,
    OutcomeLabel,
    Party,
    Phase,
    SellerProfile,
    SellerType,
    TransactionRecord,
)


class CorpusFormatError(ValueError):
    """A corpus file line could not be decoded into a valid case."""


def case_to_dict(case: DisputeCase) -> dict:
    return {
        "case_id": case.case_id,
        "claim": {
            "claim_type": case.claim.claim_type.value,
            "first_escalating_party": case.claim.first_escalating_party.value,
            "recent_escalating_party": case.claim.recent_escalating_party.value,
            "seller_responded": case.claim.seller_responded,
            "seller_responded_before_escalation": case.claim.seller_responded_before_escalation,
            "appeal_count": case.claim.appeal_count,
            "agent_summary": case.claim.agent_summary,
        },
        "transaction": {
            "item_price_cents": case.transaction.item_price_cents,
            "category_id": case.transaction.category_id,
            "shipping_tracking_present": case.transaction.shipping_tracking_present,
            "auction": case.transaction.auction,
            "transaction_date": case.transaction.transaction_date,
        },
        "seller": {
            "tenure_days": case.seller.tenure_days,
            "seller_type": case.seller.seller_type.value,
            "feedback_score": case.seller.feedback_score,
            "past_dispute_count": case.seller.past_dispute_count,
            "top_rated": case.seller.top_rated,
            "account_confirmed": case.seller.account_confirmed,
            "country": case.seller.country,
            "site_locale": case.seller.site_locale,
            "info_last_modified_days_ago": case.seller.info_last_modified_days_ago,
            "credit_card_on_file": case.seller.credit_card_on_file,
            "transaction_volume": case.seller.transaction_volume,
        },
        "buyer": {
            "tenure_days": case.buyer.tenure_days,
            "past_dispute_count_last_year": case.buyer.past_dispute_count_last_year,
            "country": case.buyer.country,
            "anonymous_email": case.buyer.anonymous_email,
            "tax_status": case.buyer.tax_status,
            "transaction_volume": case.buyer.transaction_volume,
        },
        "conversation": {
            "messages": [
                {
                    "author": m.author.value,
                    "timestamp_ms": m.timestamp_ms,
                    "body": m.body,
                    "phase": m.phase.value,
                }
                for m in case.conversation.messages
            ]
        },
        "outcome": case.outcome.value if case.outcome is not None else None,
    }


def case_from_dict(obj: dict) -> DisputeCase:
    try:
        claim = obj["claim"]
        txn = obj["transaction"]
        seller = obj["seller"]
        buyer = obj["buyer"]
        messages = tuple(
            Message(
                author=Party(m["author"]),
                timestamp_ms=int(m["timestamp_ms"]),
                body=m["body"],
                phase=Phase(m["phase"]),
            )
            for m in obj["conversation"]["messages"]
        )
        outcome = obj.get("outcome")
        return DisputeCase(
            case_id=obj["case_id"],
            claim=ClaimRecord(
                claim_type=ClaimType(claim["claim_type"]),
                first_escalating_party=Party(claim["first_escalating_party"]),
                recent_escalating_party=Party(claim["recent_escalating_party"]),
                seller_responded=bool(claim["seller_responded"]),
                seller_responded_before_escalation=bool(claim["seller_responded_before_escalation"]),
                appeal_count=int(claim["appeal_count"]),
                agent_summary=claim["agent_summary"],
            ),
            transaction=TransactionRecord(
                item_price_cents=int(txn["item_price_cents"]),
                category_id=txn["category_id"],
                shipping_tracking_present=bool(txn["shipping_tracking_present"]),
                auction=bool(txn["auction"]),
                transaction_date=txn["transaction_date"],
            ),
            seller=SellerProfile(
                tenure_days=int(seller["tenure_days"]),
                seller_type=SellerType(seller["seller_type"]),
                feedback_score=int(seller["feedback_score"]),
                past_dispute_count=int(seller["past_dispute_count"]),
                top_rated=bool(seller["top_rated"]),
                account_confirmed=bool(seller["account_confirmed"]),
                country=seller["country"],
                site_locale=seller["site_locale"],
                info_last_modified_days_ago=int(seller["info_last_modified_days_ago"]),
                credit_card_on_file=bool(seller["credit_card_on_file"]),
                transaction_volume=int(seller["transaction_volume"]),
            ),
            buyer=BuyerProfile(
                tenure_days=int(buyer["tenure_days"]),
                past_dispute_count_last_year=int(buyer["past_dispute_count_last_year"]),
                country=buyer["country"],
                anonymous_email=bool(buyer["anonymous_email"]),
                tax_status=buyer["tax_status"],
                transaction_volume=int(buyer["transaction_volume"]),
            ),
            conversation=Conversation(messages=messages),
            outcome=OutcomeLabel(outcome) if outcome is not None else None,
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, DomainError):
            raise
        field = exc.args[0] if isinstance(exc, KeyError) else str(exc)
        raise CorpusFormatError(f"bad case object: {field}") from exc


def dumps_case(case: DisputeCase) -> str:
    return json.dumps(case_to_dict(case), sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def write_corpus(cases: Iterable[DisputeCase], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for case in cases:
            fh.write(dumps_case(case))
            fh.write("\n")


def read_corpus(path: str | Path) -> list[DisputeCase]:
    cases: list[DisputeCase] = []
    seen: set[str] = set()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                case = case_from_dict(obj)
            except (json.JSONDecodeError, CorpusFormatError, DomainError) as exc:
                raise CorpusFormatError(f"line {lineno}: {exc}") from exc
            if case.case_id in seen:
                raise CorpusFormatError(f"line {lineno}: duplicate case_id {case.case_id!r}")
            seen.add(case.case_id)
            cases.append(case)
    return cases


def timeline_to_dict(tl: BuyerTimeline) -> dict:
    return {
        "buyer_id": tl.buyer_id,
        "weekly_transaction_counts": list(tl.weekly_transaction_counts),
        "dispute_week_indices": list(tl.dispute_week_indices),
    }


def write_timelines(timelines: Iterable[BuyerTimeline], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for tl in timelines:
            fh.write(json.dumps(timeline_to_dict(tl), sort_keys=True, separators=(",", ":")))
            fh.write("\n")


def read_timelines(path: str | Path) -> list[BuyerTimeline]:
    out: list[BuyerTimeline] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                out.append(
                    BuyerTimeline(
                        buyer_id=obj["buyer_id"],
                        weekly_transaction_counts=tuple(int(c) for c in obj["weekly_transaction_counts"]),
                        dispute_week_indices=tuple(int(w) for w in obj["dispute_week_indices"]),
                    )
                )
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise CorpusFormatError(f"line {lineno}: {exc}") from exc
    return out
