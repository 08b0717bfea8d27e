"""Politeness strategy detection over raw message text.

Each of the 21 strategies is a deterministic lexicon or position rule on
lowercase alphanumeric tokens. Stemming and stopword removal are both
skipped here on purpose: most strategies key on exact function words
("please", "you", "i") that the modeling normalizer deliberately drops.

The rules are this repo's own; they are documented per strategy below and
make no claim of replicating any external politeness classifier.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

_WORD_RE = re.compile(r"[a-z0-9]+")

STRATEGIES = (
    "gratitude",
    "apologizing",
    "greeting_direct",
    "greeting_indirect",
    "please_start",
    "please_mid",
    "deference",
    "indicative_request",
    "counterfactual_modal",
    "indicative_modal",
    "direct_question",
    "direct_start",
    "hedges",
    "factuality",
    "positive_lexicon",
    "negative_lexicon",
    "first_person_start",
    "first_person_plural",
    "first_person",
    "second_person",
    "second_person_start",
)

_GRATITUDE = frozenset("thank thanks thankful appreciate appreciated grateful".split())
_APOLOGY = frozenset("sorry apology apologies apologize apologise oops whoops".split())
_GREETING = frozenset("hi hello hey greetings howdy".split())
_DAY_PART = frozenset("morning afternoon evening day".split())
_DEFERENCE = frozenset("great good nice excellent awesome wonderful interesting cool".split())
_REQUEST_VERBS = frozenset(
    "send give refund return ship provide check confirm cancel resend "
    "reply respond update fix tell explain".split()
)
_COUNTERFACTUAL = frozenset(("could", "would"))
_INDICATIVE = frozenset(("can", "will"))
_QUESTION_WORDS = frozenset("what why who how when where which".split())
_DIRECT_START = frozenset("so then and but or".split())
_HEDGES = frozenset(
    "maybe perhaps possibly probably seems seemed appears suggest suggests "
    "think guess suppose somewhat likely apparently".split()
)
_FACTUALITY = frozenset(
    "really actually honestly truly surely clearly obviously definitely "
    "certainly frankly".split()
)
_POSITIVE = frozenset(
    "good great nice excellent wonderful awesome perfect love happy glad "
    "pleased amazing fantastic helpful kind fine best".split()
)
_NEGATIVE = frozenset(
    "bad terrible awful horrible worst hate angry upset broken damaged "
    "defective useless scam fraud liar lying unacceptable disappointed "
    "disappointing ridiculous waste poor faulty fake rude wrong empty".split()
)
_FIRST = frozenset("i me my mine myself".split())
_FIRST_PLURAL = frozenset("we us our ours ourselves".split())
_SECOND = frozenset("you your yours yourself yourselves".split())


@dataclass(frozen=True)
class PolitenessVector:
    """One boolean per strategy; field order is the canonical report order."""

    gratitude: bool
    apologizing: bool
    greeting_direct: bool
    greeting_indirect: bool
    please_start: bool
    please_mid: bool
    deference: bool
    indicative_request: bool
    counterfactual_modal: bool
    indicative_modal: bool
    direct_question: bool
    direct_start: bool
    hedges: bool
    factuality: bool
    positive_lexicon: bool
    negative_lexicon: bool
    first_person_start: bool
    first_person_plural: bool
    first_person: bool
    second_person: bool
    second_person_start: bool

    def as_tuple(self) -> tuple[bool, ...]:
        return tuple(getattr(self, name) for name in STRATEGIES)

    def to_dict(self) -> dict:
        return {name: getattr(self, name) for name in STRATEGIES}


def words(text: str) -> list[str]:
    """Lowercase alphanumeric word runs, nothing dropped or stemmed."""
    return _WORD_RE.findall(text.casefold())


def _bigram_hit(tokens, firsts, second) -> bool:
    return any(a in firsts and b == second for a, b in zip(tokens, tokens[1:]))


@lru_cache(maxsize=65536)
def detect_politeness(text: str) -> PolitenessVector:
    """Detect the 21 strategies in one message.

    Rules, in field order:
      gratitude            gratitude lexicon word anywhere
      apologizing          apology lexicon word anywhere
      greeting_direct      first word is a greeting
      greeting_indirect    greeting after the start, or "good <day part>"
      please_start         first word is "please"
      please_mid           "please" after the first word
      deference            first word is a praising adjective
      indicative_request   request verb first, or right after leading "please"
      counterfactual_modal "could you" / "would you" anywhere
      indicative_modal     "can you" / "will you" anywhere
      direct_question      first word is a question word
      direct_start         first word is so/then/and/but/or
      hedges               hedge lexicon word anywhere
      factuality           factuality lexicon word anywhere, or "in fact"
      positive_lexicon     positive sentiment word anywhere
      negative_lexicon     negative sentiment word anywhere
      first_person_start   first word is singular first person
      first_person_plural  plural first person anywhere
      first_person         singular first person anywhere
      second_person        second person anywhere
      second_person_start  first word is second person

    The empty message fires nothing.
    """
    tokens = words(text)
    if not tokens:
        return PolitenessVector(*([False] * 21))
    token_set = frozenset(tokens)
    first = tokens[0]
    request_slot = tokens[1] if first == "please" and len(tokens) > 1 else first
    return PolitenessVector(
        gratitude=not token_set.isdisjoint(_GRATITUDE),
        apologizing=not token_set.isdisjoint(_APOLOGY),
        greeting_direct=first in _GREETING,
        greeting_indirect=(
            any(t in _GREETING for t in tokens[1:])
            or any(a == "good" and b in _DAY_PART for a, b in zip(tokens, tokens[1:]))
        ),
        please_start=first == "please",
        please_mid="please" in tokens[1:],
        deference=first in _DEFERENCE,
        indicative_request=request_slot in _REQUEST_VERBS,
        counterfactual_modal=_bigram_hit(tokens, _COUNTERFACTUAL, "you"),
        indicative_modal=_bigram_hit(tokens, _INDICATIVE, "you"),
        direct_question=first in _QUESTION_WORDS,
        direct_start=first in _DIRECT_START,
        hedges=not token_set.isdisjoint(_HEDGES),
        factuality=(
            not token_set.isdisjoint(_FACTUALITY)
            or _bigram_hit(tokens, ("in",), "fact")
        ),
        positive_lexicon=not token_set.isdisjoint(_POSITIVE),
        negative_lexicon=not token_set.isdisjoint(_NEGATIVE),
        first_person_start=first in _FIRST,
        first_person_plural=not token_set.isdisjoint(_FIRST_PLURAL),
        first_person=not token_set.isdisjoint(_FIRST),
        second_person=not token_set.isdisjoint(_SECOND),
        second_person_start=first in _SECOND,
    )
