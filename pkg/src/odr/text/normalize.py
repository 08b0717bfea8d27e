"""Text normalization: case folding, tokenization, stopword removal, stemming.

The pipeline is deliberately boring and order-fixed:

1. casefold
2. split into runs of ASCII letters and digits
3. drop stopwords
4. stem to a fixed point
5. drop stopwords and empty strings again

Stemming runs to a fixed point (a single extra pass in the rare cases
where one is needed) and the stopword filter is applied on both sides of
it, so normalizing already-normalized text is a no-op. That property
keeps cached token streams and freshly computed ones interchangeable.
"""

from __future__ import annotations

import re
from functools import lru_cache
from typing import Iterable

from odr.domain import Conversation, Party
from odr.text.stem import stem
from odr.text.stopwords import STOPWORDS

_TOKEN_RE = re.compile(r"[a-z0-9]+")

# Marker tokens injected per message; uppercase plus the colon keeps them
# disjoint from anything normalize() can emit.
BUYER_MARKER = "BUYER:"
SELLER_MARKER = "SELLER:"


@lru_cache(maxsize=65536)
def _stable_stem(token: str) -> str:
    for _ in range(5):
        stemmed = stem(token)
        if stemmed == token:
            return token
        token = stemmed
    return token


def normalize(text: str) -> list[str]:
    """Normalize raw text to a list of lowercase stemmed tokens."""
    tokens = _TOKEN_RE.findall(text.casefold())
    out = []
    for token in tokens:
        if token in STOPWORDS:
            continue
        stemmed = _stable_stem(token)
        if stemmed and stemmed not in STOPWORDS:
            out.append(stemmed)
    return out


def conversation_tokens(
    conversation: Conversation, phases: Iterable | None = None
) -> list[str]:
    """Flatten a conversation into one token stream for the text model.

    Messages stay in timestamp order and each contributes an author
    marker followed by its normalized body. ``phases`` optionally
    restricts which message phases are included.
    """
    wanted = None if phases is None else frozenset(phases)
    out: list[str] = []
    for message in conversation.messages:
        if wanted is not None and message.phase not in wanted:
            continue
        marker = BUYER_MARKER if message.author is Party.BUYER else SELLER_MARKER
        out.append(marker)
        out.extend(normalize(message.body))
    return out
