"""Deterministic n-gram feature indexing.

Unigrams get dense indices from an explicit vocabulary; higher-order
n-grams are hashed with FNV-1a (64-bit) into ``bucket_count`` buckets
that sit after the vocabulary block, so a document's feature indices
live in ``[0, len(vocab) + bucket_count)``. FNV-1a is pinned here byte
for byte to keep indices identical across platforms and Python builds.
"""

from __future__ import annotations

from typing import Mapping, Sequence

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK = 0xFFFFFFFFFFFFFFFF

_SEPARATOR = b"\x1f"


def fnv1a64(data: bytes) -> int:
    """FNV-1a hash of ``data``, 64-bit."""
    h = _FNV_OFFSET
    for byte in data:
        h = ((h ^ byte) * _FNV_PRIME) & _MASK
    return h


def ngram_bucket(tokens: Sequence[str], bucket_count: int) -> int:
    """Bucket index (0-based, before the vocabulary offset is added)."""
    joined = _SEPARATOR.join(t.encode("utf-8") for t in tokens)
    return fnv1a64(joined) % bucket_count


def featurize_ngrams(
    tokens: Sequence[str],
    ngram_max: int,
    bucket_count: int,
    vocab: Mapping[str, int] | None = None,
) -> list[int]:
    """Map a token stream to feature indices.

    With ``vocab`` given, unigram indices come from it and unknown
    unigrams are dropped; without it, a throwaway vocabulary is built
    from the stream in first-appearance order. n-grams for n ≥ 2 are
    always hashed, offset by the vocabulary size.
    """
    if ngram_max < 1:
        raise ValueError("ngram_max must be >= 1")
    if vocab is None:
        vocab = {}
        for token in tokens:
            if token not in vocab:
                vocab[token] = len(vocab)
    offset = len(vocab)
    indices = [vocab[t] for t in tokens if t in vocab]
    for n in range(2, ngram_max + 1):
        for i in range(len(tokens) - n + 1):
            indices.append(offset + ngram_bucket(tokens[i : i + n], bucket_count))
    return indices
