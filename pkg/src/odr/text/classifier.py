"""Linear bag-of-n-grams text classifier over averaged embeddings.

Architecture: each feature index owns a learned embedding row, a
document is the mean of its rows, and a softmax over two classes sits
on top. Trained by plain SGD with a linearly decaying learning rate.
Output weights start at zero, so the initial loss is exactly ln 2 per
example regardless of class balance.

Training order is canonicalized (documents are sorted before the seeded
epoch shuffles), so permuting the caller's training set changes nothing.
"""

from __future__ import annotations

import base64
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator

from odr.domain import Conversation, DomainError, OutcomeLabel
from odr.text.hashing import featurize_ngrams
from odr.text.normalize import conversation_tokens


@dataclass(frozen=True)
class TextFeatures:
    predicted_label: OutcomeLabel
    p_seller_wins: float
    embedding: np.ndarray = field(repr=False)
    neutral: bool = False


def _softmax2(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


class TextClassifier(BaseEstimator):
    """Two-class text classifier on hashed unigram/bigram features.

    Parameters
    ----------
    embedding_dim : width of the input embedding rows.
    ngram_max : highest n-gram order; unigrams are vocabulary-indexed,
        higher orders are hashed.
    bucket_count : hash space for n-grams of order >= 2.
    epochs, learning_rate : SGD schedule; the rate decays linearly to 0
        over ``epochs * n_documents`` steps.
    seed : controls initialization and epoch shuffles.
    """

    def __init__(
        self,
        embedding_dim: int = 50,
        ngram_max: int = 2,
        bucket_count: int = 2**20,
        epochs: int = 5,
        learning_rate: float = 0.1,
        seed: int = 0,
    ):
        self.embedding_dim = embedding_dim
        self.ngram_max = ngram_max
        self.bucket_count = bucket_count
        self.epochs = epochs
        self.learning_rate = learning_rate
        self.seed = seed

    def fit(self, documents, labels):
        """Train on token lists and 0/1 labels (1 means seller wins)."""
        y = np.asarray(
            [l.numeric if isinstance(l, OutcomeLabel) else int(l) for l in labels],
            dtype=np.int64,
        )
        if len(documents) != len(y):
            raise DomainError("documents and labels differ in length")
        if len(np.unique(y)) < 2:
            raise DomainError("training corpus must contain both outcomes")

        docs = [tuple(d) for d in documents]
        order = sorted(range(len(docs)), key=lambda i: (docs[i], y[i]))
        docs = [docs[i] for i in order]
        y = y[order]

        vocab: dict[str, int] = {}
        for doc in docs:
            for token in doc:
                if token not in vocab:
                    vocab[token] = len(vocab)
        self.vocab_ = vocab
        self.prior_ = float(y.mean())

        rng = np.random.default_rng(self.seed)
        rows = len(vocab) + self.bucket_count
        bound = 1.0 / self.embedding_dim
        emb = rng.uniform(-bound, bound, size=(rows, self.embedding_dim))
        weights = np.zeros((self.embedding_dim, 2))

        indexed = [
            np.asarray(
                featurize_ngrams(doc, self.ngram_max, self.bucket_count, vocab),
                dtype=np.int64,
            )
            for doc in docs
        ]

        n = len(docs)
        total_steps = self.epochs * n
        step = 0
        for _ in range(self.epochs):
            for i in rng.permutation(n):
                lr = self.learning_rate * (1.0 - step / total_steps)
                step += 1
                idx = indexed[i]
                if idx.size == 0:
                    continue
                v = emb[idx].mean(axis=0)
                p = _softmax2(v @ weights)
                grad_scores = p.copy()
                grad_scores[y[i]] -= 1.0
                grad_v = weights @ grad_scores
                weights -= lr * np.outer(v, grad_scores)
                np.add.at(emb, idx, (-lr / idx.size) * grad_v)

        self.input_embeddings_ = emb
        self.output_weights_ = weights
        return self

    def _indices(self, tokens) -> np.ndarray:
        return np.asarray(
            featurize_ngrams(tokens, self.ngram_max, self.bucket_count, self.vocab_),
            dtype=np.int64,
        )

    def doc_embedding(self, tokens) -> np.ndarray:
        idx = self._indices(tokens)
        if idx.size == 0:
            return np.zeros(self.embedding_dim)
        return self.input_embeddings_[idx].mean(axis=0)

    def predict_proba(self, documents) -> np.ndarray:
        vecs = np.stack([self.doc_embedding(d) for d in documents])
        return _softmax2(vecs @ self.output_weights_)

    def predict(self, documents) -> np.ndarray:
        return (self.predict_proba(documents)[:, 1] >= 0.5).astype(np.int64)

    def features(self, tokens) -> TextFeatures:
        """Per-document features; degenerate input yields the prior, flagged."""
        idx = self._indices(tokens)
        if idx.size == 0:
            p = self.prior_
            embedding = np.zeros(self.embedding_dim)
            neutral = True
        else:
            embedding = self.input_embeddings_[idx].mean(axis=0)
            p = float(_softmax2(embedding @ self.output_weights_)[1])
            neutral = False
        label = OutcomeLabel.SELLER_WINS if p >= 0.5 else OutcomeLabel.BUYER_WINS
        return TextFeatures(
            predicted_label=label,
            p_seller_wins=p,
            embedding=embedding,
            neutral=neutral,
        )

    def loss_and_gradients(self, documents, labels, embeddings=None, weights=None):
        """Mean cross-entropy and its exact gradients at given parameters.

        Exists so finite-difference checks can probe arbitrary parameter
        points; defaults to the fitted parameters.
        """
        emb = self.input_embeddings_ if embeddings is None else embeddings
        w = self.output_weights_ if weights is None else weights
        y = np.asarray(
            [l.numeric if isinstance(l, OutcomeLabel) else int(l) for l in labels],
            dtype=np.int64,
        )
        n = len(documents)
        loss = 0.0
        d_emb = np.zeros_like(emb)
        d_w = np.zeros_like(w)
        for tokens, label in zip(documents, y):
            idx = self._indices(tokens)
            if idx.size == 0:
                loss += np.log(2.0)
                continue
            v = emb[idx].mean(axis=0)
            p = _softmax2(v @ w)
            loss -= np.log(p[label])
            grad_scores = p.copy()
            grad_scores[label] -= 1.0
            d_w += np.outer(v, grad_scores) / n
            np.add.at(d_emb, idx, (w @ grad_scores) / (idx.size * n))
        return loss / n, d_emb, d_w


def predict_text(model: TextClassifier, conversation: Conversation) -> TextFeatures:
    """Features for a whole conversation (all phases, author markers)."""
    return model.features(conversation_tokens(conversation))


def _encode_array(a: np.ndarray) -> dict:
    a = np.ascontiguousarray(a, dtype=np.float64)
    return {
        "shape": list(a.shape),
        "data": base64.b64encode(a.tobytes()).decode("ascii"),
    }


def _decode_array(d: dict) -> np.ndarray:
    a = np.frombuffer(base64.b64decode(d["data"]), dtype=np.float64)
    return a.reshape(d["shape"]).copy()


def text_model_to_dict(model: TextClassifier) -> dict:
    return {
        "embedding_dim": model.embedding_dim,
        "ngram_max": model.ngram_max,
        "bucket_count": model.bucket_count,
        "epochs": model.epochs,
        "learning_rate": model.learning_rate,
        "seed": model.seed,
        "prior": model.prior_,
        "vocab": sorted(model.vocab_, key=model.vocab_.get),
        "input_embeddings": _encode_array(model.input_embeddings_),
        "output_weights": _encode_array(model.output_weights_),
    }


def text_model_from_dict(data: dict) -> TextClassifier:
    model = TextClassifier(
        embedding_dim=data["embedding_dim"],
        ngram_max=data["ngram_max"],
        bucket_count=data["bucket_count"],
        epochs=data["epochs"],
        learning_rate=data["learning_rate"],
        seed=data["seed"],
    )
    model.vocab_ = {token: i for i, token in enumerate(data["vocab"])}
    model.prior_ = data["prior"]
    model.input_embeddings_ = _decode_array(data["input_embeddings"])
    model.output_weights_ = _decode_array(data["output_weights"])
    return model
