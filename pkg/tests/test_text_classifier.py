import math

import numpy as np
import pytest

from odr.domain import Conversation, DomainError, Message, OutcomeLabel, Party, Phase
from odr.text.classifier import (
    TextClassifier,
    predict_text,
    text_model_from_dict,
    text_model_to_dict,
)


def _toy_corpus(n=200, seed=3):
    """Half the docs carry "refund" and are buyer wins."""
    rng = np.random.default_rng(seed)
    fillers = ["item", "arriv", "late", "parcel", "condit", "fine", "thank"]
    docs, labels = [], []
    for i in range(n):
        base = list(rng.choice(fillers, size=4))
        if i % 2 == 0:
            docs.append(["pleas", "refund"] + base)
            labels.append(0)
        else:
            docs.append(base + ["great"])
            labels.append(1)
    return docs, labels


def _small_model(**kw):
    params = dict(embedding_dim=8, bucket_count=64, epochs=5, seed=1)
    params.update(kw)
    return TextClassifier(**params)


def test_initial_loss_is_ln2_exactly():
    docs, labels = _toy_corpus(20)
    model = _small_model(epochs=0).fit(docs, labels)
    loss, _, _ = model.loss_and_gradients(docs, labels)
    assert math.isclose(loss, math.log(2.0), rel_tol=0, abs_tol=1e-12)


def test_planted_token_separates_classes():
    docs, labels = _toy_corpus()
    model = _small_model(epochs=20).fit(docs, labels)
    features = model.features(["pleas", "refund"])
    assert features.p_seller_wins < 0.1
    assert features.predicted_label is OutcomeLabel.BUYER_WINS


def test_probabilities_sum_to_one():
    docs, labels = _toy_corpus(50)
    model = _small_model().fit(docs, labels)
    probs = model.predict_proba(docs)
    assert np.all(np.abs(probs.sum(axis=1) - 1.0) < 1e-9)


def test_single_class_corpus_rejected():
    docs = [["a", "b"], ["c", "d"]]
    with pytest.raises(DomainError):
        _small_model().fit(docs, [1, 1])


def test_training_order_does_not_matter():
    docs, labels = _toy_corpus(80)
    m1 = _small_model().fit(docs, labels)
    m2 = _small_model().fit(docs[::-1], labels[::-1])
    probe = [["refund", "parcel"], ["great", "thank"], []]
    p1 = np.array([m1.features(d).p_seller_wins for d in probe])
    p2 = np.array([m2.features(d).p_seller_wins for d in probe])
    assert np.array_equal(p1, p2)


def test_document_embedding_is_mean_of_rows():
    docs, labels = _toy_corpus(40)
    model = _small_model().fit(docs, labels)
    idx = model._indices(["pleas", "refund"])
    expected = model.input_embeddings_[idx].mean(axis=0)
    assert np.array_equal(model.doc_embedding(["pleas", "refund"]), expected)


def test_empty_document_is_neutral_with_prior():
    docs, labels = _toy_corpus(40)
    model = _small_model().fit(docs, labels)
    features = model.features([])
    assert features.neutral
    assert features.p_seller_wins == pytest.approx(np.mean(labels))
    assert np.array_equal(features.embedding, np.zeros(model.embedding_dim))


def test_gradients_match_central_differences():
    docs, labels = _toy_corpus(5)
    model = _small_model(embedding_dim=4, bucket_count=8, epochs=1).fit(docs, labels)

    def loss_at(emb, w):
        return model.loss_and_gradients(docs, labels, embeddings=emb, weights=w)[0]

    emb = model.input_embeddings_
    w = model.output_weights_
    _, d_emb, d_w = model.loss_and_gradients(docs, labels)
    h = 1e-6

    for index in np.ndindex(w.shape):
        w_hi, w_lo = w.copy(), w.copy()
        w_hi[index] += h
        w_lo[index] -= h
        numeric = (loss_at(emb, w_hi) - loss_at(emb, w_lo)) / (2 * h)
        assert numeric == pytest.approx(d_w[index], rel=1e-4, abs=1e-8)

    touched = sorted({i for d in docs for i in model._indices(d)})
    for row in touched:
        for col in range(emb.shape[1]):
            e_hi, e_lo = emb.copy(), emb.copy()
            e_hi[row, col] += h
            e_lo[row, col] -= h
            numeric = (loss_at(e_hi, w) - loss_at(e_lo, w)) / (2 * h)
            assert numeric == pytest.approx(d_emb[row, col], rel=1e-4, abs=1e-8)


def test_round_trip_preserves_predictions_exactly():
    docs, labels = _toy_corpus(60)
    model = _small_model().fit(docs, labels)
    restored = text_model_from_dict(text_model_to_dict(model))
    probe = docs[:10] + [["unseen", "word"], []]
    for d in probe:
        assert restored.features(d).p_seller_wins == model.features(d).p_seller_wins


def test_serialized_form_is_deterministic():
    docs, labels = _toy_corpus(30)
    m1 = _small_model().fit(docs, labels)
    m2 = _small_model().fit(list(reversed(docs)), list(reversed(labels)))
    assert text_model_to_dict(m1) == text_model_to_dict(m2)


def test_predict_text_runs_on_conversation():
    docs, labels = _toy_corpus(40)
    model = _small_model().fit(docs, labels)
    conv = Conversation(
        messages=(
            Message(Party.BUYER, 1, "Please refund me", Phase.DURING_DISPUTE),
        )
    )
    features = predict_text(model, conv)
    assert 0.0 <= features.p_seller_wins <= 1.0
    assert not features.neutral


def test_weights_stay_finite():
    docs, labels = _toy_corpus(100)
    model = _small_model(epochs=10).fit(docs, labels)
    assert np.all(np.isfinite(model.input_embeddings_))
    assert np.all(np.isfinite(model.output_weights_))
