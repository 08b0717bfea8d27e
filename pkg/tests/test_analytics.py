import math
from collections import Counter

import numpy as np
import pytest

from odr.analytics import (
    correlate_with_outcome,
    corpus_stats,
    kl_vocabulary,
)
from odr.domain import (
    ClaimType,
    Conversation,
    DomainError,
    Message,
    OutcomeLabel,
    Party,
    Phase,
)
from odr.features import NUMERIC, FeatureColumn, FeatureFamily, FeatureSchema
from odr.text.normalize import normalize
from tests.conftest import make_case, make_claim


def _schema(names):
    return FeatureSchema(
        columns=tuple(
            FeatureColumn(n, FeatureFamily.CLAIM, NUMERIC, f"claim.{n}") for n in names
        ),
        embedding_dim=0,
    )


def _conv(body):
    return Conversation(
        messages=(Message(Party.BUYER, 1, body, Phase.DURING_DISPUTE),)
    )


def _case(i, body, outcome, claim_type=ClaimType.INR):
    return make_case(
        case_id=f"k{i}",
        claim=make_claim(claim_type=claim_type),
        conversation=_conv(body),
        outcome=outcome,
    )


class TestCorrelation:
    def test_column_equal_to_label_has_unit_correlation(self):
        y = np.array([0, 1, 1, 0, 1], dtype=float)
        X = y.reshape(-1, 1).copy()
        missing = np.zeros_like(X, dtype=bool)
        report = correlate_with_outcome(X, missing, y, _schema(["same"]))
        assert report.rows[0].abs_correlation == pytest.approx(1.0)
        assert report.rows[0].sign == 1

    def test_independent_column_has_tiny_correlation(self):
        rng = np.random.default_rng(7)
        n = 100_000
        y = (rng.random(n) < 0.6).astype(float)
        X = rng.normal(size=(n, 1))
        missing = np.zeros_like(X, dtype=bool)
        report = correlate_with_outcome(X, missing, y, _schema(["noise"]))
        assert report.rows[0].abs_correlation < 0.02

    def test_constant_column_flagged_zero(self):
        y = np.array([0.0, 1.0, 0.0, 1.0])
        X = np.full((4, 1), 3.25)
        missing = np.zeros_like(X, dtype=bool)
        report = correlate_with_outcome(X, missing, y, _schema(["flat"]))
        row = report.rows[0]
        assert row.abs_correlation == 0.0
        assert row.constant
        assert row.sign == 0

    def test_matches_numpy_corrcoef(self):
        rng = np.random.default_rng(11)
        y = (rng.random(300) < 0.5).astype(float)
        X = rng.normal(size=(300, 4)) + y[:, None] * rng.normal(size=4)
        missing = np.zeros_like(X, dtype=bool)
        schema = _schema(["a", "b", "c", "d"])
        report = correlate_with_outcome(X, missing, y, schema)
        by_name = {r.name: r for r in report.rows}
        for j, name in enumerate(schema.names):
            expected = np.corrcoef(X[:, j], y)[0, 1]
            row = by_name[name]
            assert row.abs_correlation == pytest.approx(abs(expected), abs=1e-12)
            assert row.sign == (1 if expected > 0 else -1)

    def test_rows_sorted_by_magnitude(self):
        rng = np.random.default_rng(3)
        y = (rng.random(500) < 0.5).astype(float)
        X = np.column_stack([y + rng.normal(scale=s, size=500) for s in (0.1, 1.0, 5.0)])
        missing = np.zeros_like(X, dtype=bool)
        report = correlate_with_outcome(X, missing, y, _schema(["a", "b", "c"]))
        mags = [r.abs_correlation for r in report.rows]
        assert mags == sorted(mags, reverse=True)

    def test_missing_entries_are_skipped(self):
        y = np.array([0.0, 1.0, 0.0, 1.0, 1.0])
        X = np.array([[0.0], [1.0], [0.0], [1.0], [99.0]])
        missing = np.zeros_like(X, dtype=bool)
        missing[4, 0] = True
        report = correlate_with_outcome(X, missing, y, _schema(["m"]))
        assert report.rows[0].abs_correlation == pytest.approx(1.0)

    def test_single_class_labels_rejected(self):
        X = np.zeros((3, 1))
        with pytest.raises(DomainError):
            correlate_with_outcome(X, np.zeros_like(X, dtype=bool), np.ones(3), _schema(["x"]))


class TestKlVocabulary:
    def _toy(self):
        cases = []
        for i in range(3):
            cases.append(_case(f"s{i}", "stolen porch", OutcomeLabel.SELLER_WINS))
        for i in range(3):
            cases.append(_case(f"b{i}", "tracking porch", OutcomeLabel.BUYER_WINS))
        return cases

    def test_exclusive_term_ranks_first_with_hand_computed_score(self):
        report = kl_vocabulary(self._toy(), alpha=0.5, top_k=10, claim_types=[ClaimType.INR])
        side = report.sections["INR"]["SELLER_WINS"]
        # vocab {porch, stolen, track}: p(stolen|win)=3.5/7.5, p(stolen|lose)=0.5/7.5
        expected = (3.5 / 7.5) * math.log(7.0)
        assert side["unigrams"][0][0] == "stolen"
        assert side["unigrams"][0][1] == pytest.approx(expected, abs=1e-12)
        # bigram space: {porch stolen?, ...} -> "stolen porch" vs "track porch"
        expected_bi = (3.5 / 4.0) * math.log(7.0)
        assert side["bigrams"][0][0] == "stolen porch"
        assert side["bigrams"][0][1] == pytest.approx(expected_bi, abs=1e-12)

    def test_sides_are_disjoint(self):
        report = kl_vocabulary(self._toy(), claim_types=[ClaimType.INR])
        seller = {t for t, _ in report.sections["INR"]["SELLER_WINS"]["unigrams"]}
        buyer = {t for t, _ in report.sections["INR"]["BUYER_WINS"]["unigrams"]}
        assert seller and buyer
        assert not seller & buyer

    def test_identical_class_corpora_score_nothing(self):
        cases = [
            _case("s0", "porch parcel", OutcomeLabel.SELLER_WINS),
            _case("b0", "porch parcel", OutcomeLabel.BUYER_WINS),
        ]
        report = kl_vocabulary(cases, claim_types=[ClaimType.INR])
        for side in report.sections["INR"].values():
            assert side["unigrams"] == []
            assert side["bigrams"] == []

    def test_matches_brute_force_two_pass(self):
        cases = []
        bodies = [
            "box arrived empty and broken",
            "tracking shows no movement at all",
            "the parcel was stolen from my porch",
            "seller shipped fast great communication",
            "refund sent please close this case",
            "item matches the photos exactly",
        ]
        for i, body in enumerate(bodies):
            outcome = OutcomeLabel.SELLER_WINS if i % 2 else OutcomeLabel.BUYER_WINS
            cases.append(_case(i, body, outcome))
        alpha, k = 0.5, 10
        report = kl_vocabulary(cases, alpha=alpha, top_k=k, claim_types=[ClaimType.INR])

        # pass 1: count unigrams per side; pass 2: score over the union
        win, lose = Counter(), Counter()
        for case in cases:
            target = win if case.outcome is OutcomeLabel.SELLER_WINS else lose
            for message in case.conversation.messages:
                target.update(normalize(message.body))
        vocab = set(win) | set(lose)
        w_total = sum(win.values()) + alpha * len(vocab)
        l_total = sum(lose.values()) + alpha * len(vocab)
        scores = {}
        for term in vocab:
            pw = (win[term] + alpha) / w_total
            pl = (lose[term] + alpha) / l_total
            s = pw * math.log(pw / pl)
            if s > 0:
                scores[term] = s
        expected = sorted(scores.items(), key=lambda p: (-p[1], p[0]))[:k]
        assert report.sections["INR"]["SELLER_WINS"]["unigrams"] == expected

    def test_empty_split_error_names_the_split(self):
        cases = [
            _case(0, "hello", OutcomeLabel.SELLER_WINS, claim_type=ClaimType.INR),
            _case(1, "goodbye", OutcomeLabel.BUYER_WINS, claim_type=ClaimType.INR),
        ]
        with pytest.raises(DomainError, match="SNAD"):
            kl_vocabulary(cases)

    def test_single_class_split_rejected(self):
        cases = [_case(i, "hello there", OutcomeLabel.SELLER_WINS) for i in range(3)]
        with pytest.raises(DomainError, match="INR"):
            kl_vocabulary(cases, claim_types=[ClaimType.INR])


class TestCorpusStats:
    def _case_with_messages(self, i, count, outcome=OutcomeLabel.SELLER_WINS, appeals=0):
        messages = tuple(
            Message(Party.BUYER, t, f"message {t}", Phase.DURING_DISPUTE)
            for t in range(count)
        )
        return make_case(
            case_id=f"m{i}",
            claim=make_claim(appeal_count=appeals),
            conversation=Conversation(messages=messages),
            outcome=outcome,
        )

    def test_lower_median(self):
        cases = [
            self._case_with_messages(0, 1),
            self._case_with_messages(1, 4),
            self._case_with_messages(2, 100),
        ]
        stats = corpus_stats(cases)
        assert stats.conversation_median == 4.0
        assert stats.conversation_mean == pytest.approx(35.0)

    def test_even_count_uses_lower_median(self):
        cases = [self._case_with_messages(i, n) for i, n in enumerate([1, 2, 3, 4])]
        assert corpus_stats(cases).conversation_median == 2.0

    def test_empty_corpus_flagged(self):
        stats = corpus_stats([])
        assert stats.empty
        assert stats.n_cases == 0
        assert stats.seller_win_rate == 0.0

    def test_label_counts_and_rate(self):
        cases = [
            self._case_with_messages(0, 2, OutcomeLabel.SELLER_WINS),
            self._case_with_messages(1, 2, OutcomeLabel.SELLER_WINS),
            self._case_with_messages(2, 2, OutcomeLabel.BUYER_WINS),
            make_case(case_id="u", outcome=None),
        ]
        stats = corpus_stats(cases)
        assert (stats.seller_wins, stats.buyer_wins, stats.unlabeled) == (2, 1, 1)
        assert stats.seller_win_rate == pytest.approx(2 / 3)

    def test_appeal_distribution(self):
        cases = [
            self._case_with_messages(i, 1, appeals=a)
            for i, a in enumerate([0, 0, 1, 2, 3, 5])
        ]
        stats = corpus_stats(cases)
        assert stats.appeal_counts == {"0": 2, "1": 1, "2": 1, "3+": 2}
        assert stats.appeal_shares["0"] == pytest.approx(2 / 6)
