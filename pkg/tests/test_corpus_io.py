import json

import pytest

from odr.corpus_io import (
    CorpusFormatError,
    case_from_dict,
    case_to_dict,
    dumps_case,
    read_corpus,
    read_timelines,
    write_corpus,
    write_timelines,
)
from odr.domain import BuyerTimeline, OutcomeLabel
from tests.conftest import make_case


def test_round_trip_is_field_for_field_identical(sample_case):
    assert case_from_dict(case_to_dict(sample_case)) == sample_case


def test_round_trip_through_file(tmp_path):
    cases = [make_case(case_id=f"c{i}", outcome=OutcomeLabel.SELLER_WINS if i % 2 else OutcomeLabel.BUYER_WINS) for i in range(5)]
    path = tmp_path / "corpus.jsonl"
    write_corpus(cases, path)
    assert read_corpus(path) == cases


def test_writing_twice_gives_identical_bytes(tmp_path):
    cases = [make_case(case_id="a"), make_case(case_id="b", outcome=None)]
    p1, p2 = tmp_path / "one.jsonl", tmp_path / "two.jsonl"
    write_corpus(cases, p1)
    write_corpus(cases, p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_one_line_per_case(tmp_path):
    path = tmp_path / "corpus.jsonl"
    write_corpus([make_case(case_id="a"), make_case(case_id="b")], path)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 2
    assert all(json.loads(line)["case_id"] in {"a", "b"} for line in lines)


def test_empty_file_reads_as_empty_corpus(tmp_path):
    path = tmp_path / "empty.jsonl"
    path.write_text("")
    assert read_corpus(path) == []


def test_duplicate_case_id_is_rejected_by_name(tmp_path):
    path = tmp_path / "dup.jsonl"
    write_corpus([make_case(case_id="dup-7"), make_case(case_id="dup-7")], path)
    with pytest.raises(CorpusFormatError, match="dup-7"):
        read_corpus(path)


def test_malformed_line_error_names_the_line(tmp_path):
    path = tmp_path / "bad.jsonl"
    good = dumps_case(make_case(case_id="ok"))
    path.write_text(good + "\n{not json}\n", encoding="utf-8")
    with pytest.raises(CorpusFormatError, match="line 2"):
        read_corpus(path)


def test_missing_field_error_names_the_line(tmp_path):
    obj = case_to_dict(make_case(case_id="ok"))
    del obj["claim"]["appeal_count"]
    path = tmp_path / "missing.jsonl"
    path.write_text(json.dumps(obj) + "\n", encoding="utf-8")
    with pytest.raises(CorpusFormatError, match="line 1"):
        read_corpus(path)


def test_message_order_preserved(sample_case):
    bodies = [m.body for m in sample_case.conversation.messages]
    round_tripped = case_from_dict(case_to_dict(sample_case))
    assert [m.body for m in round_tripped.conversation.messages] == bodies


def test_outcome_null_round_trips(tmp_path):
    case = make_case(outcome=None)
    path = tmp_path / "c.jsonl"
    write_corpus([case], path)
    assert read_corpus(path)[0].outcome is None


def test_timeline_round_trip(tmp_path):
    tls = [
        BuyerTimeline(buyer_id="b1", weekly_transaction_counts=tuple(range(15)), dispute_week_indices=(8,)),
        BuyerTimeline(buyer_id="b2", weekly_transaction_counts=(0,) * 15, dispute_week_indices=(8,)),
    ]
    path = tmp_path / "tl.jsonl"
    write_timelines(tls, path)
    assert read_timelines(path) == tls
