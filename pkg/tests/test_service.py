"""Event-sourced case store and its HTTP front."""

import math
import threading
from dataclasses import replace

import pytest
from fastapi.testclient import TestClient

from conftest import make_case
from odr.corpus_io import case_to_dict
from odr.domain import Conversation, DomainError, OutcomeLabel, Party
from odr.features import assemble_matrix
from odr.interpret import explanation_payload, path_attribution
from odr.learners import GBDTClassifier
from odr.pipeline import DisputePipeline
from odr.service import (
    EVENT_KINDS,
    CaseStore,
    ConflictError,
    EventLog,
    ModelNotReadyError,
    NotFoundError,
    StateError,
    confidence_band,
    create_app,
)
from odr.synth import GeneratorConfig, generate_corpus
from odr.text import predict_text


@pytest.fixture(scope="module")
def service_pipeline():
    cases, _ = generate_corpus(GeneratorConfig(n_cases=300, seed=11))
    learner = GBDTClassifier(n_trees=10, max_depth=3, learning_rate=0.3, seed=0)
    return DisputePipeline(learner=learner).fit(cases)


@pytest.fixture(scope="module")
def live_cases():
    cases, _ = generate_corpus(GeneratorConfig(n_cases=20, seed=12))
    return [replace(c, outcome=None) for c in cases]


def fresh_store(tmp_path, model=None, **kwargs):
    if model is not None:
        kwargs.setdefault("model_version", "m-test-1")
    return CaseStore(tmp_path / "data", model=model, **kwargs)


class TestIngest:
    def test_round_trip(self, tmp_path):
        store = fresh_store(tmp_path)
        case = make_case(outcome=None)
        assert store.ingest_case(case) == case.case_id
        view = store.get_case(case.case_id)
        assert view["case"] == case_to_dict(case)
        assert view["status"] == "Pending"
        assert view["winner"] is None

    def test_duplicate_id_conflicts(self, tmp_path):
        store = fresh_store(tmp_path)
        store.ingest_case(make_case(outcome=None))
        with pytest.raises(ConflictError):
            store.ingest_case(make_case(outcome=None))

    def test_resolved_case_rejected(self, tmp_path):
        store = fresh_store(tmp_path)
        with pytest.raises(DomainError, match="unresolved"):
            store.ingest_case(make_case(outcome=OutcomeLabel.BUYER_WINS))

    def test_missing_case_not_found(self, tmp_path):
        store = fresh_store(tmp_path)
        with pytest.raises(NotFoundError):
            store.get_case("case-nope")


class TestPrediction:
    def test_requires_model(self, tmp_path):
        store = fresh_store(tmp_path)
        store.ingest_case(make_case(outcome=None))
        with pytest.raises(ModelNotReadyError):
            store.get_prediction("case-0001")

    def test_matches_direct_explanation(self, tmp_path, service_pipeline, live_cases):
        store = fresh_store(tmp_path, model=service_pipeline)
        case = live_cases[0]
        store.ingest_case(case)
        got = store.get_prediction(case.case_id)
        expected = explanation_payload(service_pipeline, case, seed=0)
        assert got == {"model_version": "m-test-1", **expected}

    def test_idempotent_per_model_version(self, tmp_path, service_pipeline, live_cases):
        store = fresh_store(tmp_path, model=service_pipeline)
        case = live_cases[1]
        store.ingest_case(case)
        first = store.get_prediction(case.case_id)
        second = store.get_prediction(case.case_id)
        assert first == second
        kinds = [e.kind for e in EventLog(store.data_dir / "events.jsonl").read_all()]
        assert kinds.count("PredictionIssued") == 1

    def test_new_model_version_scores_again(self, tmp_path, service_pipeline, live_cases):
        store = fresh_store(tmp_path, model=service_pipeline)
        case = live_cases[2]
        store.ingest_case(case)
        first = store.get_prediction(case.case_id)
        store.attach_model(service_pipeline, version="m-test-2")
        second = store.get_prediction(case.case_id)
        assert first["model_version"] == "m-test-1"
        assert second["model_version"] == "m-test-2"
        kinds = [e.kind for e in EventLog(store.data_dir / "events.jsonl").read_all()]
        assert kinds.count("PredictionIssued") == 2

    def test_payload_satisfies_margin_identity(self, tmp_path, service_pipeline, live_cases):
        store = fresh_store(tmp_path, model=service_pipeline)
        case = live_cases[3]
        store.ingest_case(case)
        payload = store.get_prediction(case.case_id)

        text = predict_text(service_pipeline.text_model_, case.conversation)
        X, _, _ = assemble_matrix([case], [text], service_pipeline.schema_)
        attribution = path_attribution(service_pipeline.learner_, service_pipeline._impute(X)[0])
        total = attribution.bias + sum(attribution.contributions)
        assert abs(total - attribution.margin) <= 1e-6
        assert payload["bias"] == pytest.approx(attribution.bias, abs=1e-12)
        assert payload["p_seller_wins"] == pytest.approx(attribution.probability, abs=1e-12)

    def test_empty_conversation_flags_neutral_text(self, tmp_path, service_pipeline):
        store = fresh_store(tmp_path, model=service_pipeline)
        case = make_case(case_id="case-silent", outcome=None,
                         conversation=Conversation(messages=()))
        store.ingest_case(case)
        payload = store.get_prediction(case.case_id)
        assert payload["neutral_text"] is True
        assert payload["tokens"] == []


class TestStateMachine:
    def test_ruling_on_missing_case(self, tmp_path):
        store = fresh_store(tmp_path)
        with pytest.raises(NotFoundError):
            store.record_ruling("case-nope", "SELLER_WINS")

    def test_pending_to_ruled(self, tmp_path):
        store = fresh_store(tmp_path)
        store.ingest_case(make_case(outcome=None))
        view = store.record_ruling("case-0001", OutcomeLabel.SELLER_WINS,
                                   agent_summary="tracking shows delivery")
        assert view["status"] == "Ruled"
        assert view["winner"] == "SELLER_WINS"
        assert view["ruling_summary"] == "tracking shows delivery"

    def test_double_ruling_rejected(self, tmp_path):
        store = fresh_store(tmp_path)
        store.ingest_case(make_case(outcome=None))
        store.record_ruling("case-0001", "SELLER_WINS")
        with pytest.raises(StateError):
            store.record_ruling("case-0001", "BUYER_WINS")

    def test_appeal_needs_a_ruling(self, tmp_path):
        store = fresh_store(tmp_path)
        store.ingest_case(make_case(outcome=None))
        with pytest.raises(StateError):
            store.file_appeal("case-0001", Party.BUYER)

    def test_appeal_then_second_ruling(self, tmp_path):
        store = fresh_store(tmp_path)
        store.ingest_case(make_case(outcome=None))
        store.record_ruling("case-0001", "SELLER_WINS")
        view = store.file_appeal("case-0001", "BUYER")
        assert view["status"] == "Appealed"
        assert view["appeal_count"] == 1
        with pytest.raises(StateError):
            store.file_appeal("case-0001", "BUYER")
        view = store.record_ruling("case-0001", "BUYER_WINS")
        assert view["status"] == "Ruled"
        assert view["appeal_count"] == 1
        assert view["appeals"] == ["BUYER"]
        view = store.file_appeal("case-0001", Party.SELLER)
        assert view["appeal_count"] == 2

    def test_bad_enum_values_rejected(self, tmp_path):
        store = fresh_store(tmp_path)
        store.ingest_case(make_case(outcome=None))
        with pytest.raises(DomainError, match="winner"):
            store.record_ruling("case-0001", "TIE")
        store.record_ruling("case-0001", "SELLER_WINS")
        with pytest.raises(DomainError, match="party"):
            store.file_appeal("case-0001", "JUDGE")

    def test_concurrent_rulings_exactly_one_wins(self, tmp_path):
        store = fresh_store(tmp_path)
        store.ingest_case(make_case(outcome=None))
        barrier = threading.Barrier(2)
        outcomes = []

        def rule(winner):
            barrier.wait()
            try:
                store.record_ruling("case-0001", winner)
                outcomes.append("ok")
            except StateError:
                outcomes.append("rejected")

        threads = [threading.Thread(target=rule, args=(w,))
                   for w in ("SELLER_WINS", "BUYER_WINS")]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert sorted(outcomes) == ["ok", "rejected"]
        assert store.get_case("case-0001")["status"] == "Ruled"


class TestReplay:
    def run_session(self, store, live_cases):
        for case in live_cases[:5]:
            store.ingest_case(case)
        ids = [c.case_id for c in live_cases[:5]]
        for case_id in ids[:3]:
            store.get_prediction(case_id)
        store.record_ruling(ids[0], "SELLER_WINS", agent_summary="clear tracking")
        store.record_ruling(ids[1], "BUYER_WINS")
        store.file_appeal(ids[0], "BUYER")
        store.record_ruling(ids[0], "BUYER_WINS", agent_summary="reversed on appeal")
        return ids

    def test_replay_reconstructs_state(self, tmp_path, service_pipeline, live_cases):
        live = fresh_store(tmp_path, model=service_pipeline)
        self.run_session(live, live_cases)
        rebuilt = CaseStore(tmp_path / "data")
        assert rebuilt.snapshot() == live.snapshot()

    def test_replayed_store_keeps_appending(self, tmp_path, service_pipeline, live_cases):
        live = fresh_store(tmp_path, model=service_pipeline)
        self.run_session(live, live_cases)
        rebuilt = CaseStore(tmp_path / "data")
        rebuilt.ingest_case(live_cases[6])
        events = EventLog(rebuilt.data_dir / "events.jsonl").read_all()
        ids = [e.event_id for e in events]
        assert ids == sorted(set(ids))
        assert all(e.kind in EVENT_KINDS for e in events)

    def test_replayed_queue_matches(self, tmp_path, service_pipeline, live_cases):
        live = fresh_store(tmp_path, model=service_pipeline)
        self.run_session(live, live_cases)
        rebuilt = CaseStore(tmp_path / "data")
        assert rebuilt.queue() == live.queue()

    def test_snapshot_file_written(self, tmp_path, service_pipeline, live_cases):
        live = fresh_store(tmp_path, model=service_pipeline)
        self.run_session(live, live_cases)
        path = live.write_snapshot()
        assert path.exists()
        import json

        on_disk = json.loads(path.read_text())
        assert on_disk == live.snapshot()


class TestQueue:
    def test_unscored_keep_insertion_order(self, tmp_path, live_cases):
        store = fresh_store(tmp_path)
        for case in live_cases[:6]:
            store.ingest_case(case)
        entries = store.queue()
        assert [e.case_id for e in entries] == [c.case_id for c in live_cases[:6]]
        assert all(e.band == "unscored" for e in entries)

    def test_most_uncertain_first(self, tmp_path, service_pipeline, live_cases):
        store = fresh_store(tmp_path, model=service_pipeline)
        for case in live_cases[:8]:
            store.ingest_case(case)
            store.get_prediction(case.case_id)
        entries = store.queue()
        keys = [abs(e.p_seller_wins - 0.5) for e in entries]
        assert keys == sorted(keys)

    def test_scored_before_unscored(self, tmp_path, service_pipeline, live_cases):
        store = fresh_store(tmp_path, model=service_pipeline)
        for case in live_cases[:4]:
            store.ingest_case(case)
        store.get_prediction(live_cases[2].case_id)
        entries = store.queue()
        assert entries[0].case_id == live_cases[2].case_id
        tail = [e.case_id for e in entries[1:]]
        assert tail == [live_cases[0].case_id, live_cases[1].case_id, live_cases[3].case_id]

    def test_fifo_mode(self, tmp_path, service_pipeline, live_cases):
        store = fresh_store(tmp_path, model=service_pipeline, queue_order="fifo")
        for case in live_cases[:5]:
            store.ingest_case(case)
            store.get_prediction(case.case_id)
        assert [e.case_id for e in store.queue()] == [c.case_id for c in live_cases[:5]]

    def test_limit(self, tmp_path, live_cases):
        store = fresh_store(tmp_path)
        for case in live_cases[:5]:
            store.ingest_case(case)
        assert len(store.queue(limit=2)) == 2
        assert store.queue(limit=0) == []
        with pytest.raises(DomainError):
            store.queue(limit=-1)

    def test_band_thresholds(self):
        assert confidence_band(None) == "unscored"
        assert confidence_band(0.5) == "low"
        assert confidence_band(0.62) == "medium"
        assert confidence_band(0.9) == "high"
        assert confidence_band(0.1) == "high"


class TestStats:
    def test_counts_and_rates(self, tmp_path, live_cases):
        store = fresh_store(tmp_path)
        for case in live_cases[:4]:
            store.ingest_case(case)
        ids = [c.case_id for c in live_cases[:4]]
        store.record_ruling(ids[0], "SELLER_WINS")
        store.record_ruling(ids[1], "SELLER_WINS")
        store.record_ruling(ids[2], "BUYER_WINS")
        store.file_appeal(ids[2], "SELLER")
        stats = store.stats()
        assert stats["cases"] == {"total": 4, "pending": 1, "ruled": 2, "appealed": 1}
        assert stats["label_rates"]["SELLER_WINS"] == pytest.approx(2 / 3)
        assert math.isclose(sum(stats["label_rates"].values()), 1.0)
        assert stats["appeals_filed"] == 1
        assert stats["model"]["loaded"] is False

    def test_model_block(self, tmp_path, service_pipeline):
        store = fresh_store(tmp_path, model=service_pipeline,
                            model_metrics={"auroc": 0.93})
        stats = store.stats()
        assert stats["model"] == {"loaded": True, "version": "m-test-1",
                                  "metrics": {"auroc": 0.93}}


class TestHttpApi:
    @pytest.fixture()
    def client(self, tmp_path, service_pipeline):
        store = fresh_store(tmp_path, model=service_pipeline)
        with TestClient(create_app(store)) as client:
            yield client

    def test_healthz(self, client):
        response = client.get("/healthz")
        assert response.status_code == 200
        assert response.json()["status"] == "ok"

    def test_full_case_lifecycle(self, client, live_cases):
        case = live_cases[0]
        body = case_to_dict(case)
        created = client.post("/cases", json=body)
        assert created.status_code == 201
        assert created.json() == {"case_id": case.case_id}

        fetched = client.get(f"/cases/{case.case_id}")
        assert fetched.status_code == 200
        assert fetched.json()["case"] == body

        prediction = client.get(f"/cases/{case.case_id}/prediction")
        assert prediction.status_code == 200
        payload = prediction.json()
        assert 0.0 <= payload["p_seller_wins"] <= 1.0
        assert len(payload["contributions"]) <= 10
        again = client.get(f"/cases/{case.case_id}/prediction")
        assert again.json() == payload

        queue = client.get("/queue", params={"limit": 10}).json()["entries"]
        assert queue[0]["case_id"] == case.case_id

        ruled = client.post(f"/cases/{case.case_id}/ruling",
                            json={"winner": "SELLER_WINS", "summary": "evidence held"})
        assert ruled.status_code == 200
        assert ruled.json()["status"] == "Ruled"

        appealed = client.post(f"/cases/{case.case_id}/appeal", json={"party": "BUYER"})
        assert appealed.status_code == 200
        assert appealed.json()["appeal_count"] == 1

        stats = client.get("/stats").json()
        assert stats["cases"]["appealed"] == 1

    def test_error_codes_and_shape(self, client, live_cases):
        missing = client.get("/cases/case-nope")
        assert missing.status_code == 404
        assert set(missing.json()) == {"code", "message"}
        assert missing.json()["code"] == "not_found"

        body = case_to_dict(live_cases[1])
        assert client.post("/cases", json=body).status_code == 201
        duplicate = client.post("/cases", json=body)
        assert duplicate.status_code == 409
        assert duplicate.json()["code"] == "conflict"

        bad_transition = client.post(f"/cases/{live_cases[1].case_id}/appeal",
                                     json={"party": "BUYER"})
        assert bad_transition.status_code == 409
        assert bad_transition.json()["code"] == "invalid_state"

        garbage = client.post("/cases", json={"case_id": "x"})
        assert garbage.status_code == 400
        assert garbage.json()["code"] == "invalid_request"

        unparseable = client.post(f"/cases/{live_cases[1].case_id}/ruling", json={})
        assert unparseable.status_code == 400
        assert unparseable.json()["code"] == "invalid_request"

    def test_resolved_ingest_rejected(self, client):
        body = case_to_dict(make_case(outcome=OutcomeLabel.SELLER_WINS))
        response = client.post("/cases", json=body)
        assert response.status_code == 400
        assert response.json()["code"] == "invalid_request"

    def test_model_not_ready(self, tmp_path, live_cases):
        store = CaseStore(tmp_path / "bare")
        with TestClient(create_app(store)) as client:
            client.post("/cases", json=case_to_dict(live_cases[2]))
            response = client.get(f"/cases/{live_cases[2].case_id}/prediction")
            assert response.status_code == 503
            assert response.json()["code"] == "model_not_ready"

    def test_token_auth(self, tmp_path):
        store = CaseStore(tmp_path / "auth")
        with TestClient(create_app(store, token="sesame")) as client:
            assert client.get("/healthz").status_code == 200
            denied = client.get("/queue")
            assert denied.status_code == 401
            assert denied.json()["code"] == "unauthorized"
            wrong = client.get("/queue", headers={"Authorization": "Bearer open"})
            assert wrong.status_code == 401
            ok = client.get("/queue", headers={"Authorization": "Bearer sesame"})
            assert ok.status_code == 200
