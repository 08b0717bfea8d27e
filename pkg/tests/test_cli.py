"""End-to-end command-line workflows on a small corpus."""

import json
from dataclasses import replace

import pytest
from click.testing import CliRunner

from odr.cli import main
from odr.corpus_io import read_corpus, write_corpus
from odr.manifest import read_manifest
from odr.pipeline import DisputePipeline


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    """Corpus, timelines, and a trained model shared by the command tests."""
    root = tmp_path_factory.mktemp("cli")
    runner = CliRunner()
    gen = runner.invoke(main, [
        "gen", "--n", "150", "--seed", "9",
        "--out", str(root / "corpus.jsonl"),
        "--timelines-out", str(root / "timelines.jsonl"),
    ])
    assert gen.exit_code == 0, gen.output
    train = runner.invoke(main, [
        "train", "--corpus", str(root / "corpus.jsonl"),
        "--model", "gbdt", "--param", "n_trees=6", "--param", "max_depth=3",
        "--folds", "2", "--seed", "9", "--out", str(root / "model.json"),
    ])
    assert train.exit_code == 0, train.output
    return root


@pytest.fixture()
def runner():
    return CliRunner()


class TestGen:
    def test_writes_corpus_and_manifest(self, workspace):
        cases = read_corpus(workspace / "corpus.jsonl")
        assert len(cases) == 150
        manifest = read_manifest(workspace / "corpus.jsonl.manifest.json")
        assert manifest.command == "gen"
        assert manifest.seeds == {"seed": 9}
        assert len(manifest.config_hash) == 12
        assert len(manifest.artifact_version) == 12
        assert str(workspace / "corpus.jsonl") in manifest.outputs

    def test_rerun_is_byte_identical(self, workspace, runner, tmp_path):
        result = runner.invoke(main, [
            "gen", "--n", "150", "--seed", "9",
            "--out", str(tmp_path / "again.jsonl"),
            "--timelines-out", str(tmp_path / "tl.jsonl"),
        ])
        assert result.exit_code == 0
        assert (tmp_path / "again.jsonl").read_bytes() == (workspace / "corpus.jsonl").read_bytes()
        assert (tmp_path / "tl.jsonl").read_bytes() == (workspace / "timelines.jsonl").read_bytes()

    def test_seed_changes_output(self, runner, tmp_path):
        for seed in (1, 2):
            result = runner.invoke(main, [
                "gen", "--n", "30", "--seed", str(seed),
                "--out", str(tmp_path / f"c{seed}.jsonl"),
            ])
            assert result.exit_code == 0
        assert (tmp_path / "c1.jsonl").read_bytes() != (tmp_path / "c2.jsonl").read_bytes()

    def test_missing_required_flag_is_usage_error(self, runner, tmp_path):
        result = runner.invoke(main, ["gen", "--out", str(tmp_path / "x.jsonl")])
        assert result.exit_code == 2

    def test_unknown_flag_is_usage_error(self, runner):
        result = runner.invoke(main, ["gen", "--n", "5", "--frobnicate", "yes"])
        assert result.exit_code == 2


class TestTrain:
    def test_model_loads_and_report_written(self, workspace):
        pipeline = DisputePipeline.load(workspace / "model.json")
        cases = read_corpus(workspace / "corpus.jsonl")
        scores = pipeline.predict_proba(cases[:5])
        assert scores.shape == (5,)
        report_lines = (workspace / "model.json.eval.csv").read_text().splitlines()
        assert report_lines[0] == "model,fold,auroc,accuracy,precision,recall,f1,n,positives"
        assert len(report_lines) == 1 + 2 + 1  # header, two folds, mean row
        manifest = read_manifest(workspace / "model.json.manifest.json")
        assert manifest.command == "train"
        assert str(workspace / "corpus.jsonl") in manifest.inputs

    def test_jobs_do_not_change_artifacts(self, workspace, runner, tmp_path):
        result = runner.invoke(main, [
            "train", "--corpus", str(workspace / "corpus.jsonl"),
            "--model", "gbdt", "--param", "n_trees=6", "--param", "max_depth=3",
            "--folds", "2", "--seed", "9", "--jobs", "3",
            "--out", str(tmp_path / "model.json"),
        ])
        assert result.exit_code == 0, result.output
        assert (tmp_path / "model.json").read_bytes() == (workspace / "model.json").read_bytes()
        assert (tmp_path / "model.json.eval.csv").read_bytes() == (
            workspace / "model.json.eval.csv"
        ).read_bytes()

    def test_unknown_hyperparameter_fails_cleanly(self, workspace, runner, tmp_path):
        result = runner.invoke(main, [
            "train", "--corpus", str(workspace / "corpus.jsonl"),
            "--model", "gbdt", "--param", "depth=3",
            "--out", str(tmp_path / "m.json"),
        ])
        assert result.exit_code == 1
        error = json.loads(result.output.strip().splitlines()[-1])
        assert "depth" in error["message"]

    def test_unruled_corpus_rejected(self, workspace, runner, tmp_path):
        cases = [replace(c, outcome=None) for c in read_corpus(workspace / "corpus.jsonl")[:10]]
        write_corpus(cases, tmp_path / "open.jsonl")
        result = runner.invoke(main, [
            "train", "--corpus", str(tmp_path / "open.jsonl"),
            "--out", str(tmp_path / "m.json"),
        ])
        assert result.exit_code == 1
        error = json.loads(result.output.strip().splitlines()[-1])
        assert error["error"] == "DomainError"


class TestEval:
    def test_metrics_and_roc(self, workspace, runner, tmp_path):
        result = runner.invoke(main, [
            "eval", "--corpus", str(workspace / "corpus.jsonl"),
            "--model-file", str(workspace / "model.json"),
            "--out", str(tmp_path / "metrics.json"),
            "--roc-out", str(tmp_path / "roc.csv"),
        ])
        assert result.exit_code == 0, result.output
        metrics = json.loads((tmp_path / "metrics.json").read_text())
        assert 0.0 <= metrics["auroc"] <= 1.0
        assert metrics["n"] == 150
        roc_lines = (tmp_path / "roc.csv").read_text().splitlines()
        assert roc_lines[0] == "fpr,tpr"
        assert roc_lines[1] == "0.0,0.0"
        assert roc_lines[-1] == "1.0,1.0"

    def test_rerun_byte_identical(self, workspace, runner, tmp_path):
        for name in ("a", "b"):
            result = runner.invoke(main, [
                "eval", "--corpus", str(workspace / "corpus.jsonl"),
                "--model-file", str(workspace / "model.json"),
                "--out", str(tmp_path / f"{name}.json"),
            ])
            assert result.exit_code == 0
        assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


class TestSearch:
    def test_trials_ranked_and_deterministic(self, workspace, runner, tmp_path):
        args = [
            "search", "--corpus", str(workspace / "corpus.jsonl"),
            "--model", "dt", "--trials", "3", "--folds", "2", "--seed", "4",
        ]
        first = runner.invoke(main, args + ["--out", str(tmp_path / "s1.csv")])
        assert first.exit_code == 0, first.output
        best = json.loads(first.output.strip().splitlines()[-1])
        assert set(best) == {"best_trial", "mean_auroc", "params"}
        lines = (tmp_path / "s1.csv").read_text().splitlines()
        assert lines[0] == "trial,mean_auroc,fold_aurocs,params"
        assert len(lines) == 4
        second = runner.invoke(main, args + ["--jobs", "2", "--out", str(tmp_path / "s2.csv")])
        assert second.exit_code == 0
        assert (tmp_path / "s1.csv").read_bytes() == (tmp_path / "s2.csv").read_bytes()


class TestAblate:
    def test_family_mode_rows(self, workspace, runner, tmp_path):
        result = runner.invoke(main, [
            "ablate", "--corpus", str(workspace / "corpus.jsonl"),
            "--model", "dt", "--mode", "FeatureFamily",
            "--folds", "2", "--seed", "4", "--out", str(tmp_path / "ablation.csv"),
        ])
        assert result.exit_code == 0, result.output
        lines = (tmp_path / "ablation.csv").read_text().splitlines()
        assert lines[0] == "mode,unit,auroc,auroc_delta_vs_full,n"
        assert lines[1].startswith("FeatureFamily,FULL,")
        assert all(line.startswith("FeatureFamily,") for line in lines[1:])


class TestExplain:
    def test_payload_matches_served_shape(self, workspace, runner, tmp_path):
        case_id = read_corpus(workspace / "corpus.jsonl")[0].case_id
        result = runner.invoke(main, [
            "explain", "--model-file", str(workspace / "model.json"),
            "--corpus", str(workspace / "corpus.jsonl"), "--case-id", case_id,
            "--out", str(tmp_path / "explanation.json"),
        ])
        assert result.exit_code == 0, result.output
        payload = json.loads((tmp_path / "explanation.json").read_text())
        assert set(payload) == {
            "model_version", "case_id", "p_seller_wins", "bias",
            "contributions", "tokens", "neutral_text",
        }
        assert payload["case_id"] == case_id
        assert len(payload["contributions"]) <= 10

    def test_shap_csv(self, workspace, runner, tmp_path):
        case_id = read_corpus(workspace / "corpus.jsonl")[3].case_id
        result = runner.invoke(main, [
            "explain", "--model-file", str(workspace / "model.json"),
            "--corpus", str(workspace / "corpus.jsonl"), "--case-id", case_id,
            "--out", str(tmp_path / "e.json"),
            "--shap-out", str(tmp_path / "shap.csv"),
            "--background-n", "20", "--permutations", "10",
        ])
        assert result.exit_code == 0, result.output
        payload = json.loads((tmp_path / "e.json").read_text())
        lines = (tmp_path / "shap.csv").read_text().splitlines()
        assert lines[0] == "feature,value,phi,std_error"
        assert len(lines) == 1 + len(payload["shapley"])

    def test_unknown_case_fails(self, workspace, runner, tmp_path):
        result = runner.invoke(main, [
            "explain", "--model-file", str(workspace / "model.json"),
            "--corpus", str(workspace / "corpus.jsonl"), "--case-id", "case-unknown",
            "--out", str(tmp_path / "e.json"),
        ])
        assert result.exit_code == 1


class TestAnalytics:
    def test_politeness_and_trajectories(self, workspace, runner, tmp_path):
        result = runner.invoke(main, [
            "analyze-politeness", "--corpus", str(workspace / "corpus.jsonl"),
            "--out", str(tmp_path / "politeness.csv"),
            "--trajectories-out", str(tmp_path / "traj.csv"), "--bins", "5",
        ])
        assert result.exit_code == 0, result.output
        pol = (tmp_path / "politeness.csv").read_text().splitlines()
        assert pol[0].startswith("strategy,correlation")
        assert len(pol) == 22
        traj = (tmp_path / "traj.csv").read_text().splitlines()
        assert len(traj) == 1 + 21 * 2 * 2 * 5

    def test_churn(self, workspace, runner, tmp_path):
        result = runner.invoke(main, [
            "analyze-churn", "--corpus", str(workspace / "corpus.jsonl"),
            "--timelines", str(workspace / "timelines.jsonl"),
            "--out", str(tmp_path / "churn.csv"),
        ])
        assert result.exit_code == 0, result.output
        text = (tmp_path / "churn.csv").read_text()
        assert "buyer_lost" in text and "buyer_won" in text

    def test_churn_misaligned_inputs_fail(self, workspace, runner, tmp_path):
        lines = (workspace / "timelines.jsonl").read_text().splitlines()[:10]
        (tmp_path / "short.jsonl").write_text("\n".join(lines) + "\n")
        result = runner.invoke(main, [
            "analyze-churn", "--corpus", str(workspace / "corpus.jsonl"),
            "--timelines", str(tmp_path / "short.jsonl"),
            "--out", str(tmp_path / "churn.csv"),
        ])
        assert result.exit_code == 1

    def test_error_analysis(self, workspace, runner, tmp_path):
        result = runner.invoke(main, [
            "error-analysis", "--corpus", str(workspace / "corpus.jsonl"),
            "--model-file", str(workspace / "model.json"),
            "--out", str(tmp_path / "errors.csv"),
        ])
        assert result.exit_code == 0, result.output
        lines = (tmp_path / "errors.csv").read_text().splitlines()
        assert lines[0] == "section,key,value,extra"
        assert any(line.startswith("accuracy_by_appeals,") for line in lines)


class TestServe:
    def test_builds_store_and_runs_server(self, workspace, runner, tmp_path, monkeypatch):
        captured = {}

        def fake_run(app, **kwargs):
            captured["app"] = app
            captured["kwargs"] = kwargs

        import uvicorn

        monkeypatch.setattr(uvicorn, "run", fake_run)
        result = runner.invoke(main, [
            "serve", "--data-dir", str(tmp_path / "data"),
            "--model-file", str(workspace / "model.json"),
            "--port", "9100",
        ])
        assert result.exit_code == 0, result.output
        assert captured["kwargs"]["port"] == 9100
        assert captured["app"].title == "dispute-resolution-service"
        manifest = read_manifest(tmp_path / "data" / "serve.manifest.json")
        assert manifest.command == "serve"
        assert manifest.artifact_version is not None

    def test_env_vars_supply_flags(self, workspace, runner, tmp_path, monkeypatch):
        import uvicorn

        monkeypatch.setattr(uvicorn, "run", lambda app, **kw: None)
        result = runner.invoke(main, ["serve"], env={
            "ODR_DATA_DIR": str(tmp_path / "envdata"),
            "ODR_PORT": "9200",
        })
        assert result.exit_code == 0, result.output
        assert (tmp_path / "envdata" / "serve.manifest.json").exists()
