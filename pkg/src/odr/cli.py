"""Command-line entrypoint binding every pipeline stage.

Each command validates its flags, does one unit of work, writes its
outputs plus a run manifest next to the first output, and exits 0. Any
failure prints a single JSON line to stderr and exits 1; flag misuse exits
2 through the argument parser. All randomness hangs off --seed, and
--jobs never changes a result, only the worker count.
"""

from __future__ import annotations

import csv
import functools
import io
import json
import sys
import time
from pathlib import Path

import click

from odr.behavior import (
    error_analysis,
    first_message_correlation,
    soft_churn,
    trajectories,
)
from odr.corpus_io import (
    CorpusFormatError,
    read_corpus,
    read_timelines,
    write_corpus,
    write_timelines,
)
from odr.domain import DisputeCase, DomainError, Party
from odr.evaluation import (
    MODES,
    ablate,
    compute_metrics,
    cross_validate,
    random_search,
)
from odr.interpret import explanation_payload
from odr.learners import (
    DecisionTreeClassifier,
    GaussianNBClassifier,
    GBDTClassifier,
    KNNClassifier,
    MajorityClassifier,
    MLPClassifier,
    ModelFormatError,
    RandomForestClassifier,
)
from odr.manifest import build_manifest, file_digest, manifest_path, write_manifest
from odr.pipeline import DisputePipeline, default_text_model
from odr.service import CaseStore, ServiceError, create_app
from odr.service.events import EventLogError
from odr.synth import GeneratorConfig, generate_corpus, generate_timelines

_LEARNERS = {
    "gbdt": GBDTClassifier,
    "dt": DecisionTreeClassifier,
    "rf": RandomForestClassifier,
    "knn": KNNClassifier,
    "mlp": MLPClassifier,
    "nb": GaussianNBClassifier,
    "majority": MajorityClassifier,
}

_ERRORS = (
    DomainError,
    CorpusFormatError,
    ModelFormatError,
    EventLogError,
    ServiceError,
    OSError,
    ValueError,
)


def _fail_on_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except _ERRORS as exc:
            line = json.dumps(
                {"error": type(exc).__name__, "message": str(exc)}, sort_keys=True
            )
            click.echo(line, err=True)
            sys.exit(1)

    return wrapper


def _write_text(path: str | Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _csv_text(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _num(v: float) -> str:
    return repr(float(v))


def _finish(command: str, config: dict, seed, inputs: list, outputs: list, started: float) -> None:
    manifest = build_manifest(
        command=command,
        config=config,
        seeds={"seed": seed} if not isinstance(seed, dict) else seed,
        inputs=inputs,
        outputs=outputs,
        wall_time_s=time.monotonic() - started,
    )
    write_manifest(manifest, manifest_path(outputs, command))


def _load_ruled_corpus(path: str) -> list[DisputeCase]:
    cases = read_corpus(path)
    if not cases:
        raise DomainError(f"corpus {path} is empty")
    unruled = sum(1 for c in cases if c.outcome is None)
    if unruled:
        raise DomainError(f"corpus {path} has {unruled} unruled cases; this command needs outcomes")
    return cases


def _parse_param(key: str, raw: str):
    if key == "hidden_layers":
        return tuple(int(part) for part in raw.split(",") if part)
    if raw.lower() in ("true", "false"):
        return raw.lower() == "true"
    try:
        return int(raw)
    except ValueError:
        pass
    try:
        return float(raw)
    except ValueError:
        pass
    if "," in raw:
        return tuple(int(part) for part in raw.split(",") if part)
    return raw


def _build_learner(name: str, params: tuple[str, ...], seed: int):
    learner = _LEARNERS[name]()
    valid = learner.get_params()
    if "seed" in valid:
        learner.set_params(seed=seed)
    overrides = {}
    for item in params:
        key, sep, raw = item.partition("=")
        if not sep:
            raise DomainError(f"--param needs key=value, got {item!r}")
        if key not in valid:
            raise DomainError(f"{name} has no hyperparameter {key!r}")
        overrides[key] = _parse_param(key, raw)
    if overrides:
        learner.set_params(**overrides)
    return learner


def _cv_csv(results) -> str:
    rows = []
    for model_name in sorted(results):
        cv = results[model_name]
        for fold_idx, report in enumerate(cv.folds):
            rows.append([
                model_name, fold_idx, _num(report.auroc), _num(report.accuracy),
                _num(report.precision), _num(report.recall), _num(report.f1),
                report.n, report.positives,
            ])
        rows.append([model_name, "mean", _num(cv.mean_auroc), "", "", "", "", "", ""])
    return _csv_text(
        ["model", "fold", "auroc", "accuracy", "precision", "recall", "f1", "n", "positives"],
        rows,
    )


def _roc_csv(points) -> str:
    return _csv_text(["fpr", "tpr"], [[_num(fpr), _num(tpr)] for fpr, tpr in points])


def _search_csv(result) -> str:
    rows = [
        [
            trial.trial_index,
            _num(trial.mean_auroc),
            "|".join(_num(a) for a in trial.fold_aurocs),
            json.dumps(trial.to_json_dict()["params"], sort_keys=True),
        ]
        for trial in result.trials
    ]
    return _csv_text(["trial", "mean_auroc", "fold_aurocs", "params"], rows)


def _ablation_csv(reports) -> str:
    rows = []
    for report in reports:
        rows.append([report.mode, "FULL", _num(report.full.auroc), _num(0.0), report.full.n])
        for name, unit in report.rows:
            rows.append([
                report.mode, name, _num(unit.auroc),
                _num(unit.auroc - report.full.auroc), unit.n,
            ])
    return _csv_text(["mode", "unit", "auroc", "auroc_delta_vs_full", "n"], rows)


def _shap_csv(shap_rows) -> str:
    rows = [
        [
            row["feature"],
            "" if row["value"] is None else _num(row["value"]),
            _num(row["phi"]),
            _num(row["std_error"]),
        ]
        for row in shap_rows
    ]
    return _csv_text(["feature", "value", "phi", "std_error"], rows)


@click.group()
def main():
    """Dispute-outcome modeling toolkit."""


@main.command()
@click.option("--n", "n_cases", type=int, required=True, help="Number of cases.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--noise", type=float, default=0.05, show_default=True,
              help="Label noise rate planted by the generator.")
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--timelines-out", type=click.Path(dir_okay=False), default=None,
              help="Also write per-buyer weekly timelines.")
@_fail_on_errors
def gen(n_cases, seed, noise, out, timelines_out):
    """Generate a synthetic dispute corpus."""
    started = time.monotonic()
    config = GeneratorConfig(n_cases=n_cases, seed=seed, noise_rate=noise)
    cases, _ = generate_corpus(config)
    write_corpus(cases, out)
    outputs = [out]
    if timelines_out:
        write_timelines(generate_timelines(config, cases), timelines_out)
        outputs.append(timelines_out)
    _finish("gen", {"n": n_cases, "seed": seed, "noise": noise, "out": out,
                    "timelines_out": timelines_out},
            seed, [], outputs, started)
    click.echo(f"wrote {len(cases)} cases to {out}")


@main.command()
@click.option("--corpus", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--model", "model_name", type=click.Choice(sorted(_LEARNERS)), default="gbdt",
              show_default=True)
@click.option("--param", "params", multiple=True, metavar="KEY=VALUE",
              help="Hyperparameter override; repeatable.")
@click.option("--folds", type=int, default=5, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default="model.json", show_default=True)
@click.option("--report-out", type=click.Path(dir_okay=False), default=None,
              help="Cross-validation report CSV [default: <out>.eval.csv].")
@_fail_on_errors
def train(corpus, model_name, params, folds, seed, jobs, out, report_out):
    """Cross-validate a learner, then fit it on the full corpus and save."""
    started = time.monotonic()
    cases = _load_ruled_corpus(corpus)
    learner = _build_learner(model_name, params, seed)
    text_model = default_text_model(seed=seed)
    cv = cross_validate(learner, cases, k=folds, seed=seed, text_model=text_model, jobs=jobs)
    report_out = report_out or f"{out}.eval.csv"
    _write_text(report_out, _cv_csv({model_name: cv}))
    pipeline = DisputePipeline(learner=learner, text_model=text_model).fit(cases)
    pipeline.save(out)
    _finish("train", {"corpus": corpus, "model": model_name, "param": list(params),
                      "folds": folds, "seed": seed, "jobs": jobs, "out": out,
                      "report_out": report_out},
            seed, [corpus], [out, report_out], started)
    click.echo(f"mean AUROC {cv.mean_auroc:.4f} over {folds} folds; model saved to {out}")


@main.command("eval")
@click.option("--corpus", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--model-file", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--threshold", type=float, default=0.5, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default="metrics.json", show_default=True)
@click.option("--roc-out", type=click.Path(dir_okay=False), default=None,
              help="ROC sweep CSV for plotting.")
@_fail_on_errors
def eval_command(corpus, model_file, threshold, out, roc_out):
    """Score a ruled corpus with a saved model."""
    started = time.monotonic()
    cases = _load_ruled_corpus(corpus)
    pipeline = DisputePipeline.load(model_file)
    scores = pipeline.predict_proba(cases)
    labels = [c.outcome.numeric for c in cases]
    report = compute_metrics(scores, labels, threshold=threshold)
    _write_text(out, json.dumps(report.to_json_dict(), sort_keys=True, indent=2) + "\n")
    outputs = [out]
    if roc_out:
        _write_text(roc_out, _roc_csv(report.roc_points))
        outputs.append(roc_out)
    _finish("eval", {"corpus": corpus, "model_file": model_file, "threshold": threshold,
                     "out": out, "roc_out": roc_out},
            {"seed": None}, [corpus, model_file], outputs, started)
    click.echo(f"AUROC {report.auroc:.4f} accuracy {report.accuracy:.4f} on {report.n} cases")


@main.command()
@click.option("--corpus", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--model", "model_name", type=click.Choice(sorted(_LEARNERS)), default="gbdt",
              show_default=True)
@click.option("--trials", type=int, default=50, show_default=True)
@click.option("--folds", type=int, default=5, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default="search.csv", show_default=True)
@_fail_on_errors
def search(corpus, model_name, trials, folds, seed, jobs, out):
    """Random hyperparameter search ranked by cross-validated AUROC."""
    started = time.monotonic()
    cases = _load_ruled_corpus(corpus)
    learner = _build_learner(model_name, (), seed)
    result = random_search(
        learner, cases, trials=trials, k=folds, seed=seed,
        text_model=default_text_model(seed=seed), jobs=jobs,
    )
    _write_text(out, _search_csv(result))
    _finish("search", {"corpus": corpus, "model": model_name, "trials": trials,
                       "folds": folds, "seed": seed, "jobs": jobs, "out": out},
            seed, [corpus], [out], started)
    best = result.best
    click.echo(json.dumps(
        {"best_trial": best.trial_index, "mean_auroc": best.mean_auroc,
         "params": best.to_json_dict()["params"]},
        sort_keys=True,
    ))


@main.command()
@click.option("--corpus", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--model", "model_name", type=click.Choice(sorted(_LEARNERS)), default="gbdt",
              show_default=True)
@click.option("--param", "params", multiple=True, metavar="KEY=VALUE")
@click.option("--mode", "modes", type=click.Choice(MODES), multiple=True,
              help="Ablation protocol; repeatable [default: all].")
@click.option("--folds", type=int, default=5, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default="ablation.csv", show_default=True)
@_fail_on_errors
def ablate_command(corpus, model_name, params, modes, folds, seed, jobs, out):
    """Feature ablations: families, leave-one-out, single features."""
    started = time.monotonic()
    cases = _load_ruled_corpus(corpus)
    learner = _build_learner(model_name, params, seed)
    text_model = default_text_model(seed=seed)
    modes = modes or MODES
    reports = [
        ablate(learner, cases, mode, k=folds, seed=seed, text_model=text_model, jobs=jobs)
        for mode in modes
    ]
    _write_text(out, _ablation_csv(reports))
    _finish("ablate", {"corpus": corpus, "model": model_name, "param": list(params),
                       "mode": list(modes), "folds": folds, "seed": seed, "jobs": jobs,
                       "out": out},
            seed, [corpus], [out], started)
    click.echo(f"wrote {sum(len(r.rows) + 1 for r in reports)} ablation rows to {out}")


@main.command()
@click.option("--model-file", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--corpus", type=click.Path(exists=True, dir_okay=False), required=True,
              help="Corpus holding the case to explain (and the Shapley background).")
@click.option("--case-id", required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default="explanation.json",
              show_default=True)
@click.option("--shap-out", type=click.Path(dir_okay=False), default=None,
              help="Also estimate Shapley values and write them as CSV.")
@click.option("--background-n", type=int, default=100, show_default=True,
              help="Background sample size for Shapley estimation.")
@click.option("--permutations", type=int, default=500, show_default=True)
@_fail_on_errors
def explain(model_file, corpus, case_id, seed, out, shap_out, background_n, permutations):
    """Explanation payload for one case, shaped as the case API serves it.

    The model version here is content-addressed from the model file; a
    running service stamps its own version string. --shap-out adds a
    Shapley block on top of the served shape.
    """
    started = time.monotonic()
    cases = read_corpus(corpus)
    case = next((c for c in cases if c.case_id == case_id), None)
    if case is None:
        raise DomainError(f"case {case_id!r} is not in {corpus}")
    pipeline = DisputePipeline.load(model_file)

    background = None
    if shap_out:
        sample = cases[:background_n]
        background, _, _ = pipeline._assemble(sample)
    payload = {
        "model_version": f"file-{file_digest(model_file)[:12]}",
        **explanation_payload(
            pipeline, case, seed=seed,
            shapley_background=background, shapley_permutations=permutations,
        ),
    }
    _write_text(out, json.dumps(payload, sort_keys=True, indent=2, allow_nan=False) + "\n")
    outputs = [out]
    if shap_out:
        _write_text(shap_out, _shap_csv(payload["shapley"]))
        outputs.append(shap_out)
    _finish("explain", {"model_file": model_file, "corpus": corpus, "case_id": case_id,
                        "seed": seed, "out": out, "shap_out": shap_out,
                        "background_n": background_n, "permutations": permutations},
            seed, [corpus, model_file], outputs, started)
    click.echo(f"p_seller_wins {payload['p_seller_wins']:.4f}; payload in {out}")


@main.command("analyze-politeness")
@click.option("--corpus", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--role", type=click.Choice(["buyer", "seller"]), default="buyer",
              show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default="politeness.csv",
              show_default=True)
@click.option("--trajectories-out", type=click.Path(dir_okay=False), default=None)
@click.option("--bins", type=int, default=10, show_default=True)
@_fail_on_errors
def analyze_politeness(corpus, role, out, trajectories_out, bins):
    """First-message politeness correlations, optionally with trajectories."""
    started = time.monotonic()
    cases = read_corpus(corpus)
    party = Party.BUYER if role == "buyer" else Party.SELLER
    report = first_message_correlation(cases, party)
    _write_text(out, report.to_csv())
    outputs = [out]
    if trajectories_out:
        _write_text(trajectories_out, trajectories(cases, bins=bins).to_csv())
        outputs.append(trajectories_out)
    _finish("analyze-politeness", {"corpus": corpus, "role": role, "out": out,
                                   "trajectories_out": trajectories_out, "bins": bins},
            {"seed": None}, [corpus], outputs, started)
    click.echo(f"{report.n_cases} cases analyzed, {report.n_excluded} excluded")


@main.command("analyze-churn")
@click.option("--corpus", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--timelines", type=click.Path(exists=True, dir_okay=False), required=True,
              help="Timelines JSONL aligned with the corpus, as written by gen.")
@click.option("--out", type=click.Path(dir_okay=False), default="churn.csv", show_default=True)
@_fail_on_errors
def analyze_churn(corpus, timelines, out):
    """Post-dispute transaction drop by outcome condition."""
    started = time.monotonic()
    cases = _load_ruled_corpus(corpus)
    report = soft_churn(read_timelines(timelines), [c.outcome for c in cases])
    _write_text(out, report.to_csv())
    _finish("analyze-churn", {"corpus": corpus, "timelines": timelines, "out": out},
            {"seed": None}, [corpus, timelines], [out], started)
    click.echo(
        f"lost ratio {report.buyer_lost.ratio:.3f}, won ratio {report.buyer_won.ratio:.3f}"
    )


@main.command("error-analysis")
@click.option("--corpus", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--model-file", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--out", type=click.Path(dir_okay=False), default="errors.csv", show_default=True)
@_fail_on_errors
def error_analysis_command(corpus, model_file, out):
    """Where the model is wrong: appeal groups, summary length, vocabulary."""
    started = time.monotonic()
    cases = _load_ruled_corpus(corpus)
    pipeline = DisputePipeline.load(model_file)
    predictions = [int(v) for v in pipeline.predict(cases)]
    report = error_analysis(predictions, cases)
    _write_text(out, report.to_csv())
    _finish("error-analysis", {"corpus": corpus, "model_file": model_file, "out": out},
            {"seed": None}, [corpus, model_file], [out], started)
    click.echo(f"wrote error analysis for {report.n} cases to {out}")


@main.command()
@click.option("--data-dir", type=click.Path(file_okay=False), envvar="ODR_DATA_DIR",
              required=True, help="Event log directory [env: ODR_DATA_DIR].")
@click.option("--model-file", type=click.Path(exists=True, dir_okay=False),
              envvar="ODR_MODEL_PATH", default=None, help="[env: ODR_MODEL_PATH]")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, envvar="ODR_PORT", default=8000, show_default=True,
              help="[env: ODR_PORT]")
@click.option("--token", envvar="ODR_API_TOKEN", default=None,
              help="Static bearer token; anonymous when unset [env: ODR_API_TOKEN].")
@click.option("--queue-order", type=click.Choice(["uncertain", "fifo"]), default="uncertain",
              show_default=True)
@click.option("--explain-seed", type=int, default=0, show_default=True)
@_fail_on_errors
def serve(data_dir, model_file, host, port, token, queue_order, explain_seed):
    """Run the case service over the event log in --data-dir."""
    import uvicorn

    started = time.monotonic()
    model = DisputePipeline.load(model_file) if model_file else None
    store = CaseStore(data_dir, model=model, explain_seed=explain_seed,
                      queue_order=queue_order)
    _finish("serve", {"data_dir": data_dir, "model_file": model_file, "host": host,
                      "port": port, "queue_order": queue_order,
                      "explain_seed": explain_seed, "token_set": token is not None},
            explain_seed, [p for p in [model_file] if p], [Path(data_dir)], started)
    uvicorn.run(create_app(store, token=token), host=host, port=port, log_level="info")


if __name__ == "__main__":
    main()
