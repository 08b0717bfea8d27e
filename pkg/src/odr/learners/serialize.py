"""Versioned JSON model files.

Layout:

    {
      "format_version": 1,
      "kind": "gbdt" | "decision_tree" | "random_forest" | "majority"
              | "gaussian_nb" | "knn" | "mlp",
      "schema_hash": "...",
      "base_score": 0.234,
      "eta": 0.3,
      "trees": [[{"f": 3, "t": 1.5, "miss_left": true, "l": 1, "r": 2},
                 {"leaf": -0.4}, ...], ...],
      "text_model": {...} | null,
      "metadata": {...}
    }

``trees`` holds log-odds leaves for gbdt and probability leaves for the
CART kinds; other kinds leave it empty and keep their state inside
``metadata["learner"]``. Per-node gain / cover / expectation arrays ride
along in ``metadata["tree_stats"]`` so reloaded trees explain
themselves the same way freshly trained ones do. Floats are written via
repr and parse back bit-identically, so a reloaded model predicts
exactly what the saved one did.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from odr.learners.baselines import (
    GaussianNBClassifier,
    KNNClassifier,
    MajorityClassifier,
    MLPClassifier,
)
from odr.learners.cart import DecisionTreeClassifier, RandomForestClassifier
from odr.learners.gbdt import GBDTClassifier, Tree
from odr.text.classifier import (
    TextClassifier,
    _decode_array,
    _encode_array,
    text_model_from_dict,
    text_model_to_dict,
)

FORMAT_VERSION = 1

_KIND_BY_CLASS = {
    GBDTClassifier: "gbdt",
    DecisionTreeClassifier: "decision_tree",
    RandomForestClassifier: "random_forest",
    MajorityClassifier: "majority",
    GaussianNBClassifier: "gaussian_nb",
    KNNClassifier: "knn",
    MLPClassifier: "mlp",
}


class ModelFormatError(Exception):
    """Unreadable, unversioned, or structurally invalid model file."""


@dataclass
class ModelBundle:
    """A fitted learner plus everything needed to apply it: the text
    model that produced its textual features, the feature-schema hash
    it was trained against, and free-form metadata."""

    kind: str
    model: object
    schema_hash: str
    text_model: TextClassifier | None = None
    metadata: dict = field(default_factory=dict)


def bundle_model(model, schema_hash: str, text_model=None, metadata=None) -> ModelBundle:
    kind = _KIND_BY_CLASS.get(type(model))
    if kind is None:
        raise ModelFormatError(f"no serialization for {type(model).__name__}")
    return ModelBundle(
        kind=kind,
        model=model,
        schema_hash=schema_hash,
        text_model=text_model,
        metadata=dict(metadata or {}),
    )


def _tree_to_nodes(tree: Tree) -> list[dict]:
    nodes = []
    for i in range(tree.n_nodes):
        if tree.feature[i] < 0:
            nodes.append({"leaf": float(tree.weight[i])})
        else:
            nodes.append(
                {
                    "f": int(tree.feature[i]),
                    "t": float(tree.threshold[i]),
                    "miss_left": bool(tree.miss_left[i]),
                    "l": int(tree.left[i]),
                    "r": int(tree.right[i]),
                }
            )
    return nodes


def _tree_stats(tree: Tree) -> dict:
    return {
        "gain": [float(v) for v in tree.gain],
        "cover": [float(v) for v in tree.cover],
        "expectation": [float(v) for v in tree.expectation],
    }


def _tree_from_nodes(nodes: list[dict], stats: dict | None) -> Tree:
    n = len(nodes)
    feature = np.full(n, -1, dtype=np.int64)
    threshold = np.zeros(n)
    miss_left = np.ones(n, dtype=bool)
    left = np.full(n, -1, dtype=np.int64)
    right = np.full(n, -1, dtype=np.int64)
    weight = np.zeros(n)
    for i, node in enumerate(nodes):
        if "leaf" in node:
            weight[i] = node["leaf"]
        else:
            feature[i] = node["f"]
            threshold[i] = node["t"]
            miss_left[i] = node["miss_left"]
            left[i] = node["l"]
            right[i] = node["r"]
    kwargs = {}
    if stats is not None:
        kwargs = {
            "gain": np.asarray(stats["gain"], dtype=np.float64),
            "cover": np.asarray(stats["cover"], dtype=np.float64),
            "expectation": np.asarray(stats["expectation"], dtype=np.float64),
        }
    return Tree(
        feature=feature,
        threshold=threshold,
        miss_left=miss_left,
        left=left,
        right=right,
        weight=weight,
        **kwargs,
    )


def _learner_state(kind: str, model) -> tuple[list, float, float, dict]:
    """Returns (trees, base_score, eta, learner_dict)."""
    params = model.get_params()
    state: dict = {"params": params, "n_features": getattr(model, "n_features_in_", 0)}
    if kind == "gbdt":
        trees = [_tree_to_nodes(t) for t in model.trees_]
        state["feature_names"] = model.feature_names_
        return trees, float(model.base_score_), float(model.learning_rate), state
    if kind == "decision_tree":
        return [_tree_to_nodes(model.tree_)], 0.0, 1.0, state
    if kind == "random_forest":
        return [_tree_to_nodes(t) for t in model.trees_], 0.0, 1.0, state
    if kind == "majority":
        state["prior"] = float(model.prior_)
        return [], 0.0, 1.0, state
    if kind == "gaussian_nb":
        state["class_prior"] = [float(v) for v in model.class_prior_]
        state["means"] = _encode_array(model.means_)
        state["vars"] = _encode_array(model.vars_)
        return [], 0.0, 1.0, state
    if kind == "knn":
        state["train_X"] = _encode_array(model.X_)
        state["train_y"] = _encode_array(model.y_)
        return [], 0.0, 1.0, state
    if kind == "mlp":
        state["weights"] = [_encode_array(p) for p in model.params_]
        return [], 0.0, 1.0, state
    raise ModelFormatError(f"unknown model kind {kind!r}")


def _restore_trees(kind: str, model, payload: dict) -> None:
    stats = payload.get("metadata", {}).get("tree_stats")
    trees = [
        _tree_from_nodes(
            nodes,
            None
            if stats is None
            else {key: stats[key][i] for key in ("gain", "cover", "expectation")},
        )
        for i, nodes in enumerate(payload["trees"])
    ]
    if kind == "decision_tree":
        model.tree_ = trees[0]
    else:
        model.trees_ = trees


def _rebuild_model(kind: str, payload: dict):
    state = payload["metadata"]["learner"]
    classes = {v: k for k, v in _KIND_BY_CLASS.items()}
    cls = classes.get(kind)
    if cls is None:
        raise ModelFormatError(f"unknown model kind {kind!r}")
    params = dict(state["params"])
    for key, value in params.items():
        if isinstance(value, list):
            params[key] = tuple(value)
    model = cls(**params)
    model.n_features_in_ = state["n_features"]

    if kind == "gbdt":
        _restore_trees(kind, model, payload)
        model.base_score_ = float(payload["base_score"])
        model.feature_names_ = state["feature_names"]
    elif kind in ("decision_tree", "random_forest"):
        _restore_trees(kind, model, payload)
    elif kind == "majority":
        model.prior_ = float(state["prior"])
    elif kind == "gaussian_nb":
        model.class_prior_ = np.asarray(state["class_prior"], dtype=np.float64)
        model.means_ = _decode_array(state["means"])
        model.vars_ = _decode_array(state["vars"])
    elif kind == "knn":
        model.X_ = _decode_array(state["train_X"])
        model.y_ = _decode_array(state["train_y"])
    elif kind == "mlp":
        model.params_ = [_decode_array(d) for d in state["weights"]]
    return model


def serialize_model(bundle: ModelBundle, path) -> None:
    trees, base_score, eta, learner = _learner_state(bundle.kind, bundle.model)
    metadata = dict(bundle.metadata)
    metadata["learner"] = learner
    if bundle.kind in ("gbdt", "decision_tree", "random_forest"):
        source = (
            bundle.model.trees_ if bundle.kind != "decision_tree" else [bundle.model.tree_]
        )
        stats = [_tree_stats(t) for t in source]
        metadata["tree_stats"] = {
            key: [s[key] for s in stats] for key in ("gain", "cover", "expectation")
        }
    payload = {
        "format_version": FORMAT_VERSION,
        "kind": bundle.kind,
        "schema_hash": bundle.schema_hash,
        "base_score": base_score,
        "eta": eta,
        "trees": trees,
        "text_model": None
        if bundle.text_model is None
        else text_model_to_dict(bundle.text_model),
        "metadata": metadata,
    }
    text = json.dumps(
        payload,
        sort_keys=True,
        separators=(",", ":"),
        ensure_ascii=False,
        allow_nan=False,
    )
    Path(path).write_bytes(text.encode("utf-8") + b"\n")


def load_model(path) -> ModelBundle:
    raw = Path(path).read_bytes()
    try:
        payload = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ModelFormatError(f"unreadable model file {path}: {exc}") from exc
    if not isinstance(payload, dict):
        raise ModelFormatError("model file must hold a JSON object")
    version = payload.get("format_version")
    if version != FORMAT_VERSION:
        raise ModelFormatError(
            f"unsupported model format version {version!r}, expected {FORMAT_VERSION}"
        )
    try:
        kind = payload["kind"]
        model = _rebuild_model(kind, payload)
        text_model = (
            None
            if payload.get("text_model") is None
            else text_model_from_dict(payload["text_model"])
        )
        return ModelBundle(
            kind=kind,
            model=model,
            schema_hash=payload["schema_hash"],
            text_model=text_model,
            metadata=payload["metadata"],
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"malformed model file {path}: {exc}") from exc
