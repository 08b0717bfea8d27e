"""End-to-end dispute model: text classifier, feature assembly, learner.

Fitting trains the text model on the training conversations, derives the
feature schema from the training corpus (categorical levels included), and
then fits the tabular learner on the assembled matrix. Tree learners see
missing values natively; everything else gets train-mean imputation plus
z-scoring, since distance and gradient learners cannot absorb cent-scale
price columns next to booleans. The whole pipeline round-trips through one
model file.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import clone

from odr.domain import DisputeCase, DomainError
from odr.features import (
    AssemblyReport,
    FeatureSchema,
    assemble_matrix,
    build_schema,
    schema_from_json_dict,
)
from odr.learners import (
    DecisionTreeClassifier,
    GBDTClassifier,
    RandomForestClassifier,
    bundle_model,
    load_model,
    serialize_model,
)
from odr.text import TextClassifier, conversation_tokens, predict_text

# learners whose split search routes NaN; all others need imputation
_NATIVE_MISSING = (GBDTClassifier, DecisionTreeClassifier, RandomForestClassifier)


def default_text_model(seed: int = 0) -> TextClassifier:
    # 2**16 buckets keeps model files desk-sized; quality is unchanged on
    # corpora this scale because bigram collisions stay rare
    return TextClassifier(bucket_count=2**16, seed=seed)


def preprocess_matrix(X: np.ndarray, mean, scale) -> np.ndarray:
    """Apply stored imputation and scaling; a no-op when mean is None."""
    if mean is None:
        return X
    out = X.copy()
    holes = np.isnan(out)
    out[holes] = np.broadcast_to(mean, out.shape)[holes]
    if scale is not None:
        out = (out - mean) / scale
    return out


def fit_on_matrix(learner, X: np.ndarray, y: np.ndarray, feature_names=None):
    """Clone and fit a learner on an assembled matrix.

    Learners without native missing-value routing get train-mean imputation
    plus z-scoring first. Returns (model, mean, scale) where the latter two
    are None for learners that take the matrix as-is.
    """
    mean = scale = None
    if not isinstance(learner, _NATIVE_MISSING):
        with np.errstate(invalid="ignore"):
            mean = np.nan_to_num(np.nanmean(X, axis=0), nan=0.0)
        filled = preprocess_matrix(X, mean, None)
        scale = np.maximum(filled.std(axis=0), 1e-12)
        X = (filled - mean) / scale
    model = clone(learner)
    if isinstance(model, GBDTClassifier):
        model.fit(X, y, feature_names=feature_names)
    else:
        model.fit(X, y)
    return model, mean, scale


class DisputePipeline:
    """Train/predict/save/load for the complete dispute model."""

    def __init__(self, learner=None, text_model=None):
        self.learner = learner if learner is not None else GBDTClassifier()
        self.text_model = text_model if text_model is not None else default_text_model()

    def fit(self, cases: list[DisputeCase]) -> "DisputePipeline":
        for case in cases:
            if case.outcome is None:
                raise DomainError(f"case {case.case_id} has no outcome; training needs ruled cases")
        if not cases:
            raise DomainError("cannot fit on an empty corpus")
        y = np.array([c.outcome.numeric for c in cases], dtype=np.int64)

        docs = [conversation_tokens(c.conversation) for c in cases]
        self.text_model_ = clone(self.text_model).fit(docs, y)
        self.schema_ = build_schema(cases, embedding_dim=self.text_model_.embedding_dim)

        X, _, report = self._assemble(cases)
        self.assembly_report_: AssemblyReport = report
        self.learner_, self.impute_means_, self.scale_ = fit_on_matrix(
            self.learner, X, y, feature_names=self.schema_.names
        )
        return self

    def _assemble(self, cases):
        feats = [predict_text(self.text_model_, c.conversation) for c in cases]
        return assemble_matrix(cases, feats, self.schema_)

    def _impute(self, X: np.ndarray) -> np.ndarray:
        return preprocess_matrix(X, self.impute_means_, self.scale_)

    def predict_proba(self, cases: list[DisputeCase]) -> np.ndarray:
        """Probability of a seller win per case."""
        X, _, _ = self._assemble(cases)
        return self.predict_matrix(X, self.schema_)

    def predict(self, cases: list[DisputeCase]) -> np.ndarray:
        return (self.predict_proba(cases) >= 0.5).astype(np.int64)

    def predict_matrix(self, X: np.ndarray, schema: FeatureSchema) -> np.ndarray:
        """Predict from a pre-assembled matrix, guarding the schema hash."""
        own, theirs = self.schema_.hash, schema.hash
        if own != theirs:
            raise DomainError(f"schema hash mismatch: model has {own}, input has {theirs}")
        return self.learner_.predict_proba(self._impute(X))[:, 1]

    def save(self, path) -> None:
        metadata = {
            "schema": self.schema_.to_json_dict(),
            "impute_means": None if self.impute_means_ is None else [repr(float(v)) for v in self.impute_means_],
            "scale": None if self.scale_ is None else [repr(float(v)) for v in self.scale_],
        }
        bundle = bundle_model(
            self.learner_,
            schema_hash=self.schema_.hash,
            text_model=self.text_model_,
            metadata=metadata,
        )
        serialize_model(bundle, path)

    @classmethod
    def load(cls, path) -> "DisputePipeline":
        bundle = load_model(path)
        if bundle.text_model is None:
            raise DomainError("model file lacks a text model; not a pipeline save")
        pipeline = cls(learner=bundle.model, text_model=bundle.text_model)
        pipeline.learner_ = bundle.model
        pipeline.text_model_ = bundle.text_model
        pipeline.schema_ = schema_from_json_dict(bundle.metadata["schema"])
        stored = bundle.metadata.get("impute_means")
        pipeline.impute_means_ = None if stored is None else np.array([float(v) for v in stored])
        scale = bundle.metadata.get("scale")
        pipeline.scale_ = None if scale is None else np.array([float(v) for v in scale])
        if pipeline.schema_.hash != bundle.schema_hash:
            raise DomainError(
                f"schema hash mismatch: file claims {bundle.schema_hash}, "
                f"stored schema hashes to {pipeline.schema_.hash}"
            )
        return pipeline
