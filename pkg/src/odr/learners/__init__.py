from odr.learners.loss import logistic_loss, loss_gradients, sigmoid
from odr.learners.gbdt import GBDTClassifier, Tree
from odr.learners.cart import DecisionTreeClassifier, RandomForestClassifier
from odr.learners.baselines import (
    GaussianNBClassifier,
    KNNClassifier,
    MajorityClassifier,
    MLPClassifier,
)
from odr.learners.serialize import (
    FORMAT_VERSION,
    ModelBundle,
    ModelFormatError,
    bundle_model,
    load_model,
    serialize_model,
)

__all__ = [
    "logistic_loss",
    "loss_gradients",
    "sigmoid",
    "GBDTClassifier",
    "Tree",
    "DecisionTreeClassifier",
    "RandomForestClassifier",
    "MajorityClassifier",
    "GaussianNBClassifier",
    "KNNClassifier",
    "MLPClassifier",
    "FORMAT_VERSION",
    "ModelBundle",
    "ModelFormatError",
    "bundle_model",
    "load_model",
    "serialize_model",
]
