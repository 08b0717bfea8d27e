from odr.text.normalize import normalize, conversation_tokens
from odr.text.hashing import fnv1a64, featurize_ngrams
from odr.text.stem import stem
from odr.text.classifier import TextClassifier, TextFeatures, predict_text

__all__ = [
    "normalize",
    "conversation_tokens",
    "fnv1a64",
    "featurize_ngrams",
    "stem",
    "TextClassifier",
    "TextFeatures",
    "predict_text",
]
