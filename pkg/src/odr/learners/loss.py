"""Logistic loss and its derivatives on raw margins."""

from __future__ import annotations

import numpy as np


def sigmoid(margin: np.ndarray) -> np.ndarray:
    margin = np.asarray(margin, dtype=np.float64)
    out = np.empty_like(margin)
    pos = margin >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-margin[pos]))
    ez = np.exp(margin[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def logistic_loss(margin: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Per-example negative log-likelihood, computed stably:
    -[y log p + (1-y) log(1-p)] == logaddexp(0, m) - y*m."""
    margin = np.asarray(margin, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    return np.logaddexp(0.0, margin) - y * margin


def loss_gradients(margin: np.ndarray, y: np.ndarray):
    """(g, h) of the logistic loss w.r.t. the margin: g = p - y, h = p(1-p)."""
    p = sigmoid(margin)
    return p - np.asarray(y, dtype=np.float64), p * (1.0 - p)
