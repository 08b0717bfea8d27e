"""Reference classifiers: majority vote, Gaussian naive Bayes,
k-nearest-neighbors, and a small feedforward network.

These expect fully observed matrices; the pipeline mean-imputes masked
entries before handing data to them (trees take NaNs natively).
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import minimize
from sklearn.base import BaseEstimator

from odr.domain import DomainError
from odr.learners.gbdt import _check_finite
from odr.learners.loss import sigmoid


def _validate_xy(X, y, allow_nan=False):
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2 or len(X) != len(y):
        raise DomainError("X must be 2-D and aligned with y")
    if np.unique(y).size < 2:
        raise DomainError("labels must contain both classes coded 0/1")
    if not allow_nan and np.isnan(X).any():
        raise DomainError("this learner requires imputed inputs, found NaN")
    _check_finite(X)
    return X, y


class MajorityClassifier(BaseEstimator):
    """Always predicts the most frequent training label; the reported
    probability is that label's empirical rate."""

    def fit(self, X, y):
        y = np.asarray(y, dtype=np.float64)
        if y.size == 0:
            raise DomainError("empty training set")
        self.prior_ = float(y.mean())
        self.n_features_in_ = np.asarray(X).shape[1] if np.asarray(X).ndim == 2 else 0
        return self

    def predict_proba(self, X) -> np.ndarray:
        n = len(X)
        p = np.full(n, self.prior_)
        return np.column_stack([1.0 - p, p])

    def predict(self, X) -> np.ndarray:
        return (self.predict_proba(X)[:, 1] >= 0.5).astype(np.int64)


class GaussianNBClassifier(BaseEstimator):
    """Per-class independent Gaussians with a variance floor of
    1e-9 times each feature's global variance."""

    def __init__(self, var_floor_scale: float = 1e-9):
        self.var_floor_scale = var_floor_scale

    def fit(self, X, y):
        X, y = _validate_xy(X, y)
        global_var = X.var(axis=0)
        floor = self.var_floor_scale * global_var
        floor[floor <= 0.0] = 1e-12
        self.class_prior_ = np.array([1.0 - y.mean(), y.mean()])
        self.means_ = np.stack([X[y == c].mean(axis=0) for c in (0.0, 1.0)])
        self.vars_ = np.stack(
            [np.maximum(X[y == c].var(axis=0), floor) for c in (0.0, 1.0)]
        )
        self.n_features_in_ = X.shape[1]
        return self

    def _joint_log_likelihood(self, X) -> np.ndarray:
        jll = []
        for c in (0, 1):
            diff = X - self.means_[c]
            log_pdf = -0.5 * (
                np.log(2.0 * np.pi * self.vars_[c]) + diff * diff / self.vars_[c]
            )
            jll.append(np.log(self.class_prior_[c]) + log_pdf.sum(axis=1))
        return np.column_stack(jll)

    def predict_proba(self, X) -> np.ndarray:
        X = np.ascontiguousarray(X, dtype=np.float64)
        jll = self._joint_log_likelihood(X)
        jll -= jll.max(axis=1, keepdims=True)
        likes = np.exp(jll)
        return likes / likes.sum(axis=1, keepdims=True)

    def predict(self, X) -> np.ndarray:
        return (self.predict_proba(X)[:, 1] >= 0.5).astype(np.int64)


class KNNClassifier(BaseEstimator):
    """k-nearest-neighbors over the stored training matrix.

    Neighbor rank ties break by training index. With distance weighting,
    exact-zero distances dominate: the prediction is the mean label of
    the coincident points.
    """

    def __init__(self, k: int = 7, metric: str = "euclidean", weights: str = "distance"):
        self.k = k
        self.metric = metric
        self.weights = weights

    def fit(self, X, y):
        X, y = _validate_xy(X, y)
        if self.k > len(X):
            raise DomainError(f"k={self.k} exceeds training size {len(X)}")
        if self.metric not in ("euclidean", "manhattan"):
            raise DomainError(f"unknown metric {self.metric!r}")
        if self.weights not in ("uniform", "distance"):
            raise DomainError(f"unknown weighting {self.weights!r}")
        self.X_ = X
        self.y_ = y
        self.n_features_in_ = X.shape[1]
        return self

    def _distances(self, Q: np.ndarray) -> np.ndarray:
        if self.metric == "euclidean":
            sq = (
                (Q * Q).sum(axis=1)[:, None]
                + (self.X_ * self.X_).sum(axis=1)[None, :]
                - 2.0 * Q @ self.X_.T
            )
            return np.sqrt(np.maximum(sq, 0.0))
        out = np.zeros((len(Q), len(self.X_)))
        for j in range(Q.shape[1]):
            out += np.abs(Q[:, j, None] - self.X_[None, :, j])
        return out

    def predict_proba(self, X) -> np.ndarray:
        Q = np.ascontiguousarray(X, dtype=np.float64)
        p = np.empty(len(Q))
        chunk = max(1, int(2_000_000 // max(1, len(self.X_))))
        for start in range(0, len(Q), chunk):
            block = Q[start : start + chunk]
            dist = self._distances(block)
            part = np.argpartition(dist, self.k - 1, axis=1)[:, : self.k]
            for i in range(len(block)):
                row = dist[i]
                # ties at the k-th distance resolve by train index, so
                # widen to every candidate at that distance before ranking
                kth = row[part[i]].max()
                cand = np.flatnonzero(row <= kth)
                order = cand[np.lexsort((cand, row[cand]))][: self.k]
                d = row[order]
                labels = self.y_[order]
                if self.weights == "uniform":
                    p[start + i] = labels.mean()
                elif (d == 0.0).any():
                    p[start + i] = labels[d == 0.0].mean()
                else:
                    w = 1.0 / d
                    p[start + i] = float((w * labels).sum() / w.sum())
        return np.column_stack([1.0 - p, p])

    def predict(self, X) -> np.ndarray:
        return (self.predict_proba(X)[:, 1] >= 0.5).astype(np.int64)


def _activation(name: str):
    if name == "relu":
        return lambda z: np.maximum(z, 0.0), lambda z, a: (z > 0).astype(np.float64)
    if name == "tanh":
        return np.tanh, lambda z, a: 1.0 - a * a
    if name == "logistic":
        return sigmoid, lambda z, a: a * (1.0 - a)
    raise DomainError(f"unknown activation {name!r}")


class MLPClassifier(BaseEstimator):
    """Feedforward binary classifier trained on logistic loss.

    Mini-batch adam by default; ``solver="lbfgs"`` hands the same loss
    and analytic gradient to a quasi-Newton routine. Inputs are taken
    as-is (no internal scaling), and the L2 penalty applies to weights
    only, scaled by 1/n like the data term.
    """

    def __init__(
        self,
        hidden_layers: tuple = (64,),
        activation: str = "relu",
        solver: str = "adam",
        alpha: float = 1e-3,
        learning_rate: float = 1e-3,
        batch_size: int = 128,
        epochs: int = 30,
        seed: int = 0,
    ):
        self.hidden_layers = hidden_layers
        self.activation = activation
        self.solver = solver
        self.alpha = alpha
        self.learning_rate = learning_rate
        self.batch_size = batch_size
        self.epochs = epochs
        self.seed = seed

    def _init_params(self, d: int, rng) -> list:
        sizes = [d, *self.hidden_layers, 1]
        params = []
        for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
            bound = np.sqrt(6.0 / (fan_in + fan_out))
            params.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
            params.append(np.zeros(fan_out))
        return params

    def _forward(self, X, params):
        act, _ = _activation(self.activation)
        a = X
        cache = [(None, a)]
        n_layers = len(params) // 2
        for layer in range(n_layers):
            W, b = params[2 * layer], params[2 * layer + 1]
            z = a @ W + b
            a = z if layer == n_layers - 1 else act(z)
            cache.append((z, a))
        return cache

    def _loss_grad(self, flat, shapes, X, y):
        params = self._unflatten(flat, shapes)
        _, act_grad = _activation(self.activation)
        n = len(X)
        cache = self._forward(X, params)
        margin = cache[-1][1][:, 0]
        p = sigmoid(margin)
        data_loss = float(np.mean(np.logaddexp(0.0, margin) - y * margin))
        reg = sum(float((W * W).sum()) for W in params[0::2])
        loss = data_loss + 0.5 * self.alpha * reg / n

        grads = [None] * len(params)
        delta = ((p - y) / n)[:, None]
        n_layers = len(params) // 2
        for layer in range(n_layers - 1, -1, -1):
            W = params[2 * layer]
            a_prev = cache[layer][1]
            grads[2 * layer] = a_prev.T @ delta + self.alpha * W / n
            grads[2 * layer + 1] = delta.sum(axis=0)
            if layer > 0:
                z_prev, a_prev_act = cache[layer]
                delta = (delta @ W.T) * act_grad(z_prev, a_prev_act)
        return loss, np.concatenate([g.ravel() for g in grads])

    @staticmethod
    def _flatten(params):
        return np.concatenate([p.ravel() for p in params])

    @staticmethod
    def _unflatten(flat, shapes):
        params, offset = [], 0
        for shape in shapes:
            size = int(np.prod(shape))
            params.append(flat[offset : offset + size].reshape(shape))
            offset += size
        return params

    def fit(self, X, y):
        X, y = _validate_xy(X, y)
        rng = np.random.default_rng(self.seed)
        params = self._init_params(X.shape[1], rng)
        shapes = [p.shape for p in params]
        flat = self._flatten(params)

        if self.solver == "lbfgs":
            result = minimize(
                self._loss_grad,
                flat,
                args=(shapes, X, y),
                method="L-BFGS-B",
                jac=True,
                options={"maxiter": 200},
            )
            flat = result.x
        elif self.solver == "adam":
            m = np.zeros_like(flat)
            v = np.zeros_like(flat)
            t = 0
            n = len(X)
            for _ in range(self.epochs):
                order = rng.permutation(n)
                for start in range(0, n, self.batch_size):
                    batch = order[start : start + self.batch_size]
                    t += 1
                    _, grad = self._loss_grad(flat, shapes, X[batch], y[batch])
                    m = 0.9 * m + 0.1 * grad
                    v = 0.999 * v + 0.001 * grad * grad
                    m_hat = m / (1.0 - 0.9**t)
                    v_hat = v / (1.0 - 0.999**t)
                    flat = flat - self.learning_rate * m_hat / (np.sqrt(v_hat) + 1e-8)
        else:
            raise DomainError(f"unknown solver {self.solver!r}")

        self.params_ = self._unflatten(flat, shapes)
        if not all(np.isfinite(p).all() for p in self.params_):
            raise DomainError("training diverged to non-finite weights")
        self.n_features_in_ = X.shape[1]
        return self

    def predict_proba(self, X) -> np.ndarray:
        X = np.ascontiguousarray(X, dtype=np.float64)
        margin = self._forward(X, self.params_)[-1][1][:, 0]
        p = sigmoid(margin)
        return np.column_stack([1.0 - p, p])

    def predict(self, X) -> np.ndarray:
        return (self.predict_proba(X)[:, 1] >= 0.5).astype(np.int64)
