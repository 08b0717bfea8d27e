"""Gradient-boosted trees on logistic loss, exact greedy split search.

Each boosting round fits one regression tree to the current gradients
g_i = p_i - y_i with hessians h_i = p_i (1 - p_i). Splits maximize

    gain = 1/2 [ G_L^2/(H_L+lambda) + G_R^2/(H_R+lambda)
                 - (G_L+G_R)^2/(H_L+H_R+lambda) ] - gamma

over every distinct threshold of every candidate column, with the
missing-value direction learned per split by scoring both routings.
Leaf weights are -G/(H+lambda). Ties break toward the lowest (feature
index, threshold) and, between equal missing directions, toward left,
so training is bit-reproducible for a fixed seed no matter how the
candidate evaluation is scheduled.

NaN marks a missing value. Infinities are rejected up front.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator

from odr.domain import DomainError
from odr.learners.loss import loss_gradients, sigmoid


@dataclass
class Tree:
    """Flat node arrays; ``feature == -1`` marks a leaf.

    ``cover`` counts the training rows routed through each node and
    ``expectation`` is the cover-weighted mean leaf weight of the
    subtree, both kept for the interpretability layer.
    """

    feature: np.ndarray
    threshold: np.ndarray
    miss_left: np.ndarray
    left: np.ndarray
    right: np.ndarray
    weight: np.ndarray
    gain: np.ndarray = field(repr=False, default=None)
    cover: np.ndarray = field(repr=False, default=None)
    expectation: np.ndarray = field(repr=False, default=None)

    @property
    def n_nodes(self) -> int:
        return len(self.feature)

    def leaf_index(self, X: np.ndarray) -> np.ndarray:
        """Terminal node id for every row."""
        node = np.zeros(len(X), dtype=np.int64)
        while True:
            f = self.feature[node]
            active = np.flatnonzero(f >= 0)
            if active.size == 0:
                return node
            cur = node[active]
            vals = X[active, f[active]]
            go_left = np.where(
                np.isnan(vals), self.miss_left[cur], vals < self.threshold[cur]
            )
            node[active] = np.where(go_left, self.left[cur], self.right[cur])

    def predict_value(self, X: np.ndarray) -> np.ndarray:
        return self.weight[self.leaf_index(X)]

    def decision_path(self, x: np.ndarray) -> list[int]:
        """Node ids from the root to the leaf for one feature vector."""
        path = [0]
        node = 0
        while self.feature[node] >= 0:
            v = x[self.feature[node]]
            if np.isnan(v):
                go_left = bool(self.miss_left[node])
            else:
                go_left = bool(v < self.threshold[node])
            node = int(self.left[node] if go_left else self.right[node])
            path.append(node)
        return path


class _TreeGrower:
    """Accumulates nodes for one tree while splits are decided."""

    def __init__(self) -> None:
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.miss_left: list[bool] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.gain: list[float] = []
        self.node_g: list[float] = []
        self.node_h: list[float] = []
        self.cover: list[float] = []

    def add_node(self, g_sum: float, h_sum: float, cover: float) -> int:
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.miss_left.append(True)
        self.left.append(-1)
        self.right.append(-1)
        self.gain.append(0.0)
        self.node_g.append(g_sum)
        self.node_h.append(h_sum)
        self.cover.append(cover)
        return len(self.feature) - 1

    def finish(self, reg_lambda: float) -> Tree:
        n = len(self.feature)
        feature = np.asarray(self.feature, dtype=np.int64)
        left = np.asarray(self.left, dtype=np.int64)
        right = np.asarray(self.right, dtype=np.int64)
        cover = np.asarray(self.cover, dtype=np.float64)
        weight = np.zeros(n)
        leaves = feature < 0
        g = np.asarray(self.node_g)
        h = np.asarray(self.node_h)
        weight[leaves] = -g[leaves] / (h[leaves] + reg_lambda)
        expectation = np.zeros(n)
        # children always carry larger ids than their parent
        for node in range(n - 1, -1, -1):
            if leaves[node]:
                expectation[node] = weight[node]
            else:
                l, r = left[node], right[node]
                total = cover[l] + cover[r]
                expectation[node] = (
                    cover[l] * expectation[l] + cover[r] * expectation[r]
                ) / total
        return Tree(
            feature=feature,
            threshold=np.asarray(self.threshold, dtype=np.float64),
            miss_left=np.asarray(self.miss_left, dtype=bool),
            left=left,
            right=right,
            weight=weight,
            gain=np.asarray(self.gain, dtype=np.float64),
            cover=cover,
            expectation=expectation,
        )


def _split_gain(gl, hl, gr, hr, parent_term, reg_lambda, gamma):
    return 0.5 * (
        gl * gl / (hl + reg_lambda) + gr * gr / (hr + reg_lambda) - parent_term
    ) - gamma


def _build_tree(
    Xs: np.ndarray,
    gs: np.ndarray,
    hs: np.ndarray,
    cols: np.ndarray,
    max_depth: int,
    reg_lambda: float,
    gamma: float,
    min_child_weight: float,
) -> Tree:
    n = len(Xs)
    grower = _TreeGrower()
    root = grower.add_node(float(gs.sum()), float(hs.sum()), float(n))
    node_of = np.full(n, root, dtype=np.int64)
    open_nodes = [root]

    # presort each candidate column once; NaNs sort last and are dropped
    orders = {}
    for j in cols:
        col = Xs[:, j]
        present = int(n - np.isnan(col).sum())
        orders[j] = np.argsort(col, kind="stable")[:present]

    for _ in range(max_depth):
        if not open_nodes:
            break
        is_open = np.zeros(len(grower.feature), dtype=bool)
        is_open[open_nodes] = True
        best: dict[int, tuple[float, int, float, bool]] = {}

        for j in cols:
            op = orders[j]
            nd = node_of[op]
            keep = is_open[nd]
            rows_sorted = op[keep]
            if rows_sorted.size == 0:
                continue
            nodes_sorted = nd[keep]
            stable = np.argsort(nodes_sorted, kind="stable")
            rows_sorted = rows_sorted[stable]
            nodes_sorted = nodes_sorted[stable]
            vals = Xs[rows_sorted, j]
            cg = np.cumsum(gs[rows_sorted])
            ch = np.cumsum(hs[rows_sorted])
            boundaries = np.flatnonzero(nodes_sorted[1:] != nodes_sorted[:-1]) + 1
            starts = np.concatenate(([0], boundaries))
            ends = np.concatenate((boundaries, [nodes_sorted.size]))

            for s_i, e_i in zip(starts, ends):
                if e_i - s_i < 2:
                    continue
                node = int(nodes_sorted[s_i])
                seg_vals = vals[s_i:e_i]
                cand = np.flatnonzero(seg_vals[:-1] != seg_vals[1:])
                if cand.size == 0:
                    continue
                base_g = cg[s_i - 1] if s_i > 0 else 0.0
                base_h = ch[s_i - 1] if s_i > 0 else 0.0
                gl_present = cg[s_i + cand] - base_g
                hl_present = ch[s_i + cand] - base_h
                g_node = grower.node_g[node]
                h_node = grower.node_h[node]
                g_missing = g_node - (cg[e_i - 1] - base_g)
                h_missing = h_node - (ch[e_i - 1] - base_h)
                parent_term = g_node * g_node / (h_node + reg_lambda)

                gl_l = gl_present + g_missing
                hl_l = hl_present + h_missing
                gain_left = _split_gain(
                    gl_l, hl_l, g_node - gl_l, h_node - hl_l,
                    parent_term, reg_lambda, gamma,
                )
                ok_left = (hl_l >= min_child_weight) & (
                    h_node - hl_l >= min_child_weight
                )
                gain_left = np.where(ok_left, gain_left, -np.inf)

                gain_right = _split_gain(
                    gl_present, hl_present,
                    g_node - gl_present, h_node - hl_present,
                    parent_term, reg_lambda, gamma,
                )
                ok_right = (hl_present >= min_child_weight) & (
                    h_node - hl_present >= min_child_weight
                )
                gain_right = np.where(ok_right, gain_right, -np.inf)

                use_left = gain_left >= gain_right
                cand_gain = np.where(use_left, gain_left, gain_right)
                pick = int(np.argmax(cand_gain))
                top = float(cand_gain[pick])
                if top <= 0.0 or not np.isfinite(top):
                    continue
                prev = best.get(node)
                if prev is None or top > prev[0]:
                    v_lo = float(seg_vals[cand[pick]])
                    v_hi = float(seg_vals[cand[pick] + 1])
                    threshold = 0.5 * (v_lo + v_hi)
                    if threshold <= v_lo:
                        threshold = v_hi
                    best[node] = (top, int(j), threshold, bool(use_left[pick]))

        next_open = []
        for node in open_nodes:
            chosen = best.get(node)
            if chosen is None:
                continue
            top, j, threshold, miss_left = chosen
            idx = np.flatnonzero(node_of == node)
            col = Xs[idx, j]
            go_left = np.where(np.isnan(col), miss_left, col < threshold)
            left_rows = idx[go_left]
            right_rows = idx[~go_left]
            left_id = grower.add_node(
                float(gs[left_rows].sum()), float(hs[left_rows].sum()), float(left_rows.size)
            )
            right_id = grower.add_node(
                float(gs[right_rows].sum()), float(hs[right_rows].sum()), float(right_rows.size)
            )
            grower.feature[node] = j
            grower.threshold[node] = threshold
            grower.miss_left[node] = miss_left
            grower.left[node] = left_id
            grower.right[node] = right_id
            grower.gain[node] = top
            node_of[left_rows] = left_id
            node_of[right_rows] = right_id
            next_open.extend((left_id, right_id))
        open_nodes = next_open

    return grower.finish(reg_lambda)


def _check_finite(X: np.ndarray, feature_names=None) -> None:
    bad = np.isinf(X).any(axis=0)
    if bad.any():
        j = int(np.flatnonzero(bad)[0])
        name = feature_names[j] if feature_names is not None else f"column {j}"
        raise DomainError(f"non-finite values in feature {name}")


class GBDTClassifier(BaseEstimator):
    """Boosted tree ensemble; prediction is
    sigmoid(base_score + sum_t eta * leaf_t(x))."""

    def __init__(
        self,
        n_trees: int = 200,
        learning_rate: float = 0.3,
        max_depth: int = 6,
        subsample: float = 1.0,
        colsample: float = 1.0,
        min_child_weight: float = 1.0,
        reg_lambda: float = 1.0,
        gamma: float = 0.0,
        base_score: float | None = None,
        seed: int = 0,
    ):
        self.n_trees = n_trees
        self.learning_rate = learning_rate
        self.max_depth = max_depth
        self.subsample = subsample
        self.colsample = colsample
        self.min_child_weight = min_child_weight
        self.reg_lambda = reg_lambda
        self.gamma = gamma
        self.base_score = base_score
        self.seed = seed

    def fit(self, X, y, feature_names=None):
        X = np.ascontiguousarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        if X.ndim != 2 or len(X) != len(y):
            raise DomainError("X must be 2-D and aligned with y")
        classes = np.unique(y)
        if not np.isin(classes, (0.0, 1.0)).all() or classes.size < 2:
            raise DomainError("labels must contain both classes coded 0/1")
        _check_finite(X, feature_names)

        n, d = X.shape
        if self.base_score is None:
            prior = y.mean()
            base = float(np.log(prior / (1.0 - prior)))
        else:
            base = float(self.base_score)

        rng = np.random.default_rng(self.seed)
        margins = np.full(n, base)
        trees: list[Tree] = []
        for _ in range(self.n_trees):
            g, h = loss_gradients(margins, y)
            if self.subsample < 1.0:
                m = max(1, int(round(self.subsample * n)))
                rows = np.sort(rng.choice(n, size=m, replace=False))
            else:
                rows = np.arange(n)
            if self.colsample < 1.0:
                c = max(1, int(round(self.colsample * d)))
                cols = np.sort(rng.choice(d, size=c, replace=False))
            else:
                cols = np.arange(d)
            tree = _build_tree(
                X[rows],
                g[rows],
                h[rows],
                cols,
                self.max_depth,
                self.reg_lambda,
                self.gamma,
                self.min_child_weight,
            )
            margins += self.learning_rate * tree.predict_value(X)
            trees.append(tree)

        self.trees_ = trees
        self.base_score_ = base
        self.n_features_in_ = d
        self.feature_names_ = list(feature_names) if feature_names is not None else None
        return self

    def _validate_predict(self, X) -> np.ndarray:
        X = np.ascontiguousarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features_in_:
            raise DomainError(
                f"expected {self.n_features_in_} features, got {X.shape[1] if X.ndim == 2 else 'non-2D'}"
            )
        _check_finite(X, self.feature_names_)
        return X

    def predict_margin(self, X) -> np.ndarray:
        X = self._validate_predict(X)
        margin = np.full(len(X), self.base_score_)
        for tree in self.trees_:
            margin += self.learning_rate * tree.predict_value(X)
        return margin

    def predict_proba(self, X) -> np.ndarray:
        p = sigmoid(self.predict_margin(X))
        return np.column_stack([1.0 - p, p])

    def predict(self, X) -> np.ndarray:
        return (self.predict_proba(X)[:, 1] >= 0.5).astype(np.int64)
