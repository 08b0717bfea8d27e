"""CART-style classification trees with Gini impurity, plus a bagged forest.

Shares the flat ``Tree`` node layout with the boosted ensemble, but leaf
weights here are class-1 probabilities (leaf positive rates) rather than
log-odds contributions. The split enumeration mirrors the boosted
trainer: exact greedy over distinct thresholds, missing direction picked
by trying both, ties to the lowest (feature index, threshold), then left.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from odr.domain import DomainError
from odr.learners.gbdt import Tree, _check_finite, _TreeGrower


def _gini_pair(pos: np.ndarray, cnt: np.ndarray) -> np.ndarray:
    p = np.divide(pos, cnt, out=np.zeros_like(np.asarray(pos, dtype=np.float64)), where=cnt > 0)
    return 2.0 * p * (1.0 - p)


def _build_cart_tree(
    Xs: np.ndarray,
    ys: np.ndarray,
    cols: np.ndarray,
    max_depth: int,
    min_samples_split: int,
    min_samples_leaf: int,
) -> Tree:
    n = len(Xs)
    grower = _TreeGrower()
    # node_g tracks positive counts, node_h row counts
    root = grower.add_node(float(ys.sum()), float(n), float(n))
    node_of = np.full(n, root, dtype=np.int64)
    open_nodes = [root]

    orders = {}
    for j in cols:
        col = Xs[:, j]
        present = int(n - np.isnan(col).sum())
        orders[j] = np.argsort(col, kind="stable")[:present]

    depth = 0
    while open_nodes and depth < max_depth:
        depth += 1
        is_open = np.zeros(len(grower.feature), dtype=bool)
        splittable = [
            node
            for node in open_nodes
            if grower.node_h[node] >= min_samples_split
            and 0.0 < grower.node_g[node] < grower.node_h[node]
        ]
        if not splittable:
            break
        is_open[splittable] = True
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
            cpos = np.cumsum(ys[rows_sorted])
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
                base_pos = cpos[s_i - 1] if s_i > 0 else 0.0
                pos_present = cpos[s_i + cand] - base_pos
                cnt_present = (cand + 1).astype(np.float64)
                pos_node = grower.node_g[node]
                cnt_node = grower.node_h[node]
                pos_missing = pos_node - (cpos[e_i - 1] - base_pos)
                cnt_missing = cnt_node - (e_i - s_i)
                parent_gini = float(_gini_pair(np.array([pos_node]), np.array([cnt_node]))[0])

                def directed_gain(pos_l, cnt_l):
                    pos_r = pos_node - pos_l
                    cnt_r = cnt_node - cnt_l
                    child = cnt_l * _gini_pair(pos_l, cnt_l) + cnt_r * _gini_pair(pos_r, cnt_r)
                    gain = parent_gini - child / cnt_node
                    ok = (cnt_l >= min_samples_leaf) & (cnt_r >= min_samples_leaf)
                    return np.where(ok, gain, -np.inf)

                gain_left = directed_gain(pos_present + pos_missing, cnt_present + cnt_missing)
                gain_right = directed_gain(pos_present, cnt_present)
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
                float(ys[left_rows].sum()), float(left_rows.size), float(left_rows.size)
            )
            right_id = grower.add_node(
                float(ys[right_rows].sum()), float(right_rows.size), float(right_rows.size)
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

    return _finish_cart(grower)


def _finish_cart(grower: _TreeGrower) -> Tree:
    n = len(grower.feature)
    feature = np.asarray(grower.feature, dtype=np.int64)
    left = np.asarray(grower.left, dtype=np.int64)
    right = np.asarray(grower.right, dtype=np.int64)
    cover = np.asarray(grower.cover, dtype=np.float64)
    pos = np.asarray(grower.node_g)
    cnt = np.asarray(grower.node_h)
    weight = np.zeros(n)
    leaves = feature < 0
    weight[leaves] = pos[leaves] / cnt[leaves]
    expectation = np.zeros(n)
    for node in range(n - 1, -1, -1):
        if leaves[node]:
            expectation[node] = weight[node]
        else:
            l, r = left[node], right[node]
            total = cover[l] + cover[r]
            expectation[node] = (cover[l] * expectation[l] + cover[r] * expectation[r]) / total
    return Tree(
        feature=feature,
        threshold=np.asarray(grower.threshold, dtype=np.float64),
        miss_left=np.asarray(grower.miss_left, dtype=bool),
        left=left,
        right=right,
        weight=weight,
        gain=np.asarray(grower.gain, dtype=np.float64),
        cover=cover,
        expectation=expectation,
    )


def _validate_xy(X, y):
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2 or len(X) != len(y):
        raise DomainError("X must be 2-D and aligned with y")
    if np.unique(y).size < 2:
        raise DomainError("labels must contain both classes coded 0/1")
    _check_finite(X)
    return X, y


class DecisionTreeClassifier(BaseEstimator):
    def __init__(
        self,
        max_depth: int = 12,
        min_samples_split: int = 10,
        min_samples_leaf: int = 5,
    ):
        self.max_depth = max_depth
        self.min_samples_split = min_samples_split
        self.min_samples_leaf = min_samples_leaf

    def fit(self, X, y):
        X, y = _validate_xy(X, y)
        self.tree_ = _build_cart_tree(
            X,
            y,
            np.arange(X.shape[1]),
            self.max_depth,
            self.min_samples_split,
            self.min_samples_leaf,
        )
        self.n_features_in_ = X.shape[1]
        return self

    def predict_proba(self, X) -> np.ndarray:
        X = np.ascontiguousarray(X, dtype=np.float64)
        p = self.tree_.predict_value(X)
        return np.column_stack([1.0 - p, p])

    def predict(self, X) -> np.ndarray:
        return (self.predict_proba(X)[:, 1] >= 0.5).astype(np.int64)


class RandomForestClassifier(BaseEstimator):
    """Bagged Gini trees; probabilities are averaged over trees."""

    def __init__(
        self,
        n_trees: int = 60,
        max_depth: int = 12,
        min_samples_split: int = 10,
        min_samples_leaf: int = 5,
        bootstrap: bool = True,
        max_features: float = 0.7,
        seed: int = 0,
    ):
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.min_samples_split = min_samples_split
        self.min_samples_leaf = min_samples_leaf
        self.bootstrap = bootstrap
        self.max_features = max_features
        self.seed = seed

    def fit(self, X, y):
        X, y = _validate_xy(X, y)
        n, d = X.shape
        rng = np.random.default_rng(self.seed)
        self.trees_ = []
        for _ in range(self.n_trees):
            if self.bootstrap:
                rows = np.sort(rng.integers(0, n, size=n))
            else:
                rows = np.arange(n)
            if self.max_features < 1.0:
                c = max(1, int(round(self.max_features * d)))
                cols = np.sort(rng.choice(d, size=c, replace=False))
            else:
                cols = np.arange(d)
            self.trees_.append(
                _build_cart_tree(
                    X[rows],
                    y[rows],
                    cols,
                    self.max_depth,
                    self.min_samples_split,
                    self.min_samples_leaf,
                )
            )
        self.n_features_in_ = d
        return self

    def predict_proba(self, X) -> np.ndarray:
        X = np.ascontiguousarray(X, dtype=np.float64)
        p = np.mean([tree.predict_value(X) for tree in self.trees_], axis=0)
        return np.column_stack([1.0 - p, p])

    def predict(self, X) -> np.ndarray:
        return (self.predict_proba(X)[:, 1] >= 0.5).astype(np.int64)
