"""CART-style binary classification tree with greedy impurity-decrease splits."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def gini_impurity(labels) -> float:
    """1 - p0^2 - p1^2 over a nonempty binary label vector."""
    labels = np.asarray(labels)
    if labels.size == 0:
        raise ValueError("cannot compute impurity of an empty label vector")
    p1 = float(labels.mean())
    p0 = 1.0 - p1
    return 1.0 - p0 * p0 - p1 * p1


def entropy_impurity(labels) -> float:
    labels = np.asarray(labels)
    if labels.size == 0:
        raise ValueError("cannot compute impurity of an empty label vector")
    p1 = float(labels.mean())
    return float(_entropy_from_p1(np.array([p1]))[0])


def _gini_from_p1(p1):
    return 1.0 - p1 * p1 - (1.0 - p1) * (1.0 - p1)


def _entropy_from_p1(p1):
    p0 = 1.0 - p1
    out = np.zeros_like(p1)
    for p in (p0, p1):
        nz = p > 0
        out[nz] -= p[nz] * np.log2(p[nz])
    return out


_IMPURITY = {"gini": _gini_from_p1, "entropy": _entropy_from_p1}


def best_split(feature_column, labels, criterion: str = "gini"):
    """Best threshold for one feature, or None when no split helps.

    Candidate thresholds are the midpoints between consecutive distinct
    sorted feature values. Returns (threshold, gain) maximizing the impurity
    decrease; ties resolve to the smallest threshold. None when the feature
    is constant or no candidate has positive gain.
    """
    x = np.asarray(feature_column, dtype=float)
    y = np.asarray(labels)
    if len(x) != len(y):
        raise ValueError(f"feature has {len(x)} rows but labels has {len(y)}")
    if criterion not in _IMPURITY:
        raise ValueError(f"unknown criterion {criterion!r}")
    n = len(y)
    if n < 2:
        return None
    order = np.argsort(x, kind="stable")
    xs = x[order]
    ys = y[order]
    boundary = np.nonzero(xs[1:] != xs[:-1])[0]  # split after sorted position i
    if boundary.size == 0:
        return None
    impurity = _IMPURITY[criterion]
    ones = np.cumsum(ys)
    total_ones = ones[-1]
    n_left = boundary + 1
    n_right = n - n_left
    p1_left = ones[boundary] / n_left
    p1_right = (total_ones - ones[boundary]) / n_right
    parent = impurity(np.array([total_ones / n]))[0]
    weighted = (n_left * impurity(p1_left) + n_right * impurity(p1_right)) / n
    gains = parent - weighted
    best = int(np.argmax(gains))  # first max keeps the smallest threshold on ties
    if gains[best] <= 0.0:
        return None
    threshold = (xs[boundary[best]] + xs[boundary[best] + 1]) / 2.0
    return float(threshold), float(gains[best])


def _best_split_matrix(X, y, criterion):
    """best_split over every column at once; returns (feature, threshold,
    gain) or None. Same formulas and tie rules as best_split: smallest
    threshold within a feature, then smallest feature index."""
    n, d = X.shape
    if n < 2 or d == 0:
        return None
    impurity = _IMPURITY[criterion]
    order = np.argsort(X, axis=0)
    xs = np.take_along_axis(X, order, axis=0)
    ys = y[order]
    boundary = xs[1:] != xs[:-1]
    if not boundary.any():
        return None
    ones = np.cumsum(ys, axis=0)
    total = ones[-1].astype(float)
    n_left = np.arange(1, n, dtype=float)[:, None]
    n_right = n - n_left
    p1_left = ones[:-1] / n_left
    p1_right = (total - ones[:-1]) / n_right
    parent = impurity(np.array([total[0] / n]))[0]
    weighted = (n_left * impurity(p1_left) + n_right * impurity(p1_right)) / n
    gains = parent - weighted
    gains[~boundary] = -np.inf
    best_rows = np.argmax(gains, axis=0)  # first max: smallest threshold
    best_gains = gains[best_rows, np.arange(d)]
    feature = int(np.argmax(best_gains))  # first max: smallest feature index
    gain = best_gains[feature]
    if not np.isfinite(gain) or gain <= 0.0:
        return None
    row = best_rows[feature]
    threshold = (xs[row, feature] + xs[row + 1, feature]) / 2.0
    return feature, float(threshold), float(gain)


@dataclass
class _Node:
    label: int = 0
    feature: int = -1
    threshold: float = 0.0
    left: "_Node | None" = None
    right: "_Node | None" = None

    @property
    def is_leaf(self) -> bool:
        return self.left is None


def _majority(y) -> int:
    # ties resolve toward label 0
    return 1 if 2 * int(y.sum()) > len(y) else 0


class DecisionTree:
    """Greedy binary tree; rows with feature <= threshold go left.

    ``feature_rng``/``max_features`` enable per-split feature subsampling for
    forest use; by default every feature is considered at every node.
    """

    def __init__(self, max_depth=10, min_samples_split=2, criterion="gini",
                 feature_rng=None, max_features=None):
        if criterion not in _IMPURITY:
            raise ValueError(f"unknown criterion {criterion!r}")
        self.max_depth = max_depth
        self.min_samples_split = min_samples_split
        self.criterion = criterion
        self.feature_rng = feature_rng
        self.max_features = max_features
        self.n_features_ = None
        self.root_ = None

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y)
        self.n_features_ = X.shape[1]
        self.root_ = self._grow(X, y, depth=0)
        return self

    def _candidate_features(self):
        d = self.n_features_
        m = self.max_features
        if self.feature_rng is None or m is None or m >= d:
            return np.arange(d)
        return np.sort(self.feature_rng.choice(d, size=m, replace=False))

    def _grow(self, X, y, depth):
        if (
            depth >= self.max_depth
            or len(y) < self.min_samples_split
            or y.min() == y.max()
        ):
            return _Node(label=_majority(y))
        candidates = self._candidate_features()
        sub = X if len(candidates) == X.shape[1] else X[:, candidates]
        found = _best_split_matrix(sub, y, self.criterion)
        if found is None:
            return _Node(label=_majority(y))
        local_feature, threshold, _ = found
        feature = int(candidates[local_feature])
        mask = X[:, feature] <= threshold
        if mask.all() or not mask.any():  # degenerate midpoint rounding
            return _Node(label=_majority(y))
        node = _Node(feature=feature, threshold=threshold)
        node.left = self._grow(X[mask], y[mask], depth + 1)
        node.right = self._grow(X[~mask], y[~mask], depth + 1)
        return node

    def predict(self, X):
        X = np.asarray(X, dtype=float)
        out = np.zeros(X.shape[0], dtype=np.int64)
        self._predict_into(self.root_, X, np.arange(X.shape[0]), out)
        return out

    def _predict_into(self, node, X, rows, out):
        if rows.size == 0:
            return
        if node.is_leaf:
            out[rows] = node.label
            return
        mask = X[rows, node.feature] <= node.threshold
        self._predict_into(node.left, X, rows[mask], out)
        self._predict_into(node.right, X, rows[~mask], out)
