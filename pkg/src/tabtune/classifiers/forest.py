"""Random forest: bootstrapped CART trees with per-split feature subsampling."""

from __future__ import annotations

import math

import numpy as np

from .tree import DecisionTree


class RandomForest:
    """Majority vote over trees; vote ties resolve toward label 0.

    ``bootstrap=False`` makes every tree see the identical training rows,
    which collapses the ensemble onto a single deterministic tree when
    ``max_features_frac`` is 1.0.
    """

    def __init__(self, n_estimators=50, max_depth=10, max_features_frac=1.0,
                 seed=0, bootstrap=True):
        self.n_estimators = n_estimators
        self.max_depth = max_depth
        self.max_features_frac = max_features_frac
        self.seed = seed
        self.bootstrap = bootstrap
        self.trees_ = []
        self.n_features_ = None

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y)
        n, d = X.shape
        self.n_features_ = d
        m = max(1, math.ceil(self.max_features_frac * d))
        rng = np.random.default_rng(self.seed)
        self.trees_ = []
        for _ in range(self.n_estimators):
            rows = rng.integers(0, n, size=n) if self.bootstrap else np.arange(n)
            tree = DecisionTree(
                max_depth=self.max_depth,
                min_samples_split=2,
                criterion="gini",
                feature_rng=rng,
                max_features=m,
            )
            tree.fit(X[rows], y[rows])
            self.trees_.append(tree)
        return self

    def tree_predictions(self, X):
        return np.stack([tree.predict(X) for tree in self.trees_])

    def predict(self, X):
        votes = self.tree_predictions(X).sum(axis=0)
        return (2 * votes > len(self.trees_)).astype(np.int64)
