"""K-nearest-neighbor classifier over Euclidean distance."""

from __future__ import annotations

import numpy as np


class KNearestNeighbors:
    """Stores the training matrix; votes among the k nearest rows.

    Neighbor ranking uses a stable sort on distance, so equidistant rows
    keep training order. Vote ties resolve toward label 0. With distance
    weighting, votes are weighted 1/d; if any of the k neighbors sits at
    distance exactly 0, only those zero-distance neighbors vote.
    """

    def __init__(self, n_neighbors=5, weighting="uniform"):
        if weighting not in ("uniform", "distance"):
            raise ValueError(f"unknown weighting {weighting!r}")
        self.n_neighbors = n_neighbors
        self.weighting = weighting
        self.X_ = None
        self.y_ = None
        self.n_features_ = None

    def fit(self, X, y):
        self.X_ = np.asarray(X, dtype=float)
        self.y_ = np.asarray(y, dtype=np.int64)
        self.n_features_ = self.X_.shape[1]
        return self

    def predict(self, X):
        X = np.asarray(X, dtype=float)
        k = min(self.n_neighbors, len(self.y_))
        d2 = (
            (X * X).sum(axis=1)[:, None]
            + (self.X_ * self.X_).sum(axis=1)[None, :]
            - 2.0 * X @ self.X_.T
        )
        np.maximum(d2, 0.0, out=d2)
        nearest = np.argsort(d2, axis=1, kind="stable")[:, :k]
        out = np.zeros(X.shape[0], dtype=np.int64)
        for i in range(X.shape[0]):
            idx = nearest[i]
            labels = self.y_[idx]
            if self.weighting == "uniform":
                score1 = 2 * int(labels.sum()) - k  # votes for 1 minus votes for 0
                out[i] = 1 if score1 > 0 else 0
            else:
                dist = np.sqrt(d2[i, idx])
                zero = dist == 0.0
                if zero.any():
                    zl = labels[zero]
                    out[i] = 1 if 2 * int(zl.sum()) > len(zl) else 0
                else:
                    weights = 1.0 / dist
                    w1 = float(weights[labels == 1].sum())
                    w0 = float(weights[labels == 0].sum())
                    out[i] = 1 if w1 > w0 else 0
        return out
