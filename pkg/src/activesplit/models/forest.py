"""Random forest of CART regression trees on binary features."""

import numpy as np

from .. import kernels
from ..data import FP_BITS
from ..rng import derive_seed, make_rng
from .base import check_fit_inputs, check_predict_inputs


class ForestRegressor:
    """Ensemble of variance-reduction CART trees, one bootstrap per tree.

    All 128 features are candidates at every split; equal-gain splits
    tie-break to the lowest feature index, so a fit is a deterministic
    function of (hyperparameters, seed, X, y). Setting bootstrap=False
    (test hook) trains every tree on the full sample. max_depth=None
    lifts the depth cap (binary features bound depth at 128 anyway).
    """

    def __init__(self, n_trees: int = 100, max_depth: int | None = 10,
                 min_samples_split: int = 2, seed: int = 0, bootstrap: bool = True):
        if n_trees < 1:
            raise ValueError(f"n_trees must be >= 1, got {n_trees}")
        if max_depth is not None and max_depth < 1:
            raise ValueError(f"max_depth must be >= 1, got {max_depth}")
        if min_samples_split < 2:
            raise ValueError(f"min_samples_split must be >= 2, got {min_samples_split}")
        self.n_trees = int(n_trees)
        self.max_depth = max_depth
        self.min_samples_split = int(min_samples_split)
        self.seed = int(seed)
        self.bootstrap = bool(bootstrap)
        self.trees_ = None
        self.meta = {}

    def fit(self, X, y):
        X, y = check_fit_inputs(X, y)
        n = X.shape[0]
        if self.bootstrap:
            rows = np.stack([
                make_rng(derive_seed(self.seed, "tree", t)).integers(
                    0, n, size=n, dtype=np.int64)
                for t in range(self.n_trees)
            ])
        else:
            rows = np.tile(np.arange(n, dtype=np.int64), (self.n_trees, 1))
        depth = FP_BITS if self.max_depth is None else self.max_depth
        self.trees_ = kernels.build_forest(X, y, rows, depth, self.min_samples_split)
        self.meta = {"converged": True, "n_trees": self.n_trees}
        return self

    def predict(self, X):
        if self.trees_ is None:
            raise RuntimeError("model is not fitted")
        X = check_predict_inputs(X)
        acc = np.zeros(X.shape[0], dtype=np.float64)
        for tree in self.trees_:
            acc += predict_tree(tree, X)
        return acc / self.n_trees


def predict_tree(tree, bits) -> np.ndarray:
    """Route every row of `bits` down one flat-array tree."""
    feature, left, right, value = tree
    node = np.zeros(bits.shape[0], dtype=np.int32)
    while True:
        feat = feature[node]
        live = np.flatnonzero(feat >= 0)
        if live.size == 0:
            break
        cur = node[live]
        taken = bits[live, feature[cur]] == 1
        node[live] = np.where(taken, right[cur], left[cur])
    return value[node]
