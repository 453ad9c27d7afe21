"""Linear epsilon-insensitive support vector regression."""

import numpy as np

from .. import kernels
from .base import check_fit_inputs, check_predict_inputs


class LinearSvr:
    """SMO solver for 0.5*||w||^2 + c * sum of epsilon-insensitive losses.

    The intercept is unregularized (it enters through the dual equality
    constraint, not as a penalized feature). Hitting max_iter is not an
    error; the fit is simply flagged converged=False.
    """

    def __init__(self, c: float = 1.0, epsilon: float = 0.1,
                 tol: float = 1e-4, max_iter: int = 10000):
        if not c > 0:
            raise ValueError(f"c must be > 0, got {c}")
        if epsilon < 0:
            raise ValueError(f"epsilon must be >= 0, got {epsilon}")
        if not tol > 0:
            raise ValueError(f"tol must be > 0, got {tol}")
        if max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {max_iter}")
        self.c = float(c)
        self.epsilon = float(epsilon)
        self.tol = float(tol)
        self.max_iter = int(max_iter)
        self.coef_ = None
        self.intercept_ = 0.0
        self.dual_coef_ = None
        self.meta = {}

    def fit(self, X, y):
        X, y = check_fit_inputs(X, y)
        w, b, beta, n_iter, converged, kkt = kernels.svr_solve(
            X, y, self.c, self.epsilon, self.tol, self.max_iter
        )
        self.coef_ = w
        self.intercept_ = b
        self.dual_coef_ = beta
        self.meta = {"n_iter": n_iter, "converged": converged, "kkt_violation": kkt}
        return self

    def predict(self, X):
        if self.coef_ is None:
            raise RuntimeError("model is not fitted")
        X = check_predict_inputs(X)
        return X.astype(np.float64) @ self.coef_ + self.intercept_
