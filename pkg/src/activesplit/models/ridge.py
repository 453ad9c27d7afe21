"""Ridge regression solved in closed form via the normal equations."""

import numpy as np

from .base import check_fit_inputs, check_predict_inputs


class RidgeRegressor:
    """Minimizes ||y - Xw - b||^2 + alpha * ||w||^2, intercept unpenalized.

    Columns of X and y are centered first, so the intercept drops out of
    the quadratic and the coefficients solve (Xc'Xc + alpha*I) w = Xc'yc
    exactly. With alpha > 0 the system is positive definite, hence never
    singular.
    """

    def __init__(self, alpha: float = 0.1):
        if not alpha > 0:
            raise ValueError(f"alpha must be > 0, got {alpha}")
        self.alpha = float(alpha)
        self.coef_ = None
        self.intercept_ = 0.0
        self.meta = {}

    def fit(self, X, y):
        X, y = check_fit_inputs(X, y)
        Xf = X.astype(np.float64)
        x_mean = Xf.mean(axis=0)
        y_mean = y.mean()
        Xc = Xf - x_mean
        gram = Xc.T @ Xc
        gram[np.diag_indices_from(gram)] += self.alpha
        self.coef_ = np.linalg.solve(gram, Xc.T @ (y - y_mean))
        self.intercept_ = float(y_mean - x_mean @ self.coef_)
        self.meta = {"converged": True}
        return self

    def predict(self, X):
        if self.coef_ is None:
            raise RuntimeError("model is not fitted")
        X = check_predict_inputs(X)
        return X.astype(np.float64) @ self.coef_ + self.intercept_
