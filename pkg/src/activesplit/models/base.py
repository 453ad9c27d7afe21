"""Shared input validation for the four regressors."""

import numpy as np

from ..data import FP_BITS

MIN_TRAIN_ROWS = 5


def check_fit_inputs(X, y):
    """Validate and canonicalize training data: (n, 128) bits, finite y."""
    X = np.ascontiguousarray(X)
    y = np.ascontiguousarray(y, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != FP_BITS:
        raise ValueError(f"X must have shape (n, {FP_BITS}), got {X.shape}")
    if y.shape != (X.shape[0],):
        raise ValueError(f"y must have shape ({X.shape[0]},), got {y.shape}")
    if X.shape[0] < MIN_TRAIN_ROWS:
        raise ValueError(f"need at least {MIN_TRAIN_ROWS} training rows")
    if not np.all(np.isfinite(y)):
        raise ValueError("training targets must be finite")
    if X.dtype != np.uint8:
        if not np.isin(X, (0, 1)).all():
            raise ValueError("X entries must be 0 or 1")
        X = X.astype(np.uint8)
    elif X.max(initial=0) > 1:
        raise ValueError("X entries must be 0 or 1")
    return X, y


def check_predict_inputs(X):
    """Validate prediction-time features; feature count must be 128."""
    X = np.ascontiguousarray(X)
    if X.ndim != 2 or X.shape[1] != FP_BITS:
        raise ValueError(f"X must have shape (m, {FP_BITS}), got {X.shape}")
    return X
