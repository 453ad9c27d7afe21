"""Out-of-sample losses: MSE and the two non-additive active-rank losses.

Ranks run from 0 (highest predicted activity) to N_test - 1; tied
predictions receive midranks, which makes a constant predictor score
exactly 0.5 on the sum loss and keeps everything deterministic. The
active set is the top max(1, ⌊(1-gamma) * N_test⌋) true activities of
the test set, ties broken by test-set position.
"""

import numpy as np

from .data import floor_scaled


def _check_batch(predicted, truth):
    predicted = np.asarray(predicted, dtype=np.float64)
    truth = np.asarray(truth, dtype=np.float64)
    if predicted.ndim != 1 or predicted.shape != truth.shape:
        raise ValueError(
            f"predicted and truth must be 1-d and equal length, got "
            f"{predicted.shape} vs {truth.shape}"
        )
    if predicted.size < 2:
        raise ValueError("need at least 2 test predictions")
    if not (np.all(np.isfinite(predicted)) and np.all(np.isfinite(truth))):
        raise ValueError("predictions and truths must be finite")
    return predicted, truth


def midranks_descending(predicted) -> np.ndarray:
    """Midranks of the predictions, 0 = highest value.

    Tied values share the mean of the rank positions they span; the rank
    sum is always n(n-1)/2.
    """
    p = np.asarray(predicted, dtype=np.float64)
    if p.ndim != 1 or p.size < 1:
        raise ValueError("predicted must be a nonempty 1-d sequence")
    if not np.all(np.isfinite(p)):
        raise ValueError("predicted values must be finite")
    n = p.size
    desc = np.argsort(-p, kind="stable")
    vals = p[desc]
    starts = np.flatnonzero(np.r_[True, vals[1:] != vals[:-1]])
    ends = np.r_[starts[1:], n]
    mid = (starts + ends - 1) / 2.0
    ranks = np.empty(n, dtype=np.float64)
    ranks[desc] = np.repeat(mid, ends - starts)
    return ranks


def active_count(n_test: int, gamma: float) -> int:
    """A = max(1, ⌊(1-gamma) * N_test⌋); must satisfy 1 <= A < N_test."""
    if not 0.0 < gamma < 1.0:
        raise ValueError(f"gamma must be in (0, 1), got {gamma}")
    a = max(1, floor_scaled(n_test, 1.0 - gamma))
    if a >= n_test:
        raise ValueError(f"active count {a} must be < test size {n_test}")
    return a


def active_set(truth, gamma: float) -> np.ndarray:
    """Positions of the A largest true activities (sorted ascending).

    Ties at the threshold are broken by test-set position, lower
    position first.
    """
    t = np.asarray(truth, dtype=np.float64)
    if t.ndim != 1 or t.size < 2:
        raise ValueError("truth must be 1-d with at least 2 entries")
    a = active_count(t.size, gamma)
    order = np.argsort(-t, kind="stable")
    return np.sort(order[:a])


def loss_min(predicted, truth, gamma: float) -> float:
    """Normalized rank of the best-ranked active molecule, in [0, 1]."""
    predicted, truth = _check_batch(predicted, truth)
    a = active_count(truth.size, gamma)
    ranks = midranks_descending(predicted)
    actives = active_set(truth, gamma)
    return float(ranks[actives].min() / (truth.size - a))


def loss_sum(predicted, truth, gamma: float) -> float:
    """Normalized sum of active ranks, in [0, 1]; equals loss_min when A=1."""
    predicted, truth = _check_batch(predicted, truth)
    n = truth.size
    a = active_count(n, gamma)
    ranks = midranks_descending(predicted)
    actives = active_set(truth, gamma)
    return float((ranks[actives].sum() - a * (a - 1) / 2.0) / (a * (n - a)))


def mse(predicted, truth) -> float:
    """Mean squared prediction error."""
    predicted, truth = _check_batch(predicted, truth)
    return float(np.mean((predicted - truth) ** 2))


def loss_names(gammas) -> list[str]:
    """Canonical record ordering: mse first, then lmin/lsum per gamma."""
    names = ["mse"]
    for g in gammas:
        names.append(f"lmin@{g:g}")
        names.append(f"lsum@{g:g}")
    return names


def evaluate_all(predicted, truth, gammas) -> dict:
    """All configured losses for one prediction batch, sharing one ranking."""
    predicted, truth = _check_batch(predicted, truth)
    n = truth.size
    ranks = midranks_descending(predicted)
    out = {"mse": float(np.mean((predicted - truth) ** 2))}
    for g in gammas:
        a = active_count(n, g)
        actives = active_set(truth, g)
        active_ranks = ranks[actives]
        out[f"lmin@{g:g}"] = float(active_ranks.min() / (n - a))
        out[f"lsum@{g:g}"] = float(
            (active_ranks.sum() - a * (a - 1) / 2.0) / (a * (n - a))
        )
    return out
