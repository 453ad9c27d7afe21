"""Independent brute-force implementations used as test oracles.

Deliberately written with plain counting/enumeration, sharing no code
with the package implementations they check.
"""

import itertools

import numpy as np


def strict_ranks_descending(values):
    """Rank by counting strictly larger entries; assumes distinct values."""
    values = list(values)
    return [sum(1 for other in values if other > v) for v in values]


def active_positions(truth, count):
    """Positions of the `count` largest truths; lower position wins ties."""
    order = sorted(range(len(truth)), key=lambda i: (-truth[i], i))
    return sorted(order[:count])


def oracle_loss_min(predicted, truth, count):
    ranks = strict_ranks_descending(predicted)
    actives = active_positions(truth, count)
    return min(ranks[i] for i in actives) / (len(truth) - count)


def oracle_loss_sum(predicted, truth, count):
    ranks = strict_ranks_descending(predicted)
    actives = active_positions(truth, count)
    total = sum(ranks[i] for i in actives)
    return (total - count * (count - 1) / 2) / (count * (len(truth) - count))


def all_distinct_prediction_cases(n_test):
    """Every permutation of n distinct prediction values."""
    base = [float(v) for v in range(1, n_test + 1)]
    return itertools.permutations(base)


def permutation_mean_loss_sum(n_test, count):
    """Mean of the strict-rank sum loss over every prediction permutation."""
    truth = list(range(n_test))  # actives = last `count` positions by truth
    total = 0.0
    cases = 0
    for preds in all_distinct_prediction_cases(n_test):
        total += oracle_loss_sum(list(preds), truth, count)
        cases += 1
    return total / cases


def gamma_for_active_count(n_test, count):
    """A gamma whose active count is exactly `count` on a test of size n."""
    assert 1 <= count < n_test
    return 1.0 - (count + 0.5) / n_test


def steepest_descent_ridge(X, y, alpha, grad_tol=1e-10, max_iter=500000):
    """Exact-line-search gradient descent on the centered ridge objective."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    x_mean = X.mean(axis=0)
    y_mean = y.mean()
    xc = X - x_mean
    yc = y - y_mean
    w = np.zeros(X.shape[1])
    hess = 2.0 * (xc.T @ xc)
    hess[np.diag_indices_from(hess)] += 2.0 * alpha
    for _ in range(max_iter):
        grad = 2.0 * (xc.T @ (xc @ w - yc)) + 2.0 * alpha * w
        gnorm = np.linalg.norm(grad)
        if gnorm <= grad_tol:
            break
        step = (grad @ grad) / (grad @ (hess @ grad))
        w = w - step * grad
    b = y_mean - x_mean @ w
    return w, b


def build_tree_reference(bits, y, max_depth, min_samples_split=2):
    """Tiny recursive CART builder mirroring the documented split rule."""
    bits = np.asarray(bits)
    y = np.asarray(y, dtype=np.float64)

    def grow(rows, depth):
        sub_y = y[rows]
        node = {"value": float(np.mean(sub_y))}
        if depth >= max_depth or rows.size < min_samples_split:
            return node
        parent = float(np.sum((sub_y - sub_y.mean()) ** 2))
        best, best_gain = -1, 0.0
        for j in range(bits.shape[1]):
            mask = bits[rows, j] == 1
            if not mask.any() or mask.all():
                continue
            left, right = sub_y[~mask], sub_y[mask]
            ssd = float(np.sum((left - left.mean()) ** 2)
                        + np.sum((right - right.mean()) ** 2))
            gain = parent - ssd
            if gain > best_gain:
                best_gain, best = gain, j
        if best < 0:
            return node
        mask = bits[rows, best] == 1
        node["feature"] = best
        node["left"] = grow(rows[~mask], depth + 1)
        node["right"] = grow(rows[mask], depth + 1)
        return node

    return grow(np.arange(len(y)), 0)


def predict_tree_reference(node, bits):
    out = np.empty(len(bits))
    for i, row in enumerate(bits):
        cur = node
        while "feature" in cur:
            cur = cur["right"] if row[cur["feature"]] else cur["left"]
        out[i] = cur["value"]
    return out
