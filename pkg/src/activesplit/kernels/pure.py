"""Pure numpy implementations of the hot kernels.

Selected at import time by :mod:`activesplit.kernels` when the compiled
extension is unavailable (or forced via ACTIVESPLIT_PURE=1). The SVR
solver performs the same float64 operations in the same order as the
compiled version, so the two backends produce bit-identical solutions;
the tree builder is equivalent up to floating-point tie-breaking among
equal-gain features.
"""

import numpy as np

_TAU = 1e-12

# precompute the full Gram matrix below this size (fingerprint dot
# products are small exact integers, so caching changes no results)
GRAM_CACHE_MAX = 2048


def build_forest(bits, y, rows_per_tree, max_depth, min_samples_split):
    """Grow CART regression trees on binary features.

    bits: (n, p) uint8 feature matrix; y: (n,) float64 targets;
    rows_per_tree: (n_trees, m) int64 row indices (the bootstrap draw is
    the caller's responsibility). Splits maximize the reduction in sum
    of squared deviations; candidates tie-break to the lowest feature
    index; binary features make the threshold implicitly 0.5.

    Returns a list of (feature, left, right, value) flat-array tuples
    where feature == -1 marks a leaf.
    """
    bits = np.ascontiguousarray(bits, dtype=np.uint8)
    y = np.ascontiguousarray(y, dtype=np.float64)
    bits_f = bits.astype(np.float64)
    comp_f = 1.0 - bits_f
    return [
        _build_tree(bits_f, comp_f, y, np.asarray(rows, dtype=np.int64),
                    max_depth, min_samples_split)
        for rows in rows_per_tree
    ]


def _build_tree(bits_f, comp_f, y, rows, max_depth, min_samples_split):
    feature, left, right, value = [], [], [], []

    def grow(idx, depth):
        node = len(feature)
        ysub = y[idx]
        feature.append(-1)
        left.append(-1)
        right.append(-1)
        value.append(ysub.mean())
        m = idx.size
        if depth >= max_depth or m < min_samples_split:
            return node
        bsub = bits_f[idx]
        s_tot = ysub.sum()
        n1 = bsub.sum(axis=0)
        # both side sums are computed directly (not as s_tot - other), so
        # complementary feature columns get bitwise-identical scores and
        # the lowest-index tie-break is stable across backends
        s1 = ysub @ bsub
        s0 = ysub @ comp_f[idx]
        n0 = m - n1
        with np.errstate(divide="ignore", invalid="ignore"):
            score = s0 * s0 / n0 + s1 * s1 / n1
        score[(n1 == 0) | (n0 == 0)] = -np.inf
        best = int(np.argmax(score))
        if not (score[best] - s_tot * s_tot / m > 0.0):
            return node
        onesided = bsub[:, best] == 1.0
        left_idx = idx[~onesided]
        right_idx = idx[onesided]
        feature[node] = best
        left[node] = grow(left_idx, depth + 1)
        right[node] = grow(right_idx, depth + 1)
        return node

    grow(rows, 0)
    return (
        np.asarray(feature, dtype=np.int32),
        np.asarray(left, dtype=np.int32),
        np.asarray(right, dtype=np.int32),
        np.asarray(value, dtype=np.float64),
    )


def svr_solve(bits, y, c, epsilon, tol, max_iter):
    """Epsilon-insensitive linear SVR via SMO on the dual.

    Minimizes 0.5*||w||^2 + c * sum(max(0, |y_i - w.x_i - b| - epsilon))
    with an unregularized intercept (handled through the dual equality
    constraint). Working-set selection is second order: i is the most
    violating ascent variable, j maximizes the guaranteed objective
    decrease when paired with i. The loop stops when the KKT violation
    drops to `tol` or after `max_iter` pair updates.

    Returns (w, b, beta, n_iter, converged, kkt_violation).
    """
    bits = np.ascontiguousarray(bits, dtype=np.uint8)
    y = np.ascontiguousarray(y, dtype=np.float64)
    n, p = bits.shape
    bits_f = bits.astype(np.float64)
    row_pop = bits_f.sum(axis=1)
    row_pop2 = np.concatenate([row_pop, row_pop])
    gram = bits_f @ bits_f.T if n <= GRAM_CACHE_MAX else None

    a = np.zeros(2 * n)  # [alpha; alpha*], both in [0, c]
    f = np.zeros(n)  # w . x_i, maintained incrementally
    w = np.zeros(p)
    neg_inf = -np.inf
    pos_inf = np.inf
    iters = 0

    while True:
        resid = y - f
        v = np.concatenate([resid - epsilon, resid + epsilon])
        up = np.concatenate([a[:n] < c, a[n:] > 0.0])
        low = np.concatenate([a[:n] > 0.0, a[n:] < c])
        masked_up = np.where(up, v, neg_inf)
        masked_low = np.where(low, v, pos_inf)
        i = int(np.argmax(masked_up))
        m_val = float(masked_up[i])
        big_m = float(masked_low[int(np.argmin(masked_low))])
        gap = m_val - big_m
        if gap <= tol or iters >= max_iter:
            break

        mi = i if i < n else i - n
        # kernel column of molecule mi, exact small integers
        col_i = gram[mi] if gram is not None else bits_f @ bits_f[mi]
        eta_all = row_pop[mi] + row_pop2 - 2.0 * np.concatenate([col_i, col_i])
        eta_all[eta_all <= 0.0] = _TAU
        diff = m_val - v
        score = np.where(low & (v < m_val), -(diff * diff) / eta_all, pos_inf)
        j = int(np.argmin(score))
        mj = j if j < n else j - n
        eta = float(eta_all[j])
        pair_gap = m_val - float(v[j])
        room_i = (c - a[i]) if i < n else a[i]
        room_j = a[j] if j < n else (c - a[j])
        delta = pair_gap / eta
        if room_i < delta:
            delta = room_i
        if room_j < delta:
            delta = room_j
        # snap exactly onto the box when the step is bound-limited
        if i < n:
            a[i] = c if delta >= room_i else a[i] + delta
        else:
            a[i] = 0.0 if delta >= room_i else a[i] - delta
        if j < n:
            a[j] = 0.0 if delta >= room_j else a[j] - delta
        else:
            a[j] = c if delta >= room_j else a[j] + delta
        if mi != mj:
            col_j = gram[mj] if gram is not None else bits_f @ bits_f[mj]
            f += delta * (col_i - col_j)
            w += delta * (bits_f[mi] - bits_f[mj])
        iters += 1

    if np.isfinite(m_val) and np.isfinite(big_m):
        b = 0.5 * (m_val + big_m)
    elif np.isfinite(m_val):
        b = m_val
    elif np.isfinite(big_m):
        b = big_m
    else:
        b = 0.0
    beta = a[:n] - a[n:]
    return w, float(b), beta, iters, bool(gap <= tol), max(float(gap), 0.0)
