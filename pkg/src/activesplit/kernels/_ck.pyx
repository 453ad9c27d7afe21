# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled kernels: CART tree growth and the SVR SMO solver.

Mirrors activesplit.kernels.pure operation for operation. The SVR
solver's float64 arithmetic matches the numpy fallback exactly (the
extension is compiled with -ffp-contract=off), so both backends return
bit-identical solutions; the tree builder matches up to floating-point
tie-breaking among features whose scores are mathematically distinct
but closer than one rounding error.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil

cdef double _TAU = 1e-12
cdef double _NEG_INF = float("-inf")
cdef double _POS_INF = float("inf")

# precompute the full Gram matrix below this size (fingerprint dot
# products are small exact integers, so caching changes no results)
cdef Py_ssize_t GRAM_CACHE_MAX = 2048


def build_forest(bits, y, rows_per_tree, max_depth, min_samples_split):
    """See activesplit.kernels.pure.build_forest."""
    bits = np.ascontiguousarray(bits, dtype=np.uint8)
    y = np.ascontiguousarray(y, dtype=np.float64)
    trees = []
    for rows in rows_per_tree:
        rows = np.ascontiguousarray(rows, dtype=np.int64)
        trees.append(_build_tree(bits, y, rows, int(max_depth), int(min_samples_split)))
    return trees


cdef _build_tree(const cnp.uint8_t[:, ::1] bits, const double[::1] y, const cnp.int64_t[::1] rows,
                 int max_depth, int min_samples_split):
    cdef Py_ssize_t p = bits.shape[1]
    cdef Py_ssize_t m = rows.shape[0]
    cdef Py_ssize_t cap = 2 * m + 1

    feature_arr = np.full(cap, -1, dtype=np.int32)
    left_arr = np.full(cap, -1, dtype=np.int32)
    right_arr = np.full(cap, -1, dtype=np.int32)
    value_arr = np.zeros(cap, dtype=np.float64)
    cdef cnp.int32_t[::1] feature = feature_arr
    cdef cnp.int32_t[::1] left = left_arr
    cdef cnp.int32_t[::1] right = right_arr
    cdef double[::1] value = value_arr

    idx_arr = np.array(rows, dtype=np.int64, copy=True)
    scratch_l = np.empty(m, dtype=np.int64)
    scratch_r = np.empty(m, dtype=np.int64)
    cdef cnp.int64_t[::1] idx = idx_arr
    cdef cnp.int64_t[::1] buf_l = scratch_l
    cdef cnp.int64_t[::1] buf_r = scratch_r

    s0_arr = np.zeros(p, dtype=np.float64)
    s1_arr = np.zeros(p, dtype=np.float64)
    c1_arr = np.zeros(p, dtype=np.int64)
    cdef double[::1] s0 = s0_arr
    cdef double[::1] s1 = s1_arr
    cdef cnp.int64_t[::1] c1 = c1_arr

    # DFS stack; depth can never exceed p because a binary feature
    # yields zero gain once it is constant within a node.
    cdef Py_ssize_t stack_cap = p + 8
    stack_arr = np.zeros((stack_cap, 5), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] stack = stack_arr
    cdef Py_ssize_t top = 0
    cdef Py_ssize_t n_nodes = 0

    cdef Py_ssize_t start, end, depth, parent, side, node
    cdef Py_ssize_t t, jj, r, nl, nr, best
    cdef double yv, s_tot, best_score, score, nl_f, nr_f, parent_score
    cdef Py_ssize_t count

    stack[0, 0] = 0
    stack[0, 1] = m
    stack[0, 2] = 0
    stack[0, 3] = -1
    stack[0, 4] = 0
    top = 1

    while top > 0:
        top -= 1
        start = stack[top, 0]
        end = stack[top, 1]
        depth = stack[top, 2]
        parent = stack[top, 3]
        side = stack[top, 4]

        node = n_nodes
        n_nodes += 1
        if parent >= 0:
            if side == 0:
                left[parent] = <cnp.int32_t> node
            else:
                right[parent] = <cnp.int32_t> node

        count = end - start
        for jj in range(p):
            s0[jj] = 0.0
            s1[jj] = 0.0
            c1[jj] = 0
        s_tot = 0.0
        for t in range(start, end):
            r = idx[t]
            yv = y[r]
            s_tot += yv
            for jj in range(p):
                if bits[r, jj]:
                    s1[jj] += yv
                    c1[jj] += 1
                else:
                    s0[jj] += yv
        value[node] = s_tot / count
        if depth >= max_depth or count < min_samples_split:
            continue

        parent_score = s_tot * s_tot / count
        best = -1
        best_score = _NEG_INF
        for jj in range(p):
            if c1[jj] == 0 or c1[jj] == count:
                continue
            nl_f = <double> (count - c1[jj])
            nr_f = <double> c1[jj]
            score = s0[jj] * s0[jj] / nl_f + s1[jj] * s1[jj] / nr_f
            if score > best_score:
                best_score = score
                best = jj
        if best < 0 or not (best_score - parent_score > 0.0):
            continue

        nl = 0
        nr = 0
        for t in range(start, end):
            r = idx[t]
            if bits[r, best]:
                buf_r[nr] = r
                nr += 1
            else:
                buf_l[nl] = r
                nl += 1
        for t in range(nl):
            idx[start + t] = buf_l[t]
        for t in range(nr):
            idx[start + nl + t] = buf_r[t]

        feature[node] = <cnp.int32_t> best
        # push right first so the left child is processed (numbered) next
        stack[top, 0] = start + nl
        stack[top, 1] = end
        stack[top, 2] = depth + 1
        stack[top, 3] = node
        stack[top, 4] = 1
        top += 1
        stack[top, 0] = start
        stack[top, 1] = start + nl
        stack[top, 2] = depth + 1
        stack[top, 3] = node
        stack[top, 4] = 0
        top += 1

    return (
        feature_arr[:n_nodes].copy(),
        left_arr[:n_nodes].copy(),
        right_arr[:n_nodes].copy(),
        value_arr[:n_nodes].copy(),
    )


def svr_solve(bits, y, double c, double epsilon, double tol, long max_iter):
    """See activesplit.kernels.pure.svr_solve."""
    bits = np.ascontiguousarray(bits, dtype=np.uint8)
    y_arr = np.ascontiguousarray(y, dtype=np.float64)
    cdef const cnp.uint8_t[:, ::1] b_mv = bits
    cdef const double[::1] yv = y_arr
    cdef Py_ssize_t n = b_mv.shape[0]
    cdef Py_ssize_t p = b_mv.shape[1]
    cdef Py_ssize_t words = (p + 63) // 64

    packed_arr = np.zeros((n, words), dtype=np.uint64)
    cdef cnp.uint64_t[:, ::1] packed = packed_arr
    cdef Py_ssize_t i, jj, wd, t
    for i in range(n):
        for jj in range(p):
            if b_mv[i, jj]:
                packed[i, jj >> 6] |= (<cnp.uint64_t> 1) << (jj & 63)

    pop_arr = np.zeros(n, dtype=np.float64)
    cdef double[::1] row_pop = pop_arr
    for i in range(n):
        for wd in range(words):
            row_pop[i] += __builtin_popcountll(packed[i, wd])

    cdef bint use_gram = n <= GRAM_CACHE_MAX
    cdef double[:, ::1] gram = None
    cdef double acc
    if use_gram:
        gram_arr = np.zeros((n, n), dtype=np.float64)
        gram = gram_arr
        for i in range(n):
            for t in range(i, n):
                acc = 0.0
                for wd in range(words):
                    acc += __builtin_popcountll(packed[i, wd] & packed[t, wd])
                gram[i, t] = acc
                gram[t, i] = acc

    a_arr = np.zeros(2 * n, dtype=np.float64)
    f_arr = np.zeros(n, dtype=np.float64)
    w_arr = np.zeros(p, dtype=np.float64)
    col_i_arr = np.zeros(n, dtype=np.float64)
    col_j_arr = np.zeros(n, dtype=np.float64)
    cdef double[::1] a = a_arr
    cdef double[::1] f = f_arr
    cdef double[::1] w = w_arr
    cdef double[::1] col_i = col_i_arr
    cdef double[::1] col_j = col_j_arr

    cdef long iters = 0
    cdef Py_ssize_t bi, bj, mi, mj, mol
    cdef double val, m_val, big_m, gap, kii, kit, eta_t, eta, bt, sc
    cdef double best_sc, pair_gap, room_i, room_j, delta, b_out

    gap = _NEG_INF
    m_val = _NEG_INF
    big_m = _POS_INF

    while True:
        # stop check: most violating up candidate vs lowest low candidate
        m_val = _NEG_INF
        big_m = _POS_INF
        bi = -1
        for t in range(n):  # alpha block, scanned first like the fallback
            val = (yv[t] - f[t]) - epsilon
            if a[t] < c and val > m_val:
                m_val = val
                bi = t
            if a[t] > 0.0 and val < big_m:
                big_m = val
        for t in range(n):  # alpha* block
            val = (yv[t] - f[t]) + epsilon
            if a[n + t] > 0.0 and val > m_val:
                m_val = val
                bi = n + t
            if a[n + t] < c and val < big_m:
                big_m = val
        gap = m_val - big_m
        if gap <= tol or iters >= max_iter:
            break

        mi = bi if bi < n else bi - n
        kii = row_pop[mi]
        if use_gram:
            for t in range(n):
                col_i[t] = gram[mi, t]
        else:
            for t in range(n):
                kit = 0.0
                for wd in range(words):
                    kit += __builtin_popcountll(packed[t, wd] & packed[mi, wd])
                col_i[t] = kit

        # second-order choice of j: maximize guaranteed decrease bt^2/eta
        bj = -1
        best_sc = _POS_INF
        pair_gap = 0.0
        eta = _TAU
        for t in range(n):  # alpha block
            val = (yv[t] - f[t]) - epsilon
            if a[t] > 0.0 and val < m_val:
                bt = m_val - val
                eta_t = kii + row_pop[t] - 2.0 * col_i[t]
                if eta_t <= 0.0:
                    eta_t = _TAU
                sc = -(bt * bt) / eta_t
                if sc < best_sc:
                    best_sc = sc
                    bj = t
                    pair_gap = bt
                    eta = eta_t
        for t in range(n):  # alpha* block
            val = (yv[t] - f[t]) + epsilon
            if a[n + t] < c and val < m_val:
                bt = m_val - val
                eta_t = kii + row_pop[t] - 2.0 * col_i[t]
                if eta_t <= 0.0:
                    eta_t = _TAU
                sc = -(bt * bt) / eta_t
                if sc < best_sc:
                    best_sc = sc
                    bj = n + t
                    pair_gap = bt
                    eta = eta_t
        if bj < 0:
            break

        mj = bj if bj < n else bj - n
        room_i = (c - a[bi]) if bi < n else a[bi]
        room_j = a[bj] if bj < n else (c - a[bj])
        delta = pair_gap / eta
        if room_i < delta:
            delta = room_i
        if room_j < delta:
            delta = room_j
        if bi < n:
            a[bi] = c if delta >= room_i else a[bi] + delta
        else:
            a[bi] = 0.0 if delta >= room_i else a[bi] - delta
        if bj < n:
            a[bj] = 0.0 if delta >= room_j else a[bj] - delta
        else:
            a[bj] = c if delta >= room_j else a[bj] + delta
        if mi != mj:
            if use_gram:
                for t in range(n):
                    f[t] += delta * (col_i[t] - gram[mj, t])
            else:
                for t in range(n):
                    kit = 0.0
                    for wd in range(words):
                        kit += __builtin_popcountll(packed[t, wd] & packed[mj, wd])
                    col_j[t] = kit
                    f[t] += delta * (col_i[t] - col_j[t])
            for jj in range(p):
                w[jj] += delta * (<double> b_mv[mi, jj] - <double> b_mv[mj, jj])
        iters += 1

    if m_val > _NEG_INF and big_m < _POS_INF:
        b_out = 0.5 * (m_val + big_m)
    elif m_val > _NEG_INF:
        b_out = m_val
    elif big_m < _POS_INF:
        b_out = big_m
    else:
        b_out = 0.0

    beta = a_arr[:n] - a_arr[n:]
    kkt = gap if gap > 0.0 else 0.0
    return w_arr, float(b_out), beta, int(iters), bool(gap <= tol), float(kkt)
