# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same contracts as ``_kernels_py``."""
from libc.stdlib cimport malloc, free
from libc.math cimport fabs, INFINITY

cdef double TIE_RTOL = 1e-12


def original_cost(long[::1] seq, double[::1] p, long[::1] fam, long[::1] job,
                  double[::1] setup, double[::1] weight):
    cdef Py_ssize_t n = weight.shape[0], m = seq.shape[0], k, i, j
    cdef double t = 0.0, total = 0.0
    cdef long last = -1, f
    cdef double *done = <double *> malloc(max(n, 1) * sizeof(double))
    if done == NULL:
        raise MemoryError()
    try:
        for j in range(n):
            done[j] = 0.0
        for k in range(m):
            i = seq[k]
            f = fam[i]
            if f != last:
                t += setup[f]
                last = f
            t += p[i]
            j = job[i]
            if t > done[j]:
                done[j] = t
        for j in range(n):
            total += weight[j] * done[j]
    finally:
        free(done)
    return total


def tau_local_search(double[::1] p, double[::1] w, long[::1] lmin, double[::1] S):
    cdef Py_ssize_t n = p.shape[0], K = S.shape[0] - 1, r, t, b
    cdef double pj, wj, best, tol, pc, wc, base, d, ptot = 0.0, wtot = 0.0
    cdef double cost = 0.0, now = 0.0
    cdef long lo, bt
    cdef double *bp = <double *> malloc((K + 1) * sizeof(double))
    cdef double *bw = <double *> malloc((K + 1) * sizeof(double))
    cdef long *block = <long *> malloc(max(n, 1) * sizeof(long))
    if bp == NULL or bw == NULL or block == NULL:
        free(bp); free(bw); free(block)
        raise MemoryError()
    try:
        for t in range(K + 1):
            bp[t] = 0.0
            bw[t] = 0.0
        for r in range(n):
            pj = p[r]
            wj = w[r]
            lo = lmin[r]
            bt = K
            if lo < K:
                best = 0.0
                tol = TIE_RTOL * (wj * (S[K] + ptot + pj) + pj * wtot)
                pc = 0.0
                wc = 0.0
                base = S[K] + ptot
                for t in range(K):
                    pc += bp[t]
                    wc += bw[t]
                    if t < lo:
                        continue
                    d = wj * (S[t] + pc - base) + pj * (wtot - wc)
                    if d < best - tol:
                        best = d
                        bt = t
            block[r] = bt
            bp[bt] += pj
            bw[bt] += wj
            ptot += pj
            wtot += wj
        # blocks in order, ranks ascending inside each block
        for b in range(K + 1):
            if b > 0:
                now += S[b] - S[b - 1]
            for r in range(n):
                if block[r] == b:
                    now += p[r]
                    cost += w[r] * now
        result = [block[r] for r in range(n)]
    finally:
        free(bp); free(bw); free(block)
    return result, cost


def original_dp(double[::1] p, long[::1] fam, long[::1] job,
                double[::1] setup, double[::1] weight):
    cdef Py_ssize_t m = p.shape[0], n = weight.shape[0], K = setup.shape[0]
    cdef Py_ssize_t size = (<Py_ssize_t> 1) << m, full = size - 1
    cdef Py_ssize_t mask, o, j, row = K + 1
    cdef long g, f
    cdef double s, best, v, d, wr, target, tol
    cdef long *jobmask = <long *> malloc(max(n, 1) * sizeof(long))
    cdef double *wrem = <double *> malloc(size * sizeof(double))
    cdef double *value = <double *> malloc(size * row * sizeof(double))
    if jobmask == NULL or wrem == NULL or value == NULL:
        free(jobmask); free(wrem); free(value)
        raise MemoryError()
    seq = []
    try:
        for j in range(n):
            jobmask[j] = 0
        for o in range(m):
            jobmask[job[o]] |= (<long> 1) << o
        for mask in range(size):
            s = 0.0
            for j in range(n):
                if (mask & jobmask[j]) != jobmask[j]:
                    s += weight[j]
            wrem[mask] = s
        for g in range(row):
            value[full * row + g] = 0.0
        for mask in range(full - 1, -1, -1):
            wr = wrem[mask]
            for g in range(-1, K):
                best = INFINITY
                for o in range(m):
                    if (mask >> o) & 1:
                        continue
                    f = fam[o]
                    d = p[o]
                    if f != g:
                        d += setup[f]
                    v = d * wr + value[(mask | ((<Py_ssize_t> 1) << o)) * row + f + 1]
                    if v < best:
                        best = v
                value[mask * row + g + 1] = best
        cost = value[0]
        mask = 0
        g = -1
        while mask != full:
            target = value[mask * row + g + 1]
            tol = TIE_RTOL * (1.0 + fabs(target))
            wr = wrem[mask]
            for o in range(m):
                if (mask >> o) & 1:
                    continue
                f = fam[o]
                d = p[o]
                if f != g:
                    d += setup[f]
                if d * wr + value[(mask | ((<Py_ssize_t> 1) << o)) * row + f + 1] <= target + tol:
                    seq.append(o)
                    mask |= (<Py_ssize_t> 1) << o
                    g = f
                    break
    finally:
        free(jobmask); free(wrem); free(value)
    return cost, seq


def prec_dp(double[::1] p, double[::1] w, long[::1] pred_mask):
    cdef Py_ssize_t m = p.shape[0]
    cdef Py_ssize_t size = (<Py_ssize_t> 1) << m, full = size - 1, mask, v
    cdef double wall = 0.0, s, best, c, wr, target, tol
    cdef double *wrem = <double *> malloc(size * sizeof(double))
    cdef double *value = <double *> malloc(size * sizeof(double))
    if wrem == NULL or value == NULL:
        free(wrem); free(value)
        raise MemoryError()
    seq = []
    try:
        for v in range(m):
            wall += w[v]
        for mask in range(size):
            s = wall
            for v in range(m):
                if (mask >> v) & 1:
                    s -= w[v]
            wrem[mask] = s
        value[full] = 0.0
        for mask in range(full - 1, -1, -1):
            best = INFINITY
            wr = wrem[mask]
            for v in range(m):
                if (mask >> v) & 1 or (pred_mask[v] & mask) != pred_mask[v]:
                    continue
                c = p[v] * wr + value[mask | ((<Py_ssize_t> 1) << v)]
                if c < best:
                    best = c
            value[mask] = best
        cost = value[0]
        mask = 0
        while mask != full:
            target = value[mask]
            tol = TIE_RTOL * (1.0 + fabs(target))
            wr = wrem[mask]
            for v in range(m):
                if (mask >> v) & 1 or (pred_mask[v] & mask) != pred_mask[v]:
                    continue
                if p[v] * wr + value[mask | ((<Py_ssize_t> 1) << v)] <= target + tol:
                    seq.append(v)
                    mask |= (<Py_ssize_t> 1) << v
                    break
    finally:
        free(wrem); free(value)
    return cost, seq
