"""Pure-Python kernels; the fallback when the compiled extension is missing.

Signatures and results match ``_ckernels.pyx`` exactly.  All arrays are
plain sequences indexed by position.
"""

# relative slack for treating two candidate costs as tied
TIE_RTOL = 1e-12


def original_cost(seq, p, fam, job, setup, weight):
    done = [0.0] * len(weight)
    t = 0.0
    last = -1
    for i in seq:
        f = fam[i]
        if f != last:
            t += setup[f]
            last = f
        t += p[i]
        j = job[i]
        if t > done[j]:
            done[j] = t
    total = 0.0
    for j in range(len(weight)):
        total += weight[j] * done[j]
    return total


def tau_local_search(p, w, lmin, setup_prefix):
    """Greediest-improving block moves for a fixed setup order.

    Jobs arrive in weighted SPT rank order.  ``lmin[r]`` is the first block
    job ``r`` may occupy and ``setup_prefix[l]`` is the total setup time of
    the first ``l`` setups.  Every job starts in the last block; when job
    ``r`` is considered, all higher-ranked jobs still sit there behind it,
    so moving it to block ``t`` appends it to that block.

    Returns ``(block, cost)`` with ``block[r]`` the final block of job ``r``.
    """
    n = len(p)
    K = len(setup_prefix) - 1
    S = setup_prefix
    bp = [0.0] * (K + 1)
    bw = [0.0] * (K + 1)
    block = [K] * n
    ptot = 0.0
    wtot = 0.0
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

    members = [[] for _ in range(K + 1)]
    for r in range(n):
        members[block[r]].append(r)
    cost = 0.0
    t = 0.0
    for b in range(K + 1):
        if b > 0:
            t += S[b] - S[b - 1]
        for r in members[b]:
            t += p[r]
            cost += w[r] * t
    return block, cost


def original_dp(p, fam, job, setup, weight):
    """Exact optimum of the original model by memoized exhaustive search.

    State is (scheduled set, family of the last operation).  The cost of
    appending operation ``o`` is its duration (processing plus a setup on a
    family change) times the weight of every job still unfinished.
    Returns ``(cost, seq)``; ``seq`` is the lexicographically smallest
    optimal permutation of operation positions.
    """
    m = len(p)
    n = len(weight)
    K = len(setup)
    full = (1 << m) - 1
    jobmask = [0] * n
    for i in range(m):
        jobmask[job[i]] |= 1 << i
    size = 1 << m
    wrem = [0.0] * size
    for mask in range(size):
        s = 0.0
        for j in range(n):
            if mask & jobmask[j] != jobmask[j]:
                s += weight[j]
        wrem[mask] = s

    # value[mask][g + 1]; g = -1 means nothing scheduled yet
    inf = float("inf")
    value = [None] * size
    value[full] = [0.0] * (K + 1)
    for mask in range(full - 1, -1, -1):
        row = [inf] * (K + 1)
        wr = wrem[mask]
        for g in range(-1, K):
            best = inf
            for o in range(m):
                if mask >> o & 1:
                    continue
                f = fam[o]
                d = p[o] + (setup[f] if f != g else 0.0)
                v = d * wr + value[mask | 1 << o][f + 1]
                if v < best:
                    best = v
            row[g + 1] = best
        value[mask] = row

    seq = []
    mask = 0
    g = -1
    while mask != full:
        target = value[mask][g + 1]
        tol = TIE_RTOL * (1.0 + abs(target))
        wr = wrem[mask]
        for o in range(m):
            if mask >> o & 1:
                continue
            f = fam[o]
            d = p[o] + (setup[f] if f != g else 0.0)
            if d * wr + value[mask | 1 << o][f + 1] <= target + tol:
                seq.append(o)
                mask |= 1 << o
                g = f
                break
    return value[0][0], seq


def prec_dp(p, w, pred_mask):
    """Exact optimum of single-machine weighted completion time with precedence.

    ``pred_mask[v]`` is the bitmask of ``v``'s direct predecessors.  Returns
    ``(cost, seq)`` with the lexicographically smallest optimal order.
    """
    m = len(p)
    full = (1 << m) - 1
    size = 1 << m
    wall = sum(w)
    inf = float("inf")
    wrem = [0.0] * size
    for mask in range(size):
        s = wall
        for v in range(m):
            if mask >> v & 1:
                s -= w[v]
        wrem[mask] = s
    value = [inf] * size
    value[full] = 0.0
    for mask in range(full - 1, -1, -1):
        best = inf
        wr = wrem[mask]
        for v in range(m):
            if mask >> v & 1 or pred_mask[v] & mask != pred_mask[v]:
                continue
            c = p[v] * wr + value[mask | 1 << v]
            if c < best:
                best = c
        value[mask] = best

    seq = []
    mask = 0
    while mask != full:
        target = value[mask]
        tol = TIE_RTOL * (1.0 + abs(target))
        wr = wrem[mask]
        for v in range(m):
            if mask >> v & 1 or pred_mask[v] & mask != pred_mask[v]:
                continue
            if p[v] * wr + value[mask | 1 << v] <= target + tol:
                seq.append(v)
                mask |= 1 << v
                break
    return value[0], seq
