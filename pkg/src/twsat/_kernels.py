"""Hot loops, compiled with numba when available.

Set ``TWSAT_DISABLE_NUMBA=1`` to run the plain numpy/Python implementations
instead.  Both paths return identical results; ``benchmarks/bench_kernels.py``
times them side by side.
"""
from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

NUMBA_ENABLED = numba is not None and os.environ.get("TWSAT_DISABLE_NUMBA", "").lower() not in ("1", "true", "yes")


def _jit(fn):
    if NUMBA_ENABLED:
        return numba.njit(cache=True)(fn)
    return fn


def backend() -> str:
    return "numba" if NUMBA_ENABLED else "numpy"


# ---------------------------------------------------------------------------
# brute-force satisfiability over bitmask-encoded clauses

def _brute_force_loop(pos, neg, n):
    full = (1 << n) - 1
    m = pos.shape[0]
    for x in range(1 << n):
        nx = full ^ x
        ok = True
        for i in range(m):
            if (x & pos[i]) == 0 and (nx & neg[i]) == 0:
                ok = False
                break
        if ok:
            return x
    return -1


_brute_force_jit = _jit(_brute_force_loop)


def _brute_force_numpy(pos, neg, n, chunk=1 << 16):
    full = np.int64((1 << n) - 1)
    total = 1 << n
    for start in range(0, total, chunk):
        x = np.arange(start, min(total, start + chunk), dtype=np.int64)
        ok = np.ones(x.shape, dtype=bool)
        nx = full ^ x
        for p, q in zip(pos, neg):
            ok &= ((x & p) != 0) | ((nx & q) != 0)
        hit = np.flatnonzero(ok)
        if hit.size:
            return int(x[hit[0]])
    return -1


def brute_force(pos: np.ndarray, neg: np.ndarray, n: int) -> int:
    """A satisfying assignment as an integer (bit j-1 = x_j), or -1."""
    if NUMBA_ENABLED:
        return int(_brute_force_jit(pos, neg, n))
    return _brute_force_numpy(pos, neg, n)


# ---------------------------------------------------------------------------
# dynamic-programming join of one child table into its parent

def _dp_join_loop(parent_states, child_states, shared_var_mask, child_var_proj, child_clause_proj, out):
    checked = 0
    for a in range(parent_states.shape[0]):
        s = parent_states[a]
        key = s & shared_var_mask
        for b in range(child_states.shape[0]):
            checked += 1
            t = child_states[b]
            if child_var_proj[t] == key:
                out[s | child_clause_proj[t]] = True
    return checked


_dp_join_jit = _jit(_dp_join_loop)


def _dp_join_numpy(parent_states, child_states, shared_var_mask, child_var_proj, child_clause_proj, out):
    if parent_states.size and child_states.size:
        keys = parent_states & shared_var_mask
        match = keys[:, None] == child_var_proj[child_states][None, :]
        ia, ib = np.nonzero(match)
        out[parent_states[ia] | child_clause_proj[child_states[ib]]] = True
    return parent_states.size * child_states.size


def dp_join(parent_states, child_states, shared_var_mask, child_var_proj, child_clause_proj, out) -> int:
    """OR into ``out`` every merge of a live parent state with a compatible live child state.

    ``child_var_proj[t]``/``child_clause_proj[t]`` give child state ``t`` in parent
    bit positions (shared variables / shared clauses); child states whose
    forgotten clauses are undischarged must already be filtered out.
    Returns the number of (parent, child) pairs checked.
    """
    if NUMBA_ENABLED:
        return int(_dp_join_jit(parent_states, child_states, np.int64(shared_var_mask),
                                child_var_proj, child_clause_proj, out))
    return _dp_join_numpy(parent_states, child_states, shared_var_mask, child_var_proj, child_clause_proj, out)


# ---------------------------------------------------------------------------
# hybrid combine: parent member flags from child member flags

def _combine_loop(parent_size, child_tables, child_offsets, base, xp, req_mask, req_val, out):
    k = base.shape[0]
    pairs = 0
    for r in range(xp.shape[0]):
        rm = req_mask[r]
        rv = req_val[r]
        for m in range(parent_size):
            if (m & rm) != rv:
                continue
            pairs += 1
            if out[m]:
                continue
            ok = True
            for i in range(k):
                if not child_tables[child_offsets[i] + (base[i, m] | xp[r, i])]:
                    ok = False
                    break
            if ok:
                out[m] = True
    return pairs


_combine_jit = _jit(_combine_loop)


def _combine_numpy(parent_size, child_tables, child_offsets, base, xp, req_mask, req_val, out):
    m = np.arange(parent_size, dtype=np.int64)
    pairs = 0
    for r in range(xp.shape[0]):
        sel = (m & req_mask[r]) == req_val[r]
        pairs += int(np.count_nonzero(sel))
        for i in range(base.shape[0]):
            sel &= child_tables[child_offsets[i] + (base[i] | xp[r, i])]
        out |= sel
    return pairs


def combine(parent_size, child_tables, child_offsets, base, xp, req_mask, req_val, out) -> int:
    """Mark parent member m when some joint option r matches m's required bits and
    every child's flag at ``base[i, m] | xp[r, i]`` is set.  Returns matched pairs."""
    if NUMBA_ENABLED:
        return int(_combine_jit(parent_size, child_tables, child_offsets, base, xp, req_mask, req_val, out))
    return _combine_numpy(parent_size, child_tables, child_offsets, base, xp, req_mask, req_val, out)


# ---------------------------------------------------------------------------
# splitting-depth simulation on a bare tree (no SAT semantics)

MODE_HALF = 0
MODE_HC = 1


def _split_depth_loop(indptr, indices, mode, c, alphas, cap):
    n = indptr.shape[0] - 2
    stamp = np.zeros(n + 1, dtype=np.int64)
    smark = np.zeros(n + 1, dtype=np.int64)
    skel = np.zeros(n + 1, dtype=np.int64)
    seen = np.zeros(n + 1, dtype=np.int64)
    par = np.zeros(n + 1, dtype=np.int64)
    order = np.zeros(n + 1, dtype=np.int64)
    size = np.zeros(n + 1, dtype=np.int64)

    nbuf = np.zeros(cap, dtype=np.int64)
    sbuf = np.zeros(cap, dtype=np.int64)
    # stack entries: node offset, node count, S offset, S count, depth
    stack = np.zeros((cap, 5), dtype=np.int64)
    for v in range(1, n + 1):
        nbuf[v - 1] = v
    stack[0, 0] = 0
    stack[0, 1] = n
    stack[0, 2] = 0
    stack[0, 3] = 0
    stack[0, 4] = 0
    sp = 1
    ntop = n
    stop = 0
    vid = 0
    tick = 0
    max_depth = 0
    max_type = 0
    views = 0
    bound_violations = 0

    while sp > 0:
        sp -= 1
        off = stack[sp, 0]
        cnt = stack[sp, 1]
        soff = stack[sp, 2]
        scnt = stack[sp, 3]
        depth = stack[sp, 4]
        ntop = off + cnt
        stop = soff + scnt
        views += 1
        if scnt > max_type:
            max_type = scnt
        if scnt == cnt:
            if depth > max_depth:
                max_depth = depth
            continue
        vid += 1
        for t in range(cnt):
            stamp[nbuf[off + t]] = vid
        for t in range(scnt):
            smark[sbuf[soff + t]] = vid

        # --- choose the split node ---
        use_half = mode == MODE_HALF or scnt == 0
        if not use_half and cnt < (1 << (c - scnt)):
            use_half = True
        root = -1
        if scnt > 0:
            root = sbuf[soff]
            for t in range(scnt):
                if sbuf[soff + t] < root:
                    root = sbuf[soff + t]
        # skeleton (nodes between two splitting nodes), rooted at root
        tick += 1
        skel_id = tick
        if scnt >= 2:
            tick += 1
            qh = 0
            qt = 0
            order[qt] = root
            qt += 1
            seen[root] = tick
            par[root] = root
            while qh < qt:
                u = order[qh]
                qh += 1
                for e in range(indptr[u], indptr[u + 1]):
                    w = indices[e]
                    if stamp[w] == vid and seen[w] != tick:
                        seen[w] = tick
                        par[w] = u
                        order[qt] = w
                        qt += 1
            skel[root] = skel_id
            for t in range(scnt):
                u = sbuf[soff + t]
                while skel[u] != skel_id:
                    skel[u] = skel_id
                    u = par[u]

        p = -1
        for attempt in range(3):
            # attempt 0: alpha walk from root; 1: half walk; 2: done
            if attempt == 0:
                if use_half or scnt >= c:
                    continue
                start = root
                alpha = alphas[scnt - 1]
            elif attempt == 1:
                start = -1
                if scnt > 0:
                    start = root
                else:
                    for t in range(cnt):
                        u = nbuf[off + t]
                        deg = 0
                        for e in range(indptr[u], indptr[u + 1]):
                            if stamp[indices[e]] == vid:
                                deg += 1
                        if deg <= 1 and (start == -1 or u < start):
                            start = u
                alpha = 0.5
            else:
                break
            # walk
            if cnt == 1:
                q = start
            else:
                tick += 1
                qh = 0
                qt = 0
                order[qt] = start
                qt += 1
                seen[start] = tick
                par[start] = start
                while qh < qt:
                    u = order[qh]
                    qh += 1
                    for e in range(indptr[u], indptr[u + 1]):
                        w = indices[e]
                        if stamp[w] == vid and seen[w] != tick:
                            seen[w] = tick
                            par[w] = u
                            order[qt] = w
                            qt += 1
                for t in range(qt):
                    size[order[t]] = 1
                for t in range(qt - 1, 0, -1):
                    size[par[order[t]]] += size[order[t]]
                limit = np.int64(np.ceil(alpha * cnt - 1e-9))
                q = -1
                for e in range(indptr[start], indptr[start + 1]):
                    if stamp[indices[e]] == vid:
                        q = indices[e]
                while True:
                    nxt = -1
                    for e in range(indptr[q], indptr[q + 1]):
                        w = indices[e]
                        if stamp[w] == vid and w != par[q]:
                            if nxt == -1 or size[w] > size[nxt] or (size[w] == size[nxt] and w < nxt):
                                nxt = w
                    if nxt == -1 or cnt - size[nxt] + 1 > limit:
                        break
                    q = nxt
            if attempt == 0:
                if skel[q] != skel_id:
                    p = q
                    break
            else:
                if use_half or skel[q] == skel_id or scnt < 2:
                    p = q
                else:
                    # climb from q towards root until the skeleton is reached
                    tick += 1
                    qh = 0
                    qt = 0
                    order[qt] = root
                    qt += 1
                    seen[root] = tick
                    par[root] = root
                    while qh < qt:
                        u = order[qh]
                        qh += 1
                        for e in range(indptr[u], indptr[u + 1]):
                            w = indices[e]
                            if stamp[w] == vid and seen[w] != tick:
                                seen[w] = tick
                                par[w] = u
                                order[qt] = w
                                qt += 1
                    u = q
                    while skel[u] != skel_id:
                        u = par[u]
                    p = u
                break

        # --- split at p ---
        tick += 1
        seen[p] = tick
        nparts = 0
        largest = 0
        for e in range(indptr[p], indptr[p + 1]):
            w0 = indices[e]
            if stamp[w0] != vid or seen[w0] == tick:
                continue
            poff = ntop
            psoff = stop
            seen[w0] = tick
            qh = ntop
            nbuf[ntop] = w0
            ntop += 1
            while qh < ntop:
                u = nbuf[qh]
                qh += 1
                if smark[u] == vid:
                    sbuf[stop] = u
                    stop += 1
                for f in range(indptr[u], indptr[u + 1]):
                    w = indices[f]
                    if stamp[w] == vid and seen[w] != tick:
                        seen[w] = tick
                        nbuf[ntop] = w
                        ntop += 1
            nbuf[ntop] = p
            ntop += 1
            sbuf[stop] = p
            stop += 1
            if ntop + n + 4 >= cap or sp + 4 >= cap:
                return -1, -1, -1, -1
            stack[sp, 0] = poff
            stack[sp, 1] = ntop - poff
            stack[sp, 2] = psoff
            stack[sp, 3] = stop - psoff
            stack[sp, 4] = depth + 1
            if ntop - poff > largest:
                largest = ntop - poff
            sp += 1
            nparts += 1
        if nparts == 0:
            # leaf split of a single node: the node becomes a splitting node
            nbuf[ntop] = p
            sbuf[stop] = p
            stack[sp, 0] = ntop
            stack[sp, 1] = 1
            stack[sp, 2] = stop
            stack[sp, 3] = 1
            stack[sp, 4] = depth + 1
            ntop += 1
            stop += 1
            sp += 1
        if use_half and largest > cnt // 2 + 1:
            bound_violations += 1
    return max_depth, max_type, views, bound_violations


_split_depth_jit = _jit(_split_depth_loop)


def split_depth(indptr: np.ndarray, indices: np.ndarray, mode: int, c: int, alphas: np.ndarray):
    """Simulate a splitter on a whole tree.

    Returns (splitting depth, largest splitting-node count seen, views
    processed, half-bound violations).
    """
    n = indptr.shape[0] - 2
    cap = (n + 4) * 96
    fn = _split_depth_jit if NUMBA_ENABLED else _split_depth_loop
    out = fn(indptr.astype(np.int64), indices.astype(np.int64), int(mode), int(c),
             np.asarray(alphas, dtype=np.float64), cap)
    if out[0] < 0:
        raise RuntimeError("split-depth buffer exhausted")
    return tuple(int(x) for x in out)
