"""Bitset graph kernels, numba-compiled unless disabled.

Adjacency is an array of uint64 rows, one row per vertex (vertex count
capped at 64 so a neighborhood fits one machine word); bit u of row v is
set when u and v are adjacent.  Everything here is written in
nopython-compatible style: with numba installed the functions below are
wrapped with @njit at import time, and with MODCYCLE_JIT=0 (or numba
missing) the very same code runs as plain Python over numpy scalars.
The slow path is the correctness reference; benchmarks/bench_kernels.py
compares the two.

Masks are always np.uint64 and indices plain integers; mixing the two in
arithmetic promotes to float under numba, so all shift counts are cast
explicitly.
"""

import os
import sys

import numpy as np

U0 = np.uint64(0)
U1 = np.uint64(1)
UMAX = np.uint64(0xFFFFFFFFFFFFFFFF)

# search outcomes shared by the cycle kernels
FOUND = 1
NOT_FOUND = 0
BUDGET_EXCEEDED = 2

JIT_ENV_VAR = "MODCYCLE_JIT"


def _jit_requested():
    value = os.environ.get(JIT_ENV_VAR, "").strip().lower()
    if value in ("0", "false", "no", "off"):
        return False
    return True


if _jit_requested():
    try:
        from numba import njit as _njit

        def _kernel(func):
            return _njit(cache=True)(func)

        JIT_ENABLED = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        def _kernel(func):
            return func

        JIT_ENABLED = False
else:
    def _kernel(func):
        return func

    JIT_ENABLED = False


@_kernel
def popcount(x):
    c = 0
    while x:
        x &= x - U1
        c += 1
    return c


@_kernel
def bit_index(x):
    # lowest set bit; x must be nonzero
    c = 0
    while (x >> np.uint64(c)) & U1 == U0:
        c += 1
    return c


@_kernel
def vbit(v):
    return U1 << np.uint64(v)


@_kernel
def full_mask(n):
    if n >= 64:
        return UMAX
    return (U1 << np.uint64(n)) - U1


@_kernel
def degrees_into(adj, n, out):
    for v in range(n):
        out[v] = popcount(adj[v])


@_kernel
def is_connected(adj, n):
    if n <= 1:
        return True
    seen = U1
    frontier = U1
    while frontier != U0:
        acc = U0
        m = frontier
        while m != U0:
            v = bit_index(m)
            m &= m - U1
            acc |= adj[v]
        frontier = acc & ~seen
        seen |= frontier
    return seen == full_mask(n)


@_kernel
def initial_degree_cells(adj, n, cells):
    # one cell per occupied degree value, ascending
    ncells = 0
    for d in range(n):
        fm = U0
        for v in range(n):
            if popcount(adj[v]) == d:
                fm |= vbit(v)
        if fm != U0:
            cells[ncells] = fm
            ncells += 1
    return ncells


@_kernel
def refine_partition(adj, n, cells, ncells):
    """Split cells by neighbor counts toward earlier cells until stable.

    Cell order stays an isomorphism invariant: the scan restarts from the
    first (splitter, target) pair after each split and fragments are
    ordered by ascending count.
    """
    counts = np.empty(64, np.int64)
    frag = np.empty(64, np.uint64)
    while True:
        split_at = -1
        nfrag = 0
        for s in range(ncells):
            sm = cells[s]
            for c in range(ncells):
                cm = cells[c]
                if cm & (cm - U1) == U0:
                    continue  # singleton
                m = cm
                v0 = bit_index(m)
                m &= m - U1
                base = popcount(adj[v0] & sm)
                counts[v0] = base
                cmin = base
                cmax = base
                while m != U0:
                    v = bit_index(m)
                    m &= m - U1
                    cnt = popcount(adj[v] & sm)
                    counts[v] = cnt
                    if cnt < cmin:
                        cmin = cnt
                    if cnt > cmax:
                        cmax = cnt
                if cmin != cmax:
                    nfrag = 0
                    for val in range(cmin, cmax + 1):
                        fm = U0
                        mm = cm
                        while mm != U0:
                            v = bit_index(mm)
                            mm &= mm - U1
                            if counts[v] == val:
                                fm |= vbit(v)
                        if fm != U0:
                            frag[nfrag] = fm
                            nfrag += 1
                    split_at = c
                    break
            if split_at >= 0:
                break
        if split_at < 0:
            return ncells
        shift = nfrag - 1
        i = ncells - 1
        while i > split_at:
            cells[i + shift] = cells[i]
            i -= 1
        for i in range(nfrag):
            cells[split_at + i] = frag[i]
        ncells += shift


@_kernel
def canonize(adj, n, cols_out, perm_out):
    """Lexicographically minimal adjacency bitstring over the stable partition.

    Backtracks over all labelings that list each refinement cell in order.
    On return cols_out[j] holds the canonical column word for position j
    (adjacency toward positions 0..j-1, earliest position most
    significant), perm_out maps position -> original vertex for one optimal
    labeling, and the returned mask is the set of vertices that can occupy
    the last position in some optimal labeling (one automorphism orbit).
    """
    if n == 0:
        return U0
    cells = np.empty(64, np.uint64)
    ncells = initial_degree_cells(adj, n, cells)
    ncells = refine_partition(adj, n, cells, ncells)
    pos_cell = np.empty(64, np.int64)
    p = 0
    for c in range(ncells):
        cnt = popcount(cells[c])
        for _ in range(cnt):
            pos_cell[p] = c
            p += 1
    for j in range(n):
        cols_out[j] = UMAX
    placed = np.empty(64, np.int64)
    pending = np.empty(64, np.uint64)
    improved = np.empty(65, np.uint8)
    orbit = U0
    used = U0
    improved[0] = 0
    pending[0] = cells[pos_cell[0]]
    j = 0
    while j >= 0:
        if pending[j] == U0:
            j -= 1
            if j >= 0:
                used &= ~vbit(placed[j])
            continue
        u = bit_index(pending[j])
        pending[j] &= pending[j] - U1
        col = U0
        row = adj[u]
        for i in range(j):
            col = (col << U1) | ((row >> np.uint64(placed[i])) & U1)
        if col > cols_out[j]:
            continue
        imp = improved[j]
        if col < cols_out[j]:
            cols_out[j] = col
            for jj in range(j + 1, n):
                cols_out[jj] = UMAX
            imp = 1
        if j == n - 1:
            if imp != 0:
                orbit = vbit(u)
                placed[j] = u
                for q in range(n):
                    perm_out[q] = placed[q]
            else:
                orbit |= vbit(u)
            continue
        placed[j] = u
        used |= vbit(u)
        j += 1
        improved[j] = imp
        pending[j] = cells[pos_cell[j]] & ~used
    return orbit


@_kernel
def count_optimal_labelings(adj, n):
    """Number of labelings achieving the canonical bitstring (= |Aut|)."""
    if n == 0:
        return 1
    cells = np.empty(64, np.uint64)
    ncells = initial_degree_cells(adj, n, cells)
    ncells = refine_partition(adj, n, cells, ncells)
    pos_cell = np.empty(64, np.int64)
    p = 0
    for c in range(ncells):
        cnt = popcount(cells[c])
        for _ in range(cnt):
            pos_cell[p] = c
            p += 1
    cols = np.empty(64, np.uint64)
    for j in range(n):
        cols[j] = UMAX
    placed = np.empty(64, np.int64)
    pending = np.empty(64, np.uint64)
    improved = np.empty(65, np.uint8)
    ties = 0
    used = U0
    improved[0] = 0
    pending[0] = cells[pos_cell[0]]
    j = 0
    while j >= 0:
        if pending[j] == U0:
            j -= 1
            if j >= 0:
                used &= ~vbit(placed[j])
            continue
        u = bit_index(pending[j])
        pending[j] &= pending[j] - U1
        col = U0
        row = adj[u]
        for i in range(j):
            col = (col << U1) | ((row >> np.uint64(placed[i])) & U1)
        if col > cols[j]:
            continue
        imp = improved[j]
        if col < cols[j]:
            cols[j] = col
            for jj in range(j + 1, n):
                cols[jj] = UMAX
            imp = 1
        if j == n - 1:
            if imp != 0:
                ties = 1
            else:
                ties += 1
            continue
        placed[j] = u
        used |= vbit(u)
        j += 1
        improved[j] = imp
        pending[j] = cells[pos_cell[j]] & ~used
    return ties


@_kernel
def gen_children(parent, np_, final, dmin_final, max_two, need_conn, dmin_now,
                 out_rows):
    """One-vertex augmentations of a parent graph, kept iff canonical.

    Tries every neighbor subset for a new vertex np_ and keeps a child only
    when the new vertex lies in the canonical-last orbit, so each
    isomorphism class at the next order arises from exactly one parent.
    Accepted children are written to out_rows in canonical labeling,
    (np_ + 1) words each, deduplicated among siblings.  When final is true
    the child must satisfy the target class constraints (minimum degree,
    bounded count of degree-2 vertices, connectivity); otherwise only the
    degree floor dmin_now is enforced.  Returns the number accepted.
    """
    nc = np_ + 1
    degp = np.empty(64, np.int64)
    for v in range(np_):
        degp[v] = popcount(parent[v])
    child = np.empty(64, np.uint64)
    cols = np.empty(64, np.uint64)
    perm = np.empty(64, np.int64)
    cells = np.empty(64, np.uint64)
    crow = np.empty(64, np.uint64)
    count = 0
    newbit = vbit(np_)
    nsub = 1 << np_
    for si in range(nsub):
        S = np.uint64(si)
        ds = popcount(S)
        if final:
            if ds < dmin_final:
                continue
            two = 0
            if ds == 2:
                two = 1
            ok = True
            for v in range(np_):
                d = degp[v] + np.int64((S >> np.uint64(v)) & U1)
                if d < dmin_final:
                    ok = False
                    break
                if d == 2:
                    two += 1
                    if two > max_two:
                        ok = False
                        break
            if not ok:
                continue
        elif dmin_now > 0:
            if ds < dmin_now:
                continue
            ok = True
            for v in range(np_):
                d = degp[v] + np.int64((S >> np.uint64(v)) & U1)
                if d < dmin_now:
                    ok = False
                    break
            if not ok:
                continue
        for v in range(np_):
            if (S >> np.uint64(v)) & U1 != U0:
                child[v] = parent[v] | newbit
            else:
                child[v] = parent[v]
        child[np_] = S
        if final and need_conn:
            if not is_connected(child, nc):
                continue
        # cheap reject: the last position always comes from the last stable
        # cell, so the new vertex must sit there to be canonical-last
        ncells = initial_degree_cells(child, nc, cells)
        ncells = refine_partition(child, nc, cells, ncells)
        if (cells[ncells - 1] >> np.uint64(np_)) & U1 == U0:
            continue
        orbit = canonize(child, nc, cols, perm)
        if (orbit >> np.uint64(np_)) & U1 == U0:
            continue
        for p in range(nc):
            r = U0
            row = child[perm[p]]
            for q in range(nc):
                if q != p and (row >> np.uint64(perm[q])) & U1 != U0:
                    r |= vbit(q)
            crow[p] = r
        dup = False
        for t in range(count):
            same = True
            for p in range(nc):
                if out_rows[t * nc + p] != crow[p]:
                    same = False
                    break
            if same:
                dup = True
                break
        if dup:
            continue
        for p in range(nc):
            out_rows[count * nc + p] = crow[p]
        count += 1
    return count


@_kernel
def anchored_cycle_search(adj, n, anchor, allowed, k, r, budget, path_out):
    """Exact search for a simple cycle through anchor inside allowed with
    length = r (mod k), every other cycle vertex drawn from allowed.

    Cycles are enumerated once each: rotations are fixed by the anchor and
    reflections by requiring second vertex < last vertex.  Branches are cut
    with a (vertex, residue) walk-reachability table, an over-approximation
    of the remaining path lengths, so pruning never loses a cycle.
    Returns (status, cycle_length, expansions_used).
    """
    T = np.empty(64, np.uint64)
    for d in range(k):
        T[d] = U0
    T[0] = vbit(anchor)
    changed = True
    while changed:
        changed = False
        for d in range(k):
            src = T[d]
            if src == U0:
                continue
            acc = U0
            m = src
            while m != U0:
                v = bit_index(m)
                m &= m - U1
                acc |= adj[v]
            acc &= allowed
            d2 = d + 1
            if d2 == k:
                d2 = 0
            new = acc & ~T[d2]
            if new != U0:
                T[d2] |= new
                changed = True
    pend = np.empty(66, np.uint64)
    expansions = 0
    visited = vbit(anchor)
    path_out[0] = anchor
    pos = 1
    need = (r - 1) % k
    if need < 0:
        need += k
    pend[1] = adj[anchor] & allowed & T[need]
    while pos >= 1:
        if pend[pos] == U0:
            pos -= 1
            if pos >= 1:
                visited &= ~vbit(path_out[pos])
            continue
        u = bit_index(pend[pos])
        pend[pos] &= pend[pos] - U1
        expansions += 1
        if expansions > budget:
            return BUDGET_EXCEEDED, 0, expansions
        if (pos >= 2 and (pos + 1) % k == r
                and (adj[u] >> np.uint64(anchor)) & U1 != U0
                and path_out[1] < u):
            path_out[pos] = u
            return FOUND, pos + 1, expansions
        path_out[pos] = u
        visited |= vbit(u)
        pos += 1
        need = (r - pos) % k
        if need < 0:
            need += k
        pend[pos] = adj[u] & allowed & ~visited & T[need]
    return NOT_FOUND, 0, expansions


@_kernel
def find_cycle_mod(adj, n, k, r, budget, path_out):
    """First simple cycle of length = r (mod k), anchored at its minimum
    vertex.  Returns (status, cycle_length)."""
    left = budget
    for a in range(n):
        if adj[a] == U0:
            continue
        allowed = full_mask(n) & ~(vbit(a) - U1)
        status, length, used = anchored_cycle_search(
            adj, n, a, allowed, k, r, left, path_out)
        if status == FOUND:
            return FOUND, length
        if status == BUDGET_EXCEEDED:
            return BUDGET_EXCEEDED, 0
        left -= used
    return NOT_FOUND, 0


@_kernel
def cycle_residues(adj, n, k, budget):
    """Bitmask of { length mod k } over all simple cycles, by full
    enumeration (early exit once every residue has appeared).
    Returns (status, mask)."""
    mask = U0
    fullm = full_mask(k)
    path = np.empty(64, np.int64)
    pend = np.empty(66, np.uint64)
    expansions = 0
    for a in range(n):
        if adj[a] == U0:
            continue
        allowed = full_mask(n) & ~(vbit(a) - U1)
        visited = vbit(a)
        path[0] = a
        pos = 1
        pend[1] = adj[a] & allowed
        while pos >= 1:
            if pend[pos] == U0:
                pos -= 1
                if pos >= 1:
                    visited &= ~vbit(path[pos])
                continue
            u = bit_index(pend[pos])
            pend[pos] &= pend[pos] - U1
            expansions += 1
            if expansions > budget:
                return BUDGET_EXCEEDED, mask
            if (pos >= 2 and (adj[u] >> np.uint64(a)) & U1 != U0
                    and path[1] < u):
                mask |= vbit((pos + 1) % k)
                if mask == fullm:
                    return NOT_FOUND, mask
            path[pos] = u
            visited |= vbit(u)
            pos += 1
            pend[pos] = adj[u] & allowed & ~visited
    return NOT_FOUND, mask


@_kernel
def path_residues_mask(adj, n, x, y, k, budget):
    """Bitmask of { length mod k } over all simple x..y paths.

    Branches that cannot reach y with a still-missing residue are cut via
    the walk table (an over-approximation, so no path is lost).
    Returns (status, mask)."""
    T = np.empty(64, np.uint64)
    for d in range(k):
        T[d] = U0
    T[0] = vbit(y)
    changed = True
    while changed:
        changed = False
        for d in range(k):
            src = T[d]
            if src == U0:
                continue
            acc = U0
            m = src
            while m != U0:
                v = bit_index(m)
                m &= m - U1
                acc |= adj[v]
            d2 = d + 1
            if d2 == k:
                d2 = 0
            new = acc & ~T[d2]
            if new != U0:
                T[d2] |= new
                changed = True
    mask = U0
    fullm = full_mask(k)
    path = np.empty(64, np.int64)
    pend = np.empty(66, np.uint64)
    expansions = 0
    visited = vbit(x)
    path[0] = x
    pos = 1
    pend[1] = adj[x] & ~visited
    while pos >= 1:
        if pend[pos] == U0:
            pos -= 1
            if pos >= 1:
                visited &= ~vbit(path[pos])
            continue
        u = bit_index(pend[pos])
        pend[pos] &= pend[pos] - U1
        expansions += 1
        if expansions > budget:
            return BUDGET_EXCEEDED, mask
        if u == y:
            mask |= vbit(pos % k)
            if mask == fullm:
                return NOT_FOUND, mask
            continue
        # only descend if some missing residue is still reachable from u
        needmask = U0
        for d in range(k):
            if (mask >> np.uint64(d)) & U1 == U0:
                t = (d - pos) % k
                if t < 0:
                    t += k
                needmask |= T[t]
        if (needmask >> np.uint64(u)) & U1 == U0:
            continue
        path[pos] = u
        visited |= vbit(u)
        pos += 1
        pend[pos] = adj[u] & ~visited
    return NOT_FOUND, mask


@_kernel
def cycle_through(adj, n, v, k, r, budget, path_out):
    """Simple cycle through v of length = r (mod k); (status, length)."""
    if adj[v] == U0:
        return NOT_FOUND, 0
    status, length, _ = anchored_cycle_search(
        adj, n, v, full_mask(n), k, r, budget, path_out)
    return status, length


_ALT_BACKENDS = {}


def load_backend(jit):
    """Import an independent copy of this module with the JIT flag forced.

    Used by the fallback-agreement tests and the benchmark so both code
    paths can run inside one process.
    """
    jit = bool(jit)
    if jit == JIT_ENABLED:
        return sys.modules[__name__]
    if jit in _ALT_BACKENDS:
        return _ALT_BACKENDS[jit]
    import importlib.util

    name = "%s_alt_%s" % (__name__, "jit" if jit else "py")
    spec = importlib.util.spec_from_file_location(name, __file__)
    module = importlib.util.module_from_spec(spec)
    previous = os.environ.get(JIT_ENV_VAR)
    os.environ[JIT_ENV_VAR] = "1" if jit else "0"
    try:
        spec.loader.exec_module(module)
    finally:
        if previous is None:
            os.environ.pop(JIT_ENV_VAR, None)
        else:
            os.environ[JIT_ENV_VAR] = previous
    _ALT_BACKENDS[jit] = module
    return module
