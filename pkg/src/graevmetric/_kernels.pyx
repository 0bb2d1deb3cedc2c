# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same contracts as ``_pykernels``."""
from heapq import heappop, heappush

from libc.stdlib cimport free, malloc
from libc.string cimport memcpy

from .errors import BudgetExceeded


cdef struct BF:
    int n_gens
    int* gl
    int* goff
    int* glen
    long long* cost
    int* tu
    int tu_len
    int* tv
    int tv_len
    int length
    int maxg
    int width
    int* pbuf
    int* qbuf
    int* plen
    int* qlen
    long long best
    int found


cdef inline int _append(int* src, int slen, int* g, int glen, int* dst) noexcept:
    cdef int n = slen
    cdef int i
    memcpy(dst, src, slen * sizeof(int))
    for i in range(glen):
        if n > 0 and dst[n - 1] == -g[i]:
            n -= 1
        else:
            dst[n] = g[i]
            n += 1
    return n


cdef inline int _tree_dist(int* p, int plen, int* t, int tlen) noexcept:
    cdef int k = 0
    while k < plen and k < tlen and p[k] == t[k]:
        k += 1
    return plen + tlen - 2 * k


cdef inline bint _same(int* p, int plen, int* t, int tlen) noexcept:
    cdef int k
    if plen != tlen:
        return False
    for k in range(plen):
        if p[k] != t[k]:
            return False
    return True


cdef void _dfs(BF* s, int depth, long long c) noexcept:
    cdef int ia, ib, la, lb
    cdef int rem = s.length - depth - 1
    cdef int reach = rem * s.maxg
    cdef long long nc
    cdef int* p = s.pbuf + depth * s.width
    cdef int* q = s.qbuf + depth * s.width
    cdef int* np = s.pbuf + (depth + 1) * s.width
    cdef int* nq = s.qbuf + (depth + 1) * s.width
    for ia in range(s.n_gens):
        la = _append(p, s.plen[depth], s.gl + s.goff[ia], s.glen[ia], np)
        if _tree_dist(np, la, s.tu, s.tu_len) > reach:
            continue
        for ib in range(s.n_gens):
            nc = c + s.cost[ia * s.n_gens + ib]
            if s.found and nc >= s.best:
                continue
            lb = _append(q, s.qlen[depth], s.gl + s.goff[ib], s.glen[ib], nq)
            if _tree_dist(nq, lb, s.tv, s.tv_len) > reach:
                continue
            if rem == 0:
                if _same(np, la, s.tu, s.tu_len) and _same(nq, lb, s.tv, s.tv_len):
                    s.best = nc
                    s.found = 1
            else:
                s.plen[depth + 1] = la
                s.qlen[depth + 1] = lb
                _dfs(s, depth + 1, nc)


def bruteforce_min(gens, cost, target_u, target_v, int length):
    cdef BF s
    cdef int n = len(gens)
    cdef int total = 0
    cdef int i, j, k
    target_u = tuple(target_u)
    target_v = tuple(target_v)
    if length == 0:
        return 0 if not target_u and not target_v else None
    for g in gens:
        total += len(g)
    s.n_gens = n
    s.tu_len = len(target_u)
    s.tv_len = len(target_v)
    s.length = length
    s.maxg = max(len(g) for g in gens)
    s.width = s.tu_len + s.tv_len + (length + 2) * s.maxg + 1
    s.best = 0
    s.found = 0
    s.gl = <int*> malloc((total + 1) * sizeof(int))
    s.goff = <int*> malloc(n * sizeof(int))
    s.glen = <int*> malloc(n * sizeof(int))
    s.cost = <long long*> malloc(n * n * sizeof(long long))
    s.tu = <int*> malloc((s.tu_len + 1) * sizeof(int))
    s.tv = <int*> malloc((s.tv_len + 1) * sizeof(int))
    s.pbuf = <int*> malloc((length + 1) * s.width * sizeof(int))
    s.qbuf = <int*> malloc((length + 1) * s.width * sizeof(int))
    s.plen = <int*> malloc((length + 1) * sizeof(int))
    s.qlen = <int*> malloc((length + 1) * sizeof(int))
    try:
        k = 0
        for i in range(n):
            s.goff[i] = k
            s.glen[i] = len(gens[i])
            for a in gens[i]:
                s.gl[k] = a
                k += 1
            row = cost[i]
            for j in range(n):
                s.cost[i * n + j] = row[j]
        for i in range(s.tu_len):
            s.tu[i] = target_u[i]
        for i in range(s.tv_len):
            s.tv[i] = target_v[i]
        s.plen[0] = 0
        s.qlen[0] = 0
        _dfs(&s, 0, 0)
        return s.best if s.found else None
    finally:
        free(s.gl)
        free(s.goff)
        free(s.glen)
        free(s.cost)
        free(s.tu)
        free(s.tv)
        free(s.pbuf)
        free(s.qbuf)
        free(s.plen)
        free(s.qlen)


cpdef tuple concat(tuple p, tuple q):
    cdef Py_ssize_t n = len(p)
    cdef Py_ssize_t m = len(q)
    cdef Py_ssize_t k = 0
    while k < n and k < m and <long>p[n - 1 - k] == -<long>q[k]:
        k += 1
    if k == 0:
        return p + q
    return p[: n - k] + q[k:]


def capped_search(gens, cost, target, int cap, upper, long max_states):
    cdef Py_ssize_t n = len(gens)
    cdef Py_ssize_t ia, ib
    cdef tuple p, q, pa, qb, path, npath, nxt, state
    cdef list heap
    cdef dict seen
    cdef set done
    cdef list rows = [list(r) for r in cost]
    cdef list glist = [tuple(g) for g in gens]
    target = tuple(target)
    start = ((), ())
    goal = (target, ())
    heap = [(0, (), start)]
    seen = {start: (0, ())}
    done = set()
    pruned = None
    while heap:
        c, path, state = heappop(heap)
        if state in done:
            continue
        done.add(state)
        if state == goal:
            return c, path, pruned, len(done)
        if len(done) > max_states:
            raise BudgetExceeded(f"search expanded more than {max_states} states")
        p = <tuple> state[0]
        q = <tuple> state[1]
        for ia in range(n):
            pa = concat(p, <tuple> glist[ia])
            row = <list> rows[ia]
            for ib in range(n):
                nc = c + row[ib]
                if nc >= upper:
                    continue
                qb = concat(q, <tuple> glist[ib])
                if len(pa) > cap or len(qb) > cap:
                    if pruned is None or nc < pruned:
                        pruned = nc
                    continue
                nxt = (pa, qb)
                if nxt in done:
                    continue
                npath = path + ((ia, ib),)
                old = seen.get(nxt)
                if old is not None and old <= (nc, npath):
                    continue
                seen[nxt] = (nc, npath)
                heappush(heap, (nc, npath, nxt))
    return None, None, pruned, len(done)
