"""Pure-Python kernels.  ``_kernels.pyx`` mirrors these line for line.

Words are tuples of signed ints, already freely reduced.  Costs are
nonnegative ints (the caller scales exact rationals by a common
denominator).
"""
from heapq import heappop, heappush

from .errors import BudgetExceeded


def concat(p, q):
    k = 0
    n, m = len(p), len(q)
    while k < n and k < m and p[n - 1 - k] == -q[k]:
        k += 1
    if k == 0:
        return p + q
    return p[: n - k] + q[k:]


def _tree_dist(p, t):
    k = 0
    n = min(len(p), len(t))
    while k < n and p[k] == t[k]:
        k += 1
    return len(p) + len(t) - 2 * k


def bruteforce_min(gens, cost, target_u, target_v, length):
    """Least cost over all length-``length`` pair sequences multiplying to the targets.

    Returns None when no such sequence exists.  Branches are cut only when
    they cannot beat the best value found or cannot reach the targets in
    the remaining steps.
    """
    target_u = tuple(target_u)
    target_v = tuple(target_v)
    n = len(gens)
    if length == 0:
        return 0 if not target_u and not target_v else None
    maxg = max(len(g) for g in gens)
    best = [None]

    def dfs(depth, p, q, c):
        rem = length - depth - 1
        reach = rem * maxg
        for ia in range(n):
            pa = concat(p, gens[ia])
            if _tree_dist(pa, target_u) > reach:
                continue
            row = cost[ia]
            for ib in range(n):
                nc = c + row[ib]
                if best[0] is not None and nc >= best[0]:
                    continue
                qb = concat(q, gens[ib])
                if _tree_dist(qb, target_v) > reach:
                    continue
                if rem == 0:
                    if pa == target_u and qb == target_v:
                        best[0] = nc
                else:
                    dfs(depth + 1, pa, qb, nc)

    dfs(0, (), (), 0)
    return best[0]


def capped_search(gens, cost, target, cap, upper, max_states):
    """Least-cost-first search from ``((), ())`` to ``(target, ())``.

    Returns ``(best, path, pruned_min, expanded)``.  ``best`` is None when
    no path cheaper than ``upper`` exists inside the cap.  ``pruned_min``
    is the cheapest child discarded for exceeding ``cap`` (None if none).
    """
    target = tuple(target)
    n = len(gens)
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
        p, q = state
        for ia in range(n):
            pa = concat(p, gens[ia])
            row = cost[ia]
            for ib in range(n):
                nc = c + row[ib]
                if nc >= upper:
                    continue
                qb = concat(q, gens[ib])
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
