"""Exact evaluation of finitely generated Graev-type norms by rank recursion.

A valid table of rank ``r`` whose generating set is ``A_G ∪ {x_r, x_r^-1}``
with ``A_G ⊆ F_{r-1}`` describes the extension of the metric generated by
``A_G`` on ``G = F_{r-1}`` to ``G * <x_r>``.  There the distance of ``g`` to
the identity is the least pre-distance between the irreducible S-word of
``g`` and a trivial S-word of the same length.  A trivial word can always
be chosen so that its X-letters sit only where ``g`` has X-letters and are
paired by a non-crossing match.  Letters left unpaired at one nesting level
must multiply to ``1`` in ``G``.  Their cheapest assignment costs the
``G``-norm of the product after each unpaired X-letter is replaced by its
best generating-set element.  That norm is computed by the same procedure
one rank down.

Extra generating-set elements involving ``x_r`` (other than ``x_r^±1``) are
accepted when their table entries agree with the metric generated without
them.  Tables outside this form get ``None`` from
:func:`build_exact_evaluator` and are handled by the capped search.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Dict, List, Optional, Sequence, Tuple

from .table import MetricTable, validate_table
from .words import Word, concat_reduce

Letters = Tuple[int, ...]
Pair = Tuple[Letters, Letters]


def cyclic_split(g: Letters) -> Tuple[Letters, Letters]:
    """``(t, c)`` with ``g = t c t^-1`` and ``c`` cyclically reduced."""
    i, j = 0, len(g) - 1
    while i < j and g[i] == -g[j]:
        i += 1
        j -= 1
    return g[:i], g[i : j + 1]


def inverse(g: Letters) -> Letters:
    return tuple(-a for a in reversed(g))


def canonical(c: Letters) -> Letters:
    """Least rotation of ``c`` or ``c^-1``: the norm depends only on this."""
    if not c:
        return c
    ci = inverse(c)
    return min(min(c[k:] + c[:k] for k in range(len(c))), min(ci[k:] + ci[:k] for k in range(len(ci))))


def conjugate_pairs(t: Letters, inner: List[Pair]) -> List[Pair]:
    head = [((a,), (a,)) for a in t]
    tail = [((-a,), (-a,)) for a in reversed(t)]
    return head + inner + tail


@lru_cache(maxsize=None)
def noncrossing_matchings(n: int) -> Tuple[Tuple[Tuple[int, int], ...], ...]:
    """All non-crossing partial matchings on ``0..n-1``; the empty matching first."""

    @lru_cache(maxsize=None)
    def rec(lo: int, hi: int):
        if lo >= hi:
            return ((),)
        out = list(rec(lo + 1, hi))
        for k in range(lo + 1, hi):
            for inner in rec(lo + 1, k):
                for outer in rec(k + 1, hi):
                    out.append(((lo, k),) + inner + outer)
        return tuple(out)

    return rec(0, n)


class TrivialLevel:
    """Rank 0: the trivial group."""

    rank = 0

    def norm(self, g: Letters) -> Fraction:
        if g:
            raise ValueError("rank-0 evaluator received a non-identity word")
        return Fraction(0)

    def witness(self, g: Letters) -> List[Pair]:
        if g:
            raise ValueError("rank-0 evaluator received a non-identity word")
        return []


class Level:
    """Exact norm on ``F_r`` for a tower-form table."""

    def __init__(self, M: MetricTable, sub):
        r = M.rank
        self.rank = r
        self.sub = sub
        x, xi = Word.gen(r), Word.gen(r, -1)
        self.in_g: List[Word] = [a for a in M.gen_set if a.rank < r]
        # options[s]: generating-set elements of G a letter x_r^s may be
        # replaced by, cheapest first, as (cost, letters)
        self.options: Dict[int, List[Tuple[Fraction, Letters]]] = {}
        for s, xs in ((1, x), (-1, xi)):
            opts = [(M.d(xs, a), a.letters) for a in self.in_g]
            opts.sort(key=lambda t: t[0])
            self.options[s] = opts
        # X-X distances, keyed by signs
        self.xx = {
            (s, t): M.d(x if s > 0 else xi, x if t > 0 else xi) for s in (1, -1) for t in (1, -1)
        }
        self._memo: Dict[Letters, Fraction] = {}
        self._group_memo: Dict[tuple, Tuple[Fraction, tuple]] = {}

    # -- values -----------------------------------------------------------

    def norm(self, g: Letters) -> Fraction:
        _, c = cyclic_split(g)
        key = canonical(c)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if all(abs(a) < self.rank for a in key):
            val = self.sub.norm(key)
        else:
            val = self._solve(self._rotate_to_x(key))[0]
        self._memo[key] = val
        return val

    def _rotate_to_x(self, c: Letters) -> Letters:
        k = next(i for i, a in enumerate(c) if abs(a) == self.rank)
        return c[k:] + c[:k]

    def _items(self, c: Letters) -> List[tuple]:
        items: List[tuple] = []
        block: List[int] = []
        for a in c:
            if abs(a) == self.rank:
                if block:
                    items.append(("G", tuple(block)))
                    block = []
                items.append(("X", 1 if a > 0 else -1))
            else:
                block.append(a)
        if block:
            items.append(("G", tuple(block)))
        return items

    def _pair_cost(self, s: int, t: int) -> Tuple[Fraction, int]:
        # cheapest (y, y^-1) facing (x^s, x^t)
        best = None
        for y in (1, -1):
            c = self.xx[(s, y)] + self.xx[(t, -y)]
            if best is None or c < best[0]:
                best = (c, y)
        return best

    def _group_cost(self, group: tuple) -> Tuple[Fraction, tuple]:
        """Least cost of a level group; returns (cost, choices per X item)."""
        hit = self._group_memo.get(group)
        if hit is not None:
            return hit
        xs = [k for k, it in enumerate(group) if it[0] == "X"]
        best: List = [None, None]
        choice: List[Letters] = [()] * len(group)

        def product() -> Letters:
            acc: Letters = ()
            for k, it in enumerate(group):
                acc = concat_reduce(acc, it[1] if it[0] == "G" else choice[k])
            return acc

        def rec(pos: int, acc: Fraction):
            if best[0] is not None and acc >= best[0]:
                return
            if pos == len(xs):
                total = acc + self.sub.norm(product())
                if best[0] is None or total < best[0]:
                    best[0] = total
                    best[1] = tuple(choice[k] for k in xs)
                return
            k = xs[pos]
            for cost, a in self.options[group[k][1]]:
                if best[0] is not None and acc + cost >= best[0]:
                    break
                choice[k] = a
                rec(pos + 1, acc + cost)

        rec(0, Fraction(0))
        out = (best[0], best[1])
        self._group_memo[group] = out
        return out

    def _layout(self, items, matching):
        """Level groups (lists of item indices) for a matching of X items."""
        parent = [None] * len(items)
        matched = set()
        # pairs are non-crossing; assign each item its innermost enclosing pair
        for lo, hi in sorted(matching, key=lambda p: p[1] - p[0], reverse=True):
            matched.add(lo)
            matched.add(hi)
            for k in range(lo + 1, hi):
                parent[k] = (lo, hi)
        groups: Dict = {}
        for k in range(len(items)):
            if k in matched:
                continue
            groups.setdefault(parent[k], []).append(k)
        return groups

    def _solve(self, c: Letters):
        """(value, matching, pair signs) for a cyclically reduced word containing x_r."""
        items = self._items(c)
        xpos = [k for k, it in enumerate(items) if it[0] == "X"]
        best = None
        for m in noncrossing_matchings(len(xpos)):
            matching = [(xpos[i], xpos[j]) for i, j in m]
            total = Fraction(0)
            ys = []
            for lo, hi in matching:
                cost, y = self._pair_cost(items[lo][1], items[hi][1])
                total += cost
                ys.append(y)
            if best is not None and total >= best[0]:
                continue
            for grp in self._layout(items, matching).values():
                total += self._group_cost(tuple(items[k] for k in grp))[0]
                if best is not None and total >= best[0]:
                    break
            else:
                if best is None or total < best[0]:
                    best = (total, matching, ys)
        return best

    # -- witnesses ----------------------------------------------------------

    def witness(self, g: Letters) -> List[Pair]:
        """Pairs of generating-set elements: lefts multiply to ``g``, rights to ``1``."""
        t, c = cyclic_split(g)
        if not c:
            return conjugate_pairs(t, [])
        if all(abs(a) < self.rank for a in c):
            return conjugate_pairs(t, self.sub.witness(c))
        k = next(i for i, a in enumerate(c) if abs(a) == self.rank)
        h, rot = c[:k], c[k:] + c[:k]
        return conjugate_pairs(t, conjugate_pairs(h, self._solve_witness(rot)))

    def _solve_witness(self, c: Letters) -> List[Pair]:
        items = self._items(c)
        _, matching, ys = self._solve(c)
        r = self.rank
        per_item: List[List[Pair]] = [[] for _ in items]
        for (lo, hi), y in zip(matching, ys):
            per_item[lo] = [((r * items[lo][1],), (r * y,))]
            per_item[hi] = [((r * items[hi][1],), (-r * y,))]
        for grp in self._layout(items, matching).values():
            group = tuple(items[k] for k in grp)
            _, choices = self._group_cost(group)
            repl: List[Letters] = []
            it_choice = iter(choices)
            picked: List[Optional[Letters]] = []
            for it in group:
                if it[0] == "G":
                    repl.append(it[1])
                    picked.append(None)
                else:
                    a = next(it_choice)
                    repl.append(a)
                    picked.append(a)
            prod: Letters = ()
            for part in repl:
                prod = concat_reduce(prod, part)
            rest: Letters = ()
            for part in repl[1:]:
                rest = concat_reduce(rest, part)
            first_u = inverse(rest)
            for pos, k in enumerate(grp):
                it = items[k]
                out: List[Pair] = []
                if pos == 0:
                    if it[0] == "X" and picked[0]:
                        a = picked[0]
                        out.append(((r * it[1],), a))
                        out.append((inverse(a), inverse(a)))
                    elif it[0] == "X":
                        out.append(((r * it[1],), ()))
                    out.extend(self.sub.witness(prod))
                    out.extend(((b,), (b,)) for b in first_u)
                elif it[0] == "G":
                    out.extend(((b,), (b,)) for b in it[1])
                else:
                    out.append(((r * it[1],), picked[pos]))
                per_item[k] = out
        return [p for chunk in per_item for p in chunk]


def build_exact_evaluator(M: MetricTable):
    """Recursive exact evaluator for ``M``, or ``None`` if ``M`` is not tower-form."""
    if not validate_table(M).ok:
        return None
    return _build(M)


def _build(M: MetricTable):
    r = M.rank
    if r == 0:
        return TrivialLevel() if M.gen_set == (Word.identity(),) else None
    core_x = (Word.gen(r), Word.gen(r, -1))
    in_g = [a for a in M.gen_set if a.rank < r]
    extras = [a for a in M.gen_set if a.rank == r and a not in core_x]
    sub = _build(M.restrict(in_g, r - 1))
    if sub is None:
        return None
    for a, b in combinations_with_replacement(in_g, 2):
        if sub.norm((a * b.inverse()).letters) != M.d(a, b):
            return None
    if extras:
        core = M.restrict(in_g + list(core_x), r)
        level = Level(core, sub)
        for a in extras:
            for b in M.gen_set:
                if level.norm((a * b.inverse()).letters) != M.d(a, b):
                    return None
        return level
    return Level(M, sub)
