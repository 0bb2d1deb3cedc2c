"""Finite generating sets with exact distance tables."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .words import Word


@dataclass(frozen=True, eq=False)
class MetricTable:
    """Distance table on a finite inverse-closed set ``A`` of words in ``F_rank``.

    Structural problems (ragged table, duplicate elements, negative or
    non-rational entries) raise ``ValueError`` here; metric-axiom problems
    are reported by :func:`validate_table`.
    """

    rank: int
    gen_set: Tuple[Word, ...]
    table: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        gen_set = tuple(self.gen_set)
        n = len(gen_set)
        if self.rank < 0:
            raise ValueError("rank must be nonnegative")
        if len(set(gen_set)) != n:
            raise ValueError("generating set has duplicate elements")
        for a in gen_set:
            if not isinstance(a, Word):
                raise TypeError(f"generating set element {a!r} is not a Word")
            if a.rank > self.rank:
                raise ValueError(f"{a} uses a generator above rank {self.rank}")
        rows = tuple(tuple(_qnn(x) for x in row) for row in self.table)
        if len(rows) != n or any(len(row) != n for row in rows):
            raise ValueError(f"table must be {n}x{n}")
        object.__setattr__(self, "gen_set", gen_set)
        object.__setattr__(self, "table", rows)
        object.__setattr__(self, "_index", {a: i for i, a in enumerate(gen_set)})

    def __len__(self) -> int:
        return len(self.gen_set)

    def __contains__(self, w) -> bool:
        return w in self._index

    def index(self, w: Word) -> int:
        return self._index[w]

    def d(self, a: Word, b: Word) -> Fraction:
        return self.table[self._index[a]][self._index[b]]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MetricTable)
            and self.rank == other.rank
            and self.gen_set == other.gen_set
            and self.table == other.table
        )

    def __hash__(self) -> int:
        return hash((self.rank, self.gen_set, self.table))

    def restrict(self, words: Sequence[Word], rank: int) -> "MetricTable":
        idx = [self._index[w] for w in words]
        return MetricTable(rank, tuple(words), tuple(tuple(self.table[i][j] for j in idx) for i in idx))

    def max_entry(self) -> Fraction:
        return max((x for row in self.table for x in row), default=Fraction(0))

    def max_word_length(self) -> int:
        return max((len(a) for a in self.gen_set), default=0)

    @cached_property
    def scaled(self) -> Tuple[int, List[List[int]]]:
        """Common denominator ``D`` and the integer table ``D * d``."""
        den = 1
        for row in self.table:
            for x in row:
                den = den * x.denominator // math.gcd(den, x.denominator)
        return den, [[int(x * den) for x in row] for row in self.table]

    @cached_property
    def exact_evaluator(self):
        from .graev import build_exact_evaluator

        return build_exact_evaluator(self)


def _qnn(x) -> Fraction:
    if isinstance(x, float):
        raise TypeError("floating point distances are not accepted; use Fraction or 'p/q'")
    q = Fraction(x)
    if q < 0:
        raise ValueError(f"negative distance {q}")
    return q


@dataclass(frozen=True)
class Violation:
    kind: str
    elements: Tuple[Word, ...]
    detail: str = ""

    def __str__(self) -> str:
        els = ", ".join(str(w) for w in self.elements)
        return f"{self.kind}({els})" + (f": {self.detail}" if self.detail else "")


@dataclass
class ValidationReport:
    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set:
        return {v.kind for v in self.violations}

    def __str__(self) -> str:
        if self.ok:
            return "valid"
        return "\n".join(str(v) for v in self.violations)


def validate_table(M: MetricTable) -> ValidationReport:
    out: List[Violation] = []
    A = M.gen_set
    n = len(A)
    e = Word.identity()
    if e not in M:
        out.append(Violation("missing-identity", ()))
    for a in A:
        if a.inverse() not in M:
            out.append(Violation("not-inverse-closed", (a,), f"{a.inverse()} missing"))
    for k in range(1, M.rank + 1):
        for s in (1, -1):
            x = Word.gen(k, s)
            if x not in M:
                out.append(Violation("missing-generator", (x,)))
    T = M.table
    for i in range(n):
        if T[i][i] != 0:
            out.append(Violation("nonzero-diagonal", (A[i],), str(T[i][i])))
        for j in range(i + 1, n):
            if T[i][j] != T[j][i]:
                out.append(Violation("asymmetric", (A[i], A[j]), f"{T[i][j]} != {T[j][i]}"))
            if T[i][j] == 0 or T[j][i] == 0:
                out.append(Violation("not-positive", (A[i], A[j])))
    for i in range(n):
        for k in range(i + 1, n):
            for j in range(n):
                if j in (i, k):
                    continue
                if T[i][k] > T[i][j] + T[j][k]:
                    out.append(
                        Violation(
                            "triangle",
                            (A[i], A[j], A[k]),
                            f"{T[i][k]} > {T[i][j]} + {T[j][k]}",
                        )
                    )
    inv = [M._index.get(a.inverse()) for a in A]
    for i in range(n):
        for j in range(i, n):
            ii, jj = inv[i], inv[j]
            if ii is None or jj is None:
                continue
            if (min(ii, jj), max(ii, jj)) < (i, j):
                continue
            if T[i][j] != T[ii][jj]:
                out.append(
                    Violation(
                        "inverse-symmetry",
                        (A[i], A[j]),
                        f"d = {T[i][j]} but d of inverses = {T[ii][jj]}",
                    )
                )
    return ValidationReport(out)


def stage1_table() -> MetricTable:
    """The integers with the Euclidean metric, generated by ``{e, x1, x1^-1}``."""
    e, x, xi = Word.identity(), Word.gen(1), Word.gen(1, -1)
    one, two = Fraction(1), Fraction(2)
    return MetricTable(1, (e, x, xi), ((0, one, one), (one, 0, two), (one, two, 0)))


def table_from_rows(rank: int, words: Iterable[Word], rows) -> MetricTable:
    return MetricTable(rank, tuple(words), tuple(tuple(Fraction(x) for x in r) for r in rows))
