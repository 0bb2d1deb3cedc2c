"""Katětov functions and one-step extensions of a generated metric by new free generators."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .errors import ClosednessViolated, InconclusiveCertificate, InvalidKatetov
from .fgmetric import ConsistencyReport, EvalResult, check_self_consistency, eval_delta
from .table import MetricTable, ValidationReport, validate_table
from .words import Word


@dataclass(frozen=True)
class KatetovFn:
    """Prescribed distances ``values[i]`` from a prospective point to ``base[i]``."""

    base: Tuple[Word, ...]
    values: Tuple[Fraction, ...]

    def __post_init__(self):
        base = tuple(self.base)
        vals = tuple(Fraction(v) for v in self.values)
        if len(base) != len(vals):
            raise ValueError("base and values differ in length")
        if len(set(base)) != len(base):
            raise ValueError("base has duplicate elements")
        if any(v < 0 for v in vals):
            raise InvalidKatetov("Katětov values must be nonnegative")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_dict(cls, mapping: Dict[Word, Fraction]) -> "KatetovFn":
        return cls(tuple(mapping), tuple(mapping.values()))

    def as_dict(self) -> Dict[Word, Fraction]:
        return dict(zip(self.base, self.values))

    def __call__(self, b: Word) -> Fraction:
        return self.values[self.base.index(b)]

    def __len__(self) -> int:
        return len(self.base)


def _exact(M: MetricTable, a: Word, b: Word, cap: Optional[int]) -> Fraction:
    r = eval_delta(M, a, b, cap)
    if not r.exact:
        raise InconclusiveCertificate(f"d({a}, {b}) is only {r.certificate}")
    return r.value


@dataclass
class KatetovReport:
    violations: List[Tuple[str, Word, Word, str]] = field(default_factory=list)
    zeros: List[Word] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        lines = [f"{k}({a}, {b}): {d}" for k, a, b, d in self.violations]
        lines += [f"zero at {b}" for b in self.zeros]
        lines.append("valid" if self.ok else "invalid")
        return "\n".join(lines)


def validate_katetov(M: MetricTable, f: KatetovFn, cap: Optional[int] = None) -> KatetovReport:
    rep = KatetovReport()
    for b in f.base:
        if b.rank > M.rank:
            raise ValueError(f"{b} is outside F_{M.rank}")
    items = list(zip(f.base, f.values))
    for i, (a, fa) in enumerate(items):
        if fa == 0:
            rep.zeros.append(a)
        for b, fb in items[i + 1 :]:
            d = _exact(M, a, b, cap)
            if abs(fa - fb) > d:
                rep.violations.append(("lipschitz", a, b, f"|{fa} - {fb}| > {d}"))
            if d > fa + fb:
                rep.violations.append(("triangle", a, b, f"{d} > {fa} + {fb}"))
    return rep


def extend_katetov_domain(
    M: MetricTable, f: KatetovFn, superset: Sequence[Word], cap: Optional[int] = None
) -> KatetovFn:
    """Largest 1-Lipschitz extension of ``f`` to ``superset``."""
    superset = tuple(dict.fromkeys(superset))
    missing = [b for b in f.base if b not in superset]
    if missing:
        raise ValueError(f"superset omits base points {', '.join(map(str, missing))}")
    known = f.as_dict()
    vals = []
    for g in superset:
        if g in known:
            vals.append(known[g])
        else:
            vals.append(min(fb + _exact(M, b, g, cap) for b, fb in known.items()))
    return KatetovFn(superset, tuple(vals))


@dataclass(frozen=True)
class ExtensionSpec:
    """New generators ``x_{rank+1}, ...`` with distances to ``A`` and among themselves.

    ``to_base[i][j]`` is the distance from the i-th new point to
    ``base_metric.gen_set[j]``; ``between`` is the square matrix on the
    new points.
    """

    base_metric: MetricTable
    new_points: Tuple[int, ...]
    to_base: Tuple[Tuple[Fraction, ...], ...]
    between: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        r = self.base_metric.rank
        k = len(self.new_points)
        if tuple(self.new_points) != tuple(range(r + 1, r + k + 1)):
            raise ValueError(f"new points must be the generators {r + 1}..{r + k}")
        to_base = tuple(tuple(Fraction(x) for x in row) for row in self.to_base)
        between = tuple(tuple(Fraction(x) for x in row) for row in self.between)
        n = len(self.base_metric)
        if len(to_base) != k or any(len(row) != n for row in to_base):
            raise ValueError(f"to_base must be {k}x{n}")
        if len(between) != k or any(len(row) != k for row in between):
            raise ValueError(f"between must be {k}x{k}")
        object.__setattr__(self, "new_points", tuple(self.new_points))
        object.__setattr__(self, "to_base", to_base)
        object.__setattr__(self, "between", between)

    @classmethod
    def one_point(cls, M: MetricTable, f: KatetovFn, cap: Optional[int] = None) -> "ExtensionSpec":
        """Single new generator realizing ``f`` (extended to all of ``A`` if needed)."""
        if set(f.base) != set(M.gen_set):
            f = extend_katetov_domain(M, f, tuple(f.base) + M.gen_set, cap)
        row = tuple(f(a) for a in M.gen_set)
        return cls(M, (M.rank + 1,), (row,), ((Fraction(0),),))


def check_extension_spec(spec: ExtensionSpec) -> List[str]:
    """Problems with ``dprime`` as a metric on ``A ⊔ X`` (empty if fine)."""
    M = spec.base_metric
    A = M.gen_set
    T = M.table
    k = len(spec.new_points)
    D = spec.to_base
    B = spec.between
    out = []
    for i in range(k):
        if B[i][i] != 0:
            out.append(f"nonzero self-distance at x{spec.new_points[i]}")
        for j in range(k):
            if i != j and (B[i][j] != B[j][i] or B[i][j] == 0):
                out.append(f"between x{spec.new_points[i]}, x{spec.new_points[j]} not a metric")
            for m in range(k):
                if B[i][m] > B[i][j] + B[j][m]:
                    out.append(f"triangle among new points {i}, {j}, {m}")
    for i in range(k):
        for p in range(len(A)):
            for q in range(len(A)):
                if T[p][q] > D[i][p] + D[i][q]:
                    out.append(f"{A[p]}, {A[q]} farther apart than via x{spec.new_points[i]}")
                if D[i][p] > D[i][q] + T[q][p]:
                    out.append(f"d(x{spec.new_points[i]}, {A[p]}) not 1-Lipschitz against {A[q]}")
            for j in range(k):
                if j == i:
                    continue
                if B[i][j] > D[i][p] + D[j][p]:
                    out.append(f"new points {i}, {j} farther apart than via {A[p]}")
                if D[i][p] > B[i][j] + D[j][p]:
                    out.append(f"d(x{spec.new_points[i]}, {A[p]}) exceeds route via new point {j}")
    return out


def build_extension_table(spec: ExtensionSpec, cap: Optional[int] = None) -> MetricTable:
    """Table on ``A ∪ X ∪ X^-1`` for the metric extending the base by ``X``."""
    M = spec.base_metric
    A = M.gen_set
    T = M.table
    pts = spec.new_points
    D = spec.to_base
    B = spec.between
    for i, x in enumerate(pts):
        if min(D[i]) == 0:
            b = A[D[i].index(0)]
            raise ClosednessViolated(f"x{x} is at distance 0 from {b}")
    problems = check_extension_spec(spec)
    if problems:
        raise InvalidKatetov("; ".join(problems))
    n = len(A)
    inv = [M.index(a.inverse()) for a in A]

    # d(x_i, x_j^-1): cheapest route x_i -> g0 ~ g1^-1 <- x_j^-1
    cross = [
        [min(D[i][p] + D[j][q] + T[p][inv[q]] for p in range(n) for q in range(n)) for j in range(len(pts))]
        for i in range(len(pts))
    ]

    new_words: List[Word] = []
    for x in pts:
        new_words += [Word.gen(x), Word.gen(x, -1)]
    words = tuple(A) + tuple(new_words)

    def dist(u: int, v: int) -> Fraction:
        # indices into ``words``; new letter at n + 2i (+1 for the inverse)
        if u < n and v < n:
            return T[u][v]
        if u < n:
            u, v = v, u
        i, su = divmod(u - n, 2)
        if v < n:
            return D[i][v] if su == 0 else D[i][inv[v]]
        j, sv = divmod(v - n, 2)
        if su == sv:
            return B[i][j]
        return cross[i][j] if su == 0 else cross[j][i]

    N = len(words)
    table = tuple(tuple(dist(u, v) for v in range(N)) for u in range(N))
    out = MetricTable(M.rank + len(pts), words, table)
    rep = validate_table(out)
    if not rep.ok:
        raise InvalidKatetov(f"extension table fails validation:\n{rep}")
    return out


@dataclass
class ExtensionReport:
    conservativity: List[Tuple[Word, Word, Fraction, EvalResult]] = field(default_factory=list)
    realization: List[Tuple[Word, Word, Fraction, EvalResult]] = field(default_factory=list)
    validation: Optional[ValidationReport] = None
    consistency: Optional[ConsistencyReport] = None

    @property
    def ok(self) -> bool:
        return (
            not self.conservativity
            and not self.realization
            and self.validation is not None
            and self.validation.ok
            and self.consistency is not None
            and self.consistency.ok
        )

    def __str__(self) -> str:
        lines = []
        for a, b, want, got in self.conservativity:
            lines.append(f"conservativity ({a}, {b}): table {want}, got {got}")
        for a, b, want, got in self.realization:
            lines.append(f"realization ({a}, {b}): prescribed {want}, got {got}")
        if self.validation is not None and not self.validation.ok:
            lines.append(str(self.validation))
        if self.consistency is not None and not self.consistency.ok:
            lines.append(str(self.consistency))
        lines.append("extension verified" if self.ok else "extension FAILED")
        return "\n".join(lines)


def verify_extension(
    old: MetricTable,
    new: MetricTable,
    f_or_spec: Union[KatetovFn, ExtensionSpec],
    cap: Optional[int] = None,
) -> ExtensionReport:
    rep = ExtensionReport()
    for a in old.gen_set:
        for b in old.gen_set:
            r = eval_delta(new, a, b, cap)
            if r.value != old.d(a, b) or not r.exact:
                rep.conservativity.append((a, b, old.d(a, b), r))
    if isinstance(f_or_spec, KatetovFn):
        prescribed = [(Word.gen(old.rank + 1), b, fb) for b, fb in zip(f_or_spec.base, f_or_spec.values)]
    else:
        prescribed = [
            (Word.gen(x), b, f_or_spec.to_base[i][j])
            for i, x in enumerate(f_or_spec.new_points)
            for j, b in enumerate(old.gen_set)
        ]
        prescribed += [
            (Word.gen(x), Word.gen(y), f_or_spec.between[i][j])
            for i, x in enumerate(f_or_spec.new_points)
            for j, y in enumerate(f_or_spec.new_points)
        ]
    for x, b, want in prescribed:
        r = eval_delta(new, x, b, cap)
        if r.value != want or not r.exact:
            rep.realization.append((x, b, want, r))
    rep.validation = validate_table(new)
    rep.consistency = check_self_consistency(new, cap)
    return rep
