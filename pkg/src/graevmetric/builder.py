"""Stage-by-stage construction: each step adds a generator realizing one Katětov function."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple, Union

from .errors import GraevError, InconclusiveCertificate, InvalidKatetov
from .extension import (
    ExtensionReport,
    ExtensionSpec,
    KatetovFn,
    build_extension_table,
    extend_katetov_domain,
    validate_katetov,
    verify_extension,
)
from .fgmetric import eval_delta
from .table import MetricTable, stage1_table
from .words import Word, ball

# -- provenance ---------------------------------------------------------------


@dataclass(frozen=True)
class Initial:
    pass


@dataclass(frozen=True)
class Realized:
    f: KatetovFn
    new_gen: int


@dataclass(frozen=True)
class Fallback:
    constant: Fraction
    new_gen: int


@dataclass(frozen=True)
class IdentifiedExisting:
    f: KatetovFn
    point: Word


Provenance = Union[Initial, Realized, Fallback, IdentifiedExisting]


@dataclass(frozen=True)
class Stage:
    index: int
    metric: MetricTable
    provenance: Provenance = Initial()

    def __post_init__(self):
        if self.metric.rank != self.index:
            raise ValueError(f"stage {self.index} carries a rank-{self.metric.rank} metric")


# -- script steps -------------------------------------------------------------


@dataclass(frozen=True)
class ExplicitKatetov:
    f: KatetovFn
    # stage whose elements the base is drawn from; None means the current one
    stage: Optional[int] = None


@dataclass(frozen=True)
class RandomKatetov:
    seed: int
    support_size: int
    denominator_bound: int
    value_bound: Fraction = Fraction(2)

    def __post_init__(self):
        if self.support_size < 1 or self.denominator_bound < 1:
            raise ValueError("support size and denominator bound must be positive")
        object.__setattr__(self, "value_bound", Fraction(self.value_bound))
        if self.value_bound <= 0:
            raise ValueError("value bound must be positive")


@dataclass(frozen=True)
class FallbackStep:
    pass


Step = Union[ExplicitKatetov, RandomKatetov, FallbackStep]


@dataclass(frozen=True)
class BuildScript:
    steps: Tuple[Step, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))


# -- steps --------------------------------------------------------------------


def init_stage1() -> Stage:
    return Stage(1, stage1_table(), Initial())


RANDOM_ATTEMPTS = 1000


def random_katetov(M: MetricTable, step: RandomKatetov, cap: Optional[int] = None) -> KatetovFn:
    """Rejection-sample a Katětov function on a random subset of ``A``.

    Falls back to the constant function at the largest table entry on the
    same support if no sample passes within ``RANDOM_ATTEMPTS`` draws.
    """
    rng = random.Random(step.seed)
    A = M.gen_set
    k = min(step.support_size, len(A))
    picked = sorted(rng.sample(range(len(A)), k))
    support = tuple(A[i] for i in picked)
    for _ in range(RANDOM_ATTEMPTS):
        vals = []
        for _b in support:
            q = rng.randint(1, step.denominator_bound)
            top = int(step.value_bound * q)
            if top < 1:
                break
            vals.append(Fraction(rng.randint(1, top), q))
        if len(vals) < k:
            continue
        f = KatetovFn(support, tuple(vals))
        if validate_katetov(M, f, cap).ok:
            return f
    c = M.max_entry()
    return KatetovFn(support, tuple(c for _ in support))


def fallback_function(M: MetricTable) -> KatetovFn:
    c = M.max_entry()
    return KatetovFn(M.gen_set, tuple(c for _ in M.gen_set))


def scheduled_function(s: Stage, step: Step, cap: Optional[int] = None) -> KatetovFn:
    M = s.metric
    if isinstance(step, FallbackStep):
        return fallback_function(M)
    if isinstance(step, RandomKatetov):
        return random_katetov(M, step, cap)
    if isinstance(step, ExplicitKatetov):
        limit = s.index if step.stage is None else step.stage
        if limit > s.index:
            raise ValueError(f"step refers to stage {limit}, which does not exist yet")
        for b in step.f.base:
            if b.rank > limit:
                raise ValueError(f"base point {b} is not in stage {limit}")
        return step.f
    raise TypeError(f"unknown build step {step!r}")


def widen_generating_set(M: MetricTable, extra: Sequence[Word], cap: Optional[int] = None) -> MetricTable:
    """Add ``extra`` and their inverses to ``A`` with their generated distances."""
    new = []
    for b in extra:
        for w in (b, b.inverse()):
            if w not in M and w not in new:
                new.append(w)
    if not new:
        return M
    words = M.gen_set + tuple(new)
    n0 = len(M)
    rows = []
    for i, a in enumerate(words):
        row = []
        for j, b in enumerate(words):
            if i < n0 and j < n0:
                row.append(M.table[i][j])
                continue
            r = eval_delta(M, a, b, cap)
            if not r.exact:
                raise InconclusiveCertificate(f"d({a}, {b}) is only {r.certificate}")
            row.append(r.value)
        rows.append(tuple(row))
    return MetricTable(M.rank, words, tuple(rows))


@dataclass
class StepRecord:
    step: Step
    f: KatetovFn
    outcome: str
    table_size: int
    verification: Optional[ExtensionReport] = None

    @property
    def ok(self) -> bool:
        return self.verification is None or self.verification.ok


def step_with_record(s: Stage, step: Step, cap: Optional[int]) -> Tuple[Stage, StepRecord]:
    f = scheduled_function(s, step, cap)
    M = s.metric
    rep = validate_katetov(M, f, cap)
    if not rep.ok:
        raise InvalidKatetov(f"scheduled function is not Katětov:\n{rep}")
    if rep.zeros:
        point = min(rep.zeros, key=Word.sort_key)
        st = Stage(s.index, M, IdentifiedExisting(f, point))
        return st, StepRecord(step, f, f"identified with {point}", len(M))
    wide = widen_generating_set(M, f.base, cap)
    fhat = extend_katetov_domain(wide, f, wide.gen_set, cap)
    spec = ExtensionSpec.one_point(wide, fhat, cap)
    new = build_extension_table(spec, cap)
    check = verify_extension(wide, new, f, cap)
    x = s.index + 1
    if isinstance(step, FallbackStep):
        prov: Provenance = Fallback(f.values[0], x)
    else:
        prov = Realized(f, x)
    st = Stage(x, new, prov)
    return st, StepRecord(step, f, f"realized by x{x}", len(new), check)


def step_stage(s: Stage, step: Step, cap: Optional[int] = None) -> Stage:
    return step_with_record(s, step, cap)[0]


@dataclass
class BuildReport:
    records: List[StepRecord] = field(default_factory=list)
    error: Optional[str] = None
    failed_step: Optional[int] = None

    @property
    def ok(self) -> bool:
        return self.error is None and all(r.ok for r in self.records)

    def __str__(self) -> str:
        lines = []
        for i, r in enumerate(self.records, 1):
            status = "verified" if r.ok else "VERIFICATION FAILED"
            lines.append(f"step {i}: {r.outcome}, |A| = {r.table_size}, {status}")
        if self.error is not None:
            lines.append(f"step {self.failed_step}: aborted: {self.error}")
        return "\n".join(lines)


def run_build(script: BuildScript, cap: Optional[int] = None) -> Tuple[List[Stage], BuildReport]:
    stages = [init_stage1()]
    report = BuildReport()
    for i, step in enumerate(script.steps, 1):
        try:
            st, rec = step_with_record(stages[-1], step, cap)
        except (GraevError, ValueError) as exc:
            report.error = str(exc)
            report.failed_step = i
            break
        stages.append(st)
        report.records.append(rec)
    return stages, report


def scheduled_functions(stages: Sequence[Stage]) -> List[Tuple[int, KatetovFn, Optional[Word]]]:
    """(stage position, function, known realizer) for every built step."""
    out = []
    for pos, st in enumerate(stages):
        p = st.provenance
        if isinstance(p, Realized):
            out.append((pos, p.f, Word.gen(p.new_gen)))
        elif isinstance(p, Fallback):
            prev = stages[pos - 1].metric
            out.append((pos, fallback_function(prev), Word.gen(p.new_gen)))
        elif isinstance(p, IdentifiedExisting):
            out.append((pos, p.f, p.point))
    return out


# -- one-point property and exports ------------------------------------------


@dataclass
class OnePointResult:
    f: KatetovFn
    witness: Optional[Word]


@dataclass
class OnePointReport:
    results: List[OnePointResult] = field(default_factory=list)

    @property
    def realized(self) -> int:
        return sum(r.witness is not None for r in self.results)

    @property
    def unrealized(self) -> int:
        return len(self.results) - self.realized

    def __str__(self) -> str:
        lines = []
        for i, r in enumerate(self.results, 1):
            pts = ", ".join(f"{b}->{v}" for b, v in zip(r.f.base, r.f.values))
            lines.append(f"{i}: {{{pts}}} " + (f"realized by {r.witness}" if r.witness is not None else "unrealized"))
        lines.append(f"realized {self.realized}/{len(self.results)}")
        return "\n".join(lines)


def realizes(M: MetricTable, z: Word, f: KatetovFn, cap: Optional[int] = None) -> bool:
    for b, fb in zip(f.base, f.values):
        r = eval_delta(M, z, b, cap)
        if not r.exact:
            raise InconclusiveCertificate(f"d({z}, {b}) is only {r.certificate}")
        if r.value != fb:
            return False
    return True


def check_one_point_property(
    stages: Sequence[Stage],
    pool: Sequence[KatetovFn],
    cap: Optional[int] = None,
    max_witness_len: int = 2,
) -> OnePointReport:
    """Search the last stage for a point realizing each function in ``pool``.

    The first witness in shortlex order among words of length at most
    ``max_witness_len`` is reported.
    """
    M = stages[-1].metric
    rep = OnePointReport()
    candidates = list(ball(M.rank, max_witness_len))
    for f in pool:
        for b in f.base:
            if b.rank > M.rank:
                raise ValueError(f"base point {b} is outside the final stage")
        hit = next((z for z in candidates if realizes(M, z, f, cap)), None)
        rep.results.append(OnePointResult(f, hit))
    return rep


@dataclass(frozen=True)
class Matrix:
    elements: Tuple[Word, ...]
    rows: Tuple[Tuple[Fraction, ...], ...]

    def to_csv(self) -> str:
        import csv
        import io

        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([str(e) for e in self.elements])
        for row in self.rows:
            w.writerow([str(x) for x in row])
        return buf.getvalue()


def export_matrix(
    stage: Stage,
    elements: Optional[Sequence[Word]] = None,
    radius: Optional[int] = None,
    cap: Optional[int] = None,
) -> Matrix:
    if (elements is None) == (radius is None):
        raise ValueError("give exactly one of elements or radius")
    M = stage.metric
    els = tuple(elements) if elements is not None else tuple(ball(M.rank, radius))
    rows = []
    for i, a in enumerate(els):
        row = []
        for j, b in enumerate(els):
            if j < i:
                row.append(rows[j][i])
                continue
            r = eval_delta(M, a, b, cap)
            if not r.exact:
                raise InconclusiveCertificate(f"d({a}, {b}) is only {r.certificate}")
            row.append(r.value)
        rows.append(tuple(row))
    return Matrix(els, tuple(rows))
