"""Evaluation of the metric generated by a finite table.

``eval_delta`` returns the least cost of an equal-length factorization of
``(u, v)`` over the generating set.  Tables built by this package admit an
exact recursive evaluator (see :mod:`graevmetric.graev`); any other table
falls back to a least-cost-first search over prefix-product pairs whose
word lengths are bounded by ``cap``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from . import kernels
from .errors import BudgetExceeded, CapTooSmall, IdentityInput, InconclusiveCertificate
from .matches import enumerate_trivial_words
from .table import MetricTable, ValidationReport, Violation, stage1_table, table_from_rows, validate_table
from .words import GElem, SLetter, SWord, Word, XGen, ball, decompose, letter_word, rho

__all__ = [
    "MetricTable",
    "ValidationReport",
    "Violation",
    "validate_table",
    "stage1_table",
    "table_from_rows",
    "Exact",
    "ExactUnderCap",
    "EvalResult",
    "default_cap",
    "eval_delta",
    "eval_delta_bruteforce",
    "ConsistencyReport",
    "check_self_consistency",
    "PositivityBound",
    "positivity_lower_bound",
    "sletter_distance",
    "irreducible_trivial_minimum",
]

DEFAULT_MAX_STATES = 500_000
BRUTEFORCE_BUDGET = 10**9


@dataclass(frozen=True)
class Exact:
    def __str__(self) -> str:
        return "exact"


@dataclass(frozen=True)
class ExactUnderCap:
    cap: int

    def __str__(self) -> str:
        return f"exact under cap {self.cap}"


Certificate = Union[Exact, ExactUnderCap]


@dataclass(frozen=True)
class EvalResult:
    value: Fraction
    certificate: Certificate
    # (lefts, rights): equal-length sequences of generating-set elements
    witness: Optional[Tuple[Tuple[Word, ...], Tuple[Word, ...]]] = None

    @property
    def exact(self) -> bool:
        return isinstance(self.certificate, Exact)

    def __str__(self) -> str:
        return f"{self.value} ({self.certificate})"


def default_cap(M: MetricTable, u: Word, v: Word) -> int:
    return len(u * v.inverse()) + 2 * M.max_word_length() + 4


def _check_rank(M: MetricTable, *words: Word) -> None:
    for w in words:
        if w.rank > M.rank:
            raise ValueError(f"{w} uses a generator above rank {M.rank}")


def eval_delta(
    M: MetricTable,
    u: Word,
    v: Word,
    cap: Optional[int] = None,
    *,
    max_states: int = DEFAULT_MAX_STATES,
    force_search: bool = False,
) -> EvalResult:
    """Distance between ``u`` and ``v`` in the metric generated by ``M``."""
    _check_rank(M, u, v)
    if cap is None:
        cap = default_cap(M, u, v)
    if cap < 1:
        raise ValueError("cap must be positive")
    g = u * v.inverse()
    tail = tuple(((a,), (a,)) for a in v.letters)
    ev = None if force_search else M.exact_evaluator
    if ev is not None:
        pairs = ev.witness(g.letters) + list(tail)
        return EvalResult(ev.norm(g.letters), Exact(), _witness_words(pairs))
    return _search(M, g, cap, max_states, tail)


def _witness_words(pairs) -> Tuple[Tuple[Word, ...], Tuple[Word, ...]]:
    return (
        tuple(Word._reduced(tuple(p)) for p, _ in pairs),
        tuple(Word._reduced(tuple(q)) for _, q in pairs),
    )


def _search(M: MetricTable, g: Word, cap: int, max_states: int, tail) -> EvalResult:
    A = M.gen_set
    D, T = M.scaled
    e = Word.identity()
    if e not in M or len(g) > cap:
        raise CapTooSmall(f"no greedy factorization of {g} within cap {cap}")
    ie = M.index(e)
    upper = 0
    for a in g.letters:
        w = Word._reduced((a,))
        if w not in M:
            raise CapTooSmall(f"generator {w} is not in the generating set")
        upper += T[M.index(w)][ie]
    gens = [a.letters for a in A]
    best, path, pruned, _ = kernels.capped_search(gens, T, g.letters, cap, upper + 1, max_states)
    if best is None:
        raise CapTooSmall(f"search found no factorization of {g} within cap {cap}")
    cert: Certificate = Exact() if pruned is None or pruned >= best else ExactUnderCap(cap)
    pairs = [(A[i].letters, A[j].letters) for i, j in path] + list(tail)
    return EvalResult(Fraction(best, D), cert, _witness_words(pairs))


def eval_delta_bruteforce(
    M: MetricTable, u: Word, v: Word, max_len: int, *, budget: int = BRUTEFORCE_BUDGET
) -> Fraction:
    """Least cost over all factorization pairs of length at most ``max_len``.

    Shorter factorizations are covered by padding with ``(e, e)``, which
    costs nothing.
    """
    _check_rank(M, u, v)
    n = len(M)
    if max_len < 1:
        raise ValueError("max_len must be positive")
    if n ** (2 * max_len) > budget:
        raise BudgetExceeded(f"|A|^(2*max_len) = {n ** (2 * max_len)} exceeds budget {budget}")
    if Word.identity() not in M:
        raise ValueError("generating set lacks the identity")
    D, T = M.scaled
    gens = [a.letters for a in M.gen_set]
    best = kernels.bruteforce_min(gens, T, u.letters, v.letters, max_len)
    if best is None:
        raise CapTooSmall(f"no factorization of ({u}, {v}) of length <= {max_len}")
    return Fraction(best, D)


@dataclass
class ConsistencyReport:
    checked: int = 0
    undercut: List[Tuple[Word, Word, Fraction, Fraction]] = field(default_factory=list)
    overshoot: List[Tuple[Word, Word, Fraction, Fraction]] = field(default_factory=list)
    inconclusive: List[Tuple[Word, Word, Certificate]] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return not self.undercut and not self.overshoot

    @property
    def all_exact(self) -> bool:
        return not self.inconclusive

    @property
    def ok(self) -> bool:
        return self.consistent and self.all_exact

    def __str__(self) -> str:
        lines = [f"checked {self.checked} pairs"]
        for a, b, t, val in self.undercut:
            lines.append(f"undercut ({a}, {b}): table {t}, induced {val}")
        for a, b, t, val in self.overshoot:
            lines.append(f"overshoot ({a}, {b}): table {t}, induced {val}")
        for a, b, c in self.inconclusive:
            lines.append(f"inconclusive ({a}, {b}): {c}")
        lines.append("consistent" if self.ok else "NOT consistent")
        return "\n".join(lines)


def check_self_consistency(M: MetricTable, cap: Optional[int] = None) -> ConsistencyReport:
    rep = ConsistencyReport()
    for a in M.gen_set:
        for b in M.gen_set:
            r = eval_delta(M, a, b, cap)
            rep.checked += 1
            t = M.d(a, b)
            if r.value < t:
                rep.undercut.append((a, b, t, r.value))
            elif r.value > t:
                rep.overshoot.append((a, b, t, r.value))
            if not r.exact:
                rep.inconclusive.append((a, b, r.certificate))
    return rep


# -- S-letter distances and the positivity bound --------------------------

INF = math.inf


@dataclass(frozen=True)
class PositivityBound:
    eps0: Union[Fraction, float]
    eps1: Union[Fraction, float]
    eps2: Union[Fraction, float]
    bound: Fraction


def _fmin(values) -> Union[Fraction, float]:
    return min(values, default=INF)


def _exact_value(M: MetricTable, u: Word, v: Word, cap: Optional[int]) -> Fraction:
    r = eval_delta(M, u, v, cap)
    if not r.exact:
        raise InconclusiveCertificate(f"distance ({u}, {v}) is only {r.certificate}")
    return r.value


def positivity_lower_bound(
    M: MetricTable, g: Word, split_rank: int, cap: Optional[int] = None
) -> PositivityBound:
    """Positive lower bound for the norm of ``g`` from the X-letter case analysis."""
    if g.is_identity():
        raise IdentityInput("positivity bound needs a non-identity element")
    if not 0 <= split_rank < M.rank:
        raise ValueError(f"split rank must lie in [0, {M.rank})")
    e = Word.identity()
    w = decompose(g, split_rank)
    P = [i for i, s in enumerate(w.letters) if isinstance(s, XGen)]
    in_g = [a for a in M.gen_set if a.rank <= split_rank]
    eps0 = _fmin(M.d(w.letters[i].as_word(), a) for i in P for a in in_g)
    eps1 = _fmin(
        M.d(w.letters[i].as_word(), w.letters[j].inverse().as_word())
        for i in P
        for j in P
        if i != j and w.letters[i] != w.letters[j].inverse()
    )
    eps2 = _fmin(
        _exact_value(M, s.value, e, cap)
        for s in w.letters
        if isinstance(s, GElem) and not s.value.is_identity()
    )
    if not P:
        bound = _exact_value(M, g, e, cap)
    else:
        bound = min(x for x in (eps0, eps1, eps2) if x != INF)
    return PositivityBound(eps0, eps1, eps2, bound)


def sletter_distance(
    M: MetricTable, split_rank: int, cap: Optional[int] = None
) -> Callable[[SLetter, SLetter], Optional[Fraction]]:
    """Distance on S-letters induced by ``M`` for the split ``G = F_split``.

    G-letters use the metric generated on ``G``; an X-letter and a
    G-letter are at distance ``min_a d(x, a) + d_G(a, g)``.
    """
    MG = M.restrict([a for a in M.gen_set if a.rank <= split_rank], split_rank)
    in_g = MG.gen_set
    cache: Dict[Tuple[SLetter, SLetter], Optional[Fraction]] = {}

    def dg(a: Word, b: Word) -> Fraction:
        return _exact_value(MG, a, b, cap)

    def dist(s: SLetter, t: SLetter) -> Optional[Fraction]:
        key = (s, t)
        if key in cache:
            return cache[key]
        if isinstance(s, GElem) and isinstance(t, GElem):
            out = dg(s.value, t.value)
        elif isinstance(s, XGen) and isinstance(t, XGen):
            a, b = s.as_word(), t.as_word()
            out = M.d(a, b) if a in M and b in M else None
        else:
            x, h = (s, t) if isinstance(s, XGen) else (t, s)
            xw = x.as_word()
            out = None if xw not in M else min(M.d(xw, a) + dg(a, h.value) for a in in_g)
        cache[key] = out
        return out

    return dist


def irreducible_trivial_minimum(
    M: MetricTable,
    g: Word,
    split_rank: int,
    cap: Optional[int] = None,
    g_radius: Optional[int] = None,
) -> Fraction:
    """Least ``rho(irr(g), u)`` over trivial S-words ``u`` of the same length.

    Letters of ``u`` range over the letters of ``irr(g)`` and their inverses,
    the X-generators of ``A``, and every element of ``G`` of length at most
    ``g_radius``.  The default radius is the longest G-letter of ``irr(g)``
    or element of ``A`` inside ``G``.
    """
    w = decompose(g, split_rank)
    if g_radius is None:
        lengths = [len(s.value) for s in w.letters if isinstance(s, GElem)]
        lengths += [len(a) for a in M.gen_set if a.rank <= split_rank]
        g_radius = max(lengths)
    alphabet: List[SLetter] = [GElem(h) for h in ball(split_rank, g_radius)]
    for s in w.letters:
        alphabet += [s, s.inverse()]
    for a in M.gen_set:
        if a.rank > split_rank and len(a) == 1:
            alphabet.append(XGen(abs(a.letters[0]), 1 if a.letters[0] > 0 else -1))
    dist = sletter_distance(M, split_rank, cap)
    best = None
    for u in enumerate_trivial_words(alphabet, len(w), split_rank):
        val = rho(w, u, dist)
        if best is None or val < best:
            best = val
    return best
