"""Matches on S-words and enumeration of trivial S-words.

Positions are 1-based throughout, so ``Match({1: 3, 3: 1})`` pairs the
first and third letters.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Mapping, Sequence, Tuple

from .errors import BudgetExceeded, NotInG, NotXPosition, PositionOutOfRange
from .words import GElem, SLetter, SWord, XGen, concat_reduce, letter_word, project

DEFAULT_ENUMERATION_CAP = 10 ** 7


@dataclass(frozen=True)
class Match:
    pairing: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "pairing", dict(self.pairing))

    def pairs(self) -> List[Tuple[int, int]]:
        return sorted((i, j) for i, j in self.pairing.items() if i < j)

    def __str__(self) -> str:
        return " ".join(f"({i},{j})" for i, j in self.pairs()) or "()"

    def __eq__(self, other) -> bool:
        return isinstance(other, Match) and self.pairing == other.pairing

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.pairing.items())))


def validate_match(w: SWord, m: Match) -> bool:
    n = len(w)
    for i, j in m.pairing.items():
        for k in (i, j):
            if not 1 <= k <= n:
                raise PositionOutOfRange(f"position {k} outside 1..{n}")
            if not isinstance(w.letters[k - 1], XGen):
                raise NotXPosition(f"position {k} holds a G-letter")
    if set(m.pairing) != set(w.x_positions()):
        return False
    for i, j in m.pairing.items():
        if i == j or m.pairing.get(j) != i:
            return False
        if w.letters[i - 1] != w.letters[j - 1].inverse():
            return False
        if i < j and project(w.letters[i - 1 : j]).letters:
            return False
    return True


def _first_cancel(letters: Sequence[SLetter], start: int, stop: int) -> int:
    """Least ``j`` in ``(start, stop)`` with ``letters[start..j]`` trivial (0-based)."""
    acc = letter_word(letters[start]).letters
    for j in range(start + 1, stop):
        acc = concat_reduce(acc, letter_word(letters[j]).letters)
        if not acc:
            return j
    raise NotInG("an X-letter never cancels; the word does not lie in G")


def _match_span(letters: Sequence[SLetter], lo: int, hi: int, out: Dict[int, int]) -> None:
    # letters[lo:hi] multiplies into G
    i = lo
    while i < hi:
        if isinstance(letters[i], XGen):
            j = _first_cancel(letters, i, hi)
            out[i + 1] = j + 1
            out[j + 1] = i + 1
            _match_span(letters, i + 1, j, out)
            i = j + 1
        else:
            i += 1


def find_match(w: SWord) -> Match:
    """Match built by the greedy least-index recursion over cancelling X-sequences."""
    if project(w).rank > w.g_rank:
        raise NotInG(f"{w} does not project into G = F_{w.g_rank}")
    out: Dict[int, int] = {}
    _match_span(w.letters, 0, len(w.letters), out)
    return Match(out)


def enumerate_trivial_words(
    alphabet: Sequence[SLetter],
    length: int,
    g_rank: int,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> Iterator[SWord]:
    if length < 0:
        raise ValueError("length must be nonnegative")
    letters = list(dict.fromkeys(alphabet))
    if len(letters) ** length > cap:
        raise BudgetExceeded(f"{len(letters)}^{length} candidates exceed cap {cap}")
    words = [letter_word(s).letters for s in letters]

    def rec(prefix: Tuple[int, ...], acc: Tuple[int, ...]):
        if len(prefix) == length:
            if not acc:
                yield SWord(tuple(letters[i] for i in prefix), g_rank)
            return
        for i, wl in enumerate(words):
            yield from rec(prefix + (i,), concat_reduce(acc, wl))

    yield from rec((), ())


def count_trivial_words_direct(alphabet: Sequence[SLetter], length: int) -> int:
    """Filter of the full Cartesian power; kept independent of the enumerator."""
    letters = list(dict.fromkeys(alphabet))
    return sum(
        1 for combo in itertools.product(letters, repeat=length) if project(combo).is_identity()
    )

