"""Free group words and words over the split alphabet ``G | X | X^-1``.

A :class:`Word` stores its letters as signed integers: ``k`` is the
generator ``x<k>`` and ``-k`` its inverse.  Words are always freely
reduced, so two words are equal exactly when their letter tuples are.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, NamedTuple, Optional, Sequence, Tuple, Union

from .errors import LengthMismatch, ParseError, UndefinedDistance


class GenLetter(NamedTuple):
    index: int
    sign: int

    def to_int(self) -> int:
        if self.index < 1 or self.sign not in (1, -1):
            raise ValueError(f"bad generator letter {self!r}")
        return self.index * self.sign


def free_reduce(letters: Iterable[int]) -> Tuple[int, ...]:
    out = []
    for a in letters:
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


def concat_reduce(p: Tuple[int, ...], q: Tuple[int, ...]) -> Tuple[int, ...]:
    """Reduced form of ``p q`` for already reduced ``p`` and ``q``."""
    k = 0
    n, m = len(p), len(q)
    while k < n and k < m and p[n - 1 - k] == -q[k]:
        k += 1
    if k == 0:
        return p + q
    return p[: n - k] + q[k:]


def letter_key(a: int) -> Tuple[int, int]:
    # x1 < x1^-1 < x2 < x2^-1 < ...
    return (abs(a), 0 if a > 0 else 1)


class Word:
    """Freely reduced word in the standard generators ``x1, x2, ...``."""

    __slots__ = ("letters", "_hash")

    def __init__(self, letters: Iterable[Union[int, GenLetter]] = ()):
        raw = []
        for a in letters:
            if isinstance(a, GenLetter):
                a = a.to_int()
            elif not isinstance(a, int) or isinstance(a, bool) or a == 0:
                raise ValueError(f"bad letter {a!r}")
            raw.append(a)
        self.letters: Tuple[int, ...] = free_reduce(raw)
        self._hash = hash(self.letters)

    @classmethod
    def _reduced(cls, letters: Tuple[int, ...]) -> "Word":
        w = cls.__new__(cls)
        w.letters = letters
        w._hash = hash(letters)
        return w

    @classmethod
    def identity(cls) -> "Word":
        return _IDENTITY

    @classmethod
    def gen(cls, index: int, sign: int = 1) -> "Word":
        return cls._reduced((GenLetter(index, sign).to_int(),))

    @classmethod
    def parse(cls, text: str) -> "Word":
        return parse_word(text)

    def __mul__(self, other: "Word") -> "Word":
        if not isinstance(other, Word):
            return NotImplemented
        return Word._reduced(concat_reduce(self.letters, other.letters))

    def inverse(self) -> "Word":
        return Word._reduced(tuple(-a for a in reversed(self.letters)))

    __invert__ = inverse

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return self.inverse() ** (-n)
        out = _IDENTITY
        for _ in range(n):
            out = out * self
        return out

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[GenLetter]:
        for a in self.letters:
            yield GenLetter(abs(a), 1 if a > 0 else -1)

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self) -> int:
        return self._hash

    def sort_key(self):
        return (len(self.letters), tuple(letter_key(a) for a in self.letters))

    def __lt__(self, other: "Word") -> bool:
        return self.sort_key() < other.sort_key()

    @property
    def rank(self) -> int:
        """Largest generator index used (0 for the identity)."""
        return max((abs(a) for a in self.letters), default=0)

    def is_identity(self) -> bool:
        return not self.letters

    def __str__(self) -> str:
        return format_word(self)

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r})"


_IDENTITY = Word._reduced(())


def multiply(u: Word, v: Word) -> Word:
    return u * v


def invert(u: Word) -> Word:
    return u.inverse()


_TOKEN = re.compile(r"x([1-9][0-9]*)(\^-1)?\Z")


def ball(rank: int, radius: int) -> Iterator[Word]:
    """Reduced words of length at most ``radius`` over ``x1..x_rank``, shortlex order."""
    letters = sorted([k for k in range(1, rank + 1)] + [-k for k in range(1, rank + 1)], key=lambda a: (abs(a), a < 0))
    layer: List[Tuple[int, ...]] = [()]
    yield Word.identity()
    for _ in range(radius):
        nxt = []
        for w in layer:
            for a in letters:
                if w and w[-1] == -a:
                    continue
                nxt.append(w + (a,))
        for w in nxt:
            yield Word._reduced(w)
        layer = nxt


def parse_word(text: str) -> Word:
    tokens = text.split()
    if not tokens:
        raise ParseError("empty word text (use 'e' for the identity)")
    if tokens == ["e"]:
        return _IDENTITY
    letters = []
    for pos, tok in enumerate(tokens):
        m = _TOKEN.match(tok)
        if m is None:
            raise ParseError(f"bad token {tok!r}", location=f"token {pos + 1}")
        k = int(m.group(1))
        letters.append(-k if m.group(2) else k)
    return Word(letters)


def format_word(w: Word) -> str:
    if not w.letters:
        return "e"
    return " ".join(f"x{a}" if a > 0 else f"x{-a}^-1" for a in w.letters)


# --- split alphabet ---------------------------------------------------------


@dataclass(frozen=True)
class GElem:
    """Letter of the old group ``G``; may be the identity."""

    value: Word

    def inverse(self) -> "GElem":
        return GElem(self.value.inverse())

    def __str__(self) -> str:
        return f"[{self.value}]"


@dataclass(frozen=True)
class XGen:
    """A new free generator (or its formal inverse)."""

    id: int
    sign: int = 1

    def __post_init__(self):
        if self.id < 1 or self.sign not in (1, -1):
            raise ValueError(f"bad X letter ({self.id}, {self.sign})")

    def inverse(self) -> "XGen":
        return XGen(self.id, -self.sign)

    def as_word(self) -> Word:
        return Word._reduced((self.id * self.sign,))

    def __str__(self) -> str:
        return f"x{self.id}" if self.sign > 0 else f"x{self.id}^-1"


SLetter = Union[GElem, XGen]


def letter_word(s: SLetter) -> Word:
    return s.value if isinstance(s, GElem) else s.as_word()


@dataclass(frozen=True)
class SWord:
    letters: Tuple[SLetter, ...]
    g_rank: int

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        if self.g_rank < 0:
            raise ValueError("g_rank must be nonnegative")
        for s in self.letters:
            if isinstance(s, GElem):
                if s.value.rank > self.g_rank:
                    raise ValueError(f"G-letter {s} uses a generator above g_rank {self.g_rank}")
            elif isinstance(s, XGen):
                if s.id <= self.g_rank:
                    raise ValueError(f"X-letter {s} has id <= g_rank {self.g_rank}")
            else:
                raise TypeError(f"not an S-letter: {s!r}")

    def __len__(self) -> int:
        return len(self.letters)

    def __getitem__(self, i):
        return self.letters[i]

    def x_positions(self) -> Tuple[int, ...]:
        """1-based positions holding X-letters."""
        return tuple(i + 1 for i, s in enumerate(self.letters) if isinstance(s, XGen))

    def __str__(self) -> str:
        return format_sword(self)


def decompose(w: Word, g_rank: int) -> SWord:
    """The irreducible S-word projecting to ``w``: maximal G-blocks, atomic X letters."""
    if not w.letters:
        return SWord((GElem(_IDENTITY),), g_rank)
    out = []
    block = []
    for a in w.letters:
        if abs(a) <= g_rank:
            block.append(a)
            continue
        if block:
            out.append(GElem(Word._reduced(tuple(block))))
            block = []
        out.append(XGen(abs(a), 1 if a > 0 else -1))
    if block:
        out.append(GElem(Word._reduced(tuple(block))))
    return SWord(tuple(out), g_rank)


def project(w: Union[SWord, Sequence[SLetter]]) -> Word:
    letters = w.letters if isinstance(w, SWord) else w
    acc: Tuple[int, ...] = ()
    for s in letters:
        acc = concat_reduce(acc, letter_word(s).letters)
    return Word._reduced(acc)


def is_irreducible(w: SWord) -> bool:
    # The empty S-word is excluded: [GElem(e)] is the canonical form of 1.
    n = len(w.letters)
    if n == 0:
        return False
    for i, s in enumerate(w.letters):
        if n > 1 and isinstance(s, GElem) and s.value.is_identity():
            return False
        if i + 1 < n:
            t = w.letters[i + 1]
            if isinstance(s, GElem) and isinstance(t, GElem):
                return False
            if isinstance(s, XGen) and t == s.inverse():
                return False
    return True


LetterDistance = Callable[[SLetter, SLetter], Optional[Fraction]]


def rho(v: SWord, w: SWord, dist: LetterDistance) -> Fraction:
    """Pre-distance: sum of letterwise distances of two equal-length S-words."""
    if len(v) != len(w):
        raise LengthMismatch(f"lengths differ: {len(v)} != {len(w)}")
    total = Fraction(0)
    for a, b in zip(v.letters, w.letters):
        d = dist(a, b)
        if d is None:
            raise UndefinedDistance(f"no distance for ({a}, {b})")
        total += d
    return total


# S-word text: G-letters are bracketed words, bare tokens are X letters,
# e.g. "x3 [x1 x2] x3^-1 [e]".
_SW_TOKEN = re.compile(r"\[([^\]]*)\]|(\S+)")


def parse_sword(text: str, g_rank: int) -> SWord:
    letters = []
    for pos, m in enumerate(_SW_TOKEN.finditer(text)):
        if m.group(1) is not None:
            inner = m.group(1).strip() or "e"
            letters.append(GElem(parse_word(inner)))
            continue
        tok = m.group(2)
        if "[" in tok or "]" in tok:
            raise ParseError(f"unbalanced bracket in {tok!r}", location=f"letter {pos + 1}")
        w = parse_word(tok)
        if len(w) != 1:
            raise ParseError(f"X letter must be a single generator, got {tok!r}", location=f"letter {pos + 1}")
        a = w.letters[0]
        letters.append(XGen(abs(a), 1 if a > 0 else -1))
    try:
        return SWord(tuple(letters), g_rank)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def format_sword(w: SWord) -> str:
    return " ".join(str(s) for s in w.letters)
