"""Words in a free group: parsing, reduction, classification and canonical forms.

Letters are ``(generator, sign)`` with 1-based generators.  In text,
``a..z`` are the generators ``x1..x26`` and ``A..Z`` their inverses.
"""
from __future__ import annotations

import string
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

__all__ = [
    "Letter",
    "ReducedWord",
    "WordKind",
    "WordClass",
    "WordSyntaxError",
    "parse_word",
    "format_word",
    "free_reduce",
    "cyclic_reduce",
    "preprocess_word",
    "canonical_form",
]

Letter = tuple[int, int]


class WordSyntaxError(ValueError):
    pass


def parse_word(text: str) -> list[Letter]:
    """Parse ``"aBAb"`` style text; whitespace is ignored and ``"1"`` or ``""`` is the empty word."""
    letters: list[Letter] = []
    body = "".join(text.split())
    if body in ("", "1", "e"):
        return letters
    for ch in body:
        if ch in string.ascii_lowercase:
            letters.append((ord(ch) - ord("a") + 1, 1))
        elif ch in string.ascii_uppercase:
            letters.append((ord(ch) - ord("A") + 1, -1))
        else:
            raise WordSyntaxError(f"unexpected character {ch!r} in word {text!r}")
    return letters


def format_word(letters: Iterable[Letter]) -> str:
    out = []
    for g, s in letters:
        if not 1 <= g <= 26:
            raise ValueError("only 26 generators have a text form")
        base = chr(ord("a") + g - 1)
        out.append(base if s > 0 else base.upper())
    return "".join(out) or "1"


def free_reduce(letters: Sequence[Letter]) -> list[Letter]:
    stack: list[Letter] = []
    for g, s in letters:
        if stack and stack[-1] == (g, -s):
            stack.pop()
        else:
            stack.append((g, s))
    return stack


def cyclic_reduce(letters: Sequence[Letter]) -> list[Letter]:
    """Free then cyclic reduction (strips inverse pairs from both ends)."""
    w = free_reduce(letters)
    lo, hi = 0, len(w)
    while hi - lo >= 2 and w[lo] == (w[hi - 1][0], -w[hi - 1][1]):
        lo += 1
        hi -= 1
    return w[lo:hi]


@dataclass(frozen=True)
class ReducedWord:
    """A freely and cyclically reduced word with generators re-indexed to ``1..rank``."""

    letters: tuple[Letter, ...]
    rank: int

    def __post_init__(self):
        if free_reduce(self.letters) != list(self.letters):
            raise ValueError("word is not freely reduced")
        if len(self.letters) >= 2:
            (g0, s0), (g1, s1) = self.letters[0], self.letters[-1]
            if g0 == g1 and s0 == -s1:
                raise ValueError("word is not cyclically reduced")
        if any(not 1 <= g <= self.rank for g, _ in self.letters):
            raise ValueError("generator outside rank")

    @property
    def length(self) -> int:
        return len(self.letters)

    def occurrences(self, generator: int) -> int:
        return sum(1 for g, _ in self.letters if g == generator)

    def occurrence_counts(self) -> tuple[int, ...]:
        return tuple(self.occurrences(f) for f in range(1, self.rank + 1))

    def __str__(self) -> str:
        return format_word(self.letters)


class WordKind(str, Enum):
    IDENTITY = "identity"
    PRIMITIVE = "primitive"
    POWER = "proper-power"
    GENERIC = "generic"


@dataclass(frozen=True)
class WordClass:
    kind: WordKind
    root: tuple[Letter, ...] | None = field(default=None)
    exponent: int = 1

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind.value}
        if self.kind is WordKind.POWER:
            out["root"] = format_word(self.root or ())
            out["exponent"] = self.exponent
        return out


def _minimal_period(letters: Sequence[Letter]) -> int:
    L = len(letters)
    for p in range(1, L + 1):
        if L % p == 0 and all(letters[i] == letters[i - p] for i in range(p, L)):
            return p
    return L


def _relabel(letters: Sequence[Letter]) -> tuple[Letter, ...]:
    """Number generators by first appearance and make each first appearance positive."""
    names: dict[int, int] = {}
    flips: dict[int, int] = {}
    out = []
    for g, s in letters:
        if g not in names:
            names[g] = len(names) + 1
            flips[g] = s
        out.append((names[g], s * flips[g]))
    return tuple(out)


def canonical_form(letters: Sequence[Letter]) -> tuple[Letter, ...]:
    """A representative that is invariant under rotation, renaming and inverting generators.

    All of these operations preserve the distribution of the word map, so
    expected characters depend only on this form.
    """
    w = list(letters)
    if not w:
        return ()
    best = None
    for i in range(len(w)):
        cand = _relabel(w[i:] + w[:i])
        key = tuple((g, -s) for g, s in cand)  # positive letters sort first
        if best is None or key < best[0]:
            best = (key, cand)
    return best[1]


def preprocess_word(letters: Sequence[Letter] | str, rank: int | None = None,
                    canonical: bool = False) -> tuple[ReducedWord, WordClass]:
    """Reduce, classify and re-index a word.

    Unused generators are dropped and the rest renumbered in order of index,
    or by :func:`canonical_form` when ``canonical`` is set.
    """
    if isinstance(letters, str):
        letters = parse_word(letters)
    letters = list(letters)
    if rank is not None and any(g > rank for g, _ in letters):
        raise ValueError(f"word uses a generator beyond rank {rank}")
    w = cyclic_reduce(letters)
    if canonical:
        w = list(canonical_form(w))
    used = sorted({g for g, _ in w})
    remap = {g: i + 1 for i, g in enumerate(used)}
    w = [(remap[g], s) for g, s in w]
    word = ReducedWord(tuple(w), len(used))
    if not w:
        return word, WordClass(WordKind.IDENTITY)
    counts = word.occurrence_counts()
    if 1 in counts:
        return word, WordClass(WordKind.PRIMITIVE)
    p = _minimal_period(w)
    if p < len(w):
        return word, WordClass(WordKind.POWER, tuple(w[:p]), len(w) // p)
    return word, WordClass(WordKind.GENERIC)
