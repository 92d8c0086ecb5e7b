"""Random and exhaustive evaluation of word maps on symmetric groups.

Permutations are numpy integer arrays of images, 0-based.  Products compose
right to left: ``(s t)(x) = s(t(x))``, so a word ``f1 f2 ... fl`` applies
``fl`` first.

Random streams are counter based: position ``p`` of stream ``i`` under a
seed is row ``p % BLOCK`` of block ``p // BLOCK``, and each block has its own
Philox generator keyed by ``(seed, i, block)``.  Results therefore do not
depend on batch sizes or on how work is split.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import factorial, sqrt
from typing import Sequence

import numpy as np

from .symmetric import YoungDiagram, character, stable_diagram
from .words import ReducedWord, preprocess_word

__all__ = [
    "BLOCK",
    "McReport",
    "random_permutation",
    "random_permutations",
    "evaluate_word",
    "cycle_type",
    "short_cycle_counts",
    "stable_character_from_counts",
    "stable_characters",
    "mc_expected_character",
    "exhaustive_expected_character",
    "EXHAUSTIVE_LIMIT",
]

BLOCK = 1024
EXHAUSTIVE_LIMIT = 10**8


def _block_rows(n: int, seed: int, stream: int, block: int) -> np.ndarray:
    gen = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(stream, block))))
    base = np.broadcast_to(np.arange(n, dtype=np.int64), (BLOCK, n))
    return gen.permuted(base, axis=1)


def random_permutations(n: int, seed: int, start: int, count: int, stream: int = 0) -> np.ndarray:
    """Rows ``start .. start+count-1`` of a stream, shape ``(count, n)``."""
    if n < 1:
        raise ValueError("n must be positive")
    out = np.empty((count, n), dtype=np.int64)
    pos = start
    filled = 0
    while filled < count:
        block, row = divmod(pos, BLOCK)
        take = min(BLOCK - row, count - filled)
        out[filled:filled + take] = _block_rows(n, seed, stream, block)[row:row + take]
        filled += take
        pos += take
    return out


def random_permutation(n: int, position: int, seed: int = 0, stream: int = 0) -> np.ndarray:
    """The permutation at one stream position."""
    return random_permutations(n, seed, position, 1, stream)[0]


def _inverse(p: np.ndarray) -> np.ndarray:
    return np.argsort(p, axis=-1)


def evaluate_word(word: ReducedWord | str | Sequence[tuple[int, int]], perms) -> np.ndarray:
    """Substitute permutations into a word.

    ``perms[i]`` is the image array (or a batch of arrays, shape ``(B, n)``)
    for generator ``i + 1``.  The word is used as given, without reduction.
    """
    if isinstance(word, str):
        from .words import parse_word

        letters = parse_word(word)
    elif isinstance(word, ReducedWord):
        letters = list(word.letters)
    else:
        letters = list(word)
    perms = [np.asarray(p) for p in perms]
    needed = max((g for g, _ in letters), default=0)
    if len(perms) < needed:
        raise ValueError(f"word needs {needed} permutations, got {len(perms)}")
    if not perms:
        raise ValueError("at least one permutation is required to fix n")
    shape = perms[0].shape
    result = np.broadcast_to(np.arange(shape[-1]), shape).copy()
    inverses: dict[int, np.ndarray] = {}
    for g, s in letters:
        p = perms[g - 1]
        if s < 0:
            if g not in inverses:
                inverses[g] = _inverse(p)
            p = inverses[g]
        result = np.take_along_axis(result, p, axis=-1)
    return result


def cycle_type(p: Sequence[int]) -> tuple[int, ...]:
    """Cycle lengths, largest first."""
    p = np.asarray(p)
    n = p.shape[-1]
    seen = np.zeros(n, dtype=bool)
    out = []
    for i in range(n):
        if not seen[i]:
            j = i
            length = 0
            while not seen[j]:
                seen[j] = True
                j = int(p[j])
                length += 1
            out.append(length)
    return tuple(sorted(out, reverse=True))


def short_cycle_counts(perms: np.ndarray, k: int) -> np.ndarray:
    """For a batch ``(B, n)``, counts of cycles of length ``1..k``; shape ``(B, k)``.

    Uses ``fix(p**j) = sum_{d | j} d * a_d``, solved by back substitution.
    """
    perms = np.atleast_2d(perms)
    B, n = perms.shape
    idx = np.arange(n)
    fixes = np.empty((B, k), dtype=np.int64)
    power = perms.copy()
    for j in range(1, k + 1):
        fixes[:, j - 1] = (power == idx).sum(axis=1)
        power = np.take_along_axis(perms, power, axis=1)
    counts = np.zeros((B, k), dtype=np.int64)
    for j in range(1, k + 1):
        acc = fixes[:, j - 1].copy()
        for d in range(1, j):
            if j % d == 0:
                acc -= d * counts[:, d - 1]
        counts[:, j - 1] = acc // j
    return counts


@lru_cache(maxsize=None)
def stable_character_from_counts(shape: YoungDiagram, n: int, counts: tuple[int, ...]) -> int:
    """Stable character at any permutation of ``[n]`` whose cycles of length at most
    ``k`` are counted by ``counts``.

    The stable characters only see short cycles, so a representative with
    one long cycle carrying the remaining points is used.
    """
    k = shape.k
    cyc = [j + 1 for j in range(k) for _ in range(counts[j])]
    rest = n - sum(cyc)
    if rest < 0 or 0 < rest <= k:
        raise ValueError(f"counts {counts} impossible for n={n}")
    if rest:
        cyc.append(rest)
    return character(stable_diagram(shape, n), cyc)


def stable_characters(shape: YoungDiagram, perms: np.ndarray) -> np.ndarray:
    """Exact integer character values for a batch of permutations."""
    perms = np.atleast_2d(perms)
    n = perms.shape[1]
    counts = short_cycle_counts(perms, shape.k)
    keys, inverse = np.unique(counts, axis=0, return_inverse=True)
    table = np.array([stable_character_from_counts(shape, n, tuple(int(c) for c in row)) for row in keys],
                     dtype=object)
    return table[np.asarray(inverse).reshape(-1)]


@dataclass(frozen=True)
class McReport:
    mean: float
    stderr: float
    samples: int
    seed: int

    def to_json(self) -> dict:
        return {"mean": self.mean, "stderr": self.stderr, "samples": self.samples, "seed": self.seed}


def mc_expected_character(word, shape: YoungDiagram, n: int, samples: int, seed: int,
                          batch: int = 8192) -> McReport:
    """Sample mean and standard error of the stable character over random generator tuples."""
    if n < shape.k + shape.first_row + 1:
        raise ValueError("n too small for the stable diagram")
    if samples < 1:
        raise ValueError("samples must be positive")
    if isinstance(word, str):
        word, _ = preprocess_word(word)
    letters = list(word.letters)
    rank = max((g for g, _ in letters), default=1)
    count, mean, m2 = 0, 0.0, 0.0
    for start in range(0, samples, batch):
        size = min(batch, samples - start)
        perms = [random_permutations(n, seed, start, size, stream=i) for i in range(rank)]
        vals = stable_characters(shape, evaluate_word(letters, perms)).astype(np.float64)
        bmean = float(vals.mean())
        bm2 = float(((vals - bmean) ** 2).sum())
        # Chan et al. pairwise merge of (count, mean, M2)
        delta = bmean - mean
        total = count + size
        mean += delta * size / total
        m2 += bm2 + delta * delta * count * size / total
        count = total
    var = m2 / (count - 1) if count > 1 else 0.0
    return McReport(mean, sqrt(var / count), count, seed)


@lru_cache(maxsize=16)
def _all_permutations(n: int) -> np.ndarray:
    return np.array(list(permutations(range(n))), dtype=np.int64)


def exhaustive_expected_character(word, shape: YoungDiagram, n: int, chunk: int = 1 << 16) -> Fraction:
    """Exact average over every tuple of permutations in ``S_n``."""
    if isinstance(word, str):
        word, _ = preprocess_word(word)
    letters = list(word.letters)
    rank = max((g for g, _ in letters), default=1)
    total_tuples = factorial(n) ** rank
    if total_tuples > EXHAUSTIVE_LIMIT:
        raise ValueError(f"{total_tuples} generator tuples exceeds the exhaustive limit")
    if n < shape.k + shape.first_row:
        raise ValueError("n too small for the stable diagram")
    allp = _all_permutations(n)
    nf = len(allp)
    acc = 0
    for start in range(0, total_tuples, chunk):
        ids = np.arange(start, min(start + chunk, total_tuples))
        perms = []
        for _ in range(rank):
            ids, digit = np.divmod(ids, nf)
            perms.append(allp[digit])
        vals = stable_characters(shape, evaluate_word(letters, perms))
        acc += int(sum(vals))
    return Fraction(acc, total_tuples)
