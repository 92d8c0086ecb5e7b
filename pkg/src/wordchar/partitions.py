"""Set partitions, star partitions, partial matchings and diagram products.

Partitions of ``[m] = {0, ..., m-1}`` are stored canonically as restricted
growth strings: ``rgs[i]`` is the index of the block containing ``i``, and
blocks are numbered in order of their smallest element.  Textual forms such
as ``"{{1,3},{2}}"`` are 1-based.
"""
from __future__ import annotations

import os
import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from math import factorial
from typing import Iterable, Iterator, Sequence

__all__ = [
    "EnumerationBudgetError",
    "SetPartition",
    "PartialMatching",
    "bell_number",
    "enumeration_budget",
    "enumerate_partitions",
    "meet",
    "join",
    "leq",
    "mobius",
    "mobius_recursive",
    "enumerate_star_partitions",
    "enumerate_partial_matchings",
    "iota",
    "completions",
    "multiply_diagrams",
    "compose",
]

DEFAULT_BUDGET = 10**7


class EnumerationBudgetError(RuntimeError):
    """Raised instead of starting an enumeration larger than the configured budget."""


def enumeration_budget() -> int:
    raw = os.environ.get("WORDCHAR_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


@lru_cache(maxsize=None)
def bell_number(m: int) -> int:
    if m < 0:
        raise ValueError("m must be non-negative")
    row = [1]
    for _ in range(m):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def _check_budget(size: int, what: str) -> None:
    budget = enumeration_budget()
    if size > budget:
        raise EnumerationBudgetError(
            f"{what} would enumerate {size} objects, above the budget {budget} "
            "(set WORDCHAR_BUDGET to raise it)"
        )


def _canonical_rgs(labels: Sequence) -> tuple[int, ...]:
    seen: dict = {}
    out = []
    for x in labels:
        if x not in seen:
            seen[x] = len(seen)
        out.append(seen[x])
    return tuple(out)


@dataclass(frozen=True, order=True)
class SetPartition:
    """A set partition of ``{0, ..., size-1}`` in restricted-growth form.

    Ordering is lexicographic on the restricted growth string.
    """

    rgs: tuple[int, ...]

    def __post_init__(self):
        if _canonical_rgs(self.rgs) != tuple(self.rgs):
            raise ValueError(f"not a restricted growth string: {self.rgs}")

    # -- constructors -------------------------------------------------
    @classmethod
    def from_labels(cls, labels: Sequence) -> SetPartition:
        """Partition whose blocks are the level sets of ``labels``."""
        return cls(_canonical_rgs(labels))

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], size: int | None = None) -> SetPartition:
        """Build from 0-based blocks; they must cover ``range(size)`` exactly."""
        blocks = [sorted(b) for b in blocks]
        elems = sorted(x for b in blocks for x in b)
        if size is None:
            size = len(elems)
        if elems != list(range(size)):
            raise ValueError("blocks do not partition range(size)")
        labels = [0] * size
        for bi, b in enumerate(blocks):
            for x in b:
                labels[x] = bi
        return cls.from_labels(labels)

    @classmethod
    def parse(cls, text: str) -> SetPartition:
        """Parse a 1-based form such as ``"{{1,3},{2}}"`` or ``"1 3 | 2"``."""
        text = text.strip()
        if "|" in text:
            parts = text.split("|")
        else:
            inner = text
            if inner.startswith("{") and inner.endswith("}"):
                inner = inner[1:-1]
            parts = re.findall(r"\{([^{}]*)\}", inner)
            if not parts and inner.strip():
                raise ValueError(f"cannot parse partition {text!r}")
        blocks = []
        for p in parts:
            nums = [int(t) - 1 for t in re.split(r"[\s,]+", p.strip()) if t]
            if not nums:
                raise ValueError(f"empty block in {text!r}")
            blocks.append(nums)
        return cls.from_blocks(blocks)

    @classmethod
    def finest(cls, size: int) -> SetPartition:
        return cls(tuple(range(size)))

    @classmethod
    def coarsest(cls, size: int) -> SetPartition:
        return cls((0,) * size)

    # -- properties ---------------------------------------------------
    @property
    def size(self) -> int:
        return len(self.rgs)

    @property
    def num_blocks(self) -> int:
        return max(self.rgs) + 1 if self.rgs else 0

    def __len__(self) -> int:
        """Number of blocks."""
        return self.num_blocks

    @property
    def blocks(self) -> tuple[tuple[int, ...], ...]:
        """0-based blocks, each sorted, ordered by minimum."""
        out: list[list[int]] = [[] for _ in range(self.num_blocks)]
        for i, b in enumerate(self.rgs):
            out[b].append(i)
        return tuple(tuple(b) for b in out)

    def block_sizes(self) -> tuple[int, ...]:
        counts = [0] * self.num_blocks
        for b in self.rgs:
            counts[b] += 1
        return tuple(counts)

    def same_block(self, i: int, j: int) -> bool:
        return self.rgs[i] == self.rgs[j]

    def __str__(self) -> str:
        return "{" + ",".join("{" + ",".join(str(x + 1) for x in b) + "}" for b in self.blocks) + "}"

    def __repr__(self) -> str:
        return f"SetPartition({self})"


def enumerate_partitions(m: int) -> Iterator[SetPartition]:
    """All partitions of ``{0..m-1}`` in lexicographic RGS order."""
    _check_budget(bell_number(m), f"partitions of {m} elements")
    if m == 0:
        yield SetPartition(())
        return
    rgs = [0] * m
    maxes = [0] * m  # maxes[i] = max(rgs[:i+1])

    def rec(i: int):
        if i == m:
            yield SetPartition(tuple(rgs))
            return
        for v in range(maxes[i - 1] + 2):
            rgs[i] = v
            maxes[i] = max(maxes[i - 1], v)
            yield from rec(i + 1)

    yield from rec(1)


def leq(p: SetPartition, q: SetPartition) -> bool:
    """True when ``p`` refines ``q``."""
    if p.size != q.size:
        raise ValueError("partitions of different sets")
    image: dict[int, int] = {}
    for a, b in zip(p.rgs, q.rgs):
        if image.setdefault(a, b) != b:
            return False
    return True


def meet(p: SetPartition, q: SetPartition) -> SetPartition:
    """Coarsest common refinement."""
    if p.size != q.size:
        raise ValueError("partitions of different sets")
    return SetPartition.from_labels(list(zip(p.rgs, q.rgs)))


def _union_find_labels(size: int, pairs: Iterable[tuple[int, int]]) -> list[int]:
    parent = list(range(size))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    return [find(x) for x in range(size)]


def join(p: SetPartition, q: SetPartition) -> SetPartition:
    """Finest common coarsening."""
    if p.size != q.size:
        raise ValueError("partitions of different sets")
    pairs = []
    for part in (p, q):
        for b in part.blocks:
            pairs.extend((b[0], x) for x in b[1:])
    return SetPartition.from_labels(_union_find_labels(p.size, pairs))


def mobius(p: SetPartition, q: SetPartition) -> int:
    """Moebius function of the partition lattice for ``p`` refining ``q``.

    Each block of ``q`` containing ``b`` blocks of ``p`` contributes
    ``(-1)**(b-1) * (b-1)!``.  Raises ``ValueError`` when ``p`` does not refine ``q``.
    """
    if not leq(p, q):
        raise ValueError(f"{p} does not refine {q}")
    counts: dict[int, set] = {}
    for a, b in zip(p.rgs, q.rgs):
        counts.setdefault(b, set()).add(a)
    value = 1
    for blocks in counts.values():
        b = len(blocks)
        value *= (-1) ** (b - 1) * factorial(b - 1)
    return value


def mobius_recursive(p: SetPartition, q: SetPartition) -> int:
    """Moebius function from its defining recursion; slow, used as an oracle."""
    if not leq(p, q):
        raise ValueError(f"{p} does not refine {q}")
    interval = [r for r in enumerate_partitions(p.size) if leq(p, r) and leq(r, q)]
    interval.sort(key=lambda r: -r.num_blocks)
    mu: dict[SetPartition, int] = {}
    for r in interval:
        if r == p:
            mu[r] = 1
        else:
            mu[r] = -sum(mu[s] for s in mu if leq(s, r))
    return mu[q]


def enumerate_star_partitions(rows: int, k: int) -> Iterator[SetPartition]:
    """Partitions of ``rows * k`` elements with no singleton and no block meeting a row twice.

    Element ``e`` lies in row ``e // k``.  With a single row there are none.
    """
    m = rows * k
    if rows <= 1 or k == 0:
        return
    _check_budget(bell_number(m), f"star partitions of {rows}x{k} elements")
    block_rows: list[set[int]] = []
    block_sizes: list[int] = []
    rgs = [0] * m

    def rec(e: int):
        remaining = m - e
        singles = sum(1 for s in block_sizes if s == 1)
        if singles > remaining:
            return
        if e == m:
            yield SetPartition(tuple(rgs))
            return
        row = e // k
        for b in range(len(block_rows)):
            if row not in block_rows[b]:
                rgs[e] = b
                block_rows[b].add(row)
                block_sizes[b] += 1
                yield from rec(e + 1)
                block_sizes[b] -= 1
                block_rows[b].discard(row)
        # open a new block only when a later row can still join it
        if row < rows - 1:
            rgs[e] = len(block_rows)
            block_rows.append({row})
            block_sizes.append(1)
            yield from rec(e + 1)
            block_rows.pop()
            block_sizes.pop()

    yield from rec(0)


@dataclass(frozen=True, order=True)
class PartialMatching:
    """A partial matching between a top row ``0..k-1`` and a bottom row ``k..2k-1``.

    ``pairs`` holds ``(top, bottom)`` with ``0 <= top < k`` and ``0 <= bottom < k``
    (bottom indices relative to the bottom row).
    """

    k: int
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        tops = [a for a, _ in self.pairs]
        bots = [b for _, b in self.pairs]
        if len(set(tops)) != len(tops) or len(set(bots)) != len(bots):
            raise ValueError("not a matching")
        if any(not (0 <= x < self.k) for x in tops + bots):
            raise ValueError("index out of range")
        object.__setattr__(self, "pairs", tuple(sorted(self.pairs)))

    @property
    def deficiency(self) -> int:
        """Number of unmatched top vertices, ``k - |pairs|``."""
        return self.k - len(self.pairs)

    @property
    def num_blocks(self) -> int:
        return 2 * self.k - len(self.pairs)

    def to_partition(self) -> SetPartition:
        labels = list(range(2 * self.k))
        for a, b in self.pairs:
            labels[self.k + b] = a
        return SetPartition.from_labels(labels)

    @classmethod
    def from_partition(cls, p: SetPartition) -> PartialMatching:
        if p.size % 2:
            raise ValueError("odd ground set")
        k = p.size // 2
        pairs = []
        for blk in p.blocks:
            if len(blk) == 1:
                continue
            if len(blk) != 2 or not (blk[0] < k <= blk[1]):
                raise ValueError(f"{p} is not a partial matching")
            pairs.append((blk[0], blk[1] - k))
        return cls(k, tuple(pairs))

    def top_partner(self, top: int) -> int | None:
        for a, b in self.pairs:
            if a == top:
                return b
        return None

    def __str__(self) -> str:
        return str(self.to_partition())


def enumerate_partial_matchings(k: int) -> list[PartialMatching]:
    """All partial matchings on ``2k`` points, fewest pairs first."""
    out = []

    def rec(i: int, used: frozenset, acc: list):
        if i == k:
            out.append(PartialMatching(k, tuple(acc)))
            return
        rec(i + 1, used, acc)
        for b in range(k):
            if b not in used:
                acc.append((i, b))
                rec(i + 1, used | {b}, acc)
                acc.pop()

    rec(0, frozenset(), [])
    out.sort(key=lambda m: (len(m.pairs), m.pairs))
    return out


def compose(sigma: Sequence[int], tau: Sequence[int]) -> tuple[int, ...]:
    """``sigma o tau``: apply ``tau`` first."""
    return tuple(sigma[t] for t in tau)


def inverse(sigma: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(sigma)
    for i, s in enumerate(sigma):
        out[s] = i
    return tuple(out)


def iota(sigma: Sequence[int]) -> PartialMatching:
    """Permutation diagram: top ``i`` joined to bottom ``sigma^{-1}(i)``."""
    inv = inverse(sigma)
    return PartialMatching(len(sigma), tuple((i, inv[i]) for i in range(len(sigma))))


def completions(pm: PartialMatching) -> list[tuple[int, ...]]:
    """Permutations ``tau`` whose diagram contains every pair of ``pm``.

    These are the ``tau`` with ``tau(bottom) = top`` for each pair; there are
    ``deficiency!`` of them.
    """
    k = pm.k
    fixed = {b: a for a, b in pm.pairs}
    free_src = [b for b in range(k) if b not in fixed]
    free_dst = [a for a in range(k) if a not in {x for x, _ in pm.pairs}]
    out = []
    for perm in permutations(free_dst):
        tau = [0] * k
        for b, a in fixed.items():
            tau[b] = a
        for b, a in zip(free_src, perm):
            tau[b] = a
        out.append(tuple(tau))
    return out


def multiply_diagrams(p: SetPartition, q: SetPartition) -> tuple[SetPartition, int]:
    """Compose two partition diagrams on ``2k`` points, ``p`` stacked above ``q``.

    The bottom row of ``p`` is identified with the top row of ``q``.  Returns
    the resulting diagram and the number of components confined to the
    middle row.
    """
    if p.size != q.size or p.size % 2:
        raise ValueError("diagrams must share an even size")
    k = p.size // 2
    # nodes: top 0..k-1, middle k..2k-1, bottom 2k..3k-1
    pairs = []
    for blk in p.blocks:
        pairs.extend((blk[0], x) for x in blk[1:])
    for blk in q.blocks:
        shifted = [x + k for x in blk]
        pairs.extend((shifted[0], x) for x in shifted[1:])
    labels = _union_find_labels(3 * k, pairs)
    outer = set(labels[:k]) | set(labels[2 * k :])
    middle_only = len({labels[x] for x in range(k, 2 * k)} - outer)
    product = SetPartition.from_labels(labels[:k] + labels[2 * k :])
    return product, middle_only
