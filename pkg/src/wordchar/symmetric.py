"""Young diagrams, symmetric-group characters and stable dimensions.

Characters come from the Murnaghan-Nakayama rule in beta-number form:
removing a rim hook of length ``s`` is the move ``beta -> beta - s`` on a
set of beta-numbers, with sign ``(-1)**h`` where ``h`` counts the
beta-numbers strictly between.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod
from typing import Iterator, Sequence

from .algebra import ExactPolynomial

__all__ = [
    "YoungDiagram",
    "partitions_of",
    "character",
    "dim",
    "dim_stable",
    "falling_product_lambda",
    "stable_diagram",
    "class_size",
    "cycle_type_of",
]


@dataclass(frozen=True, order=True)
class YoungDiagram:
    """A weakly decreasing tuple of positive parts."""

    parts: tuple[int, ...]

    def __init__(self, parts: Sequence[int] = ()):
        parts = tuple(int(p) for p in parts)
        if any(p <= 0 for p in parts):
            raise ValueError(f"parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"parts must be weakly decreasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def parse(cls, text: str) -> YoungDiagram:
        text = text.strip().strip("()[]")
        if not text:
            return cls(())
        return cls(int(t) for t in text.replace(" ", ",").split(",") if t)

    @property
    def k(self) -> int:
        return sum(self.parts)

    @property
    def first_row(self) -> int:
        return self.parts[0] if self.parts else 0

    def __len__(self) -> int:
        return len(self.parts)

    def conjugate(self) -> YoungDiagram:
        if not self.parts:
            return self
        return YoungDiagram(
            tuple(sum(1 for p in self.parts if p > j) for j in range(self.parts[0]))
        )

    def hook_lengths(self) -> list[int]:
        conj = self.conjugate().parts
        return [
            (row - j - 1) + (conj[j] - i - 1) + 1
            for i, row in enumerate(self.parts)
            for j in range(row)
        ]

    def __str__(self) -> str:
        return ",".join(str(p) for p in self.parts)


def partitions_of(k: int) -> list[YoungDiagram]:
    """All diagrams with ``k`` boxes, in reverse lexicographic order ((k) first)."""

    def rec(remaining: int, cap: int) -> Iterator[tuple[int, ...]]:
        if remaining == 0:
            yield ()
            return
        for p in range(min(remaining, cap), 0, -1):
            for rest in rec(remaining - p, p):
                yield (p,) + rest

    return [YoungDiagram(p) for p in rec(k, k)]


def dim(shape: YoungDiagram) -> int:
    """Hook length formula."""
    return factorial(shape.k) // prod(shape.hook_lengths())


def _betas(parts: tuple[int, ...]) -> tuple[int, ...]:
    L = len(parts)
    return tuple(p + (L - 1 - i) for i, p in enumerate(parts))


def _from_betas(betas: Sequence[int]) -> tuple[int, ...]:
    b = sorted(betas, reverse=True)
    L = len(b)
    return tuple(x for x in (b[i] - (L - 1 - i) for i in range(L)) if x > 0)


@lru_cache(maxsize=None)
def _hook_dim(parts: tuple[int, ...]) -> int:
    return dim(YoungDiagram(parts))


@lru_cache(maxsize=1 << 18)
def _mn(parts: tuple[int, ...], cycles: tuple[int, ...]) -> int:
    if not cycles:
        return 1
    if cycles[0] == 1:
        return _hook_dim(parts)
    s = cycles[0]
    rest = cycles[1:]
    betas = _betas(parts)
    present = set(betas)
    total = 0
    for b in betas:
        nb = b - s
        if nb < 0 or nb in present:
            continue
        between = sum(1 for x in betas if nb < x < b)
        new = [x if x != b else nb for x in betas]
        term = _mn(_from_betas(new), rest)
        total += -term if between % 2 else term
    return total


def character(shape: YoungDiagram, cycle_type: Sequence[int]) -> int:
    """Irreducible character of ``S_k`` indexed by ``shape`` at the class ``cycle_type``."""
    ct = tuple(sorted((int(c) for c in cycle_type if c > 0), reverse=True))
    if sum(ct) != shape.k:
        raise ValueError(f"cycle type {ct} does not partition {shape.k}")
    return _mn(shape.parts, ct)


def stable_diagram(shape: YoungDiagram, n: int) -> YoungDiagram:
    """``(n - k, shape...)``; needs ``n - k >= shape.first_row``."""
    top = n - shape.k
    if top < shape.first_row:
        raise ValueError(f"n={n} too small for a stable diagram over {shape}")
    return YoungDiagram((top,) + shape.parts)


def _interpolate(points: list[tuple[int, int]]) -> ExactPolynomial:
    result = ExactPolynomial()
    for i, (xi, yi) in enumerate(points):
        basis = ExactPolynomial((1,))
        denom = Fraction(1)
        for j, (xj, _) in enumerate(points):
            if j != i:
                basis = basis * ExactPolynomial((-xj, 1))
                denom *= xi - xj
        result = result + basis * Fraction(yi, 1) / denom
    return result


@lru_cache(maxsize=None)
def dim_stable(shape: YoungDiagram) -> ExactPolynomial:
    """Dimension of the irreducible labelled by ``(n - k, shape...)`` as a polynomial in ``n``.

    Interpolated through ``k + 1`` hook-length evaluations; the leading
    coefficient is checked against ``dim(shape) / k!``.
    """
    k = shape.k
    n0 = k + shape.first_row
    pts = [(n, dim(stable_diagram(shape, n))) for n in range(n0, n0 + k + 1)]
    poly = _interpolate(pts)
    if poly.degree != k or poly.leading != Fraction(dim(shape), factorial(k)):
        raise ArithmeticError(f"stable dimension interpolation failed for {shape}")
    return poly


@lru_cache(maxsize=None)
def falling_product_lambda(shape: YoungDiagram) -> ExactPolynomial:
    """``prod_{j=1}^{k} (n - k - j + 1 + conj_j)``, with ``conj`` the conjugate parts.

    With this product, the stable dimension equals
    ``dim(shape) / k! * (n)_{2k} / falling_product_lambda(shape)``.
    """
    k = shape.k
    conj = shape.conjugate().parts
    roots = []
    for j in range(1, k + 1):
        c = conj[j - 1] if j <= len(conj) else 0
        roots.append(k + j - 1 - c)
    return ExactPolynomial.from_roots(roots)


def class_size(cycle_type: Sequence[int]) -> int:
    """Number of permutations with the given cycle type."""
    n = sum(cycle_type)
    counts: dict[int, int] = {}
    for c in cycle_type:
        counts[c] = counts.get(c, 0) + 1
    z = prod(c**m * factorial(m) for c, m in counts.items())
    return factorial(n) // z


def cycle_type_of(perm: Sequence[int]) -> tuple[int, ...]:
    """Cycle type of a permutation given as an image sequence, largest first."""
    n = len(perm)
    seen = [False] * n
    out = []
    for i in range(n):
        if not seen[i]:
            length = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            out.append(length)
    return tuple(sorted(out, reverse=True))
