"""Weingarten calculus for the symmetric group acting by permutation matrices.

For partitions ``s, t`` of ``[m]``::

    Wg(s, t) = sum over p <= meet(s, t) of mobius(p, s) * mobius(p, t) / (n)_{|p|}

and the integral of ``prod_t g[I_t, J_t]`` over uniform ``g`` in ``S_n`` is
``sum_{s, t} delta_s(I) * delta_t(J) * Wg(s, t)``.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Sequence

from .algebra import ExactPolynomial, ExactRationalFunction, falling_factorial, int_poly_mul
from .partitions import SetPartition, enumerate_partitions, leq, meet, mobius

__all__ = [
    "WeingartenKey",
    "weingarten",
    "weingarten_numerator",
    "delta",
    "brute_force_integral",
    "expansion_integral",
]


@dataclass(frozen=True)
class WeingartenKey:
    sigma: SetPartition
    tau: SetPartition

    def __post_init__(self):
        if self.sigma.size != self.tau.size:
            raise ValueError("sigma and tau must partition the same set")

    @property
    def m(self) -> int:
        return self.sigma.size


_lock = threading.Lock()
_numerator_cache: dict[tuple, tuple[int, ...]] = {}


def _falling_from(lo: int, hi: int) -> list[int]:
    """Integer coefficients of ``prod_{c=lo}^{hi-1} (n - c)``."""
    out = [1]
    for c in range(lo, hi):
        out = int_poly_mul(out, [-c, 1])
    return out


def weingarten_numerator(sigma: SetPartition, tau: SetPartition) -> tuple[int, ...]:
    """Integer coefficients of ``Wg(sigma, tau) * (n)_m``, lowest degree first."""
    key = (sigma.rgs, tau.rgs)
    with _lock:
        hit = _numerator_cache.get(key)
    if hit is not None:
        return hit
    m = sigma.size
    lo = meet(sigma, tau)
    acc = [0] * (m + 1)
    for p in enumerate_partitions(m):
        if not leq(p, lo):
            continue
        coef = mobius(p, sigma) * mobius(p, tau)
        for i, c in enumerate(_falling_from(p.num_blocks, m)):
            acc[i] += coef * c
    while acc and acc[-1] == 0:
        acc.pop()
    result = tuple(acc)
    with _lock:
        _numerator_cache[key] = result
    return result


def weingarten(sigma: SetPartition | WeingartenKey, tau: SetPartition | None = None) -> ExactRationalFunction:
    """Exact Weingarten function as a reduced rational function of ``n``."""
    if isinstance(sigma, WeingartenKey):
        sigma, tau = sigma.sigma, sigma.tau
    if tau is None or sigma.size != tau.size:
        raise ValueError("sigma and tau must partition the same set")
    num = ExactPolynomial(weingarten_numerator(sigma, tau))
    return ExactRationalFunction(num, falling_factorial(sigma.size))


def delta(pi: SetPartition, index: Sequence[int]) -> int:
    """1 when ``index`` is constant on every block of ``pi`` (implication rule)."""
    if len(index) != pi.size:
        raise ValueError("index length does not match partition size")
    for blk in pi.blocks:
        v = index[blk[0]]
        if any(index[x] != v for x in blk[1:]):
            return 0
    return 1


def brute_force_integral(I: Sequence[int], J: Sequence[int], n: int) -> Fraction:
    """Average over ``S_n`` of ``prod_t [g(J_t) = I_t]``; indices are 1-based."""
    if not 2 <= n <= 7:
        raise ValueError("brute force oracle supports 2 <= n <= 7")
    if len(I) != len(J):
        raise ValueError("multi-indices differ in length")
    pairs = [(i - 1, j - 1) for i, j in zip(I, J)]
    if any(not (0 <= a < n and 0 <= b < n) for a, b in pairs):
        raise ValueError("index outside [1, n]")
    hits = 0
    total = 0
    for g in permutations(range(n)):
        total += 1
        if all(g[b] == a for a, b in pairs):
            hits += 1
    return Fraction(hits, total)


def expansion_integral(I: Sequence[int], J: Sequence[int], n: int) -> Fraction:
    """The same integral through the Weingarten expansion, evaluated at ``n``."""
    m = len(I)
    parts = list(enumerate_partitions(m))
    live_i = [p for p in parts if delta(p, I)]
    live_j = [p for p in parts if delta(p, J)]
    total = Fraction(0)
    for s in live_i:
        for t in live_j:
            total += weingarten(s, t)(n)
    return total
