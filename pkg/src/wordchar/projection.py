"""Orthogonal projections of ``(C^n)^{⊗k}`` onto stable isotypic pieces.

The projection onto the copies of the irreducible ``(n - k, shape...)`` is a
combination of partial-matching operators ``p_pi``.  ``p_pi`` acts by the
exact-kernel rule: ``<p_pi e_A, e_B> = 1`` iff the kernel of the
concatenated index ``A + B`` is exactly ``pi``.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from math import factorial
from typing import Sequence

import numpy as np

from .algebra import ExactPolynomial, ExactRationalFunction, falling_factorial
from .partitions import (
    PartialMatching,
    SetPartition,
    completions,
    enumerate_partial_matchings,
    iota,
)
from .symmetric import (
    YoungDiagram,
    character,
    cycle_type_of,
    dim,
    dim_stable,
    falling_product_lambda,
    partitions_of,
)

__all__ = [
    "DENSE_LIMIT",
    "projection_sign_sum",
    "proj_coeff",
    "proj_coeff_parts",
    "build_projection",
    "tensor_permutation_matrix",
    "bitrace_character",
    "xi_vector",
    "isotypic_component",
    "xi_projector_check",
]

DENSE_LIMIT = 10**4


@lru_cache(maxsize=None)
def projection_sign_sum(shape: YoungDiagram, pm: PartialMatching) -> int:
    """``(-1)**(k + |pi|)`` times the sum of characters over the completions of ``pm``."""
    if shape.k != pm.k:
        raise ValueError("diagram and matching have different k")
    total = sum(character(shape, cycle_type_of(t)) for t in completions(pm))
    return (-1) ** (pm.k + pm.num_blocks) * total


def proj_coeff_parts(shape: YoungDiagram, pm: PartialMatching) -> tuple[int, Fraction, ExactPolynomial, ExactPolynomial]:
    """Pieces ``(s, d/k!, F, (n)_shape)`` with coefficient ``s * d/k! * F / (n)_shape``.

    ``F`` is ``(n)_{2k} / (n)_{|pi|}``, the falling product from ``|pi|`` to ``2k - 1``.
    """
    k = pm.k
    s = projection_sign_sum(shape, pm)
    F = ExactPolynomial.from_roots(range(pm.num_blocks, 2 * k))
    return s, Fraction(dim(shape), factorial(k)), F, falling_product_lambda(shape)


def proj_coeff(shape: YoungDiagram, pm: PartialMatching) -> ExactRationalFunction:
    """Coefficient of ``p_pi`` in the projection for ``shape``, as a function of ``n``."""
    s = projection_sign_sum(shape, pm)
    if s == 0:
        return ExactRationalFunction(0)
    return ExactRationalFunction(dim_stable(shape) * s, falling_factorial(pm.num_blocks))


def _check_dense(n: int, k: int) -> None:
    if n < 2 * k:
        raise ValueError(f"the projection formula needs n >= 2k (n={n}, k={k})")
    if n**k > DENSE_LIMIT:
        raise ValueError(f"n**k = {n**k} exceeds the dense limit {DENSE_LIMIT}")


def _index_tuples(n: int, k: int) -> list[tuple[int, ...]]:
    return list(product(range(n), repeat=k))


def build_projection(shape: YoungDiagram, n: int) -> np.ndarray:
    """Dense exact matrix (object dtype, Fraction entries) indexed by ``n**k`` multi-indices.

    Entry ``[B, A]`` is ``sum_pi c(pi) <p_pi e_A, e_B>``; indices are ranked
    lexicographically.
    """
    k = shape.k
    _check_dense(n, k)
    coeff = {}
    for pm in enumerate_partial_matchings(k):
        c = proj_coeff(shape, pm)
        if not c.is_zero():
            coeff[pm.to_partition().rgs] = c(n)
    idx = _index_tuples(n, k)
    size = len(idx)
    Q = np.full((size, size), Fraction(0), dtype=object)
    for a, A in enumerate(idx):
        if len(set(A)) < k:
            continue
        for b, B in enumerate(idx):
            rgs = SetPartition.from_labels(A + B).rgs
            val = coeff.get(rgs)
            if val is not None:
                Q[b, a] = val
    return Q


def _rank(index: Sequence[int], n: int) -> int:
    r = 0
    for x in index:
        r = r * n + x
    return r


def tensor_permutation_matrix(g: Sequence[int], k: int) -> np.ndarray:
    """Matrix of ``g`` acting diagonally: ``e_A -> e_{g(A)}``."""
    n = len(g)
    idx = _index_tuples(n, k)
    G = np.full((len(idx), len(idx)), Fraction(0), dtype=object)
    for a, A in enumerate(idx):
        G[_rank([g[x] for x in A], n), a] = Fraction(1)
    return G


def bitrace_character(shape: YoungDiagram, g: Sequence[int], n: int | None = None,
                      Q: np.ndarray | None = None) -> Fraction:
    """Character of the stable irreducible at ``g`` as ``tr(g Q) / dim(shape)``.

    Uses ``tr(g Q) = sum_A Q[g^{-1} A, A]``.
    """
    n = len(g) if n is None else n
    if len(g) != n:
        raise ValueError("permutation length differs from n")
    k = shape.k
    if Q is None:
        Q = build_projection(shape, n)
    ginv = [0] * n
    for i, x in enumerate(g):
        ginv[x] = i
    total = Fraction(0)
    for a, A in enumerate(_index_tuples(n, k)):
        total += Q[_rank([ginv[x] for x in A], n), a]
    return total / dim(shape)


def xi_vector(n: int, k: int) -> np.ndarray:
    """``(e_1 - e_2) ⊗ (e_3 - e_4) ⊗ ...`` flattened in lexicographic index order."""
    if n < 2 * k:
        raise ValueError("need n >= 2k")
    v = np.zeros(n**k, dtype=object)
    v[:] = Fraction(0)
    for signs in product((0, 1), repeat=k):
        A = [2 * j + s for j, s in enumerate(signs)]
        v[_rank(A, n)] = Fraction((-1) ** sum(signs))
    return v


def _apply_matching(sigma: Sequence[int], v: np.ndarray, n: int, k: int) -> np.ndarray:
    """Apply ``p_{iota(sigma)}`` by the exact-kernel rule."""
    pm = iota(sigma)
    out = np.zeros_like(v)
    out[:] = Fraction(0)
    for a, A in enumerate(_index_tuples(n, k)):
        if v[a] == 0 or len(set(A)) < k:
            continue
        B = [0] * k
        for top, bottom in pm.pairs:
            B[bottom] = A[top]
        out[_rank(B, n)] += v[a]
    return out


def isotypic_component(shape: YoungDiagram, v: np.ndarray, n: int) -> np.ndarray:
    """``dim(shape)/k! * sum_sigma chi(sigma) p_{iota(sigma)} v``."""
    k = shape.k
    acc = np.zeros_like(v)
    acc[:] = Fraction(0)
    for sigma in permutations(range(k)):
        chi = character(shape, cycle_type_of(sigma))
        if chi:
            acc = acc + _apply_matching(sigma, v, n, k) * chi
    return acc * Fraction(dim(shape), factorial(k))


def xi_projector_check(shape: YoungDiagram, n: int, projections: dict | None = None) -> bool:
    """Check that the ``shape`` component of ``xi`` is nonzero, fixed by its own
    projection and killed by the projection of every other diagram of the same size."""
    k = shape.k
    _check_dense(n, k)
    projections = projections or {}
    xi = isotypic_component(shape, xi_vector(n, k), n)
    if all(x == 0 for x in xi):
        return False
    for mu in partitions_of(k):
        Q = projections.get(mu)
        if Q is None:
            Q = build_projection(mu, n)
        image = Q.dot(xi)
        target = xi if mu == shape else np.zeros_like(xi)
        if any(a != b for a, b in zip(image, target)):
            return False
    return True
