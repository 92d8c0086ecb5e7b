"""Schreier graphs of ``S_n`` acting on ordered ``k``-tuples of distinct points.

Vertices are ranked by a mixed-radix code; each generator becomes a flat
image array, so the adjacency matvec is ``2r`` gathers.  Extreme non-trivial
eigenvalues come from a thick-restart Lanczos iteration with full
reorthogonalization against the deflated trivial eigenvectors.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import perm, sqrt
from typing import Callable, Sequence

import numpy as np

from .sampling import random_permutations

__all__ = [
    "TupleSpace",
    "SchreierOperator",
    "SpectralReport",
    "ConnectivityReport",
    "schreier_graph",
    "random_schreier_graph",
    "connectivity",
    "spectral_gap",
    "lanczos_extreme",
    "dense_spectrum",
    "dense_report",
    "MEMORY_LIMIT",
]

MEMORY_LIMIT = 5 * 10**7  # r * size integers held in image arrays


@dataclass(frozen=True)
class TupleSpace:
    """Ordered ``k``-tuples of distinct elements of ``{0..n-1}`` with a dense ranking."""

    n: int
    k: int

    def __post_init__(self):
        if not 1 <= self.k <= self.n:
            raise ValueError("need 1 <= k <= n")

    @property
    def size(self) -> int:
        return perm(self.n, self.k)

    def _weights(self) -> np.ndarray:
        w = np.ones(self.k, dtype=np.int64)
        for j in range(self.k - 2, -1, -1):
            w[j] = w[j + 1] * (self.n - j - 1)
        return w

    def rank(self, tuples) -> np.ndarray:
        """Rank a batch ``(B, k)`` (or one tuple); digit ``j`` counts unused smaller values."""
        t = np.atleast_2d(np.asarray(tuples, dtype=np.int64))
        if t.shape[1] != self.k:
            raise ValueError("tuple length differs from k")
        if (t < 0).any() or (t >= self.n).any():
            raise ValueError("tuple entry out of range")
        digits = t.copy()
        for j in range(1, self.k):
            smaller = (t[:, :j] < t[:, j:j + 1]).sum(axis=1)
            if (t[:, :j] == t[:, j:j + 1]).any():
                raise ValueError("tuple entries must be distinct")
            digits[:, j] -= smaller
        out = digits @ self._weights()
        return out if np.ndim(tuples) > 1 else out[0]

    def unrank(self, index) -> np.ndarray:
        idx = np.atleast_1d(np.asarray(index, dtype=np.int64))
        if (idx < 0).any() or (idx >= self.size).any():
            raise ValueError("rank out of range")
        w = self._weights()
        digits = np.empty((idx.size, self.k), dtype=np.int64)
        rem = idx.copy()
        for j in range(self.k):
            digits[:, j], rem = np.divmod(rem, w[j])
        t = digits.copy()
        for j in range(1, self.k):
            earlier = np.sort(t[:, :j], axis=1)
            for c in range(j):
                t[:, j] += earlier[:, c] <= t[:, j]
        return t if np.ndim(index) > 0 else t[0]


@dataclass
class SchreierOperator:
    """Adjacency ``A = sum_i (P_i + P_i^T)``: ``(A x)[v] = sum_i x[g_i v] + x[g_i^{-1} v]``."""

    space: TupleSpace
    images: np.ndarray  # (r, size)
    inverses: np.ndarray  # (r, size)

    @property
    def r(self) -> int:
        return self.images.shape[0]

    @property
    def size(self) -> int:
        return self.space.size

    @property
    def degree(self) -> int:
        return 2 * self.r

    def matvec(self, x: np.ndarray) -> np.ndarray:
        y = np.zeros_like(x)
        for img, inv in zip(self.images, self.inverses):
            y += x[img]
            y += x[inv]
        return y

    def dense(self) -> np.ndarray:
        A = np.zeros((self.size, self.size))
        rows = np.arange(self.size)
        for img, inv in zip(self.images, self.inverses):
            np.add.at(A, (rows, img), 1.0)
            np.add.at(A, (rows, inv), 1.0)
        return A


def schreier_graph(n: int, k: int, perms: Sequence[Sequence[int]]) -> SchreierOperator:
    space = TupleSpace(n, k)
    perms = np.asarray(perms, dtype=np.int64).reshape(len(perms), n)
    if len(perms) * space.size > MEMORY_LIMIT:
        raise MemoryError(f"{len(perms)} x {space.size} image entries exceed the memory budget")
    for p in perms:
        if not np.array_equal(np.sort(p), np.arange(n)):
            raise ValueError("generator is not a permutation")
    tuples = space.unrank(np.arange(space.size))
    images = np.empty((len(perms), space.size), dtype=np.int64)
    inverses = np.empty_like(images)
    for i, p in enumerate(perms):
        images[i] = space.rank(p[tuples])
        inverses[i][images[i]] = np.arange(space.size)
    return SchreierOperator(space, images, inverses)


def random_schreier_graph(n: int, k: int, r: int, seed: int) -> SchreierOperator:
    perms = [random_permutations(n, seed, 0, 1, stream=i)[0] for i in range(r)]
    return schreier_graph(n, k, perms)


@dataclass(frozen=True)
class ConnectivityReport:
    connected: bool
    components: int
    bipartite: bool
    parity: np.ndarray = field(repr=False)  # BFS level parity, meaningful when bipartite

    def __iter__(self):
        return iter((self.connected, self.components))


def connectivity(op: SchreierOperator) -> ConnectivityReport:
    """Breadth-first search over generator images, also testing 2-colourability."""
    size = op.size
    level = np.full(size, -1, dtype=np.int64)
    components = 0
    for start in range(size):
        if level[start] >= 0:
            continue
        components += 1
        level[start] = 0
        frontier = np.array([start])
        depth = 0
        while frontier.size:
            depth += 1
            nbrs = np.unique(np.concatenate([a[frontier] for a in (*op.images, *op.inverses)]))
            fresh = nbrs[level[nbrs] < 0]
            level[fresh] = depth
            frontier = fresh
    parity = level % 2
    bipartite = all(np.all(parity[img] != parity) for img in op.images)
    return ConnectivityReport(components == 1, components, bool(bipartite), parity)


@dataclass(frozen=True)
class SpectralReport:
    lambda_top: float | None
    lambda_bottom: float | None
    lambda_nontrivial: float | None
    iterations: int
    residual: float
    seed: int | None
    connected: bool
    bipartite: bool = False
    converged: bool = True
    n: int | None = None
    k: int | None = None
    r: int | None = None

    @property
    def bound(self) -> float | None:
        return None if self.r is None else 2 * sqrt(2 * self.r - 1)

    def to_row(self) -> dict:
        return {
            "seed": self.seed, "n": self.n, "k": self.k, "r": self.r,
            "lambda_nontrivial": self.lambda_nontrivial, "bound": self.bound,
            "iterations": self.iterations, "connected": self.connected,
        }

    def to_json(self) -> dict:
        out = self.to_row()
        out.update({
            "lambda_top": self.lambda_top, "lambda_bottom": self.lambda_bottom,
            "residual": self.residual, "bipartite": self.bipartite, "converged": self.converged,
        })
        return out


@dataclass(frozen=True)
class LanczosResult:
    value: float
    vector: np.ndarray
    residual: float
    iterations: int
    converged: bool


def _orthogonalize(w: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Two passes of classical Gram-Schmidt; returns the coefficients of both passes."""
    if basis.shape[1] == 0:
        return np.zeros(0)
    h = basis.T @ w
    w -= basis @ h
    h2 = basis.T @ w
    w -= basis @ h2
    return h + h2


def lanczos_extreme(matvec: Callable[[np.ndarray], np.ndarray], size: int, deflate: np.ndarray,
                    tol: float, max_iterations: int, rng: np.random.Generator,
                    basis_size: int = 60, keep: int = 20) -> LanczosResult:
    """Largest eigenvalue of a symmetric operator on the complement of ``deflate``.

    Thick-restart Lanczos: after each sweep of ``basis_size`` steps the best
    ``keep`` Ritz vectors and the last residual direction seed the next sweep.
    Every new vector is reorthogonalized against the deflated vectors and the
    whole basis.  ``deflate`` has orthonormal columns.
    """
    free = size - deflate.shape[1]
    if free <= 0:
        raise ValueError("nothing left after deflation")
    m = min(basis_size, free)
    keep = min(keep, m - 1)
    V = np.zeros((size, m))
    H = np.zeros((m, m))
    v = rng.standard_normal(size)
    _orthogonalize(v, deflate)
    v /= np.linalg.norm(v)
    V[:, 0] = v
    start = 0
    iterations = 0
    best = None
    while True:
        beta = 0.0
        resid_vec = None
        for j in range(start, m):
            w = matvec(V[:, j])
            iterations += 1
            _orthogonalize(w, deflate)
            h = _orthogonalize(w, V[:, : j + 1])
            H[: j + 1, j] = h
            H[j, : j + 1] = h
            beta = float(np.linalg.norm(w))
            if j + 1 < m:
                if beta < 1e-12 * max(1.0, abs(h[-1])):
                    # invariant subspace found: shrink the problem
                    m = j + 1
                    break
                V[:, j + 1] = w / beta
                H[j + 1, j] = H[j, j + 1] = beta
            else:
                resid_vec = w
        theta, S = np.linalg.eigh(H[:m, :m])
        order = np.argsort(theta)[::-1]
        top = order[0]
        est = abs(beta * S[m - 1, top]) if resid_vec is not None else 0.0
        y = V[:, :m] @ S[:, top]
        if est <= tol or resid_vec is None or iterations >= max_iterations:
            y /= np.linalg.norm(y)
            true_res = float(np.linalg.norm(matvec(y) - theta[top] * y))
            iterations += 1
            best = LanczosResult(float(theta[top]), y, true_res, iterations, true_res <= tol)
            if best.converged or iterations >= max_iterations or resid_vec is None:
                return best
        # thick restart
        idx = order[:keep]
        V[:, : len(idx)] = V[:, :m] @ S[:, idx]
        p = len(idx)
        H[:] = 0.0
        H[np.arange(p), np.arange(p)] = theta[idx]
        coupling = beta * S[m - 1, idx]
        H[p, :p] = coupling
        H[:p, p] = coupling
        V[:, p] = resid_vec / beta
        start = p
        m = min(basis_size, free)


def spectral_gap(op: SchreierOperator, tol: float = 1e-8, max_iterations: int = 5000,
                 seed: int | None = 0, basis_size: int = 60, keep: int = 20) -> SpectralReport:
    """Largest non-trivial absolute eigenvalue of the Schreier graph.

    The constant vector (eigenvalue ``2r``) is deflated, and the level-parity
    sign vector (eigenvalue ``-2r``) too when the graph is bipartite.  A
    residual is accepted when ``||A v - theta v|| <= tol * 2r``.
    """
    conn = connectivity(op)
    base = dict(seed=seed, n=op.space.n, k=op.space.k, r=op.r)
    if not conn.connected:
        return SpectralReport(None, None, None, 0, float("nan"), connected=False, converged=False, **base)
    size = op.size
    cols = [np.full(size, 1.0 / sqrt(size))]
    if conn.bipartite:
        cols.append((1.0 - 2.0 * conn.parity) / sqrt(size))
    deflate = np.stack(cols, axis=1)
    if size - deflate.shape[1] <= 0:
        return SpectralReport(None, None, None, 0, 0.0, connected=True, bipartite=conn.bipartite, **base)
    rng = np.random.default_rng(seed)
    threshold = tol * op.degree
    top = lanczos_extreme(op.matvec, size, deflate, threshold, max_iterations, rng, basis_size, keep)
    bottom = lanczos_extreme(lambda x: -op.matvec(x), size, deflate, threshold, max_iterations, rng,
                             basis_size, keep)
    lam_top, lam_bottom = top.value, -bottom.value
    nontrivial = max(abs(lam_top), abs(lam_bottom))
    return SpectralReport(
        lam_top, lam_bottom, nontrivial,
        iterations=top.iterations + bottom.iterations,
        residual=max(top.residual, bottom.residual),
        connected=True, bipartite=conn.bipartite,
        converged=top.converged and bottom.converged, **base,
    )


def dense_spectrum(op: SchreierOperator) -> np.ndarray:
    if op.size > 2000:
        raise ValueError("dense oracle limited to 2000 vertices")
    return np.linalg.eigvalsh(op.dense())


def dense_report(op: SchreierOperator) -> tuple[float | None, float | None, float | None]:
    """``(top, bottom, nontrivial)`` from a dense eigendecomposition, trivial values removed."""
    conn = connectivity(op)
    if not conn.connected:
        raise ValueError("dense report needs a connected graph")
    vals = list(np.sort(dense_spectrum(op)))
    vals.pop()  # the constant eigenvector
    if conn.bipartite:
        vals.pop(0)
    if not vals:
        return None, None, None
    return vals[-1], vals[0], max(abs(vals[-1]), abs(vals[0]))
