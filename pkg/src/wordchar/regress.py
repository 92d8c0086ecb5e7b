"""Golden regression checks shared by the ``regress`` subcommand and the test suite.

Each check returns a :class:`CheckResult`; none of them raise on failure.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from math import sqrt
from typing import Callable

import numpy as np

from .algebra import ExactRationalFunction, taylor_coefficients
from .engine import expected_characters, phi_w, polynomial_form
from .partitions import enumerate_partitions, meet
from .projection import bitrace_character, build_projection, tensor_permutation_matrix, xi_projector_check
from .sampling import exhaustive_expected_character, mc_expected_character
from .schreier import dense_report, random_schreier_graph, spectral_gap
from .symmetric import (
    YoungDiagram,
    character,
    cycle_type_of,
    dim,
    dim_stable,
    partitions_of,
    stable_diagram,
)
from .weingarten import weingarten

__all__ = ["CheckResult", "CHECKS", "run_all", "projection_report", "REGRESSION_WORDS", "NON_POWER_WORDS"]

COMMUTATOR = "abAB"
SQUARE = "aa"
NON_POWER_WORDS = ("abAB", "aabb", "abaB")
REGRESSION_WORDS = ("abAB", "aa", "aabb", "abaB")


@dataclass
class CheckResult:
    key: str
    title: str
    passed: bool
    seconds: float = 0.0
    details: list[str] = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" ({'; '.join(self.details)})" if self.details else ""
        return f"[{status}] {self.key} {self.title} in {self.seconds:.1f}s{extra}"

    def to_json(self) -> dict:
        return {"key": self.key, "title": self.title, "passed": self.passed,
                "seconds": round(self.seconds, 3), "details": self.details}


def _timed(key: str, title: str, budget: float | None = None):
    def wrap(fn: Callable[[CheckResult], None]):
        def run() -> CheckResult:
            res = CheckResult(key, title, True)
            start = time.perf_counter()
            fn(res)
            res.seconds = time.perf_counter() - start
            if budget is not None and res.seconds > budget:
                res.passed = False
                res.details.append(f"runtime {res.seconds:.1f}s above {budget:.0f}s")
            return res

        run.__name__ = fn.__name__
        run.key = key
        return run

    return wrap


def _fail(res: CheckResult, msg: str) -> None:
    res.passed = False
    if len(res.details) < 8:
        res.details.append(msg)


@_timed("C1", "commutator expectation equals 1/dim", budget=300)
def check_commutator(res: CheckResult) -> None:
    for k in (1, 2):
        values = expected_characters(COMMUTATOR, k).values
        for shape, E in values.items():
            target = ExactRationalFunction(1, dim_stable(shape))
            if E != target:
                _fail(res, f"k={k} shape={shape}: {E} != {target}")
            for n in (4, 5):
                exact = exhaustive_expected_character(COMMUTATOR, shape, n)
                if E(n) != exact:
                    _fail(res, f"shape={shape} n={n}: engine {E(n)} vs exhaustive {exact}")


@_timed("C2", "square word expectation is 1")
def check_square(res: CheckResult) -> None:
    shape = YoungDiagram((1,))
    E = expected_characters(SQUARE, 1).values[shape]
    if E != ExactRationalFunction(1):
        _fail(res, f"E = {E}")
    for n in (3, 4):
        exact = exhaustive_expected_character(SQUARE, shape, n)
        if exact != 1 or E(n) != exact:
            _fail(res, f"n={n}: exhaustive {exact}")


@_timed("C3", "decay of order n^-k for non-powers")
def check_decay(res: CheckResult) -> None:
    for w in NON_POWER_WORDS:
        for k in (1, 2):
            for shape, E in expected_characters(w, k).values.items():
                gap = E.degree_gap
                if gap is not None and gap < k:
                    _fail(res, f"{w} {shape}: degree gap {gap} < {k}")


def _brute_integral_table(n: int, m: int) -> np.ndarray:
    """``T[I, J]`` = number of ``g`` in ``S_n`` with ``g(J_t) = I_t`` for all t."""
    G = np.zeros((len(list(permutations(range(n)))), n, n), dtype=np.int64)
    for idx, g in enumerate(permutations(range(n))):
        G[idx, list(g), range(n)] = 1
    if m == 1:
        T = G.sum(axis=0)
    elif m == 2:
        T = np.einsum("gab,gcd->acbd", G, G).reshape(n**2, n**2)
    else:
        T = np.einsum("gab,gcd,gef->acebdf", G, G, G).reshape(n**3, n**3)
    return T.reshape(n**m, n**m)


@_timed("C4", "Weingarten expansion and order bound")
def check_weingarten(res: CheckResult) -> None:
    from itertools import product
    from math import factorial

    from .weingarten import delta

    for m in (1, 2, 3):
        parts = list(enumerate_partitions(m))
        for n in (5, 6):
            brute = _brute_integral_table(n, m)
            idx = list(product(range(n), repeat=m))
            D = np.array([[delta(p, I) for p in parts] for I in idx], dtype=object)
            W = np.array([[weingarten(s, t)(n) for t in parts] for s in parts], dtype=object)
            expansion = D.dot(W).dot(D.T)
            nf = factorial(n)
            bad = sum(1 for a in range(len(idx)) for b in range(len(idx))
                      if expansion[a, b] != Fraction(int(brute[a, b]), nf))
            if bad:
                _fail(res, f"m={m} n={n}: {bad} mismatched entries")
    for m in (1, 2, 3, 4):
        parts = list(enumerate_partitions(m))
        for s in parts:
            for t in parts:
                wg = weingarten(s, t)
                gap = wg.degree_gap
                if gap is not None and gap < meet(s, t).num_blocks:
                    _fail(res, f"m={m} {s},{t}: gap {gap}")


def projection_report(shape: YoungDiagram, n: int, samples: int = 20, seed: int = 6,
                      projections: dict | None = None) -> dict[str, bool]:
    """Exact checks of the dense projection for one diagram at one ``n``."""
    k = shape.k
    Qs = projections if projections is not None else {sh: build_projection(sh, n) for sh in partitions_of(k)}
    Q = Qs[shape]
    rng = np.random.default_rng(seed)
    gens = [[1, 0] + list(range(2, n)), list(range(1, n)) + [0]]
    big = stable_diagram(shape, n)
    perms = [[int(x) for x in rng.permutation(n)] for _ in range(samples)]
    return {
        "idempotent": bool((Q.dot(Q) == Q).all()),
        "symmetric": bool((Q == Q.T).all()),
        "trace": sum(Q.diagonal()) == dim(shape) * dim_stable(shape)(n),
        "commutes": all((tensor_permutation_matrix(g, k).dot(Q) == Q.dot(tensor_permutation_matrix(g, k))).all()
                        for g in gens),
        "bitrace": all(bitrace_character(shape, g, n, Q) == character(big, cycle_type_of(g)) for g in perms),
        "xi": xi_projector_check(shape, n, Qs),
    }


@_timed("C5", "projection suite at n=6")
def check_projection(res: CheckResult) -> None:
    n = 6
    for k in (1, 2):
        Qs = {sh: build_projection(sh, n) for sh in partitions_of(k)}
        for shape in Qs:
            for name, ok in projection_report(shape, n, projections=Qs).items():
                if not ok:
                    _fail(res, f"{shape}: {name}")


@_timed("C6", "polynomial form with gate divisibility")
def check_polynomial_form(res: CheckResult) -> None:
    for w in REGRESSION_WORDS:
        for k in (1, 2):
            for shape in partitions_of(k):
                try:
                    form = polynomial_form(w, shape)
                except ArithmeticError as exc:
                    _fail(res, f"{w} {shape}: {exc}")
                    continue
                if not form.within_bound():
                    _fail(res, f"{w} {shape}: degree {form.degree} > {form.bound}")
                elif not form.within_tight_bound():
                    res.details.append(f"{w} {shape}: degree {form.degree} above 3kq+q^2={form.tight_bound}")


@_timed("C7", "Taylor coefficients of phi vanish")
def check_taylor(res: CheckResult) -> None:
    for w, K, count in ((COMMUTATOR, 1, 2), (COMMUTATOR, 2, 4), (SQUARE, 1, 1)):
        coeffs = taylor_coefficients(phi_w(w, K), count)
        if any(coeffs):
            _fail(res, f"{w} K={K}: {coeffs}")


@_timed("C8", "Euler characteristic bound over all graphs")
def check_euler(res: CheckResult) -> None:
    for w in NON_POWER_WORDS:
        for k in (1, 2):
            stats = expected_characters(w, k, strict=False).stats
            if stats.euler_checked == 0:
                _fail(res, f"{w} k={k}: nothing checked")
            if stats.euler_violations:
                _fail(res, f"{w} k={k}: {stats.euler_violations} violations")
            res.details.append(f"{w} k={k}: {stats.euler_checked} graphs")


@_timed("C9", "Monte Carlo agrees with 1/(n-1)", budget=60)
def check_monte_carlo(res: CheckResult) -> None:
    n = 50
    rep = mc_expected_character(COMMUTATOR, YoungDiagram((1,)), n, 200_000, seed=20240611)
    exact = 1 / (n - 1)
    z = abs(rep.mean - exact) / rep.stderr
    res.details.append(f"mean {rep.mean:.5f} stderr {rep.stderr:.5f} z {z:.2f}")
    if not abs(rep.mean - exact) <= 4 * rep.stderr:
        res.passed = False


DENSE_CASES = ((10, 2, 2, 1), (12, 2, 2, 3), (8, 3, 2, 5), (30, 2, 2, 2), (45, 2, 2, 4), (7, 3, 3, 8))


@_timed("C10", "Schreier spectral gap experiment", budget=300)
def check_spectral(res: CheckResult) -> None:
    r, k, n = 2, 2, 300
    bound = 2 * sqrt(2 * r - 1) + 0.25
    below = 0
    for seed in range(10):
        op = random_schreier_graph(n, k, r, seed)
        rep = spectral_gap(op, tol=1e-8 / op.degree, seed=seed)
        if rep.lambda_nontrivial is not None and rep.lambda_nontrivial <= bound:
            below += 1
        if not rep.connected or rep.residual > 1e-8:
            _fail(res, f"seed {seed}: connected={rep.connected} residual={rep.residual:.2e}")
    res.details.append(f"{below}/10 below {bound:.4f}")
    if below < 9:
        res.passed = False
    for n_, k_, r_, seed in DENSE_CASES:
        op = random_schreier_graph(n_, k_, r_, seed)
        rep = spectral_gap(op, tol=1e-8 / op.degree, seed=seed)
        if not rep.connected:
            _fail(res, f"dense case {(n_, k_, r_, seed)} disconnected")
            continue
        top, bottom, _ = dense_report(op)
        if abs(top - rep.lambda_top) > 1e-6 or abs(bottom - rep.lambda_bottom) > 1e-6:
            _fail(res, f"dense mismatch at {(n_, k_, r_, seed)}")


CHECKS = (
    check_commutator, check_square, check_decay, check_weingarten, check_projection,
    check_polynomial_form, check_taylor, check_euler, check_monte_carlo, check_spectral,
)


def run_all(selected: set[str] | None = None) -> list[CheckResult]:
    return [chk() for chk in CHECKS if selected is None or chk.key in selected]
