"""Exact expected stable characters of word-random permutations.

For a cyclically reduced word ``w`` and a diagram ``shape`` with ``k`` boxes
the engine evaluates

    E = (1/d) * sum over sigma_f, tau_f, pi_i of
        prod_i c(pi_i) * prod_f Wg(sigma_f, tau_f) * N(sigma, tau, pi)

where ``d = dim(shape)``, ``c`` are projection coefficients, ``Wg`` the
Weingarten function and ``N`` counts index assignments.  ``sigma_f``,
``tau_f`` range over star partitions (or all partitions in debug mode) and
``pi_i`` over partial matchings of ``2k`` points.

Every factor has the form (integer polynomial) / (fixed denominator), so the
sum is accumulated as an integer polynomial and divided once at the end::

    E = S(n) * (d/k!)**l / (d * (n)_shape**l * prod_f (n)_{m_f})

with ``S = sum prod(s_i) * prod(F_{|pi_i|}) * prod(g_f) * N``.
"""
from __future__ import annotations

import threading
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import factorial
from typing import Iterable, Sequence

from .algebra import (
    ExactPolynomial,
    ExactRationalFunction,
    falling_factorial,
    gate_polynomial,
    divides,
    int_poly_add_into,
    int_poly_mul,
    reciprocal_substitute,
)
from .partitions import (
    EnumerationBudgetError,
    PartialMatching,
    SetPartition,
    enumerate_partial_matchings,
    enumerate_partitions,
    enumerate_star_partitions,
    meet,
)
from .projection import projection_sign_sum
from .symmetric import YoungDiagram, dim, dim_stable, falling_product_lambda, partitions_of
from .weingarten import weingarten_numerator
from .words import ReducedWord, WordClass, WordKind, preprocess_word

__all__ = [
    "InvariantViolation",
    "Slot",
    "EnumerationStats",
    "ContributionGraph",
    "EngineResult",
    "inner_product_wiring",
    "build_contribution_graph",
    "count_assignments",
    "chromatic_polynomial",
    "expected_character",
    "expected_characters",
    "validity_threshold",
    "polynomial_form",
    "PolynomialForm",
    "phi_w",
    "PI_TUPLE_BUDGET",
]

PI_TUPLE_BUDGET = 10**8


class InvariantViolation(ArithmeticError):
    """A proven identity or inequality failed; carries diagnostics in ``args``."""


@dataclass(frozen=True, order=True)
class Slot:
    """One coordinate of a multi-index: ``kind`` is "I" or "J", ``generator``
    and ``occurrence`` are 1-based, ``position`` is 0-based."""

    kind: str
    generator: int
    occurrence: int
    position: int

    def __str__(self) -> str:
        return f"({self.kind}_{self.generator}^{self.occurrence})_{self.position + 1}"


# -- slot layout -------------------------------------------------------

@dataclass(frozen=True)
class _Layout:
    word: ReducedWord
    k: int
    sizes: tuple[int, ...]  # m_f = |w|_f * k, indexed by generator - 1
    j_offset: tuple[int, ...]
    i_offset: tuple[int, ...]
    tops: tuple[tuple[int, ...], ...]  # per inner product, the k slots of out(i)
    bottoms: tuple[tuple[int, ...], ...]  # per inner product, the k slots of in(i+1)
    total: int


def _layout(word: ReducedWord, k: int) -> _Layout:
    counts = word.occurrence_counts()
    sizes = tuple(c * k for c in counts)
    j_off, i_off = [], []
    pos = 0
    for m in sizes:
        j_off.append(pos)
        i_off.append(pos + m)
        pos += 2 * m
    seen = [0] * word.rank
    ins, outs = [], []
    for f, eps in word.letters:
        z = seen[f - 1]
        seen[f - 1] += 1
        J = tuple(j_off[f - 1] + z * k + p for p in range(k))
        I = tuple(i_off[f - 1] + z * k + p for p in range(k))
        # g e_J = e_I for a positive letter; the inverse letter swaps roles
        ins.append(J if eps > 0 else I)
        outs.append(I if eps > 0 else J)
    L = len(word.letters)
    tops = tuple(outs[i] for i in range(L))
    bottoms = tuple(ins[(i + 1) % L] for i in range(L))
    return _Layout(word, k, sizes, tuple(j_off), tuple(i_off), tops, bottoms, pos)


def _slot_of(layout: _Layout, s: int) -> Slot:
    for f, m in enumerate(layout.sizes):
        if layout.j_offset[f] <= s < layout.j_offset[f] + m:
            e = s - layout.j_offset[f]
            return Slot("J", f + 1, e // layout.k + 1, e % layout.k)
        if layout.i_offset[f] <= s < layout.i_offset[f] + m:
            e = s - layout.i_offset[f]
            return Slot("I", f + 1, e // layout.k + 1, e % layout.k)
    raise IndexError(s)


def inner_product_wiring(word: ReducedWord, k: int = 1) -> list[tuple[tuple[Slot, ...], tuple[Slot, ...]]]:
    """For each inner product, the slots on its top row and bottom row."""
    lay = _layout(word, k)
    return [
        (tuple(_slot_of(lay, s) for s in top), tuple(_slot_of(lay, s) for s in bot))
        for top, bot in zip(lay.tops, lay.bottoms)
    ]


# -- union find on small label arrays ------------------------------------

def _find(parent: list[int], x: int) -> int:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def _union(parent: list[int], a: int, b: int) -> None:
    ra, rb = _find(parent, a), _find(parent, b)
    if ra != rb:
        if ra < rb:
            parent[rb] = ra
        else:
            parent[ra] = rb


def _base_classes(layout: _Layout, sigmas: Sequence[SetPartition], taus: Sequence[SetPartition]) -> tuple[list[int], int]:
    """Class id of every slot after the sigma (J side) and tau (I side) merges."""
    parent = list(range(layout.total))
    for f in range(len(layout.sizes)):
        for part, off in ((sigmas[f], layout.j_offset[f]), (taus[f], layout.i_offset[f])):
            for blk in part.blocks:
                for x in blk[1:]:
                    _union(parent, off + blk[0], off + x)
    roots = [_find(parent, s) for s in range(layout.total)]
    ids: dict[int, int] = {}
    labels = [ids.setdefault(r, len(ids)) for r in roots]
    return labels, len(ids)


# -- counting polynomial -------------------------------------------------

_chrom_lock = threading.RLock()
_chrom_cache: dict[tuple, tuple[int, ...]] = {}


def _falling_int(m: int) -> list[int]:
    out = [1]
    for c in range(m):
        out = int_poly_mul(out, [-c, 1])
    return out


def _canon(nv: int, edges: Iterable[tuple[int, int]]) -> tuple[int, tuple[tuple[int, int], ...]]:
    es = {(a, b) if a < b else (b, a) for a, b in edges}
    return nv, tuple(sorted(es))


def _components(nv: int, edges: tuple[tuple[int, int], ...]) -> list[tuple[int, tuple]]:
    parent = list(range(nv))
    for a, b in edges:
        _union(parent, a, b)
    groups: dict[int, list[int]] = {}
    for v in range(nv):
        groups.setdefault(_find(parent, v), []).append(v)
    out = []
    for verts in groups.values():
        index = {v: i for i, v in enumerate(verts)}
        sub = [(index[a], index[b]) for a, b in edges if a in index]
        out.append(_canon(len(verts), sub))
    return out


def _chromatic_connected(nv: int, edges: tuple[tuple[int, int], ...]) -> tuple[int, ...]:
    key = (nv, edges)
    hit = _chrom_cache.get(key)
    if hit is not None:
        return hit
    full = nv * (nv - 1) // 2
    if len(edges) == full:
        result = tuple(_falling_int(nv))
    elif not edges:
        result = tuple([0] * nv + [1])
    else:
        if 2 * len(edges) > full:
            # addition-contraction on a missing edge: P(G) = P(G + e) + P(G / e)
            present = set(edges)
            a, b = next((a, b) for a in range(nv) for b in range(a + 1, nv) if (a, b) not in present)
            plus = _canon(nv, edges + ((a, b),))
            contracted = _contract(nv, edges, a, b)
            result = _poly_add(chromatic_polynomial(*plus), chromatic_polynomial(*contracted))
        else:
            a, b = edges[0]
            minus = _canon(nv, edges[1:])
            contracted = _contract(nv, edges, a, b)
            result = _poly_add(chromatic_polynomial(*minus), chromatic_polynomial(*contracted), -1)
    _chrom_cache[key] = result
    return result


def _contract(nv: int, edges, a: int, b: int):
    """Identify ``b`` with ``a`` and renumber the remaining vertices."""
    def relabel(v):
        v = a if v == b else v
        return v - 1 if v > b else v

    new = [(relabel(x), relabel(y)) for x, y in edges if {x, y} != {a, b}]
    return _canon(nv - 1, new)


def _poly_add(p: Sequence[int], q: Sequence[int], scale: int = 1) -> tuple[int, ...]:
    acc = list(p)
    int_poly_add_into(acc, q, scale)
    while acc and acc[-1] == 0:
        acc.pop()
    return tuple(acc)


def chromatic_polynomial(nv: int, edges: Iterable[tuple[int, int]]) -> tuple[int, ...]:
    """Integer coefficients of the proper-colouring count of a loopless graph.

    Components multiply; each component is reduced by deletion-contraction,
    or addition-contraction when dense, down to empty and complete graphs.
    """
    nv, edges = _canon(nv, edges)
    if any(a == b for a, b in edges):
        return ()
    if nv == 0:
        return (1,)
    result: list[int] = [1]
    with _chrom_lock:
        for cnv, cedges in _components(nv, edges):
            result = int_poly_mul(result, _chromatic_connected(cnv, cedges))
    return tuple(result)


# -- contribution graph ----------------------------------------------------

@dataclass(frozen=True)
class ContributionGraph:
    """Merged slot graph for one choice of ``(sigma_f, tau_f, pi_i)``.

    ``vertex_class[s]`` is the class of slot ``s``; ``cliques`` holds, per
    inner product, its ``2k`` slots; ``allowed`` the matched slot pairs that
    may coincide.  ``conflicts`` are class pairs that must receive different
    values.
    """

    k: int
    slots: tuple[Slot, ...]
    vertex_class: tuple[int, ...]
    num_vertices: int
    num_edges: int
    cliques: tuple[tuple[int, ...], ...]
    conflicts: tuple[tuple[int, int], ...]
    contradiction: bool
    deficiency: int

    @property
    def euler_characteristic(self) -> int:
        return self.num_vertices - self.num_edges

    def euler_bound_holds(self) -> bool:
        """``2k <= -2 chi + 2 sum del(pi_i)``."""
        return 2 * self.k <= -2 * self.euler_characteristic + 2 * self.deficiency


def _validate_families(layout: _Layout, sigmas, taus, pis) -> None:
    r = len(layout.sizes)
    if len(sigmas) != r or len(taus) != r:
        raise ValueError("need one sigma and one tau per generator")
    for f in range(r):
        if sigmas[f].size != layout.sizes[f] or taus[f].size != layout.sizes[f]:
            raise ValueError(f"partition sizes for generator {f + 1} must be {layout.sizes[f]}")
    if len(pis) != len(layout.tops):
        raise ValueError("need one partial matching per letter")
    if any(p.k != layout.k for p in pis):
        raise ValueError("partial matchings must have the engine's k")


def build_contribution_graph(word: ReducedWord, k: int, sigmas: Sequence[SetPartition],
                             taus: Sequence[SetPartition], pis: Sequence[PartialMatching]) -> ContributionGraph:
    lay = _layout(word, k)
    _validate_families(lay, sigmas, taus, pis)
    base, nb = _base_classes(lay, sigmas, taus)
    parent = list(range(nb))
    for top, bot, pm in zip(lay.tops, lay.bottoms, pis):
        for a, b in pm.pairs:
            _union(parent, base[top[a]], base[bot[b]])
    roots = [_find(parent, base[s]) for s in range(lay.total)]
    ids: dict[int, int] = {}
    classes = tuple(ids.setdefault(r, len(ids)) for r in roots)
    conflicts = set()
    contradiction = False
    cliques = []
    for top, bot, pm in zip(lay.tops, lay.bottoms, pis):
        members = top + bot
        cliques.append(members)
        ok = {(top[a], bot[b]) for a, b in pm.pairs}
        for x in range(2 * k):
            for y in range(x + 1, 2 * k):
                s, t = members[x], members[y]
                if (s, t) in ok:
                    continue
                cs, ct = classes[s], classes[t]
                if cs == ct:
                    contradiction = True
                else:
                    conflicts.add((min(cs, ct), max(cs, ct)))
    num_edges = sum(meet(s, t).num_blocks for s, t in zip(sigmas, taus))
    return ContributionGraph(
        k=k,
        slots=tuple(_slot_of(lay, s) for s in range(lay.total)),
        vertex_class=classes,
        num_vertices=len(ids),
        num_edges=num_edges,
        cliques=tuple(cliques),
        conflicts=tuple(sorted(conflicts)),
        contradiction=contradiction,
        deficiency=sum(p.deficiency for p in pis),
    )


def count_assignments(graph: ContributionGraph) -> ExactPolynomial:
    """Number of maps from vertex classes to ``[n]`` that separate every conflict pair."""
    if graph.contradiction:
        return ExactPolynomial()
    return ExactPolynomial(chromatic_polynomial(graph.num_vertices, graph.conflicts))


# -- main enumeration ------------------------------------------------------

@dataclass
class EnumerationStats:
    sigma_tau_combos: int = 0
    pi_tuples_visited: int = 0
    graphs: int = 0
    contradictions: int = 0
    euler_checked: int = 0
    euler_violations: int = 0
    max_vertices: int = 0
    violation_examples: list = field(default_factory=list)

    def merge(self, other: EnumerationStats) -> None:
        self.sigma_tau_combos += other.sigma_tau_combos
        self.pi_tuples_visited += other.pi_tuples_visited
        self.graphs += other.graphs
        self.contradictions += other.contradictions
        self.euler_checked += other.euler_checked
        self.euler_violations += other.euler_violations
        self.max_vertices = max(self.max_vertices, other.max_vertices)
        self.violation_examples.extend(other.violation_examples[: max(0, 5 - len(self.violation_examples))])

    def to_json(self) -> dict:
        return {
            "sigma_tau_combos": self.sigma_tau_combos,
            "pi_tuples_visited": self.pi_tuples_visited,
            "graphs": self.graphs,
            "contradictions": self.contradictions,
            "euler_checked": self.euler_checked,
            "euler_violations": self.euler_violations,
            "max_vertices": self.max_vertices,
        }


@dataclass(frozen=True)
class EngineResult:
    word: ReducedWord
    word_class: WordClass
    k: int
    values: dict  # YoungDiagram -> ExactRationalFunction
    stats: EnumerationStats
    threshold: int


def _partition_family(rows: int, k: int, debug: bool) -> list[SetPartition]:
    if debug:
        return list(enumerate_partitions(rows * k))
    return list(enumerate_star_partitions(rows, k))


def _combos(word: ReducedWord, k: int, debug: bool) -> list[tuple[tuple[SetPartition, ...], tuple[SetPartition, ...]]]:
    families = [_partition_family(c, k, debug) for c in word.occurrence_counts()]
    per_gen = [list(product(fam, fam)) for fam in families]
    out = []
    for choice in product(*per_gen):
        out.append((tuple(s for s, _ in choice), tuple(t for _, t in choice)))
    return out


@dataclass(frozen=True)
class _PiData:
    pm: PartialMatching
    pairs: tuple[tuple[int, int], ...]
    falling: tuple[int, ...]  # F = prod_{c=|pi|}^{2k-1} (n - c)
    signs: tuple[int, ...]  # s for every shape, in order


def _pi_data(k: int, shapes: Sequence[YoungDiagram]) -> list[_PiData]:
    out = []
    for pm in enumerate_partial_matchings(k):
        signs = tuple(projection_sign_sum(sh, pm) for sh in shapes)
        if not any(signs):
            continue
        F = [1]
        for c in range(pm.num_blocks, 2 * k):
            F = int_poly_mul(F, [-c, 1])
        out.append(_PiData(pm, pm.pairs, tuple(F), signs))
    return out


def _clique_pairs(k: int, pairs: tuple[tuple[int, int], ...]) -> list[tuple[int, int]]:
    """Index pairs within ``top + bottom`` (length 2k) that must differ."""
    ok = {(a, k + b) for a, b in pairs}
    return [(x, y) for x in range(2 * k) for y in range(x + 1, 2 * k) if (x, y) not in ok]


def _sum_combos(word: ReducedWord, k: int, shapes: Sequence[YoungDiagram], combos, check_euler: bool
                ) -> tuple[list[list[int]], EnumerationStats]:
    """Integer polynomial ``S`` for every shape, summed over the given combos."""
    lay = _layout(word, k)
    pis = _pi_data(k, shapes)
    clique_pairs = [_clique_pairs(k, p.pairs) for p in pis]
    L = len(lay.tops)
    nshapes = len(shapes)
    totals: list[list[int]] = [[] for _ in shapes]
    stats = EnumerationStats()

    for sigmas, taus in combos:
        stats.sigma_tau_combos += 1
        g = [1]
        for s, t in zip(sigmas, taus):
            g = int_poly_mul(g, weingarten_numerator(s, t))
        if not g:
            continue
        num_edges = sum(meet(s, t).num_blocks for s, t in zip(sigmas, taus))
        base, nb = _base_classes(lay, sigmas, taus)
        tops = [[base[s] for s in top] for top in lay.tops]
        bots = [[base[s] for s in bot] for bot in lay.bottoms]
        # a repeated class on one row can never be separated
        if any(len(set(r)) < k for r in tops + bots):
            stats.contradictions += 1
            continue
        inner: list[list[int]] = [[] for _ in shapes]
        chosen: list[int] = []

        def rec(i: int, parent: list[int], weights: tuple[int, ...], falling: list[int], deficiency: int):
            if i == L:
                stats.pi_tuples_visited += 1
                # final classes and conflict edges
                roots = [_find(parent, c) for c in range(nb)]
                ids: dict[int, int] = {}
                cls = [ids.setdefault(r, len(ids)) for r in roots]
                edges = set()
                for j in range(L):
                    members = [cls[c] for c in tops[j] + bots[j]]
                    for x, y in clique_pairs[chosen[j]]:
                        a, b = members[x], members[y]
                        if a == b:
                            stats.contradictions += 1
                            return
                        edges.add((a, b) if a < b else (b, a))
                stats.graphs += 1
                nv = len(ids)
                stats.max_vertices = max(stats.max_vertices, nv)
                if check_euler:
                    stats.euler_checked += 1
                    chi = nv - num_edges
                    if 2 * k > -2 * chi + 2 * deficiency:
                        stats.euler_violations += 1
                        if len(stats.violation_examples) < 5:
                            stats.violation_examples.append({
                                "sigmas": [str(s) for s in sigmas],
                                "taus": [str(t) for t in taus],
                                "pis": [str(pis[c].pm) for c in chosen],
                                "vertices": nv, "edges": num_edges, "deficiency": deficiency,
                            })
                N = chromatic_polynomial(nv, edges)
                term = int_poly_mul(falling, N)
                for idx in range(nshapes):
                    if weights[idx]:
                        int_poly_add_into(inner[idx], term, weights[idx])
                return
            for c, pd in enumerate(pis):
                new_weights = tuple(w * s for w, s in zip(weights, pd.signs))
                if not any(new_weights):
                    continue
                p = parent[:]
                for a, b in pd.pairs:
                    _union(p, tops[i][a], bots[i][b])
                # prune once an already-fixed clique collapses
                bad = False
                chosen.append(c)
                for j in range(i + 1):
                    members = [_find(p, x) for x in tops[j] + bots[j]]
                    for x, y in clique_pairs[chosen[j]]:
                        if members[x] == members[y]:
                            bad = True
                            break
                    if bad:
                        break
                if bad:
                    stats.contradictions += 1
                else:
                    rec(i + 1, p, new_weights, int_poly_mul(falling, pd.falling),
                        deficiency + pd.pm.deficiency)
                chosen.pop()

        rec(0, list(range(nb)), (1,) * nshapes, [1], 0)
        for idx in range(nshapes):
            if inner[idx]:
                int_poly_add_into(totals[idx], int_poly_mul(g, inner[idx]))
    return totals, stats


def _sum_shard(args):
    letters, rank, k, shapes, combos, check_euler = args
    word = ReducedWord(letters, rank)
    return _sum_combos(word, k, shapes, combos, check_euler)


def validity_threshold(word: ReducedWord, k: int, shapes: Iterable[YoungDiagram] = ()) -> int:
    """Smallest ``n`` from which the returned rational function equals the expectation.

    Needs ``n >= 2k`` for the projection formula, ``n >= |w|_f k`` for each
    Weingarten function and ``n >= k + first row`` for the stable diagram.
    """
    m = max(word.occurrence_counts(), default=0) * k
    lam = max((sh.first_row for sh in shapes), default=k)
    return max(2 * k, m, k + lam)


_cache_lock = threading.Lock()
_engine_cache: dict[tuple, EngineResult] = {}


def _check_budget(word: ReducedWord, k: int) -> None:
    from math import comb

    per = sum(comb(k, j) ** 2 * factorial(j) for j in range(k + 1))
    total = per ** word.length
    if total > PI_TUPLE_BUDGET:
        raise EnumerationBudgetError(
            f"{per}^{word.length} = {total} matching tuples exceeds the budget {PI_TUPLE_BUDGET}"
        )


def expected_characters(word: ReducedWord | str, k: int, *, debug_all_partitions: bool = False,
                        threads: int = 1, check_euler: bool | None = None,
                        strict: bool = True, primitive_shortcut: bool = True) -> EngineResult:
    """Expected characters for every diagram with ``k`` boxes from one enumeration.

    ``check_euler`` defaults to on for generic (non-power) words with star
    partitions; a violation raises :class:`InvariantViolation` when ``strict``.
    With ``primitive_shortcut`` off, words with a generator occurring once go
    through the general sum instead of returning zero directly.
    """
    if isinstance(word, str):
        word, wclass = preprocess_word(word, canonical=True)
    else:
        word, wclass = preprocess_word(list(word.letters), canonical=True)
    if k < 1:
        raise ValueError("k must be positive")
    shapes = partitions_of(k)
    key = (word.letters, k, debug_all_partitions, primitive_shortcut)
    with _cache_lock:
        hit = _engine_cache.get(key)
    if hit is not None:
        return hit

    stats = EnumerationStats()
    if wclass.kind is WordKind.IDENTITY:
        values = {sh: ExactRationalFunction(dim_stable(sh)) for sh in shapes}
        result = EngineResult(word, wclass, k, values, stats, max(k + sh.first_row for sh in shapes))
    elif wclass.kind is WordKind.PRIMITIVE and primitive_shortcut:
        values = {sh: ExactRationalFunction(0) for sh in shapes}
        result = EngineResult(word, wclass, k, values, stats, 2 * k)
    else:
        _check_budget(word, k)
        if check_euler is None:
            check_euler = wclass.kind is WordKind.GENERIC and not debug_all_partitions
        combos = _combos(word, k, debug_all_partitions)
        if threads > 1 and len(combos) > 1:
            shards = [combos[i::threads] for i in range(threads)]
            args = [(word.letters, word.rank, k, shapes, sh, check_euler) for sh in shards if sh]
            with ProcessPoolExecutor(max_workers=threads) as pool:
                parts = list(pool.map(_sum_shard, args))
            totals = [[] for _ in shapes]
            for part_totals, part_stats in parts:
                for idx, poly in enumerate(part_totals):
                    int_poly_add_into(totals[idx], poly)
                stats.merge(part_stats)
        else:
            totals, stats = _sum_combos(word, k, shapes, combos, check_euler)
        if strict and stats.euler_violations:
            raise InvariantViolation(
                f"Euler characteristic bound violated {stats.euler_violations} times",
                stats.violation_examples,
            )
        den_common = ExactPolynomial((1,))
        for m in word.occurrence_counts():
            den_common = den_common * falling_factorial(m * k)
        L = word.length
        values = {}
        for sh, S in zip(shapes, totals):
            d = dim(sh)
            scale = Fraction(d, factorial(k)) ** L / d
            num = ExactPolynomial(S) * scale
            den = den_common * falling_product_lambda(sh) ** L
            values[sh] = ExactRationalFunction(num, den)
        result = EngineResult(word, wclass, k, values, stats, validity_threshold(word, k, shapes))
    with _cache_lock:
        _engine_cache[key] = result
    return result


def expected_character(word: ReducedWord | str, shape: YoungDiagram, **kwargs) -> ExactRationalFunction:
    """Expected value of the stable character ``(n - k, shape...)`` at ``w(g_1, ..., g_r)``."""
    return expected_characters(word, shape.k, **kwargs).values[shape]


# -- derived forms -------------------------------------------------------

@dataclass(frozen=True)
class PolynomialForm:
    numerator: ExactPolynomial  # P(x)
    gate: ExactPolynomial
    q: int
    bound: int  # 3kq + kq^2 + k
    tight_bound: int  # 3kq + q^2, recorded only

    @property
    def degree(self) -> int:
        return self.numerator.degree

    def within_bound(self) -> bool:
        return self.numerator.degree <= self.bound

    def within_tight_bound(self) -> bool:
        return self.numerator.degree <= self.tight_bound


def polynomial_form(word: ReducedWord | str, shape: YoungDiagram, q: int | None = None, **kwargs) -> PolynomialForm:
    """Write ``E(n) = P(1/n) / gate(1/n)`` with ``gate = gate_polynomial(q, k)``.

    Raises :class:`InvariantViolation` if ``E(1/x) * gate`` is not a polynomial.
    """
    res = expected_characters(word, shape.k, **kwargs)
    E = res.values[shape]
    L = res.word.length
    q = L if q is None else q
    if q < L:
        raise ValueError("q must be at least the word length")
    k = shape.k
    gate = gate_polynomial(q, k)
    Ex = reciprocal_substitute(E)
    if not divides(Ex.den, gate):
        raise InvariantViolation(f"gate polynomial not divisible by the denominator {Ex.den}")
    P = Ex.num * (gate // Ex.den)
    return PolynomialForm(P, gate, q, 3 * k * q + k * q * q + k, 3 * k * q + q * q)


def phi_w(word: ReducedWord | str, K: int, **kwargs) -> ExactRationalFunction:
    """``x**K * sum over diagrams with K boxes of E(1/x)``."""
    res = expected_characters(word, K, **kwargs)
    total = ExactRationalFunction(0)
    for E in res.values.values():
        total = total + reciprocal_substitute(E)
    return total * ExactRationalFunction(ExactPolynomial.monomial(K))


def clear_cache() -> None:
    with _cache_lock:
        _engine_cache.clear()
