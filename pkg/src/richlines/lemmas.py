"""Finite, checkable versions of the counting lemmas.

Set-system intersections, the row dot-product (degree matrix) lemma,
dilate graphs with reversal, wedge products and path counting, and the
binomial-ratio limit.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from richlines.additive import as_number_set
from richlines.errors import InvariantViolation, PreconditionError
from richlines.grid import ceil_threshold
from richlines.lines import rational

__all__ = [
    "DegreeMatrix",
    "LayeredDigraph",
    "SetSystem",
    "binom_ratio_check",
    "count_full_paths",
    "count_paths_from",
    "dilate_graph",
    "lemma31_verify",
    "lemma53_find_index",
    "path_counts_into",
    "reverse_graph",
    "wedge",
    "wedge_chain_demo",
]


# ---------------------------------------------------------------- set systems


@dataclass(frozen=True)
class SetSystem:
    n: int
    sets: tuple

    def __post_init__(self):
        sets = tuple(frozenset(s) for s in self.sets)
        for s in sets:
            if any(not (1 <= x <= self.n) for x in s):
                raise PreconditionError(f"set {sorted(s)} is not a subset of [1..{self.n}]")
        object.__setattr__(self, "sets", sets)


def lemma31_verify(system: SetSystem, delta: float) -> dict:
    """Ordered pairs (i, j), diagonal included, with |A_i & A_j| >= n^{1-2 delta}/2.

    If every set has size >= n^{1-delta} there are at least
    k^2 n^{-2 delta}/2 such pairs (Cauchy-Schwarz on the degree
    function); a shortfall raises InvariantViolation.
    """
    n, k = system.n, len(system.sets)
    size_t = ceil_threshold(n ** (1 - delta))
    inter_t = ceil_threshold(n ** (1 - 2 * delta) / 2)
    masks = [sum(1 << x for x in s) for s in system.sets]
    count = sum(1 for a in masks for b in masks if (a & b).bit_count() >= inter_t)
    hypothesis = all(len(s) >= size_t for s in system.sets)
    bound = 0.5 * k * k * n ** (-2 * delta)
    if hypothesis and count < bound:
        raise InvariantViolation(f"set-intersection lemma failed: {count} < {bound:.6g}")
    return {
        "n": n,
        "k": k,
        "size_threshold": size_t,
        "intersection_threshold": inter_t,
        "hypothesis_met": hypothesis,
        "count": count,
        "bound": bound,
        "holds": count >= bound,
    }


# -------------------------------------------------------------- degree matrix


@dataclass(frozen=True)
class DegreeMatrix:
    """k x N matrix of entries in [0, L], stored as exact Fractions.

    Floats are converted exactly (every float is a dyadic rational), so
    all comparisons downstream are exact.
    """

    rows: tuple
    L: Fraction

    def __post_init__(self):
        L = rational(self.L)
        if L <= 0:
            raise PreconditionError("cap L must be positive")
        rows = tuple(tuple(rational(v) for v in r) for r in self.rows)
        if not rows or not rows[0]:
            raise PreconditionError("matrix must be nonempty")
        if len({len(r) for r in rows}) != 1:
            raise PreconditionError("rows must have equal length")
        for r in rows:
            for v in r:
                if not (0 <= v <= L):
                    raise PreconditionError(f"entry {v} outside [0, {L}]")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "L", L)

    @property
    def k(self) -> int:
        return len(self.rows)

    @property
    def N(self) -> int:
        return len(self.rows[0])


def _scaled(D: DegreeMatrix):
    den = D.L.denominator
    for r in D.rows:
        for v in r:
            den = den * v.denominator // math.gcd(den, v.denominator)
    rows = [[int(v * den) for v in r] for r in D.rows]
    return rows, int(D.L * den)


def lemma53_find_index(D: DegreeMatrix) -> dict:
    """Find i with many i' such that sum_j d[i][j] d[i'][j] > C^2 L^2 N / 2.

    C is defined by sum(d) = C L k N.  The returned index (0-based) has at
    least k C^2 / (2 - C^2) qualifying partners.  Such an index always
    exists; not finding one raises InvariantViolation.

    Everything is scaled to integers: the dot-product condition becomes
    2 k^2 N dot > S^2 and the count bound q (2 M^2 - S^2) >= k S^2, with
    S the entry sum and M = L k N.
    """
    rows, L = _scaled(D)
    k, N = D.k, D.N
    S = sum(map(sum, rows))
    if S <= 0:
        raise PreconditionError("matrix entries must not all be zero")
    M = L * k * N
    C = Fraction(S, M)
    bound = k * C * C / (2 - C * C)
    lhs_scale = 2 * k * k * N
    S2 = S * S
    for i, ri in enumerate(rows):
        qual = [
            i2 for i2, r2 in enumerate(rows)
            if lhs_scale * sum(a * b for a, b in zip(ri, r2)) > S2
        ]
        if len(qual) * (2 * M * M - S2) >= k * S2:
            return {"index": i, "qualifying": qual, "C": C, "bound": bound}
    raise InvariantViolation("no qualifying index")


# ------------------------------------------------------------ layered graphs


@dataclass(frozen=True)
class LayeredDigraph:
    """Directed graph on layer copies of one base set B.

    ``edges[m]`` maps (u, v) with u in layer m, v in layer m+1 to the edge
    multiplicity (how many generators produce it).
    """

    base: tuple
    edges: tuple

    @property
    def layer_count(self) -> int:
        return len(self.edges) + 1

    def edge_count(self, weighted: bool = True) -> int:
        if weighted:
            return sum(sum(e.values()) for e in self.edges)
        return sum(len(e) for e in self.edges)


def dilate_graph(B, x, C) -> LayeredDigraph:
    """Bipartite graph B -> B with (b, b') whenever lam (b - x) = b' - x, lam in C."""
    B = as_number_set(B)
    C = as_number_set(C)
    x = rational(x)
    if not C:
        raise PreconditionError("C must be nonempty")
    if any(c == 0 for c in C):
        raise PreconditionError("C must exclude 0")
    members = set(B)
    edges: dict = defaultdict(int)
    for b in B:
        for lam in C:
            b2 = lam * (b - x) + x
            if b2 in members:
                edges[(b, b2)] += 1
    return LayeredDigraph(B, (dict(sorted(edges.items())),))


def reverse_graph(G: LayeredDigraph) -> LayeredDigraph:
    flipped = tuple(
        dict(sorted(((v, u), mult) for (u, v), mult in layer.items()))
        for layer in reversed(G.edges)
    )
    return LayeredDigraph(G.base, flipped)


def _is_power_of_two(m: int) -> bool:
    return m > 0 and m & (m - 1) == 0


def wedge(G: LayeredDigraph, H: LayeredDigraph) -> LayeredDigraph:
    """Join two (2^t + 1)-layer graphs end to end into a (2^{t+1} + 1)-layer graph.

    The first 2^t edge layers come from G and the next 2^t from H; the
    last layer of G and the first of H become the shared middle layer.
    """
    if G.base != H.base:
        raise PreconditionError("layer mismatch: different base sets")
    if len(G.edges) != len(H.edges) or not _is_power_of_two(len(G.edges)):
        raise PreconditionError("layer mismatch: need two graphs with 2^t + 1 layers each")
    return LayeredDigraph(G.base, tuple(dict(e) for e in G.edges + H.edges))


def _propagate(G: LayeredDigraph, ways: dict, weighted: bool) -> dict:
    for layer in G.edges:
        nxt: dict = defaultdict(int)
        for (u, v), mult in layer.items():
            w = ways.get(u)
            if w:
                nxt[v] += w * mult if weighted else w
        ways = nxt
    return dict(ways)


def path_counts_into(G: LayeredDigraph, weighted: bool = False) -> dict:
    """For each vertex of the last layer, the number of full paths ending there."""
    return _propagate(G, {b: 1 for b in G.base}, weighted)


def count_full_paths(G: LayeredDigraph, weighted: bool = False) -> int:
    """Directed paths through every layer (forward DP).

    By default paths are vertex sequences; ``weighted`` counts each edge
    with its multiplicity.
    """
    return sum(path_counts_into(G, weighted).values())


def count_paths_from(G: LayeredDigraph, start, weighted: bool = False) -> int:
    start = rational(start)
    if start not in G.base:
        return 0
    return sum(_propagate(G, {start: 1}, weighted).values())


# ------------------------------------------------------- wedge chain (demo)

DEMO_MAX_BASE = 12
DEMO_MAX_T = 3


def _wedge_chain(graphs, indices):
    """Recursive G_{i1..i_{s+1}} = G_{i1..i_{s-1}, i_s} ^ reverse(G_{i1..i_{s-1}, i_{s+1}}).

    Returns the graph and, per edge layer, (source index, +1 or -1 for
    reversed orientation).
    """
    if len(indices) == 1:
        return graphs[indices[0]], [(indices[0], 1)]
    left, left_lab = _wedge_chain(graphs, indices[:-1])
    right, right_lab = _wedge_chain(graphs, indices[:-2] + indices[-1:])
    labels = left_lab + [(i, -o) for i, o in reversed(right_lab)]
    return wedge(left, reverse_graph(right)), labels


def _path_identity_rhs(betas, lams, xs):
    """(beta_last - x_last) + sum_y (prod_{j >= y} lam_j)(x_y - x_{y-1}), x_0 = 0."""
    total = betas[-1] - xs[-1]
    tail = Fraction(1)
    for y in range(len(lams) - 1, -1, -1):
        tail *= lams[y]
        prev = xs[y - 1] if y > 0 else 0
        total += tail * (xs[y] - prev)
    return total


def wedge_chain_demo(B, centers, multiplier_sets, t: int, max_paths: int = 200_000,
                     c1: float | None = None, delta: float | None = None) -> dict:
    """Desk-scale run of the iterated wedge construction on dilate graphs.

    Builds G_i = dilate_graph(B, x_i, C_i), picks i1 with the degree-matrix
    lemma, wedges t+1 indices into a (2^t + 1)-layer graph and enumerates
    its labelled paths (beta_1 .. beta_{2^t+1}; lam_1 .. lam_{2^t}).  Every
    path is checked against the telescoped identity
        prod(lam) beta_1 = (beta_last - x_last) + sum_y prod_{j>=y} lam_j (x_y - x_{y-1}).
    Then beta_1 and the multipliers at positions j != 1 (mod 4) are fixed
    at the most popular choice, and the distinct values of both sides are
    reported next to the size of the product set that must contain the
    left side.  This is a demonstration: the sizes are reported, not
    compared against any asymptotic bound.

    The small-product hypothesis |C C| <= |C|^{1 + c1 delta} involves an
    unspecified constant, so each set's exponent log|C C| / log|C| - 1 is
    reported, and the hypothesis is only evaluated when ``c1`` and
    ``delta`` are both supplied.
    """
    B = as_number_set(B)
    if len(B) > DEMO_MAX_BASE:
        raise PreconditionError(f"|B| limited to {DEMO_MAX_BASE}")
    if not (1 <= t <= DEMO_MAX_T):
        raise PreconditionError(f"t must be in 1..{DEMO_MAX_T}")
    xs_by_index = [rational(x) for x in centers]
    sets = [as_number_set(C) for C in multiplier_sets]
    if len(xs_by_index) != len(sets) or not sets:
        raise PreconditionError("need one center per multiplier set")
    graphs = [dilate_graph(B, x, C) for x, C in zip(xs_by_index, sets)]

    indeg = []
    for G in graphs:
        into = defaultdict(int)
        for (_, v), mult in G.edges[0].items():
            into[v] += mult
        indeg.append([into[b] for b in B])
    cap = max(len(C) for C in sets)
    if not any(any(r) for r in indeg):
        raise PreconditionError("every dilate graph is edgeless")
    pick = lemma53_find_index(DegreeMatrix(indeg, cap))
    i1 = pick["index"]
    partners = pick["qualifying"]
    indices = [i1] + [partners[s % len(partners)] for s in range(t)]
    G, labels = _wedge_chain(graphs, indices)

    xs = [xs_by_index[i] for i, _ in labels]
    mults = [
        sets[i] if o > 0 else as_number_set(1 / c for c in sets[i]) for i, o in labels
    ]

    def layer_steps(j, u):
        x = xs[j]
        for (a, v), _ in G.edges[j].items():
            if a != u:
                continue
            if u != x:
                yield v, (v - x) / (u - x)
            else:
                for lam in mults[j]:
                    yield v, lam

    paths = []

    def walk(j, betas, lams):
        if len(paths) > max_paths:
            raise PreconditionError(f"more than {max_paths} labelled paths")
        if j == len(G.edges):
            paths.append((tuple(betas), tuple(lams)))
            return
        for v, lam in layer_steps(j, betas[-1]):
            walk(j + 1, betas + [v], lams + [lam])

    for b in B:
        walk(0, [b], [])

    for betas, lams in paths:
        for j, lam in enumerate(lams):
            if lam not in mults[j]:
                raise InvariantViolation("path multiplier outside its layer's set")
        lhs = math.prod(lams, start=Fraction(1)) * betas[0]
        if lhs != _path_identity_rhs(betas, lams, xs):
            raise InvariantViolation("telescoped path identity failed")

    free_pos = [j for j in range(len(xs)) if j % 4 == 0]  # 1-based j = 1 mod 4
    fixed_pos = [j for j in range(len(xs)) if j % 4 != 0]
    groups = defaultdict(list)
    for betas, lams in paths:
        groups[(betas[0], tuple(lams[j] for j in fixed_pos))].append((betas, lams))

    doubling = []
    for C in sets:
        cc = len({a * b for a in C for b in C})
        row = {"size": len(C), "product_size": cc,
               "exponent": math.log(cc) / math.log(len(C)) - 1 if len(C) > 1 else None}
        if c1 is not None and delta is not None:
            row["hypothesis"] = cc <= len(C) ** (1 + c1 * delta)
        doubling.append(row)

    report = {
        "indices": indices,
        "multiplier_doubling": doubling,
        "c1": c1,
        "delta": delta,
        "layer_labels": [[i, o] for i, o in labels],
        "layer_count": G.layer_count,
        "path_count": len(paths),
        "identity_checked": len(paths),
        "degree_lemma": {"index": i1, "qualifying": partners, "C": pick["C"]},
    }
    if not groups:
        report.update(group_size=0, lhs_distinct=0, rhs_distinct=0, container_size=0)
        return report

    key = max(sorted(groups), key=lambda kk: len(groups[kk]))
    chosen = groups[key]
    const = key[0] * math.prod(key[1], start=Fraction(1))
    container = {Fraction(1)}
    for j in free_pos:
        container = {a * c for a in container for c in mults[j]}
    lhs_vals, rhs_vals, free_tuples = set(), set(), set()
    for betas, lams in chosen:
        lhs = math.prod(lams, start=Fraction(1)) * betas[0]
        lhs_vals.add(lhs)
        rhs_vals.add(_path_identity_rhs(betas, lams, xs))
        free_tuples.add(tuple(lams[j] for j in free_pos))
        if const != 0 and lhs / const not in container:
            raise InvariantViolation("left side escapes the free-multiplier product set")
    report.update(
        start=key[0],
        fixed_multipliers=list(key[1]),
        group_size=len(chosen),
        free_tuple_count=len(free_tuples),
        lhs_distinct=len(lhs_vals),
        rhs_distinct=len(rhs_vals),
        container_size=len(container),
    )
    return report


# -------------------------------------------------------------- binomials


def _floor_root_power(x: int, gamma: Fraction) -> int:
    """floor(x ** (1 - gamma)) for rational gamma in (0, 1), exactly."""
    e = 1 - gamma
    p, q = e.numerator, e.denominator
    target = x**p
    lo, hi = 0, 1
    while hi**q <= target:
        hi *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if mid**q <= target:
            lo = mid
        else:
            hi = mid
    return lo


def binom_ratio_check(k: int, gamma, x: int, dps: int = 50) -> dict:
    """x^{k gamma} * C(x, m - k) / C(x, m) with m = floor(x^{1-gamma}).

    The binomial quotient is formed exactly from big-integer binomials;
    the power of x is applied in ``dps``-digit arithmetic.  Floats for
    gamma are read through their shortest repr (0.5 -> 1/2).
    """
    if isinstance(gamma, float):
        gamma = repr(gamma)
    gamma = rational(gamma)
    if not (0 < gamma < 1):
        raise PreconditionError("gamma must lie in (0, 1)")
    if k < 0 or x < 1:
        raise PreconditionError("need k >= 0 and x >= 1")
    m = _floor_root_power(x, gamma)
    if m < k + 1:
        raise PreconditionError("need x^(1-gamma) >= k + 1")
    quotient = Fraction(math.comb(x, m - k), math.comb(x, m))
    with mpmath.workdps(dps):
        g = mpmath.mpf(gamma.numerator) / gamma.denominator
        value = mpmath.mpf(quotient.numerator) / quotient.denominator * mpmath.power(x, k * g)
        deviation = abs(value - 1)
        return {
            "k": k,
            "gamma": gamma,
            "x": x,
            "m": m,
            "binomial_quotient": quotient,
            "ratio": float(value),
            "deviation": float(deviation),
        }
