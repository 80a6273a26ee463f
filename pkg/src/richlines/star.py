"""The star product f * g = f^{-1} o g on sets of rich lines.

Covers rich pairs, preimage maps, the dyadic-pigeonhole product L*L, its
iterates, the translation normalisation for star families, and the
structural diagnostics for L*L.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

from richlines.errors import InvariantViolation, PreconditionError
from richlines.families import (
    check_near_general_position,
    concurrency_map,
    group_by_slope,
    line_set,
    max_concurrency,
)
from richlines.grid import GroundSet, ceil_threshold, richness
from richlines.lines import Line, rational, star

__all__ = [
    "DyadicResult",
    "bucket_index",
    "check_rich_pairs_lemma",
    "dyadic_star_product",
    "iterated_star",
    "preimage_map",
    "rich_star_pairs",
    "thm4_diagnostics",
    "translate_line",
]


def rich_star_pairs(L, A: GroundSet, threshold: int) -> list:
    """Ordered index pairs (i, j), diagonal included, with
    richness(L[i] * L[j]) >= threshold.  L is taken in canonical order."""
    L = line_set(L)
    out = []
    for i, f in enumerate(L):
        for j, g in enumerate(L):
            if richness(star(f, g), A) >= threshold:
                out.append((i, j))
    return out


def _lemma_hypothesis(L, A: GroundSet, delta: float) -> dict:
    need = ceil_threshold(A.n ** (1 - delta))
    rich = [richness(l, A) for l in L]
    return {
        "required_richness": need,
        "min_richness": min(rich) if rich else None,
        "holds": all(r >= need for r in rich),
    }


def check_rich_pairs_lemma(L, A: GroundSet, delta: float, pairs: list | None = None) -> dict:
    """Count pairs whose star product is (n^{1-2 delta}/2)-rich.

    When every line of L is n^{1-delta}-rich the count is at least
    |L|^2 n^{-2 delta} / 2.  The argument behind that bound is exact
    double counting, so a shortfall raises InvariantViolation.
    """
    L = line_set(L)
    n = A.n
    threshold = ceil_threshold(0.5 * n ** (1 - 2 * delta))
    if pairs is None:
        pairs = rich_star_pairs(L, A, threshold)
    hyp = _lemma_hypothesis(L, A, delta)
    bound = 0.5 * len(L) ** 2 * n ** (-2 * delta)
    report = {
        "pair_threshold": threshold,
        "count": len(pairs),
        "bound": bound,
        "hypothesis": hyp,
        "holds": len(pairs) >= bound,
    }
    if hyp["holds"] and not report["holds"]:
        raise InvariantViolation(
            f"rich-pair lemma failed: {len(pairs)} pairs < {bound:.6g}"
        )
    return report


def preimage_map(L, pairs) -> dict:
    """Group index pairs by their star product: line -> sorted [(i, j)]."""
    L = line_set(L)
    ps = defaultdict(list)
    for i, j in pairs:
        if not (0 <= i < len(L) and 0 <= j < len(L)):
            raise PreconditionError(f"pair {(i, j)} out of range")
        ps[star(L[i], L[j])].append((i, j))
    out = {}
    for line in sorted(ps):
        entry = sorted(set(ps[line]))
        # f^{-1} o g determines g once f is fixed, so at most |L| pairs
        if len(entry) > len(L):
            raise InvariantViolation(f"|Ps({line!r})| = {len(entry)} > |L| = {len(L)}")
        out[line] = entry
    return out


def bucket_index(size: int) -> int:
    """The i with 2^(i-1) < size <= 2^i (size 1 -> 0)."""
    if size < 1:
        raise ValueError("preimage sizes are positive")
    return (size - 1).bit_length()


@dataclass
class DyadicResult:
    level: int
    delta: float
    input_size: int
    richness_threshold: int
    rich_pair_count: int
    buckets: list  # [{"i", "range", "line_count", "N"}]
    threshold: float
    chosen_i: int | None
    fallback_used: bool
    product: tuple
    preimages: dict = field(repr=False, default_factory=dict)
    product_min_richness: int | None = None
    growth_ratio: float | None = None
    growth_bound: float | None = None
    stop_reason: str | None = None

    @property
    def product_size(self) -> int:
        return len(self.product)

    def summary(self) -> dict:
        return {
            "level": self.level,
            "delta": self.delta,
            "input_size": self.input_size,
            "richness_threshold": self.richness_threshold,
            "rich_pair_count": self.rich_pair_count,
            "buckets": self.buckets,
            "threshold": self.threshold,
            "chosen_i": self.chosen_i,
            "fallback": self.fallback_used,
            "product_size": self.product_size,
            "product_min_richness": self.product_min_richness,
            "growth_ratio": self.growth_ratio,
            "growth_bound": self.growth_bound,
            "stop_reason": self.stop_reason,
        }


def dyadic_star_product(L, A: GroundSet, delta: float, level: int = 1) -> DyadicResult:
    """L*L by dyadic pigeonholing on preimage multiplicity.

    Rich pairs are those whose star product is ceil(n^{1-2 delta}/2)-rich.
    Product lines are bucketed by |Ps| into (2^(i-1), 2^i], i = 0..ceil(log2|L|),
    and L*L is the bucket with the largest i whose mass N_i reaches
    |L|^2 n^{-2 delta} / (2 log2 |L|).  If no bucket reaches it (common on
    small grids) the bucket with the largest N_i is used and
    ``fallback_used`` is set.
    """
    L = line_set(L)
    m = len(L)
    if m < 2:
        raise PreconditionError("dyadic product needs |L| >= 2")
    n = A.n
    rich_t = ceil_threshold(0.5 * n ** (1 - 2 * delta))
    pairs = rich_star_pairs(L, A, rich_t)
    ps = preimage_map(L, pairs)

    top = math.ceil(math.log2(m))
    per_bucket = defaultdict(list)
    for line, entry in ps.items():
        per_bucket[bucket_index(len(entry))].append(line)
    buckets = []
    for i in range(top + 1):
        lines = per_bucket.get(i, [])
        buckets.append({
            "i": i,
            "range": [Fraction(2) ** (i - 1), 2**i],  # half-open (lo, hi]
            "line_count": len(lines),
            "N": sum(len(ps[l]) for l in lines),
        })
    if sum(b["N"] for b in buckets) != len(pairs):
        raise InvariantViolation("dyadic masses do not sum to the rich pair count")

    pigeon = m**2 * n ** (-2 * delta) / (2 * math.log2(m))
    need = ceil_threshold(pigeon)
    qualifying = [b["i"] for b in buckets if b["N"] >= need]
    fallback = not qualifying
    if qualifying:
        chosen = max(qualifying)
    elif pairs:
        best = max(b["N"] for b in buckets)
        chosen = max(b["i"] for b in buckets if b["N"] == best)
    else:
        chosen = None
    product = tuple(sorted(per_bucket.get(chosen, []))) if chosen is not None else ()

    min_rich = None
    if product:
        min_rich = min(richness(l, A) for l in product)
        if min_rich < rich_t:
            raise InvariantViolation("product line below the level richness threshold")
    _check_lemma_on_pairs(L, A, delta, len(pairs))

    return DyadicResult(
        level=level,
        delta=delta,
        input_size=m,
        richness_threshold=rich_t,
        rich_pair_count=len(pairs),
        buckets=buckets,
        threshold=pigeon,
        chosen_i=chosen,
        fallback_used=fallback,
        product=product,
        preimages=ps,
        product_min_richness=min_rich,
    )


def _check_lemma_on_pairs(L, A, delta, count):
    hyp = _lemma_hypothesis(L, A, delta)
    bound = 0.5 * len(L) ** 2 * A.n ** (-2 * delta)
    if hyp["holds"] and count < bound:
        raise InvariantViolation(f"rich-pair lemma failed: {count} < {bound:.6g}")


def next_delta(delta: float, n: int) -> float:
    """Richness exponent after one star level: n^{1-d'} = n^{1-2d}/2."""
    return 2 * delta + math.log(2) / math.log(n)


def iterated_star(L, A: GroundSet, delta: float, depth: int, alpha: float | None = None) -> list:
    """Levels L^{*2}, L^{*3}, ... with each level recomputed from scratch.

    Level j takes the previous product (or L) as input; its richness
    exponent grows as delta_{j+1} = 2 delta_j + log_n 2.  Iteration stops
    early when the richness threshold falls below 2, when fewer than two
    lines remain, or (with ``alpha``) when |L^{*(j+1)}| < |L^{*j}| n^{5 alpha}.
    The stopping reason is recorded on the last level.
    """
    if depth < 1:
        raise PreconditionError("depth must be >= 1")
    n = A.n
    current = line_set(L)
    d = delta
    levels: list = []
    for level in range(1, depth + 1):
        if ceil_threshold(0.5 * n ** (1 - 2 * d)) < 2:
            if not levels:
                raise PreconditionError("richness exhausted")
            levels[-1].stop_reason = "richness exhausted"
            break
        if len(current) < 2:
            levels[-1].stop_reason = "fewer than two lines"
            break
        res = dyadic_star_product(current, A, d, level=level)
        res.growth_ratio = res.product_size / len(current)
        levels.append(res)
        if alpha is not None:
            res.growth_bound = n ** (5 * alpha)
            if res.product_size < len(current) * res.growth_bound:
                res.stop_reason = "growth stop rule"
                break
        if not res.product:
            res.stop_reason = "empty product"
            break
        current = res.product
        d = next_delta(d, n)
    return levels


def translate_line(l: Line, x0) -> Line:
    """Shift the picture left by x0 and down by x0: the grid becomes A - x0.

    A star family through (x0, y0) becomes one through (0, y0 - x0).
    """
    x0 = rational(x0)
    return Line(l.slope, l.slope * x0 + l.intercept - x0)


def thm4_diagnostics(L, A: GroundSet, epsilon: float, alpha: float, delta: float,
                     star_bound_C: int, result: DyadicResult | None = None) -> dict:
    """Family-size diagnostics of L*L against the four structural bounds.

    (i) largest parallel family vs 2|L*L| n^{2 delta}/|L|;
    (ii) largest star family vs C times that;
    (iii) number of slopes carrying >= n^alpha lines vs n^alpha;
    (iv) number of points carrying >= n^alpha lines vs n^alpha.
    The underlying statements are asymptotic, so failures are reported
    as flags and never raised.
    """
    L = line_set(L)
    n = A.n
    if result is None:
        result = dyadic_star_product(L, A, delta)
    P = result.product
    m = len(L)

    slope_classes = group_by_slope(P)
    cmap = concurrency_map(P) if len(P) >= 2 else {}
    max_parallel = max((len(v) for v in slope_classes.values()), default=0)
    max_star = max_concurrency(P)

    bound_i = 2 * len(P) * n ** (2 * delta) / m
    bound_ii = star_bound_C * bound_i
    n_alpha = n**alpha
    fam_t = ceil_threshold(n_alpha)
    big_slopes = sum(1 for v in slope_classes.values() if len(v) >= fam_t)
    big_points = sum(1 for v in cmap.values() if len(v) >= fam_t)

    ngp = check_near_general_position(L, star_bound_C)
    hyp = _lemma_hypothesis(L, A, delta)
    return {
        "product_size": len(P),
        "chosen_i": result.chosen_i,
        "fallback": result.fallback_used,
        "hypotheses": {
            "near_general_position": ngp.is_gp,
            "size_at_least_n_eps": m >= n**epsilon,
            "lines_rich": hyp["holds"],
            "parameter_order": 0 < delta < alpha < epsilon < 1,
        },
        "thm4": {
            "i": {"value": max_parallel, "bound": bound_i, "pass": max_parallel <= bound_i},
            "ii": {"value": max_star, "bound": bound_ii, "pass": max_star <= bound_ii},
            "iii": {"value": big_slopes, "family_threshold": fam_t, "bound": n_alpha,
                    "pass": big_slopes <= n_alpha},
            "iv": {"value": big_points, "family_threshold": fam_t, "bound": n_alpha,
                   "pass": big_points <= n_alpha},
        },
    }
