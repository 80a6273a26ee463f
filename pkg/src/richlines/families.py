"""Parallel and star families, general position, and family covers."""
from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from richlines.errors import InvariantViolation, PreconditionError
from richlines.lines import Line, Point, intersect

__all__ = [
    "FamilyDecomposition",
    "GPReport",
    "Witness",
    "check_general_position",
    "check_near_general_position",
    "concurrency_map",
    "decompose",
    "greedy_gp_subset",
    "group_by_slope",
    "line_set",
    "max_concurrency",
    "maximum_gp_subset",
    "random_ngp_extract",
]

MAXIMUM_GP_GUARD = 20


def line_set(lines: Iterable[Line]) -> tuple:
    """Canonical LineSet: deduplicated and sorted by (slope, intercept)."""
    return tuple(sorted(set(lines)))


def group_by_slope(L: Iterable[Line]) -> dict:
    groups = defaultdict(list)
    for l in line_set(L):
        groups[l.slope].append(l)
    return dict(sorted(groups.items()))


def concurrency_map(L: Iterable[Line]) -> dict:
    """Map each point where >= 2 lines of L cross to the sorted lines through it."""
    L = line_set(L)
    through = defaultdict(set)
    for a, b in combinations(L, 2):
        p = intersect(a, b)
        if p is not None:
            through[p].add(a)
            through[p].add(b)
    return {p: sorted(ls) for p, ls in sorted(through.items())}


def max_concurrency(L: Iterable[Line]) -> int:
    """Largest number of lines of L through one point (1 if none cross)."""
    L = line_set(L)
    cmap = concurrency_map(L)
    if cmap:
        return max(len(v) for v in cmap.values())
    return 1 if L else 0


@dataclass(frozen=True)
class Witness:
    kind: str  # "parallel" or "concurrent"
    lines: tuple
    point: Point | None = None


@dataclass(frozen=True)
class GPReport:
    is_gp: bool
    witness: Witness | None = None


def check_near_general_position(L: Iterable[Line], C: int) -> GPReport:
    """Distinct slopes and no C+1 lines through a common point."""
    if C < 2:
        raise PreconditionError("star bound C must be >= 2")
    L = line_set(L)
    for lines in group_by_slope(L).values():
        if len(lines) > 1:
            return GPReport(False, Witness("parallel", tuple(lines[:2])))
    for p, lines in concurrency_map(L).items():
        if len(lines) > C:
            return GPReport(False, Witness("concurrent", tuple(lines[: C + 1]), p))
    return GPReport(True)


def check_general_position(L: Iterable[Line]) -> GPReport:
    return check_near_general_position(L, 2)


def _extends_gp(chosen: list, slopes: set, crossings: set, l: Line) -> list | None:
    """New crossing points if ``l`` keeps ``chosen`` in general position, else None."""
    if l.slope in slopes:
        return None
    new = []
    for m in chosen:
        p = intersect(l, m)
        if p in crossings:
            return None
        new.append(p)
    return new


def greedy_gp_subset(L: Iterable[Line]) -> tuple:
    """A maximal (non-extendable) general-position subset of L.

    Lines are scanned in canonical order and kept whenever they keep the
    selection in general position.  Maximal is enough for the family
    cover in :func:`decompose`; see :func:`maximum_gp_subset` for the
    exact optimum on small inputs.
    """
    chosen, slopes, crossings = [], set(), set()
    for l in line_set(L):
        new = _extends_gp(chosen, slopes, crossings, l)
        if new is not None:
            chosen.append(l)
            slopes.add(l.slope)
            crossings.update(new)
    return tuple(chosen)


def maximum_gp_subset(L: Iterable[Line]) -> tuple:
    """Largest general-position subset, by exhaustive branch and bound.

    Ties go to the lexicographically first subset in canonical order.
    Limited to 20 lines.
    """
    L = line_set(L)
    if len(L) > MAXIMUM_GP_GUARD:
        raise PreconditionError(f"maximum_gp_subset limited to {MAXIMUM_GP_GUARD} lines")
    best: list = []

    def search(idx, chosen, slopes, crossings):
        nonlocal best
        if len(chosen) + (len(L) - idx) <= len(best):
            return
        if idx == len(L):
            best = list(chosen)
            return
        l = L[idx]
        new = _extends_gp(chosen, slopes, crossings, l)
        if new is not None:
            chosen.append(l)
            slopes.add(l.slope)
            search(idx + 1, chosen, slopes, crossings | set(new))
            slopes.discard(l.slope)
            chosen.pop()
        search(idx + 1, chosen, slopes, crossings)

    search(0, [], set(), set())
    return tuple(best)


def random_ngp_extract(L, target_size: int, k_bound: int, retries: int, seed: int):
    """Uniformly random subsets of ``target_size`` lines until one has no
    more than ``k_bound`` lines through any point.

    Returns the first success (canonically ordered) or None after
    ``retries`` failures.  The lines must already have distinct slopes.
    """
    L = line_set(L)
    if target_size > len(L) or target_size < 0:
        raise PreconditionError("target_size must be between 0 and |L|")
    if len({l.slope for l in L}) != len(L):
        raise PreconditionError("lines must have pairwise distinct slopes")
    rng = random.Random(seed)
    for _ in range(retries):
        picked = sorted(rng.sample(range(len(L)), target_size))
        R = tuple(L[i] for i in picked)
        if max_concurrency(R) <= k_bound:
            return R
    return None


@dataclass
class FamilyDecomposition:
    gp_core: tuple
    parallel_families: dict = field(default_factory=dict)  # slope -> [Line]
    star_families: dict = field(default_factory=dict)  # Point -> [Line]
    assignment: dict = field(default_factory=dict)  # Line -> family id

    @property
    def family_count(self) -> int:
        return len(self.parallel_families) + len(self.star_families)

    def family_ids(self) -> list:
        return [("parallel", s) for s in self.parallel_families] + [
            ("star", p) for p in self.star_families
        ]


def decompose(L: Iterable[Line]) -> FamilyDecomposition:
    """Cover L by parallel families and star families.

    With L' a maximal general-position subset, every line of L is parallel
    to a line of L' or passes through a crossing of two lines of L'
    (otherwise it would extend L').  Each line goes to the first covering
    family: parallel families by slope, then star families by point.
    Empty families are dropped, so the result is a partition of L.
    """
    L = line_set(L)
    core = greedy_gp_subset(L)
    core_slopes = sorted({l.slope for l in core})
    centers = sorted({intersect(a, b) for a, b in combinations(core, 2)})

    dec = FamilyDecomposition(gp_core=core)
    parallel = {s: [] for s in core_slopes}
    stars = {p: [] for p in centers}
    for l in L:
        if l.slope in parallel:
            parallel[l.slope].append(l)
            dec.assignment[l] = ("parallel", l.slope)
            continue
        for p in centers:
            if l.contains(p):
                stars[p].append(l)
                dec.assignment[l] = ("star", p)
                break
        else:
            raise InvariantViolation(f"cover failure: {l!r} is in no family")
    dec.parallel_families = {s: ls for s, ls in parallel.items() if ls}
    dec.star_families = {p: ls for p, ls in stars.items() if ls}

    k = len(core)
    if dec.family_count > k + k * (k - 1) // 2:
        raise InvariantViolation("family count exceeds |L'| + C(|L'|, 2)")
    return dec
