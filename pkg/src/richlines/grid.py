"""Ground sets, richness, and k-rich line enumeration over A x A."""
from __future__ import annotations

import math
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from richlines.errors import InvariantViolation, PreconditionError
from richlines.lines import Line, Point, invert, rational

__all__ = [
    "GroundSet",
    "RichLineRecord",
    "ceil_threshold",
    "count_incidences",
    "enumerate_rich",
    "grid_points",
    "rich_count_bound_check",
    "richness",
    "x_trace",
    "y_trace",
]

# Relative slack applied before taking a ceiling, so that a real threshold
# which is mathematically an integer (e.g. 100**0.5) is not bumped up by
# float noise.
THRESHOLD_RTOL = 1e-9


def ceil_threshold(value: float) -> int:
    """Smallest integer count that meets the real threshold ``value``.

    Rule: ``ceil(value - 1e-9 * max(1, |value|))``.  Every real-valued
    threshold (n**(1-delta) and friends) is converted through here before
    it is compared with an exact integer count.
    """
    return math.ceil(value - THRESHOLD_RTOL * max(1.0, abs(value)))


@dataclass(frozen=True)
class GroundSet:
    """A finite set A of rationals, stored strictly increasing."""

    elements: tuple

    def __post_init__(self):
        elems = tuple(rational(a) for a in self.elements)
        if not elems:
            raise PreconditionError("ground set must be nonempty")
        if any(b <= a for a, b in zip(elems, elems[1:])):
            raise PreconditionError("ground set elements must be strictly increasing")
        object.__setattr__(self, "elements", elems)
        object.__setattr__(self, "_members", frozenset(elems))

    @classmethod
    def of(cls, values: Iterable) -> "GroundSet":
        """Build from any iterable, sorting and dropping duplicates."""
        return cls(tuple(sorted({rational(v) for v in values})))

    @classmethod
    def interval(cls, lo: int, hi: int) -> "GroundSet":
        return cls(tuple(Fraction(i) for i in range(lo, hi + 1)))

    @property
    def n(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, value) -> bool:
        return value in self._members

    def translate(self, shift) -> "GroundSet":
        """The set A - shift."""
        shift = rational(shift)
        return GroundSet(tuple(a - shift for a in self.elements))


@dataclass(frozen=True, order=True)
class RichLineRecord:
    line: Line
    richness: int


def x_trace(l: Line, A: GroundSet) -> list:
    """Sorted list of x in A with l(x) in A."""
    return [x for x in A.elements if l(x) in A]


def y_trace(l: Line, A: GroundSet) -> list:
    return x_trace(invert(l), A)


def richness(l: Line, A: GroundSet) -> int:
    return sum(1 for x in A.elements if l(x) in A)


def grid_points(A: GroundSet, B: GroundSet | None = None) -> list:
    B = A if B is None else B
    return [Point(x, y) for x in A.elements for y in B.elements]


def count_incidences(points: Sequence[Point], lines: Sequence[Line]) -> int:
    """Number of (point, line) pairs with the point on the line."""
    ys_by_x = defaultdict(set)
    for p in points:
        ys_by_x[p.x].add(p.y)
    total = 0
    for l in lines:
        for x, ys in ys_by_x.items():
            if l(x) in ys:
                total += 1
    return total


# --------------------------------------------------------------------------
# enumeration
#
# Every line with richness >= k has its leftmost grid point in one of the
# first n-k+1 columns.  From each such anchor we bucket the slopes to all
# grid points strictly to the right; a bucket of size m is a line through
# the anchor with m further points to its right.  For a fixed line the
# count is largest at its leftmost point, where it equals richness - 1, so
# taking the max over anchors yields the exact richness.
#
# Coordinates are first scaled by the lcm of the denominators so that all
# arithmetic is on integers.  A line is keyed by the integer triple
# (dy, dx, c) with gcd(dy, dx) = 1, dx > 0, and scaled intercept c/dx.


def _scaled_integers(A: GroundSet) -> tuple[list, int]:
    den = 1
    for a in A.elements:
        den = den * a.denominator // math.gcd(den, a.denominator)
    return [int(a * den) for a in A.elements], den


_INT64_HEADROOM = 2**62


def _numpy_ok(ints: list) -> bool:
    span = ints[-1] - ints[0]
    small = max(abs(ints[0]), abs(ints[-1])) < 2**60
    return small and (2 * span + 1) * (span + 1) < _INT64_HEADROOM


def _anchor_column_numpy(ints, i, k, out):
    n = len(ints)
    xs = np.asarray(ints[i + 1:], dtype=np.int64)
    ys = np.asarray(ints, dtype=np.int64)
    span = int(ys[-1] - ys[0])
    # target grid (column q > i, row r), flattened
    dx = np.repeat(xs - ints[i], n)
    ty = np.tile(ys, len(xs))
    for a, ya in enumerate(ints):
        dy = ty - ya
        keep = dy != 0
        dyk = dy[keep]
        dxk = dx[keep]
        g = np.gcd(dyk, dxk)
        dyk //= g
        dxk //= g
        code = (dyk + span) * (span + 1) + dxk
        uniq, counts = np.unique(code, return_counts=True)
        hit = counts >= k - 1
        if not hit.any():
            continue
        for c, m in zip(uniq[hit].tolist(), counts[hit].tolist()):
            sdy, sdx = divmod(c, span + 1)
            sdy -= span
            key = (sdy, sdx, ya * sdx - sdy * ints[i])
            if out.get(key, 0) < m + 1:
                out[key] = m + 1


def _anchor_column_python(ints, i, k, out):
    x0 = ints[i]
    right = ints[i + 1:]
    for ya in ints:
        buckets = defaultdict(int)
        for xq in right:
            dx = xq - x0
            for yq in ints:
                dy = yq - ya
                if dy == 0:
                    continue
                g = math.gcd(dy, dx)
                buckets[(dy // g, dx // g)] += 1
        for (sdy, sdx), m in buckets.items():
            if m >= k - 1:
                key = (sdy, sdx, ya * sdx - sdy * x0)
                if out.get(key, 0) < m + 1:
                    out[key] = m + 1


def _scan_columns(ints, columns, k, backend):
    out = {}
    step = _anchor_column_numpy if backend == "numpy" else _anchor_column_python
    for i in columns:
        step(ints, i, k, out)
    return out


def enumerate_rich(A: GroundSet, k: int, threads: int = 1, backend: str = "auto") -> list:
    """All lines with richness >= k in A x A, sorted by (slope, intercept).

    ``backend`` is "numpy" (int64 vectorised), "python" (arbitrary
    precision) or "auto", which picks numpy whenever the scaled
    coordinates leave int64 headroom.  Output does not depend on
    ``threads`` or ``backend``.
    """
    if k < 2:
        raise PreconditionError("k must be >= 2")
    n = A.n
    if k > n:
        return []
    ints, den = _scaled_integers(A)
    if backend == "auto":
        backend = "numpy" if _numpy_ok(ints) else "python"
    elif backend == "numpy" and not _numpy_ok(ints):
        raise PreconditionError("coordinates too large for the numpy backend")
    elif backend not in ("numpy", "python"):
        raise ValueError(f"unknown backend {backend!r}")

    columns = list(range(n - k + 1))
    threads = max(1, int(threads))
    if threads == 1:
        found = _scan_columns(ints, columns, k, backend)
    else:
        # strided partition balances the shrinking column widths
        parts = [columns[w::threads] for w in range(threads)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda cols: _scan_columns(ints, cols, k, backend), parts))
        found = {}
        for part in results:
            for key, r in part.items():
                if found.get(key, 0) < r:
                    found[key] = r

    # Sort on integers: rank the few distinct slopes once, then within a
    # slope (shared reduced dx) the intercept order is the order of c.
    keep = [(key, r) for key, r in found.items() if r >= k]
    slopes = sorted({(sdy, sdx) for (sdy, sdx, _), _ in keep}, key=lambda s: Fraction(*s))
    rank = {s: i for i, s in enumerate(slopes)}
    keep.sort(key=lambda kr: (rank[kr[0][:2]], kr[0][2]))
    return [
        RichLineRecord(Line(Fraction(sdy, sdx), Fraction(c, sdx * den)), r)
        for (sdy, sdx, c), r in keep
    ]


def rich_count_bound_check(A: GroundSet, k: int, records: list | None = None) -> dict:
    """Compare the k-rich line count against the pair-counting bound.

    Two distinct lines share at most one grid point, so the number of
    k-rich lines is at most C(n^2, 2) / C(k, 2).  That bound is asserted.
    The Szemeredi-Trotter shape max(n^4/k^3, n^2/k) is reported only; its
    constant is unspecified.
    """
    if k < 2:
        raise PreconditionError("k must be >= 2")
    if records is None:
        records = enumerate_rich(A, k)
    n = A.n
    count = len(records)
    pair_bound = Fraction(math.comb(n * n, 2), math.comb(k, 2))
    st_shape = max(n**4 / k**3, n**2 / k)
    if count > pair_bound:
        raise InvariantViolation(
            f"{count} {k}-rich lines exceeds pair bound {pair_bound}; enumeration bug"
        )
    return {
        "n": n,
        "k": k,
        "count": count,
        "pair_bound": pair_bound,
        "st_shape": st_shape,
        "st_constant_asserted": False,
    }
