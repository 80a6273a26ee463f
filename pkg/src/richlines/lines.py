"""Exact rational lines y = slope*x + intercept and their algebra.

All scalars are :class:`fractions.Fraction`, so every operation is exact.
Lines with slope 0 are rejected: only invertible affine maps are modelled.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational as _RationalABC

__all__ = [
    "EVERY_POINT",
    "IDENTITY",
    "Line",
    "Point",
    "compose",
    "fixed_point",
    "intersect",
    "invert",
    "rational",
    "star",
]


def rational(value) -> Fraction:
    """Coerce ``value`` to a reduced Fraction.

    Accepts ints, Fractions, floats (converted exactly) and strings such
    as ``"3"``, ``"-7/4"`` or ``"0.25"``.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, (int, _RationalABC, float)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as a rational")


@dataclass(frozen=True, order=True)
class Point:
    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", rational(self.x))
        object.__setattr__(self, "y", rational(self.y))


@dataclass(frozen=True, order=True)
class Line:
    """The invertible affine map x -> slope*x + intercept.

    Ordering is by slope, then intercept, which is the canonical output
    order everywhere in the package.
    """

    slope: Fraction
    intercept: Fraction

    def __post_init__(self):
        slope = rational(self.slope)
        if slope == 0:
            raise ValueError("slope must be nonzero")
        object.__setattr__(self, "slope", slope)
        object.__setattr__(self, "intercept", rational(self.intercept))

    def __call__(self, x) -> Fraction:
        return self.slope * x + self.intercept

    def contains(self, p: Point) -> bool:
        return p.y == self.slope * p.x + self.intercept

    def __repr__(self):
        return f"Line({self.slope}, {self.intercept})"


IDENTITY = Line(1, 0)


class _EveryPoint:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "EVERY_POINT"

    def __reduce__(self):
        return (_EveryPoint, ())


EVERY_POINT = _EveryPoint()


def invert(l: Line) -> Line:
    return Line(1 / l.slope, -l.intercept / l.slope)


def compose(f: Line, g: Line) -> Line:
    """f o g, i.e. x -> f(g(x))."""
    return Line(f.slope * g.slope, f.slope * g.intercept + f.intercept)


def star(f: Line, g: Line) -> Line:
    """f * g = f^{-1} o g, in closed form."""
    return Line(g.slope / f.slope, (g.intercept - f.intercept) / f.slope)


def fixed_point(l: Line):
    """Fixed points of ``l`` on the diagonal.

    Returns the unique Point (x0, x0) when slope != 1, ``EVERY_POINT`` for
    the identity, and ``None`` for a nontrivial translation.
    """
    if l.slope != 1:
        x0 = l.intercept / (1 - l.slope)
        return Point(x0, x0)
    if l.intercept == 0:
        return EVERY_POINT
    return None


def intersect(l1: Line, l2: Line) -> Point | None:
    """Intersection point, or None for distinct parallel lines.

    Raises ValueError for identical lines; dedupe before calling.
    """
    if l1.slope == l2.slope:
        if l1.intercept == l2.intercept:
            raise ValueError("same line")
        return None
    x = (l2.intercept - l1.intercept) / (l1.slope - l2.slope)
    return Point(x, l1.slope * x + l1.intercept)
