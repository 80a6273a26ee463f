"""Sumsets, product and ratio sets, energies, and small-doubling checks."""
from __future__ import annotations

from collections import Counter
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable

from richlines.errors import InvariantViolation, PreconditionError
from richlines.lines import rational

__all__ = [
    "additive_energy",
    "additive_energy_quadruples",
    "as_number_set",
    "iterated_sumset",
    "multiplicative_energy",
    "parse_k",
    "plunnecke_check",
    "product_set",
    "ratio_set",
    "sigma_set",
    "small_doubling_subset",
    "sumset",
]

SMALL_DOUBLING_GUARD = 18
PLUNNECKE_GUARD = 6
QUADRUPLE_CHECK_LIMIT = 400


def as_number_set(values: Iterable) -> tuple:
    """Sorted, deduplicated tuple of Fractions."""
    return tuple(sorted({rational(v) for v in values}))


def _nonzero(S, what):
    if any(s == 0 for s in S):
        raise PreconditionError(what)


def sumset(A, B) -> tuple:
    return as_number_set(a + b for a in as_number_set(A) for b in as_number_set(B))


def product_set(A, B) -> tuple:
    A, B = as_number_set(A), as_number_set(B)
    _nonzero(A, "multiplicative sets exclude 0")
    _nonzero(B, "multiplicative sets exclude 0")
    return as_number_set(a * b for a in A for b in B)


def ratio_set(A, B) -> tuple:
    A, B = as_number_set(A), as_number_set(B)
    _nonzero(B, "zero divisor")
    return as_number_set(a / b for a in A for b in B)


def iterated_sumset(A, k: int) -> tuple:
    """kA, built as (k-1)A + A."""
    if k < 1:
        raise PreconditionError("k must be >= 1")
    A = as_number_set(A)
    out = A
    for _ in range(k - 1):
        out = sumset(out, A)
    return out


def _energy(A, B, op) -> int:
    reps = Counter(op(a, b) for a in A for b in B)
    return sum(r * r for r in reps.values())


def additive_energy(A, B=None, cross_check: bool = False) -> int:
    """#{(a, a', b, b') : a + b = a' + b'} via the sum histogram.

    With ``cross_check`` and |A||B| <= 400 the result is compared against
    direct quadruple enumeration.
    """
    A = as_number_set(A)
    B = A if B is None else as_number_set(B)
    e = _energy(A, B, lambda a, b: a + b)
    if cross_check and len(A) * len(B) <= QUADRUPLE_CHECK_LIMIT:
        if e != additive_energy_quadruples(A, B):
            raise InvariantViolation("histogram energy disagrees with quadruple count")
    return e


def additive_energy_quadruples(A, B=None) -> int:
    A = as_number_set(A)
    B = A if B is None else as_number_set(B)
    return sum(
        1
        for a, a2 in product(A, A)
        for b, b2 in product(B, B)
        if a + b == a2 + b2
    )


def multiplicative_energy(A, B=None) -> int:
    A = as_number_set(A)
    B = A if B is None else as_number_set(B)
    _nonzero(A, "multiplicative sets exclude 0")
    _nonzero(B, "multiplicative sets exclude 0")
    return _energy(A, B, lambda a, b: a * b)


def sigma_set(S, arity: int | None = None) -> tuple:
    """Coordinate sums of a family of equal-length tuples."""
    tuples = {tuple(rational(v) for v in t) for t in S}
    arities = {len(t) for t in tuples}
    if arity is not None:
        arities.add(arity)
    if len(arities) > 1:
        raise PreconditionError("all tuples must have the same arity")
    return as_number_set(sum(t, Fraction(0)) for t in tuples)


def parse_k(K) -> Fraction:
    """A doubling constant as an exact rational ("p/q", decimal, int, Fraction).

    Floats go through their shortest repr so that 1.6 means 8/5.
    """
    if isinstance(K, float):
        K = repr(K)
    return rational(K)


def small_doubling_subset(A, K, min_size: int = 1):
    """Largest A' of A with |A' + A'| <= K |A'| and |A'| >= min_size.

    Exhaustive; ties go to the lexicographically first subset (in sorted
    order).  Returns None when nothing qualifies.  Limited to |A| <= 18.
    """
    A = as_number_set(A)
    if len(A) > SMALL_DOUBLING_GUARD:
        raise PreconditionError(f"instance too large (|A| > {SMALL_DOUBLING_GUARD})")
    K = parse_k(K)
    for size in range(len(A), max(min_size, 1) - 1, -1):
        for sub in combinations(A, size):
            doubled = {a + b for i, a in enumerate(sub) for b in sub[i:]}
            if len(doubled) <= K * size:
                return sub
    return None


def plunnecke_check(A, n_max: int) -> dict:
    """Check |nA| <= K^n |A| for n = 1..n_max with K = |2A|/|A|.

    The inequality is a theorem, so a failure raises InvariantViolation.
    """
    if n_max > PLUNNECKE_GUARD:
        raise PreconditionError(f"n_max limited to {PLUNNECKE_GUARD}")
    A = as_number_set(A)
    if not A:
        raise PreconditionError("A must be nonempty")
    K = Fraction(len(sumset(A, A)), len(A))
    rows = []
    nA = A
    for n in range(1, n_max + 1):
        if n > 1:
            nA = sumset(nA, A)
        bound = K**n * len(A)
        rows.append({"n": n, "size": len(nA), "bound": bound, "margin": bound - len(nA)})
        if len(nA) > bound:
            raise InvariantViolation(f"|{n}A| = {len(nA)} exceeds K^n|A| = {bound}")
    return {"K": K, "size": len(A), "rows": rows, "ok": True}
