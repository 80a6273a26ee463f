"""Seeded randomized verification suites behind ``richlines verify``.

Each trial draws its own generator from (suite, master seed, trial index),
so results do not depend on thread count or trial scheduling.
"""
from __future__ import annotations

import math
import random
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from richlines.additive import additive_energy, additive_energy_quadruples, sumset
from richlines.errors import InvariantViolation
from richlines.grid import ceil_threshold
from richlines.lemmas import (
    DegreeMatrix,
    SetSystem,
    binom_ratio_check,
    lemma31_verify,
    lemma53_find_index,
)
from richlines.lines import IDENTITY, Line, compose, fixed_point, invert, star

__all__ = ["SUITES", "random_line", "random_rational", "run_suite", "trial_rng"]


def trial_rng(suite: str, seed: int, trial: int) -> random.Random:
    return random.Random(f"{suite}:{seed}:{trial}")


def random_rational(rng: random.Random, max_num: int = 50, max_den: int = 12,
                    nonzero: bool = False) -> Fraction:
    while True:
        q = Fraction(rng.randint(-max_num, max_num), rng.randint(1, max_den))
        if q or not nonzero:
            return q


def random_line(rng: random.Random, max_num: int = 50, max_den: int = 12) -> Line:
    return Line(random_rational(rng, max_num, max_den, nonzero=True),
                random_rational(rng, max_num, max_den))


# ------------------------------------------------------------------ trials


def _trial_lemma31(rng):
    n = rng.randint(10, 200)
    delta = rng.uniform(0.01, 0.3)
    k = rng.randint(2, 30)
    lo = ceil_threshold(n ** (1 - delta))
    sets = [rng.sample(range(1, n + 1), rng.randint(lo, n)) for _ in range(k)]
    rep = lemma31_verify(SetSystem(n, sets), delta)
    if not rep["hypothesis_met"]:
        raise InvariantViolation("generator produced a system below the size hypothesis")
    return {"n": n, "k": k, "delta": delta, "count": rep["count"], "bound": rep["bound"]}


def _trial_lemma53(rng):
    k, N = rng.randint(1, 30), rng.randint(1, 30)
    L = rng.choice([1, 2, 5, 10]) * rng.uniform(0.5, 2.0)
    rows = [[rng.uniform(0, L) for _ in range(N)] for _ in range(k)]
    if not any(any(r) for r in rows):
        rows[0][0] = L
    D = DegreeMatrix(rows, L)
    res = lemma53_find_index(D)
    # independent check in exact rationals, straight from the definitions
    total = sum(sum(r) for r in D.rows)
    C = total / (D.L * k * N)
    cut = C * C * D.L * D.L * N / 2
    row = D.rows[res["index"]]
    qual = sum(1 for r in D.rows if sum(a * b for a, b in zip(row, r)) > cut)
    if qual < k * C * C / (2 - C * C):
        raise InvariantViolation("returned index fails the count bound")
    return {"k": k, "N": N, "index": res["index"], "qualifying": qual}


def _trial_binom(rng):
    k = rng.randint(0, 3)
    gamma = rng.choice([Fraction(1, 2), Fraction(1, 3), Fraction(2, 5)])
    # sample x = t^q for gamma = p/q so x^(1 - gamma) is an integer; with a
    # floored m the deviation jitters and is not monotone in x
    q = gamma.denominator
    xs = [math.ceil(10 ** ((3 + j) / q)) ** q for j in range(4)]
    devs = [binom_ratio_check(k, gamma, x)["deviation"] for x in xs]
    if any(b > a for a, b in zip(devs, devs[1:])):
        raise InvariantViolation(f"deviation not decreasing in x: {devs}")
    return {"k": k, "gamma": gamma, "deviations": devs}


def _trial_algebra(rng):
    for _ in range(50):
        f, g = random_line(rng), random_line(rng)
        x = random_rational(rng)
        if invert(invert(f)) != f:
            raise InvariantViolation("invert is not an involution")
        if star(f, f) != IDENTITY:
            raise InvariantViolation("f * f is not the identity")
        if star(f, g).slope != g.slope / f.slope:
            raise InvariantViolation("slope of f * g")
        if star(f, g).slope != star(invert(g), invert(f)).slope:
            raise InvariantViolation("commutator pair slopes differ")
        if star(f, g) != compose(invert(f), g):
            raise InvariantViolation("closed form of * disagrees with f^-1 o g")
        if compose(f, g)(x) != f(g(x)):
            raise InvariantViolation("composition evaluation")
        if f.slope != 1:
            p = fixed_point(f)
            if f(p.x) != p.x:
                raise InvariantViolation("fixed point")
    return {"checked": 50}


def _trial_energy(rng):
    size = rng.randint(1, 20)
    pool = [Fraction(rng.randint(-30, 30), rng.choice([1, 1, 2, 3])) for _ in range(4 * size)]
    A = sorted(set(pool))[:size] if rng.random() < 0.5 else sorted(set(pool[:size]))
    e = additive_energy(A)
    if e != additive_energy_quadruples(A):
        raise InvariantViolation("histogram energy disagrees with quadruple enumeration")
    ss = len(sumset(A, A))
    if e * ss < len(A) ** 4:
        raise InvariantViolation("Cauchy-Schwarz lower bound on energy violated")
    if ss < 2 * len(A) - 1:
        raise InvariantViolation("|A+A| < 2|A| - 1")
    return {"size": len(A), "energy": e, "sumset": ss}


SUITES = {
    "lemma31": _trial_lemma31,
    "lemma53": _trial_lemma53,
    "binom": _trial_binom,
    "algebra": _trial_algebra,
    "energy": _trial_energy,
}


def _run_trial(suite, seed, trial):
    try:
        SUITES[suite](trial_rng(suite, seed, trial))
        return None
    except InvariantViolation as exc:
        return {"trial": trial, "error": str(exc)}


def run_suite(suite: str, trials: int, seed: int, threads: int = 1) -> dict:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {sorted(SUITES)}")
    idx = range(trials)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(lambda t: _run_trial(suite, seed, t), idx))
    else:
        outcomes = [_run_trial(suite, seed, t) for t in idx]
    failures = [o for o in outcomes if o is not None]
    return {
        "suite": suite,
        "trials": trials,
        "seed": seed,
        "passed": trials - len(failures),
        "failed": len(failures),
        "failures": failures[:20],
        "ok": not failures,
    }
