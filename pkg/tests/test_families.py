import random
from fractions import Fraction as F
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from conftest import L, lines
from richlines.errors import PreconditionError
from richlines.families import (
    check_general_position,
    check_near_general_position,
    concurrency_map,
    decompose,
    greedy_gp_subset,
    group_by_slope,
    maximum_gp_subset,
    random_ngp_extract,
)
from richlines.lines import Line, Point

line_lists = st.lists(lines, max_size=30)


def concurrent_lines(p, slopes):
    return [Line(s, p.y - s * p.x) for s in slopes]


def test_group_by_slope_examples():
    assert group_by_slope(L((1, 0), (1, 1), (2, 0))) == {1: L((1, 0), (1, 1)), 2: L((2, 0))}
    assert group_by_slope([]) == {}
    assert all(len(v) == 1 for v in group_by_slope(L((1, 0), (2, 0), (3, 1))).values())


def test_concurrency_map_examples():
    assert concurrency_map(L((1, 0), (2, 0), (3, 0))) == {Point(0, 0): L((1, 0), (2, 0), (3, 0))}
    assert concurrency_map(L((1, 0), (1, 1))) == {}
    got = concurrency_map(L((1, 0), (2, 0), (1, 1)))
    # y = 2x meets y = x + 1 at (1, 2)
    assert {p: len(v) for p, v in got.items()} == {Point(0, 0): 2, Point(1, 2): 2}


def test_gp_checks():
    assert check_general_position(L((1, 0), (2, 1), (3, 5))).is_gp
    rep = check_general_position(L((1, 0), (2, 0), (3, 0)))
    assert not rep.is_gp and rep.witness.kind == "concurrent" and rep.witness.point == Point(0, 0)
    rep = check_general_position(L((1, 0), (1, 1)))
    assert rep.witness.kind == "parallel"
    assert check_near_general_position(L((1, 0), (2, 0), (3, 0)), 3).is_gp
    with pytest.raises(PreconditionError):
        check_near_general_position([], 1)


def test_greedy_examples():
    star = concurrent_lines(Point(2, 3), [1, 2, 3, 4, 5])
    assert len(greedy_gp_subset(star)) == 2
    assert len(greedy_gp_subset(L((1, 0), (1, 1), (1, 2)))) == 1
    gp = L((1, 0), (2, 1), (3, 5))
    assert greedy_gp_subset(gp) == tuple(sorted(gp))


def test_maximum_at_least_greedy():
    rng = random.Random(3)
    for _ in range(10):
        ls = [Line(rng.randint(1, 4), rng.randint(-3, 3)) for _ in range(10)]
        best = maximum_gp_subset(ls)
        assert check_general_position(best).is_gp
        assert len(best) >= len(greedy_gp_subset(ls))


def test_random_extract_examples():
    gp = L((1, 0), (2, 1), (3, 5), (5, -7))
    assert random_ngp_extract(gp, len(gp), 2, 1, seed=0) == tuple(sorted(gp))
    star = concurrent_lines(Point(0, 1), [1, 2, 3, 4])
    assert random_ngp_extract(star, 3, 2, 25, seed=1) is None
    rng = random.Random(0)
    big = [Line(s, rng.randint(-50, 50)) for s in range(1, 13)]
    a = random_ngp_extract(big, 6, 3, 50, seed=7)
    assert a is not None and a == random_ngp_extract(big, 6, 3, 50, seed=7)


def test_decompose_examples():
    dec = decompose(L((1, 0), (2, 0), (1, 1), (2, 2)))
    assert len(dec.gp_core) == 2
    assert set(dec.parallel_families) == {1, 2} and not dec.star_families

    p = Point(1, 1)
    star = concurrent_lines(p, [1, 2, 3, 4, 5, 6])
    dec = decompose(star)
    assert len(dec.parallel_families) == 2
    assert list(dec.star_families) == [p] and len(dec.star_families[p]) == 4
    assert set(dec.assignment) == set(star)

    gp = L((1, 0), (2, 1), (3, 5), (5, -7))
    dec = decompose(gp)
    assert dec.family_count == len(gp)


def assert_valid_decomposition(ls, dec):
    ls = set(ls)
    members = [l for fam in dec.parallel_families.values() for l in fam]
    members += [l for fam in dec.star_families.values() for l in fam]
    assert sorted(members) == sorted(ls)  # partition: each line exactly once
    assert set(dec.assignment) == ls
    for s, fam in dec.parallel_families.items():
        assert fam and all(l.slope == s for l in fam)
    for p, fam in dec.star_families.items():
        assert fam and all(l.contains(p) for l in fam)
    k = len(dec.gp_core)
    assert dec.family_count <= k + k * k
    assert check_general_position(dec.gp_core).is_gp


@settings(max_examples=60, deadline=None)
@given(line_lists)
def test_decompose_invariants(ls):
    assert_valid_decomposition(ls, decompose(ls))


@given(line_lists)
def test_gp_iff_distinct_slopes_and_no_triple(ls):
    ls = sorted(set(ls))
    slopes_ok = len({l.slope for l in ls}) == len(ls)
    cmap = concurrency_map(ls)
    triple_free = all(len(v) <= 2 for v in cmap.values())
    assert check_general_position(ls).is_gp == (slopes_ok and triple_free)


@given(line_lists)
def test_greedy_is_gp_and_maximal(ls):
    core = greedy_gp_subset(ls)
    assert check_general_position(core).is_gp
    for l in set(ls) - set(core):
        assert not check_general_position(list(core) + [l]).is_gp


@given(line_lists)
def test_concurrency_map_vs_pairwise(ls):
    ls = sorted(set(ls))
    cmap = concurrency_map(ls)
    for p, members in cmap.items():
        assert len(members) >= 2
        assert set(members) == {l for l in ls if p.y == l.slope * p.x + l.intercept}
    # every crossing of two lines is listed
    for a, b in combinations(ls, 2):
        if a.slope != b.slope:
            x = (b.intercept - a.intercept) / (a.slope - b.slope)
            assert Point(x, a(x)) in cmap


@given(st.lists(lines, min_size=3, max_size=12, unique_by=lambda l: l.slope), st.integers(0, 99))
def test_random_extract_depends_only_on_seed(ls, seed):
    t = len(set(ls)) // 2
    assert random_ngp_extract(ls, t, 3, 5, seed) == random_ngp_extract(list(reversed(ls)), t, 3, 5, seed)
