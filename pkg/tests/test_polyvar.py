import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from quivgrass.polyvar import (
    HomPoly,
    ProjPoint,
    dump_variety,
    load_variety,
    monomials,
    projective_points,
    variety_points,
    veronese_reduce,
)


def bruteforce_points(polys, n, q):
    """Count projective zeros by evaluating on every nonzero vector."""
    hits = 0
    for v in itertools.product(range(q), repeat=n + 1):
        if any(v) and all(f.evaluate(v, q) == 0 for f in polys):
            hits += 1
    assert hits % (q - 1) == 0
    return hits // (q - 1)


@pytest.mark.parametrize("n,q", [(0, 2), (1, 3), (2, 2), (2, 5), (3, 3)])
def test_projective_points_count_and_normal_form(n, q):
    pts = projective_points(n, q)
    assert len(pts) == (q ** (n + 1) - 1) // (q - 1)
    rows = [tuple(r) for r in pts]
    assert rows == sorted(rows) and len(set(rows)) == len(rows)
    for r in rows:
        lead = next(x for x in r if x)
        assert lead == 1


def test_point_normalization():
    assert ProjPoint.of([0, 2, 4], 5).coords == (0, 1, 2)
    with pytest.raises(ValueError):
        ProjPoint.of([0, 0], 3)


def test_nonhomogeneous_rejected():
    with pytest.raises(ValueError):
        HomPoly(2, {(1, 0): 1, (1, 1): 1})


def test_conic_and_two_points():
    conic = HomPoly(3, {(1, 0, 1): 1, (0, 2, 0): -1})
    for q in (3, 5, 7):
        assert len(variety_points([conic], 2, q)) == q + 1
    xy = HomPoly(2, {(1, 1): 1})
    assert [str(x) for x in variety_points([xy], 1, 5)] == ["(0:1)", "(1:0)"]


@st.composite
def small_systems(draw):
    n = draw(st.integers(1, 2))
    q = draw(st.sampled_from([2, 3, 5]))
    polys = []
    for _ in range(draw(st.integers(0, 2))):
        deg = draw(st.integers(1, 4))
        monos = monomials(n + 1, deg)
        chosen = draw(st.lists(st.sampled_from(monos), min_size=1, max_size=3, unique=True))
        coefs = draw(st.lists(st.integers(-3, 3), min_size=len(chosen), max_size=len(chosen)))
        polys.append(HomPoly(n + 1, dict(zip(chosen, coefs))))
    return polys, n, q


@given(small_systems())
def test_variety_points_match_bruteforce(system):
    polys, n, q = system
    assert len(variety_points(polys, n, q)) == bruteforce_points(polys, n, q)


@given(small_systems())
def test_veronese_reduction_preserves_points(system):
    polys, n, q = system
    red = veronese_reduce(polys, n)
    assert all(f.degree == 2 for f in red.quadrics)
    direct = variety_points(polys, n, q)
    reduced = variety_points([f.mod(q) for f in red.quadrics], red.n_prime, q)
    assert len(reduced) == len(direct)
    assert {red.point_map(x) for x in direct} == set(reduced)


def test_veronese_cube_routes_to_plane():
    red = veronese_reduce([HomPoly(2, {(3, 0): 1})], 1)
    n_prime, quadrics, point_map = red
    assert n_prime == 2 and red.d == 2
    for q in (2, 3, 5):
        pts = variety_points([f.mod(q) for f in quadrics], n_prime, q)
        assert [x.coords for x in pts] == [(0, 0, 1)]
        assert point_map(ProjPoint.of((0, 1), q)) == pts[0]


def test_veronese_keeps_quadrics_verbatim():
    f = HomPoly(3, {(1, 0, 1): 1, (0, 2, 0): -1})
    red = veronese_reduce([f], 2)
    assert red.d == 1 and red.quadrics == [f]


def test_monomials_order():
    assert monomials(2, 2) == [(2, 0), (1, 1), (0, 2)]
    assert len(monomials(3, 3)) == 10


def test_evaluate_many_agrees_with_scalar():
    f = HomPoly(3, {(2, 1, 0): 4, (0, 0, 3): -1, (1, 1, 1): 2})
    pts = projective_points(2, 5)
    assert np.array_equal(f.evaluate_many(pts, 5), [f.evaluate(r, 5) for r in pts])


def test_variety_json_roundtrip():
    polys = [HomPoly(3, {(1, 0, 1): 1, (0, 2, 0): -1})]
    polys2, n, p = load_variety(dump_variety(polys, 2, 3))
    assert polys2 == polys and n == 2 and p == 3
