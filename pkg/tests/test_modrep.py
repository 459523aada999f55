import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gen import SMALL_ALGEBRAS, a2, a3, kronecker, random_lambda_module, random_representation
from quivgrass.errors import NotInvariantError
from quivgrass.ffla import Subspace, inverse, matmul
from quivgrass.modrep import (
    DimensionVector,
    ScModule,
    controlling_summand,
    decompose,
    direct_sum,
    dual_module,
    end_algebra,
    hom_module,
    hom_radical,
    hom_space,
    hom_through,
    is_local_end,
    is_module_map,
    load_representation,
    quotient_module,
    radical_filtration,
    socle_radical_top,
    submodule,
)
from quivgrass.qalg import local_rsz_algebra, standard_module


def hom_count_bruteforce(x, y) -> int:
    """Number of module maps, by trying every matrix."""
    p = x.p
    count = 0
    for entries in itertools.product(range(p), repeat=x.dim * y.dim):
        phi = np.array(entries, dtype=np.int64).reshape(y.dim, x.dim)
        if is_module_map(phi, x, y):
            count += 1
    return count


def test_dimension_vector_arithmetic():
    a = DimensionVector({"a": 1, "b": 2})
    b = DimensionVector({"a": 0, "b": 1})
    assert a + b == {"a": 1, "b": 3} and a - b == {"a": 1, "b": 1}
    assert b <= a and not a <= b
    assert a.total() == 3


@pytest.mark.parametrize("seed", range(12))
def test_hom_dimension_matches_bruteforce(seed):
    rng = np.random.default_rng(seed)
    alg = SMALL_ALGEBRAS[seed % len(SMALL_ALGEBRAS)](2)
    x = random_representation(alg, rng, max_total=3)
    y = random_representation(alg, rng, max_total=3)
    h = hom_space(x, y)
    assert 2**h.dim == hom_count_bruteforce(x, y)
    for phi in h.basis:
        assert is_module_map(phi, x, y)


@pytest.mark.parametrize("seed", range(6))
def test_hom_dimension_for_sc_modules_matches_bruteforce(seed):
    rng = np.random.default_rng(100 + seed)
    alg = a3(2)
    x = random_representation(alg, rng, max_total=3).to_sc_module()
    y = random_representation(alg, rng, max_total=3).to_sc_module()
    assert 2 ** hom_space(x, y).dim == hom_count_bruteforce(x, y)


@pytest.mark.parametrize("seed", range(10))
def test_yoneda_dimensions(seed):
    rng = np.random.default_rng(seed)
    alg = SMALL_ALGEBRAS[seed % len(SMALL_ALGEBRAS)](3)
    m = random_representation(alg, rng)
    for v in alg.vertices:
        assert hom_space(standard_module(alg, "projective", v), m).dim == m.dims[v]
        assert hom_space(m, standard_module(alg, "injective", v)).dim == m.dims[v]


@pytest.mark.parametrize("seed", range(6))
def test_hom_is_additive(seed):
    rng = np.random.default_rng(seed)
    alg = kronecker(2)
    x, y, z = (random_representation(alg, rng, max_total=4) for _ in range(3))
    assert hom_space(direct_sum(x, y), z).dim == hom_space(x, z).dim + hom_space(y, z).dim
    assert hom_space(z, direct_sum(x, y)).dim == hom_space(z, x).dim + hom_space(z, y).dim


def test_end_algebra_of_projective():
    lam = local_rsz_algebra(3, 2)
    proj = standard_module(lam, "projective", "*")
    r, basis = end_algebra(proj)
    assert r.dim == 4 and r.is_associative() and r.has_unit()
    n = hom_module(proj, proj, (r, basis))
    assert n.dim == 4 and n.is_valid()


def test_end_algebra_product_is_opposite_composition():
    alg = a2(3)
    m = direct_sum(standard_module(alg, "projective", "1"), standard_module(alg, "simple", "2"))
    r, basis = end_algebra(m)
    hom = hom_space(m, m)
    for i, fi in enumerate(basis):
        for j, fj in enumerate(basis):
            assert np.array_equal(hom.element(r.mul(r.basis_vector(i), r.basis_vector(j))), matmul(fj, fi, 3))


def test_socle_radical_top_of_lambda_projective():
    proj = standard_module(local_rsz_algebra(3, 2), "projective", "*")
    layers = socle_radical_top(proj)
    assert (layers.soc.dim, layers.rad.dim, layers.top.dim) == (3, 3, 1)


def test_dual_swaps_socle_and_top():
    rng = np.random.default_rng(4)
    for _ in range(10):
        m = random_lambda_module(3, rng)
        d = dual_module(m)
        assert socle_radical_top(d).soc.dim == m.dim - socle_radical_top(m).rad.dim


def test_submodule_and_quotient():
    alg = a3(3)
    proj = standard_module(alg, "projective", "1")
    assert radical_filtration(proj) == [1, 1, 1]
    rad = socle_radical_top(proj).rad
    sub, inc = submodule(proj, rad)
    quo, pr = quotient_module(proj, rad)
    assert sub.dim == 2 and quo.dim == 1
    assert is_module_map(inc, sub, proj) and is_module_map(pr, proj, quo)
    bad = Subspace.span(np.eye(proj.dim, dtype=np.int64)[:1], 3, proj.dim)
    with pytest.raises(NotInvariantError):
        submodule(proj, bad)


def test_sc_module_validation():
    sc = a2(2).sc
    with pytest.raises(ValueError):
        ScModule(sc, [np.eye(1, dtype=np.int64)] * sc.dim)


def test_decompose_counts_summands():
    lam = local_rsz_algebra(3, 3)
    proj = standard_module(lam, "projective", "*")
    simple = standard_module(lam, "simple", "*")
    parts = decompose(direct_sum(proj, proj, simple))
    assert sorted(s.module.dim for s in parts) == [1, 4, 4]
    assert all(is_local_end(s.module) for s in parts)
    incl = np.hstack([s.inclusion for s in parts])
    assert inverse(incl, 3).shape == incl.shape


@settings(max_examples=15)
@given(st.integers(0, 10_000))
def test_decompose_is_a_direct_sum(seed):
    rng = np.random.default_rng(seed)
    alg = SMALL_ALGEBRAS[seed % len(SMALL_ALGEBRAS)](2)
    m = random_representation(alg, rng)
    parts = decompose(m, seed=seed)
    assert sum(s.module.dim for s in parts) == m.dim
    if parts:
        incl = np.hstack([s.inclusion for s in parts])
        inverse(incl, 2)
    for s in parts:
        assert is_module_map(s.inclusion, s.module, m)
        assert is_local_end(s.module)


def test_hom_radical_examples():
    lam = local_rsz_algebra(3, 2)
    proj = standard_module(lam, "projective", "*")
    simple = standard_module(lam, "simple", "*")
    assert hom_radical(proj, proj).dim == 3
    assert hom_radical(simple, simple).dim == 0
    # non-isomorphic indecomposables: every map is radical
    assert hom_radical(proj, simple) == hom_space(proj, simple).subspace


def test_hom_through_and_controlling_summand():
    alg = a2(2)
    p1, p2 = standard_module(alg, "projective", "1"), standard_module(alg, "projective", "2")
    s2 = standard_module(alg, "simple", "2")
    assert hom_through(p1, s2, p1).dim == 0
    assert hom_through(p2, s2, p1).dim == 1
    c = controlling_summand([p1, p2], [s2, p2])
    assert c.dim == s2.dim + p2.dim


def test_representation_json_roundtrip():
    rng = np.random.default_rng(1)
    m = random_representation(kronecker(3), rng)
    again = load_representation(m.to_json())
    assert again.dims == m.dims
    assert all(np.array_equal(again.maps[k], m.maps[k]) for k in m.maps)
