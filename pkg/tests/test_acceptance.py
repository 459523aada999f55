"""Acceptance gate: one test per criterion, each timed against its limit.

A summary line per criterion is printed at the end of the pytest run.
"""
import numpy as np

from gen import SMALL_ALGEBRAS, random_lambda_module, random_representation, random_twogen_module
from quivgrass.ffla import Subspace, enumerate_subspaces, gaussian_binomial, invariant_closure, rref
from quivgrass.grass import annihilator_pairing, connectivity_check, grassmannian_points, lemma2_transport, line_family
from quivgrass.meataxe import composition_factors, dimension_vector_sc, label_simples_by_vertex, regular_module, simples_of
from quivgrass.modrep import dual_module, quotient_module, socle_radical_top
from quivgrass.pipelines import (
    auslander_pipeline,
    dual_numbers,
    point_of_submodule,
    realize_variety,
    square_zero_two,
    verify_controlled,
    verify_realization,
)
from quivgrass.polyvar import HomPoly, variety_points
from quivgrass.qalg import beilinson_algebra, local_rsz_algebra

XY = HomPoly(2, {(1, 1): 1})
CONIC = HomPoly(3, {(1, 0, 1): 1, (0, 2, 0): -1})
CUBE = HomPoly(2, {(3, 0): 1})


def test_projective_line(criterion):
    criterion(1, "P^1 realized: counts 3, 4, 6 with bijection, roundtrip, brick", 5)
    rep = verify_realization([], 1, [2, 3, 5])
    assert [rep.per_q[q]["grassmannian_count"] for q in (2, 3, 5)] == [3, 4, 6]
    for entry in rep.per_q.values():
        assert entry["bijective"] and entry["roundtrip"] and entry["brick"] and entry["ok"]


def test_two_coordinate_points(criterion):
    criterion(2, "x0*x1: two points mapped onto (1:0), (0:1)", 5)
    rep = verify_realization([XY], 1, [2, 3, 5])
    assert rep.ok and all(e["grassmannian_count"] == 2 for e in rep.per_q.values())
    for q in (2, 3, 5):
        inst = realize_variety([XY], 1, q)
        pts = grassmannian_points(inst.module, inst.e)
        assert {str(point_of_submodule(inst, u)) for u in pts} == {"(1:0)", "(0:1)"}


def test_conic(criterion):
    criterion(3, "conic x0*x2 - x1^2: q+1 points, all serial", 30)
    rep = verify_realization([CONIC], 2, [3, 5])
    for q in (3, 5):
        entry = rep.per_q[q]
        assert entry["grassmannian_count"] == q + 1 == entry["variety_count"]
        assert entry["bijective"] and entry["roundtrip"] and entry["serial"]


def test_cubic_through_veronese(criterion):
    criterion(4, "x0^3 through the Veronese reduction: one point", 5)
    for q in (2, 3, 5):
        inst = realize_variety([CUBE.mod(q)], 1, q)
        assert inst.reduction is not None
        direct = variety_points([CUBE.mod(q)], 1, q)
        assert len(direct) == 1
        rep = verify_realization([CUBE], 1, [q])
        assert rep.ok and rep.per_q[q]["grassmannian_count"] == 1


def test_idempotent_transport(criterion):
    criterion(5, "G_(g+c)(N) matches G_g(N/ReN) on 20 random instances", 60)
    rng = np.random.default_rng(2024)
    done = 0
    while done < 20:
        q = (2, 3)[done % 2]
        alg = SMALL_ALGEBRAS[done % len(SMALL_ALGEBRAS)](q)
        rep_m = random_representation(alg, rng, max_total=6)
        sc = alg.sc
        n = rep_m.to_sc_module()
        simples = simples_of(sc)
        label_simples_by_vertex(alg, simples)
        chosen = [v for v in alg.vertices if rng.random() < 0.5]
        idem = np.zeros(sc.dim, dtype=np.int64)
        for v in chosen:
            idem = (idem + alg.idempotent(v)) % q
        w = invariant_closure(n.element(idem).T, n.action, q, n.dim)
        quo, _ = quotient_module(n, w)
        top = dimension_vector_sc(sc, quo, simples)
        g = {lab: int(rng.integers(0, top[lab] + 1)) for lab in simples.labels}
        rep = lemma2_transport(sc, idem, n, g, simples, independent=True)
        assert len(rep.full_points) == len(rep.quotient_points)
        assert rep.contains_w and rep.bijective and rep.ok
        done += 1


def test_controlled_embedding(criterion):
    criterion(6, "Hom(FX, FY) = F Hom(X, Y) + maps through S on 50 random pairs", 60)
    rng = np.random.default_rng(77)
    for k in range(50):
        p = (2, 3)[k % 2]
        x, y = random_twogen_module(p, rng), random_twogen_module(p, rng)
        rep = verify_controlled(x, y, seed=k)
        assert rep["ok"], rep


def test_auslander_pipeline(criterion):
    criterion(7, "Auslander variety: q+1 points for (x,y)^2, one for x^2", 120)
    for q in (2, 3, 5):
        gamma = square_zero_two(q)
        rep = auslander_pipeline(gamma, gamma.regular_module(), 1)
        assert rep["gamma_iso_R_mod_ReR"] and rep["quotient_iso_M"] and rep["images_match"]
        assert rep["count_auslander"] == rep["count_gamma"] == q + 1 and rep["ok"]
        dn = dual_numbers(q)
        rep = auslander_pipeline(dn, dn.regular_module(), 1)
        assert rep["count_auslander"] == rep["count_gamma"] == 1 and rep["ok"]


def test_local_connectivity_and_duality(criterion):
    criterion(8, "Lambda_3 modules: connected graphs, invariant line families, duality", 120)
    rng = np.random.default_rng(8)
    for k in range(20):
        q = (2, 3)[k % 2]
        m = random_lambda_module(q, rng, max_dim=5)
        soc = socle_radical_top(m).soc
        dual = dual_module(m)
        for i in range(m.dim + 1):
            rep = connectivity_check(m, i)
            assert rep.connected
            here = grassmannian_points(m, [i])
            if i <= soc.dim:
                for u in here:
                    if not soc.contains(u):
                        assert all(m.is_submodule(v) and v.dim == i for v in line_family(m, u, soc).members())
            there = grassmannian_points(dual, [m.dim - i])
            assert len(here) == len(there)
            assert {annihilator_pairing(m, u) for u in here} == set(there.points)


def test_meataxe(criterion):
    criterion(9, "composition factors: seed stable, Lambda_3 regular, Beilinson simples", 30)
    rng = np.random.default_rng(9)
    for k in range(20):
        p = (2, 3)[k % 2]
        alg = SMALL_ALGEBRAS[k % len(SMALL_ALGEBRAS)](p)
        rep = random_representation(alg, rng, max_total=6)
        m = rep.to_sc_module()
        simples = simples_of(alg.sc, seed=0)
        label_simples_by_vertex(alg, simples)
        sigs = []
        for seed in (1, 2, 3):
            factors = composition_factors(m, seed=seed)
            sigs.append(sorted(simples.identify(f) for f in factors))
        assert sigs[0] == sigs[1] == sigs[2] and None not in sigs[0]
        assert dict(dimension_vector_sc(alg.sc, m, simples)) == rep.dims
    lam = local_rsz_algebra(3, 3).sc
    assert [f.dim for f in composition_factors(regular_module(lam))] == [1, 1, 1, 1]
    assert len(simples_of(lam)) == 1
    assert len(simples_of(beilinson_algebra(1, [], 3).sc)) == 3


def test_finite_field_linear_algebra(criterion):
    criterion(10, "Gaussian binomial counts, modular law, RREF idempotence", 10)
    for p in (2, 3):
        for d in range(6):
            for k in range(d + 1):
                assert len(enumerate_subspaces(d, k, p)) == gaussian_binomial(d, k, p)
    rng = np.random.default_rng(10)
    for t in range(200):
        p = (2, 3, 5)[t % 3]
        d = int(rng.integers(1, 6))

        def rand_sub():
            return Subspace.span(rng.integers(0, p, size=(int(rng.integers(0, d + 1)), d)), p, d)

        a, b, c = rand_sub(), rand_sub(), rand_sub()
        if not a.contains(c):
            c = c & a
        # modular law: c inside a gives a & (b + c) == (a & b) + c
        assert a & (b + c) == (a & b) + c
        mat = rng.integers(0, p, size=(int(rng.integers(1, 6)), d))
        once = rref(mat, p)[0]
        assert np.array_equal(rref(once, p)[0], once)
