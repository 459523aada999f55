"""End-to-end constructions.

* realization: a projective variety as ``G_(1,1,1)`` of the injective
  ``I(a)`` over a Beilinson algebra, checked point by point over F_q;
* the controlled embedding of two-generated algebras into modules over
  ``k<T1,T2,T3>/(T1,T2,T3)^2``;
* the Auslander-variety pipeline: ``G_e Hom(D, Y)`` compared with
  ``G_g(M)`` for ``D = F(Gamma) + S`` and ``Y = F(M)``.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np

from .errors import NotInvariantError
from .ffla import (
    Subspace,
    identity,
    image,
    invariant_closure,
    inverse,
    is_invertible,
    kernel,
    matmul,
    stack_rows,
)
from .grass import grassmannian_points, lemma2_transport
from .meataxe import simples_of
from .modrep import (
    DimensionVector,
    Representation,
    direct_sum_with_maps,
    end_algebra,
    hom_module,
    hom_radical,
    hom_space,
    hom_through,
    radical_filtration,
    solve_intertwiners,
    submodule,
)
from .polyvar import HomPoly, ProjPoint, VeroneseReduction, variety_points, veronese_reduce
from .qalg import (
    Arrow,
    BoundAlgebra,
    Quiver,
    Relation,
    beilinson_algebra,
    beilinson_arrow,
    local_rsz_algebra,
    standard_module,
)


# realization


@dataclass
class RealizationInstance:
    algebra: BoundAlgebra
    module: Representation
    e: DimensionVector
    polys: list[HomPoly]
    n: int
    p: int
    reduction: VeroneseReduction | None = None

    @property
    def ambient_n(self) -> int:
        """Dimension of the projective space the quiver side lives over."""
        return self.n if self.reduction is None else self.reduction.n_prime


def realize_variety(polys: Sequence[HomPoly], n: int, p: int) -> RealizationInstance:
    """Beilinson algebra and injective ``I(a)`` whose ``(1,1,1)`` Grassmannian is the variety."""
    polys = list(polys)
    reduction = None
    quadrics = polys
    if any(f.terms and f.degree != 2 for f in polys):
        reduction = veronese_reduce(polys, n)
        quadrics = reduction.quadrics
    n_eff = n if reduction is None else reduction.n_prime
    alg = beilinson_algebra(n_eff, quadrics, p)
    m = standard_module(alg, "injective", "a")
    end_dim = hom_space(m, m).dim
    if end_dim != 1:
        raise AssertionError(f"I(a) is not a brick: dim End = {end_dim}")
    assert m.dims["a"] == 1 and m.dims["b"] == n_eff + 1
    e = DimensionVector({"a": 1, "b": 1, "c": 1}, keys=alg.vertices)
    return RealizationInstance(alg, m, e, polys, n, p, reduction)


def point_of_submodule(inst: RealizationInstance, u: Subspace) -> ProjPoint:
    """Read ``U_b = span(v)`` and return ``(x_0 v : ... : x_n v)``."""
    m = inst.module
    if not m.is_submodule(u) or m.subspace_dimension_vector(u) != inst.e:
        raise NotInvariantError("not a point of G_(1,1,1)(M)")
    v = m.restrict_vertex(u, "b").basis[0]
    coords = [int((m.maps[beilinson_arrow(i, "ba")] @ v)[0] % m.p) for i in range(inst.ambient_n + 1)]
    return ProjPoint.of(coords, m.p)


def submodule_of_point(inst: RealizationInstance, pt: ProjPoint) -> Subspace:
    """The serial submodule generated at ``c`` by ``path x_i x_j -> pt_i pt_j``."""
    alg, m, p = inst.algebra, inst.module, inst.p
    if len(pt.coords) != inst.ambient_n + 1:
        raise ValueError("point lives in the wrong projective space")
    psi = np.zeros(m.dim, dtype=np.int64)
    start = m.offsets["c"]
    for k, idx in enumerate(alg.basis_between("c", "a")):
        path = alg.basis[idx].path
        i = int(path[1][1:].split("_")[0])
        j = int(path[0][1:].split("_")[0])
        psi[start + k] = pt.coords[i] * pt.coords[j] % p
    u = invariant_closure(psi, m.arrow_matrices(), p, m.dim)
    if m.subspace_dimension_vector(u) != inst.e:
        raise ValueError(f"{pt} is not a point of the variety")
    return u


@dataclass
class RealizationReport:
    per_q: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(r["ok"] for r in self.per_q.values())

    def to_json(self) -> dict:
        return {"ok": self.ok, "per_q": {str(q): r for q, r in self.per_q.items()}}


def verify_realization(polys: Sequence[HomPoly], n: int, q_list: Sequence[int], budget: int = 10**6) -> RealizationReport:
    """Check ``|G_(1,1,1)(M)(F_q)| = |V(F_q)|`` with an explicit bijection.

    Integer coefficients are reduced modulo each q.  For every q the
    report records both counts, whether the point bijection and its
    inverse agree, the brick check, and whether every point is serial.
    """
    report = RealizationReport()
    for q in q_list:
        t0 = time.perf_counter()
        inst = realize_variety([f.mod(q) for f in polys], n, q)
        pts = grassmannian_points(inst.module, inst.e, budget=budget)
        var = variety_points([f.mod(q) for f in polys], n, q)
        images = [point_of_submodule(inst, u) for u in pts]
        if inst.reduction is None:
            expected = var
        else:
            expected = [inst.reduction.point_map(x) for x in var]
        bijective = len(set(images)) == len(images) and set(images) == set(expected)
        roundtrip = all(submodule_of_point(inst, x) == u for x, u in zip(images, pts))
        serial = True
        for u in pts:
            sub, _ = submodule(inst.module, u)
            if max(radical_filtration(sub), default=0) > 1:
                serial = False
        entry = {
            "grassmannian_count": len(pts),
            "variety_count": len(var),
            "bijective": bijective,
            "roundtrip": roundtrip,
            "brick": True,
            "serial": serial,
            "algebra_dim": inst.algebra.dim,
            "module_dims": dict(inst.module.dims),
            "veronese": inst.reduction is not None,
            "points": [str(x) for x in var],
            "seconds": round(time.perf_counter() - t0, 4),
        }
        entry["ok"] = len(pts) == len(var) and bijective and roundtrip and serial
        report.per_q[q] = entry
    return report


# two-generated algebras and the controlled embedding


def word_path(word: str) -> tuple[str, ...]:
    """Letters act right to left: ``"xy"`` means y first, then x."""
    if any(c not in "xy" for c in word):
        raise ValueError(f"word {word!r} uses letters other than x, y")
    return tuple(reversed(word))


@dataclass
class TwoGenPresentation:
    """``F_p<x, y> / I`` with ``I`` generated by homogeneous noncommutative relations.

    ``relations`` is a list of term lists ``[(coef, word), ...]``.
    """

    p: int
    relations: list[list[tuple[int, str]]]
    max_length: int = 24

    def __post_init__(self):
        for rel in self.relations:
            lens = {len(w) for _, w in rel}
            if len(lens) != 1 or 0 in lens:
                raise ValueError(f"relation {rel} is not homogeneous of positive degree")

    def algebra(self, q: int | None = None) -> BoundAlgebra:
        return _gamma_algebra(self.p if q is None else q, tuple(tuple((int(c), w) for c, w in r) for r in self.relations), self.max_length)

    def at(self, q: int) -> "TwoGenPresentation":
        return TwoGenPresentation(q, self.relations, self.max_length)

    def regular_module(self) -> "TwoGenModule":
        sc = self.algebra().sc
        a = self.algebra()
        x = sc.left_matrix(a.path_coordinates(("x",)))
        y = sc.left_matrix(a.path_coordinates(("y",)))
        return TwoGenModule(self.p, x, y, self)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "relations": [{"terms": [{"word": w, "coef": c} for c, w in r]} for r in self.relations],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "TwoGenPresentation":
        rels = [[(int(t["coef"]), str(t["word"])) for t in r["terms"]] for r in data.get("relations", [])]
        return cls(int(data["p"]), rels)


@lru_cache(maxsize=None)
def _gamma_algebra(p: int, relations: tuple, max_length: int) -> BoundAlgebra:
    quiver = Quiver(("*",), [Arrow("x", "*", "*"), Arrow("y", "*", "*")])
    rels = [Relation.of([(c, word_path(w)) for c, w in r]) for r in relations]
    return BoundAlgebra(quiver, rels, p, min_relation_length=1, max_length=max_length, name="Gamma")


@dataclass
class TwoGenModule:
    """A module over a two-generated algebra: actions ``A`` of x and ``B`` of y."""

    p: int
    A: np.ndarray
    B: np.ndarray
    presentation: TwoGenPresentation | None = None

    def __post_init__(self):
        self.A = np.asarray(self.A, dtype=np.int64) % self.p
        self.B = np.asarray(self.B, dtype=np.int64) % self.p
        d = self.A.shape[0] if self.A.ndim == 2 else 0
        self.A = self.A.reshape(d, d)
        self.B = self.B.reshape(d, d)
        if self.presentation is not None and self.failed_relations():
            raise ValueError(f"module violates relations {self.failed_relations()}")

    @property
    def dim(self) -> int:
        return self.A.shape[0]

    def word_matrix(self, word: str) -> np.ndarray:
        m = identity(self.dim)
        for letter in word_path(word):
            m = matmul(self.A if letter == "x" else self.B, m, self.p)
        return m

    def failed_relations(self) -> list[int]:
        bad = []
        for k, rel in enumerate(self.presentation.relations):
            acc = np.zeros((self.dim, self.dim), dtype=np.int64)
            for c, w in rel:
                acc = (acc + c * self.word_matrix(w)) % self.p
            if acc.any():
                bad.append(k)
        return bad

    def hom(self, other: "TwoGenModule") -> Subspace:
        return solve_intertwiners([self.A, self.B], [other.A, other.B], self.p, self.dim, other.dim)

    def as_representation(self) -> Representation:
        if self.presentation is None:
            raise ValueError("module has no presentation")
        return Representation(self.presentation.algebra(self.p), {"*": self.dim}, {"x": self.A, "y": self.B})

    def direct_sum(self, other: "TwoGenModule") -> "TwoGenModule":
        d1, d2 = self.dim, other.dim
        a = np.zeros((d1 + d2, d1 + d2), dtype=np.int64)
        b = np.zeros_like(a)
        a[:d1, :d1], a[d1:, d1:] = self.A, other.A
        b[:d1, :d1], b[d1:, d1:] = self.B, other.B
        return TwoGenModule(self.p, a, b, self.presentation)

    def to_json(self) -> dict:
        return {"p": self.p, "dim": self.dim, "x": self.A.tolist(), "y": self.B.tolist()}

    @classmethod
    def from_json(cls, data: Mapping, presentation: TwoGenPresentation | None = None) -> "TwoGenModule":
        d = int(data["dim"])
        p = int(data["p"])
        a = np.array(data["x"], dtype=np.int64).reshape(d, d)
        b = np.array(data["y"], dtype=np.int64).reshape(d, d)
        return cls(p, a, b, presentation)


@lru_cache(maxsize=None)
def controlling_algebra(p: int) -> BoundAlgebra:
    return local_rsz_algebra(3, p)


def controlled_embed(x: TwoGenModule) -> Representation:
    """``F X``: the space ``X + X`` with ``T1, T2, T3`` sending the first
    copy to the second by ``1, A, B``."""
    d = x.dim

    def lower(block: np.ndarray) -> np.ndarray:
        m = np.zeros((2 * d, 2 * d), dtype=np.int64)
        m[d:, :d] = block
        return m

    return Representation(
        controlling_algebra(x.p),
        {"*": 2 * d},
        {"T1": lower(identity(d)), "T2": lower(x.A), "T3": lower(x.B)},
    )


def embed_map(phi: np.ndarray) -> np.ndarray:
    """``F`` on morphisms: ``diag(phi, phi)``."""
    r, c = phi.shape
    out = np.zeros((2 * r, 2 * c), dtype=np.int64)
    out[:r, :c] = phi
    out[r:, c:] = phi
    return out


@lru_cache(maxsize=None)
def control_simple(p: int) -> Representation:
    return standard_module(controlling_algebra(p), "simple", "*")


def verify_controlled(x: TwoGenModule, y: TwoGenModule, seed: int = 0) -> dict:
    """``Hom(FX, FY) = F Hom(X, Y) + Hom(FX, add S, FY)`` with the second
    part inside the radical."""
    p = x.p
    fx, fy = controlled_embed(x), controlled_embed(y)
    n = fy.dim * fx.dim
    full = hom_space(fx, fy)
    hxy = x.hom(y)
    f_image = Subspace.span(
        stack_rows([embed_map(v.reshape(y.dim, x.dim)).ravel() for v in hxy.basis], n), p, n
    )
    through = hom_through(fx, control_simple(p), fy)
    rad = hom_radical(fx, fy, seed)
    report = {
        "dim_X": x.dim,
        "dim_Y": y.dim,
        "dim_Hom_FX_FY": full.dim,
        "dim_Hom_X_Y": hxy.dim,
        "dim_through_S": through.dim,
        "direct": (f_image & through).dim == 0,
        "spans": (f_image + through) == full.subspace,
        "through_dim_formula": through.dim == x.dim * y.dim,
        "dim_formula": full.dim == hxy.dim + x.dim * y.dim,
        "through_in_radical": rad.contains(through),
        "f_image_in_hom": full.subspace.contains(f_image),
    }
    report["ok"] = all(v for k, v in report.items() if isinstance(v, bool))
    return report


# Auslander-variety pipeline


def _gamma_dimvec(g, m: Representation) -> DimensionVector:
    if isinstance(g, Mapping):
        return DimensionVector(g, keys=("*",))
    if isinstance(g, int):
        return DimensionVector({"*": g})
    return DimensionVector({"*": int(list(g)[0])})


def auslander_pipeline(
    gamma: TwoGenPresentation,
    module: TwoGenModule,
    g,
    q: int | None = None,
    seed: int = 0,
    budget: int = 10**6,
    cross_check_dim: int = 6,
) -> dict:
    """Realize ``G_g(M)`` as ``G_e Hom(D, Y)`` and compare point sets over F_q."""
    t0 = time.perf_counter()
    if q is not None and q != gamma.p:
        gamma = gamma.at(q)
        module = TwoGenModule(q, module.A, module.B, gamma)
    p = gamma.p
    if module.presentation is None:
        module = TwoGenModule(p, module.A, module.B, gamma)
    gam_alg = gamma.algebra()
    gam_sc = gam_alg.sc
    reg = gamma.regular_module()
    big_g = controlled_embed(reg)
    s = control_simple(p)
    d, (inc_g, inc_s) = direct_sum_with_maps([big_g, s])
    y = controlled_embed(module)
    hom_dd = hom_space(d, d)
    r, ends = end_algebra(d)
    n = hom_module(d, y, (r, ends))
    e_idem = hom_dd.coordinates(matmul(inc_s, inc_s.T, p))
    if not r.is_idempotent(e_idem):
        raise AssertionError("summand projection is not idempotent")

    # (i) Gamma -> R / ReR, gamma -> F(right multiplication by gamma)
    ideal = r.two_sided_ideal([e_idem])
    quo, proj = r.quotient(ideal)
    phi = np.zeros((quo.dim, gam_sc.dim), dtype=np.int64)
    for k in range(gam_sc.dim):
        rho = gam_sc.right_matrix(gam_sc.basis_vector(k))
        endo = matmul(matmul(inc_g, embed_map(rho), p), inc_g.T, p)
        phi[:, k] = proj @ hom_dd.coordinates(endo) % p
    iso_i = phi.shape[0] == phi.shape[1] and is_invertible(phi, p)
    table_equal = False
    if iso_i:
        phi_inv = inverse(phi, p)
        moved = np.einsum("ai,bj,abc,kc->ijk", phi, phi, quo.table, phi_inv) % p
        table_equal = bool(np.array_equal(moved, gam_sc.table)) and np.array_equal(phi @ gam_sc.unit % p, quo.unit)

    # (ii) N / ReN ~ M via psi -> (top-left block of psi on G) applied to 1
    w = invariant_closure(n.element(e_idem).T, n.action, p, n.dim)
    gd, md = reg.dim, module.dim
    unit_g = gam_sc.unit
    eps = np.zeros((md, n.dim), dtype=np.int64)
    for col, psi in enumerate(n.basis_maps):
        block = matmul(psi, inc_g, p)[:md, :gd]
        eps[:, col] = block @ unit_g % p
    ker_eps = kernel(eps, p)
    surj = image(eps, p).dim == md
    gen_x = hom_dd.coordinates(matmul(matmul(inc_g, embed_map(gam_sc.right_matrix(gam_alg.path_coordinates(("x",)))), p), inc_g.T, p))
    gen_y = hom_dd.coordinates(matmul(matmul(inc_g, embed_map(gam_sc.right_matrix(gam_alg.path_coordinates(("y",)))), p), inc_g.T, p))
    linear = np.array_equal(matmul(eps, n.element(gen_x), p), matmul(module.A, eps, p)) and np.array_equal(
        matmul(eps, n.element(gen_y), p), matmul(module.B, eps, p)
    )
    iso_ii = surj and ker_eps == w and linear

    # (iii) counts through the transport of Grassmannians
    simples = simples_of(r, seed)
    killed = [sm for sm in simples if not sm.module.element(e_idem).any()]
    if len(killed) != 1:
        raise AssertionError(f"expected one simple killed by e, found {len(killed)}")
    s_g = killed[0]
    s_g.label = "S_G"
    for i, sm in enumerate(simples):
        if sm is not s_g:
            sm.label = f"S_C{i}" if len(simples) > 2 else "S_C"
    g_gam = _gamma_dimvec(g, module.as_representation())
    g_r = DimensionVector({sm.label: (g_gam["*"] if sm is s_g else 0) for sm in simples}, keys=simples.labels)
    independent = n.dim <= cross_check_dim
    rep = lemma2_transport(r, e_idem, n, g_r, simples, independent=independent, seed=seed, budget=budget)
    gam_pts = grassmannian_points(module.as_representation(), g_gam, budget=budget)
    pushed = {Subspace.span(matmul(u.basis, eps.T, p), p, md) for u in rep.lifted}
    images_match = pushed == set(gam_pts.points) and len(pushed) == len(rep.lifted)
    out = {
        "q": p,
        "dim_Gamma": gam_sc.dim,
        "dim_M": md,
        "dim_D": d.dim,
        "dim_R": r.dim,
        "dim_N": n.dim,
        "dim_ReN": w.dim,
        "dim_R_mod_ReR": quo.dim,
        "num_simples_R": len(simples),
        "e": (rep.g + rep.c).to_json(),
        "c": rep.c.to_json(),
        "count_auslander": len(rep.lifted),
        "count_gamma": len(gam_pts),
        "gamma_iso_R_mod_ReR": bool(iso_i and table_equal),
        "quotient_iso_M": bool(iso_ii),
        "lemma2_ok": rep.ok,
        "images_match": images_match,
        "seconds": round(time.perf_counter() - t0, 3),
    }
    out["ok"] = bool(
        out["gamma_iso_R_mod_ReR"]
        and out["quotient_iso_M"]
        and out["lemma2_ok"]
        and images_match
        and out["count_auslander"] == out["count_gamma"]
    )
    return out


def dual_numbers(p: int) -> TwoGenPresentation:
    """``k[x]/(x^2)`` with y acting as zero."""
    return TwoGenPresentation(p, [[(1, "y")], [(1, "xx")]])


def square_zero_two(p: int) -> TwoGenPresentation:
    """``k<x, y>/(x, y)^2``."""
    return TwoGenPresentation(p, [[(1, w)] for w in ("xx", "xy", "yx", "yy")])
