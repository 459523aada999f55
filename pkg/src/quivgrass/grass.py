"""Quiver Grassmannians over F_q, the transport of Grassmannians along
``U -> U / ReN``, and line families / connectivity for modules over local
radical-square-zero algebras."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import prod
from typing import Mapping, Sequence

import networkx as nx
import numpy as np

from .errors import BudgetExceeded, NotInvariantError
from .ffla import (
    DEFAULT_BUDGET,
    Subspace,
    enumerate_subspaces,
    gaussian_binomial,
    invariant_closure,
    iter_rref_cells,
    matmul,
    stack_rows,
)
from .meataxe import SimplesRegistry, dimension_vector_sc
from .modrep import (
    DimensionVector,
    Representation,
    ScModule,
    dual_module,
    quotient_module,
    socle_radical_top,
)
from .qalg import ScAlgebra


@dataclass
class GrassmannianPointSet:
    module: object
    e: DimensionVector
    q: int
    points: list[Subspace]
    budget: int = DEFAULT_BUDGET
    meta: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def index(self) -> dict[Subspace, int]:
        return {u: i for i, u in enumerate(self.points)}

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "e": self.e.to_json(),
            "count": len(self.points),
            "budget": self.budget,
            "points": [u.basis.tolist() for u in self.points],
            **self.meta,
        }


def _as_dimvec(e, keys: Sequence) -> DimensionVector:
    if isinstance(e, Mapping):
        return DimensionVector(e, keys=keys)
    if isinstance(e, int):
        if len(keys) != 1:
            raise ValueError("integer dimension vector needs a single simple")
        return DimensionVector({keys[0]: e}, keys=keys)
    e = list(e)
    if len(e) != len(keys):
        raise ValueError(f"dimension vector of length {len(e)}, expected {len(keys)}")
    return DimensionVector(dict(zip(keys, e)), keys=keys)


def _vertex_order(m: Representation) -> list[str]:
    verts = list(m.algebra.vertices)
    return sorted(verts, key=lambda v: (-m.dims[v], verts.index(v)))


def grassmannian_points(m: Representation, e, q: int | None = None, budget: int = DEFAULT_BUDGET) -> GrassmannianPointSet:
    """All subrepresentations of ``m`` with dimension vector ``e``.

    Vertices are filled depth first (largest space first).  At each vertex
    the candidate subspaces are restricted to those containing the images
    of already chosen subspaces and lying inside the preimages of already
    chosen targets, so every partial choice is arrow-compatible.
    """
    if q is not None and q != m.p:
        raise ValueError(f"module is defined over F_{m.p}, not F_{q}")
    p = m.p
    e = _as_dimvec(e, m.algebra.vertices)
    if not e <= m.dimension_vector():
        raise ValueError(f"dimension vector {e.to_json()} exceeds {m.dims}")
    estimate = prod(gaussian_binomial(m.dims[v], e[v], p) for v in m.algebra.vertices)
    if estimate > budget:
        raise BudgetExceeded(f"pre-estimate {estimate} exceeds budget {budget}")
    order = _vertex_order(m)
    arrows = m.algebra.quiver.arrows
    found: list[Subspace] = []

    def visit(k: int, chosen: dict[str, Subspace]) -> None:
        if k == len(order):
            found.append(m.from_vertex_parts(chosen))
            return
        v = order[k]
        dv = m.dims[v]
        low = Subspace.zero(dv, p)
        high = Subspace.full(dv, p)
        for arr in arrows:
            if arr.target == v and arr.source in chosen and arr.source != v:
                low = low + chosen[arr.source].image(m.maps[arr.label])
            if arr.source == v and arr.target in chosen and arr.target != v:
                high = high & _preimage(m.maps[arr.label], chosen[arr.target], p)
        loops = [m.maps[a.label] for a in arrows if a.source == v and a.target == v]
        for u in enumerate_subspaces(dv, e[v], p, containing=low, inside=high, budget=budget):
            if loops and not u.is_invariant(loops):
                continue
            chosen[v] = u
            visit(k + 1, chosen)
            del chosen[v]

    visit(0, {})
    found.sort(key=Subspace.key)
    if len(found) > budget:
        raise BudgetExceeded(f"{len(found)} points exceed budget {budget}")
    return GrassmannianPointSet(m, e, p, found, budget, {"estimate": estimate})


def _preimage(a: np.ndarray, target: Subspace, p: int) -> Subspace:
    """``{x : a x in target}``."""
    from .ffla import kernel

    ann = target.annihilator()
    if ann.dim == 0:
        return Subspace.full(a.shape[1], p)
    return kernel(matmul(ann.basis, a, p), p)


def invariant_batch_mask(batch: np.ndarray, pivots: Sequence[int], ops: Sequence[np.ndarray], p: int) -> np.ndarray:
    """For a batch of RREF bases (count, k, d) sharing ``pivots``, mark the
    rows spans that are stable under every operator."""
    count, k, d = batch.shape
    ok = np.ones(count, dtype=bool)
    if k == 0:
        return ok
    piv = list(pivots)
    for op in ops:
        img = np.einsum("nkd,ed->nke", batch[ok], op) % p
        resid = (img - np.einsum("nkj,njd->nkd", img[:, :, piv], batch[ok])) % p
        sub = ~resid.reshape(resid.shape[0], -1).any(axis=1)
        idx = np.flatnonzero(ok)
        ok[idx[~sub]] = False
        if not ok.any():
            break
    return ok


def invariant_subspaces(n: ScModule, dim: int, must_contain: Subspace | None = None, budget: int = DEFAULT_BUDGET) -> list[Subspace]:
    """Submodules of ``n`` of the given dimension (optionally containing a submodule).

    Candidates are subspaces in canonical RREF order, tested for invariance
    in batches.  With ``must_contain = W`` the candidates are the subspaces
    of ``n / W`` of dimension ``dim - dim W``, tested against the quotient
    action and lifted.
    """
    p = n.p
    if must_contain is not None and must_contain.dim:
        if not n.is_submodule(must_contain):
            raise NotInvariantError("must_contain is not a submodule")
        quo, proj = quotient_module(n, must_contain)
        sec = must_contain.section()
        k = dim - must_contain.dim
        if k < 0 or k > quo.dim:
            return []
        if gaussian_binomial(quo.dim, k, p) > budget:
            raise BudgetExceeded(f"{gaussian_binomial(quo.dim, k, p)} candidates exceed budget {budget}")
        out = []
        for pivots, batch in iter_rref_cells(quo.dim, k, p):
            mask = invariant_batch_mask(batch, pivots, quo.action, p)
            for s in batch[mask]:
                lifted = matmul(s, sec.T, p)
                out.append(Subspace.span(np.vstack([must_contain.basis, lifted]), p, n.dim))
        out.sort(key=Subspace.key)
        return out
    if not 0 <= dim <= n.dim:
        return []
    est = gaussian_binomial(n.dim, dim, p)
    if est > budget:
        raise BudgetExceeded(f"{est} candidates exceed budget {budget}")
    out = []
    for pivots, batch in iter_rref_cells(n.dim, dim, p):
        mask = invariant_batch_mask(batch, pivots, n.action, p)
        out.extend(Subspace(s, pivots, p, n.dim) for s in batch[mask])
    return out


def grassmannian_points_sc(
    a: ScAlgebra,
    n: ScModule,
    e,
    simples: SimplesRegistry,
    must_contain: Subspace | None = None,
    seed: int = 0,
    budget: int = DEFAULT_BUDGET,
) -> GrassmannianPointSet:
    """Submodules of a structure-constant module with dimension vector ``e``
    (multiplicities of the registered simples)."""
    from .modrep import submodule

    e = _as_dimvec(e, simples.labels)
    total = sum(e[s.label] * s.dim for s in simples)
    points = []
    for u in invariant_subspaces(n, total, must_contain, budget):
        sub, _ = submodule(n, u)
        if dimension_vector_sc(a, sub, simples, seed) == e:
            points.append(u)
    return GrassmannianPointSet(n, e, n.p, points, budget, {"total_dim": total})


@dataclass
class Lemma2Report:
    w: Subspace
    c: DimensionVector
    g: DimensionVector
    lifted: GrassmannianPointSet
    quotient_points: GrassmannianPointSet
    full_points: GrassmannianPointSet | None
    bijective: bool
    contains_w: bool

    @property
    def ok(self) -> bool:
        return self.bijective and self.contains_w

    def to_json(self) -> dict:
        return {
            "dim_ReN": self.w.dim,
            "c": self.c.to_json(),
            "g": self.g.to_json(),
            "count_g_plus_c": len(self.lifted),
            "count_quotient": len(self.quotient_points),
            "count_unconstrained": None if self.full_points is None else len(self.full_points),
            "bijective": self.bijective,
            "every_point_contains_ReN": self.contains_w,
            "ok": self.ok,
        }


def lemma2_transport(
    r: ScAlgebra,
    e_idem,
    n: ScModule,
    g,
    simples: SimplesRegistry,
    independent: bool = True,
    seed: int = 0,
    budget: int = DEFAULT_BUDGET,
) -> Lemma2Report:
    """Compare ``G_{g+c}(N)`` with ``G_g(N / ReN)`` where ``c = dim ReN``.

    ``ReN`` is the submodule generated by ``e N``.  With ``independent``
    the left side is enumerated with no containment constraint and each
    point is checked to contain ``ReN``; otherwise the left side is
    enumerated inside the constraint.  Both sides are enumerated separately
    and matched by ``U -> U / ReN``.
    """
    e_idem = np.asarray(e_idem, dtype=np.int64) % r.p
    if not r.is_idempotent(e_idem):
        raise ValueError("element is not idempotent")
    p = n.p
    g = _as_dimvec(g, simples.labels)
    e_act = n.element(e_idem)
    w = invariant_closure(e_act.T, n.action, p, n.dim)
    from .modrep import submodule

    c = dimension_vector_sc(r, submodule(n, w)[0], simples, seed)
    target = g + c
    if independent:
        full = grassmannian_points_sc(r, n, target, simples, None, seed, budget)
        contains = all(u.contains(w) for u in full)
        lifted = GrassmannianPointSet(n, target, p, [u for u in full if u.contains(w)], budget)
    else:
        full = None
        lifted = grassmannian_points_sc(r, n, target, simples, w, seed, budget)
        contains = all(u.contains(w) for u in lifted)
    quo, proj = quotient_module(n, w)
    qpts = grassmannian_points_sc(r, quo, g, simples, None, seed, budget)
    images = [Subspace.span(matmul(u.basis, proj.T, p), p, quo.dim) for u in lifted]
    bijective = len(set(images)) == len(images) and set(images) == set(qpts.points)
    if full is not None:
        bijective = bijective and len(full) == len(qpts)
    return Lemma2Report(w, c, g, lifted, qpts, full, bijective, contains)


@dataclass
class LineFamily:
    """``U_(l0:l1)`` spanned by ``b_1..b_t`` and ``l0 b_j + l1 b'_j`` (t < j <= i)."""

    fixed: np.ndarray
    moving: np.ndarray
    partners: np.ndarray
    p: int
    ambient_dim: int

    def member(self, l0: int, l1: int) -> Subspace:
        if l0 % self.p == 0 and l1 % self.p == 0:
            raise ValueError("(0:0) is not a point of P^1")
        mixed = (l0 * self.moving + l1 * self.partners) % self.p
        return Subspace.span(np.vstack([self.fixed, mixed]), self.p, self.ambient_dim)

    def members(self) -> list[Subspace]:
        pts = [(1, x) for x in range(self.p)] + [(0, 1)]
        return [self.member(*pt) for pt in pts]

    @property
    def start(self) -> Subspace:
        return self.member(1, 0)

    @property
    def end(self) -> Subspace:
        return self.member(0, 1)


def _extend_basis(start: Subspace, candidates: np.ndarray, target_dim: int) -> tuple[Subspace, list[np.ndarray]]:
    acc, added = start, []
    for row in candidates:
        if acc.dim == target_dim:
            break
        if not acc.contains_vectors(row):
            added.append(np.asarray(row, dtype=np.int64))
            acc = acc + Subspace.span(row, start.p, start.ambient_dim)
    return acc, added


def line_family(m: Representation, u: Subspace, soc: Subspace | None = None) -> LineFamily:
    """A P^1 of submodules joining ``u`` to a submodule inside the socle."""
    if not m.algebra.is_local_rsz():
        raise ValueError("line families are built for local radical-square-zero algebras")
    if not m.is_submodule(u):
        raise NotInvariantError("u is not a submodule")
    if soc is None:
        soc = socle_radical_top(m).soc
    i = u.dim
    if i > soc.dim:
        raise ValueError(f"dim U = {i} exceeds dim soc M = {soc.dim}; dualize first")
    soc_u = u & soc
    _, moving = _extend_basis(soc_u, u.basis, i)
    _, partners = _extend_basis(soc_u, soc.basis, i)
    d = m.dim
    fam = LineFamily(
        soc_u.basis.copy(),
        stack_rows(moving, d),
        stack_rows(partners, d),
        m.p,
        d,
    )
    ops = m.arrow_matrices()
    for mem in fam.members():
        if mem.dim != i or not mem.is_invariant(ops):
            raise AssertionError("line family member is not an i-dimensional submodule")
    assert fam.start == u and soc.contains(fam.end)
    return fam


@dataclass
class ConnectivityReport:
    graph: nx.Graph
    connected: bool
    dualized: bool
    i: int
    points: GrassmannianPointSet
    families_checked: int = 0

    def to_json(self) -> dict:
        return {
            "i": self.i,
            "dualized": self.dualized,
            "nodes": self.graph.number_of_nodes(),
            "edges": sorted([min(a, b), max(a, b)] for a, b in self.graph.edges),
            "connected": self.connected,
            "families_checked": self.families_checked,
        }


def annihilator_pairing(m: Representation, u: Subspace) -> Subspace:
    """``U -> U^perp``, a submodule of the dual with complementary dimension."""
    return u.annihilator()


def connectivity_check(m: Representation, i: int, q: int | None = None, budget: int = DEFAULT_BUDGET) -> ConnectivityReport:
    """Graph on ``G_i(M)(F_q)`` with pencil edges among socle points and
    line-family edges from every other point to its socle partner."""
    if q is not None and q != m.p:
        raise ValueError(f"module is defined over F_{m.p}, not F_{q}")
    if not m.algebra.is_local_rsz():
        raise ValueError("connectivity_check needs a local radical-square-zero algebra")
    d = m.dim
    if not 0 <= i <= d:
        raise ValueError(f"need 0 <= i <= {d}")
    soc = socle_radical_top(m).soc
    dualized = False
    if i > soc.dim:
        m, i, dualized = dual_module(m), d - i, True
        soc = socle_radical_top(m).soc
        if i > soc.dim:
            raise AssertionError("dual reduction failed: d - i exceeds dim soc M*")
    pts = grassmannian_points(m, [i], budget=budget)
    index = pts.index()
    graph = nx.Graph()
    graph.add_nodes_from(range(len(pts)))
    in_soc = [k for k, u in enumerate(pts.points) if soc.contains(u)]
    # pencils: socle points sharing an (i-1)-dimensional subspace
    if i >= 1:
        groups: dict[Subspace, list[int]] = {}
        for k in in_soc:
            u = pts.points[k]
            for h in enumerate_subspaces(d, i - 1, m.p, inside=u, budget=budget):
                groups.setdefault(h, []).append(k)
        for members in groups.values():
            for a_idx, a in enumerate(members):
                for b in members[a_idx + 1 :]:
                    graph.add_edge(a, b, kind="pencil")
    checked = 0
    soc_set = set(in_soc)
    for k, u in enumerate(pts.points):
        if k in soc_set:
            continue
        fam = line_family(m, u, soc)
        for mem in fam.members():
            if mem not in index:
                raise AssertionError("line family member missing from the point set")
        graph.add_edge(k, index[fam.end], kind="line")
        checked += 1
    connected = len(pts) <= 1 or nx.is_connected(graph)
    return ConnectivityReport(graph, connected, dualized, i, pts, checked)
