"""Modules over bound quiver algebras and over structure-constant algebras.

Two views are supported:

* :class:`Representation` -- a vector space per vertex and a matrix per
  arrow.  Its total space is the concatenation of the vertex spaces in the
  algebra's vertex order.
* :class:`ScModule` -- action matrices, one per basis element of an
  :class:`~quivgrass.qalg.ScAlgebra`.

Module maps are matrices on total spaces (target dim x source dim).  Hom
spaces are stored as subspaces of the row-major flattened matrices, so the
subspace calculus of :mod:`quivgrass.ffla` applies to them directly.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import AlgebraMismatch, BudgetExceeded, NotInvariantError
from .ffla import (
    Subspace,
    factor_poly,
    identity,
    image,
    inverse,
    kernel,
    matmul,
    matrix_power,
    min_poly,
    poly_at_matrix,
    stack_rows,
)
from .qalg import BoundAlgebra, ScAlgebra


class DimensionVector(Mapping):
    """Multiplicities of simple modules, keyed by a label per simple."""

    def __init__(self, data: Mapping | Iterable[tuple], keys: Sequence | None = None):
        items = dict(data.items() if isinstance(data, Mapping) else data)
        if keys is not None:
            unknown = set(items) - set(keys)
            if unknown:
                raise KeyError(f"unknown simple labels {sorted(map(str, unknown))}")
            items = {k: int(items.get(k, 0)) for k in keys}
        for k, v in items.items():
            if int(v) < 0:
                raise ValueError(f"negative multiplicity at {k!r}")
        self._data = {k: int(v) for k, v in items.items()}

    def __getitem__(self, key):
        return self._data.get(key, 0)

    def __iter__(self):
        return iter(self._data)

    def __len__(self) -> int:
        return len(self._data)

    def _keys_with(self, other) -> list:
        return list(dict.fromkeys(list(self._data) + list(other)))

    def __add__(self, other: Mapping) -> "DimensionVector":
        return DimensionVector({k: self[k] + other.get(k, 0) for k in self._keys_with(other)})

    def __sub__(self, other: Mapping) -> "DimensionVector":
        return DimensionVector({k: self[k] - other.get(k, 0) for k in self._keys_with(other)})

    def __le__(self, other: Mapping) -> bool:
        return all(self[k] <= other.get(k, 0) for k in self._keys_with(other))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mapping):
            return NotImplemented
        return all(self[k] == other.get(k, 0) for k in self._keys_with(other))

    def __hash__(self) -> int:
        return hash(frozenset((k, v) for k, v in self._data.items() if v))

    def total(self) -> int:
        return sum(self._data.values())

    def __repr__(self) -> str:
        return f"DimensionVector({self._data})"

    def to_json(self) -> dict:
        return {str(k): v for k, v in self._data.items()}


class Representation:
    """A representation of a bound quiver.

    ``maps[label]`` has shape ``(dims[target], dims[source])``; arrows not
    listed act as zero.
    """

    def __init__(self, algebra: BoundAlgebra, dims: Mapping[str, int], maps: Mapping, check: bool = True):
        self.algebra = algebra
        self.p = algebra.p
        self.dims = {v: int(dims.get(v, 0)) for v in algebra.vertices}
        self.maps = {}
        for arr in algebra.quiver.arrows:
            shape = (self.dims[arr.target], self.dims[arr.source])
            m = maps.get(arr.label)
            if m is None:
                m = np.zeros(shape, dtype=np.int64)
            m = np.asarray(m, dtype=np.int64).reshape(shape) % self.p
            self.maps[arr.label] = m
        self.offsets = {}
        off = 0
        for v in algebra.vertices:
            self.offsets[v] = off
            off += self.dims[v]
        self.dim = off
        self._total_cache: dict = {}
        if check:
            bad = self.failed_relations()
            if bad:
                raise ValueError(f"relations not satisfied: {bad}")

    def block(self, v: str) -> slice:
        return slice(self.offsets[v], self.offsets[v] + self.dims[v])

    def path_matrix(self, path: Sequence[str]) -> np.ndarray:
        q = self.algebra.quiver
        m = identity(self.dims[q.source(path)])
        for label in path:
            m = matmul(self.maps[label], m, self.p)
        return m

    def failed_relations(self) -> list[int]:
        bad = []
        for k, rel in enumerate(self.algebra.relations):
            first = rel.terms[0][1]
            q = self.algebra.quiver
            acc = np.zeros((self.dims[q.target(first)], self.dims[q.source(first)]), dtype=np.int64)
            for c, path in rel.terms:
                acc = (acc + c * self.path_matrix(path)) % self.p
            if acc.any():
                bad.append(k)
        return bad

    def dimension_vector(self) -> DimensionVector:
        return DimensionVector(self.dims, keys=self.algebra.vertices)

    def arrow_total(self, label: str) -> np.ndarray:
        if label not in self._total_cache:
            arr = self.algebra.quiver.arrow(label)
            m = np.zeros((self.dim, self.dim), dtype=np.int64)
            m[self.block(arr.target), self.block(arr.source)] = self.maps[label]
            self._total_cache[label] = m
        return self._total_cache[label]

    def idempotent_total(self, v: str) -> np.ndarray:
        m = np.zeros((self.dim, self.dim), dtype=np.int64)
        s = self.block(v)
        m[s, s] = identity(self.dims[v])
        return m

    def arrow_matrices(self) -> list[np.ndarray]:
        return [self.arrow_total(a.label) for a in self.algebra.quiver.arrows]

    def generators(self) -> list[np.ndarray]:
        """Matrices generating the action: arrows and vertex idempotents."""
        return self.arrow_matrices() + [self.idempotent_total(v) for v in self.algebra.vertices]

    def basis_action(self, i: int) -> np.ndarray:
        b = self.algebra.basis[i]
        if not b.path:
            return self.idempotent_total(b.source)
        m = identity(self.dim)
        for label in b.path:
            m = matmul(self.arrow_total(label), m, self.p)
        return m

    def to_sc_module(self) -> "ScModule":
        acts = [self.basis_action(i) for i in range(self.algebra.dim)]
        return ScModule(self.algebra.sc, acts, check=False)

    def is_submodule(self, u: Subspace) -> bool:
        return u.is_invariant(self.generators())

    def restrict_vertex(self, u: Subspace, v: str) -> Subspace:
        """The part of a graded subspace lying at vertex ``v`` (block coordinates)."""
        s = self.block(v)
        rows = [r[s] for r in u.basis if r[s].any()]
        return Subspace.span(stack_rows(rows, self.dims[v]), self.p, self.dims[v])

    def subspace_dimension_vector(self, u: Subspace) -> DimensionVector:
        return DimensionVector({v: self.restrict_vertex(u, v).dim for v in self.algebra.vertices})

    def from_vertex_parts(self, parts: Mapping[str, Subspace]) -> Subspace:
        rows = []
        for v, sub in parts.items():
            for r in sub.basis:
                full = np.zeros(self.dim, dtype=np.int64)
                full[self.block(v)] = r
                rows.append(full)
        return Subspace.span(stack_rows(rows, self.dim), self.p, self.dim)

    def transpose(self) -> "Representation":
        return Representation(self.algebra, self.dims, {k: m.T.copy() for k, m in self.maps.items()}, check=False)

    def to_json(self) -> dict:
        return {
            "algebra": self.algebra.to_json(),
            "dims": dict(self.dims),
            "maps": {k: m.tolist() for k, m in self.maps.items()},
        }

    def __repr__(self) -> str:
        return f"Representation(dims={self.dims}, p={self.p})"


class ScModule:
    """A module over an :class:`ScAlgebra` given by one matrix per basis element.

    ``basis_maps`` optionally records what the coordinates mean (for a Hom
    module: the Hom basis matrices).
    """

    def __init__(self, algebra: ScAlgebra, action: Sequence, check: bool = True, basis_maps=None):
        self.algebra = algebra
        self.p = algebra.p
        acts = [np.asarray(a, dtype=np.int64) % self.p for a in action]
        if len(acts) != algebra.dim:
            raise ValueError(f"{len(acts)} action matrices for an algebra of dim {algebra.dim}")
        self.dim = acts[0].shape[0] if acts else 0
        self.action = [a.reshape(self.dim, self.dim) for a in acts]
        self.basis_maps = basis_maps
        if check and not self.is_valid():
            raise ValueError("action does not respect the multiplication table")

    @classmethod
    def zero(cls, algebra: ScAlgebra) -> "ScModule":
        return cls(algebra, [np.zeros((0, 0), dtype=np.int64)] * algebra.dim, check=False)

    def generators(self) -> list[np.ndarray]:
        return self.action

    def element(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        acc = np.zeros((self.dim, self.dim), dtype=np.int64)
        for c, a in zip(x, self.action):
            if c:
                acc = acc + int(c) * a
        return acc % self.p

    def is_valid(self) -> bool:
        if not np.array_equal(self.element(self.algebra.unit), identity(self.dim)):
            return False
        stack = np.array(self.action, dtype=np.int64).reshape(self.algebra.dim, self.dim, self.dim)
        prods = np.einsum("iab,jbc->ijac", stack, stack) % self.p
        table = np.einsum("ijk,kac->ijac", self.algebra.table, stack) % self.p
        return bool(np.array_equal(prods, table))

    def is_submodule(self, u: Subspace) -> bool:
        return u.is_invariant(self.action)

    def to_json(self) -> dict:
        return {"p": self.p, "dim": self.dim, "action": [a.tolist() for a in self.action]}

    def __repr__(self) -> str:
        return f"ScModule(dim={self.dim}, algebra_dim={self.algebra.dim}, p={self.p})"


Module = Representation | ScModule


def _same_algebra(x: Module, y: Module) -> None:
    if isinstance(x, Representation) and isinstance(y, Representation):
        if x.algebra is not y.algebra and x.algebra.to_json() != y.algebra.to_json():
            raise AlgebraMismatch("representations over different algebras")
        return
    if isinstance(x, ScModule) and isinstance(y, ScModule):
        if x.algebra is not y.algebra and x.algebra != y.algebra:
            raise AlgebraMismatch("modules over different algebras")
        return
    raise AlgebraMismatch("cannot mix representations and structure-constant modules")


@dataclass
class HomSpace:
    """Module maps ``source -> target`` as a subspace of flattened matrices."""

    source: Module
    target: Module
    subspace: Subspace

    @property
    def dim(self) -> int:
        return self.subspace.dim

    @property
    def shape(self) -> tuple[int, int]:
        return (self.target.dim, self.source.dim)

    @property
    def basis(self) -> list[np.ndarray]:
        return [r.reshape(self.shape) for r in self.subspace.basis]

    def contains(self, phi) -> bool:
        return self.subspace.contains_vectors(np.asarray(phi).ravel())

    def coordinates(self, phi) -> np.ndarray:
        return self.subspace.coordinates(np.asarray(phi).ravel())[0]

    def element(self, coeffs) -> np.ndarray:
        c = np.asarray(coeffs, dtype=np.int64)
        return (c @ self.subspace.basis % self.subspace.p).reshape(self.shape)


def solve_intertwiners(src: Sequence[np.ndarray], tgt: Sequence[np.ndarray], p: int, dx: int, dy: int) -> Subspace:
    """All ``phi`` (dy x dx) with ``phi @ src[i] == tgt[i] @ phi``, flattened."""
    if dx == 0 or dy == 0:
        return Subspace.zero(dx * dy, p)
    eqs = []
    eye_x, eye_y = identity(dx), identity(dy)
    for a, b in zip(src, tgt):
        eqs.append((np.kron(eye_y, np.asarray(a).T) - np.kron(np.asarray(b), eye_x)) % p)
    if not eqs:
        return Subspace.full(dx * dy, p)
    return kernel(np.vstack(eqs), p)


def _rep_hom(x: Representation, y: Representation) -> Subspace:
    p = x.p
    verts = x.algebra.vertices
    off, total = {}, 0
    for v in verts:
        off[v] = total
        total += y.dims[v] * x.dims[v]
    n_flat = y.dim * x.dim
    if total == 0:
        return Subspace.zero(n_flat, p)
    eqs = []
    for arr in x.algebra.quiver.arrows:
        s, t = arr.source, arr.target
        rows = y.dims[t] * x.dims[s]
        if rows == 0:
            continue
        e = np.zeros((rows, total), dtype=np.int64)
        ct = slice(off[t], off[t] + y.dims[t] * x.dims[t])
        cs = slice(off[s], off[s] + y.dims[s] * x.dims[s])
        # phi_t X_a - Y_a phi_s = 0
        e[:, ct] += np.kron(identity(y.dims[t]), x.maps[arr.label].T)
        e[:, cs] -= np.kron(y.maps[arr.label], identity(x.dims[s]))
        eqs.append(e % p)
    ker = kernel(np.vstack(eqs), p) if eqs else Subspace.full(total, p)
    flats = []
    for vec in ker.basis:
        phi = np.zeros((y.dim, x.dim), dtype=np.int64)
        for v in verts:
            blk = vec[off[v] : off[v] + y.dims[v] * x.dims[v]].reshape(y.dims[v], x.dims[v])
            phi[y.block(v), x.block(v)] = blk
        flats.append(phi.ravel())
    return Subspace.span(stack_rows(flats, n_flat), p, n_flat)


def hom_space(x: Module, y: Module) -> HomSpace:
    """Basis of all module maps ``x -> y``."""
    _same_algebra(x, y)
    if isinstance(x, Representation):
        sub = _rep_hom(x, y)
    else:
        sub = solve_intertwiners(x.action, y.action, x.p, x.dim, y.dim)
    return HomSpace(x, y, sub)


def is_module_map(phi: np.ndarray, x: Module, y: Module) -> bool:
    p = x.p
    return all(
        np.array_equal(matmul(phi, a, p), matmul(b, phi, p))
        for a, b in zip(x.generators(), y.generators())
    )


def end_algebra(d: Module) -> tuple[ScAlgebra, list[np.ndarray]]:
    """``End(d)^op`` on the computed Hom basis.

    Basis element i of the result is the endomorphism ``phi_i``; the
    product is ``r_i * r_j = phi_j o phi_i``.
    """
    hom = hom_space(d, d)
    basis = hom.basis
    n = len(basis)
    table = np.zeros((n, n, n), dtype=np.int64)
    for i, fi in enumerate(basis):
        for j, fj in enumerate(basis):
            table[i, j] = hom.coordinates(matmul(fj, fi, d.p))
    unit = hom.coordinates(identity(d.dim)) if d.dim else np.zeros(0, dtype=np.int64)
    labels = [f"phi{i}" for i in range(n)]
    return ScAlgebra(table, unit, d.p, labels, elements=basis), basis


def hom_module(d: Module, y: Module, end: tuple[ScAlgebra, list[np.ndarray]] | None = None) -> ScModule:
    """``Hom(d, y)`` as a left module over ``End(d)^op`` (precomposition)."""
    r, ends = end if end is not None else end_algebra(d)
    hom = hom_space(d, y)
    psi = hom.basis
    acts = []
    for phi in ends:
        m = np.zeros((hom.dim, hom.dim), dtype=np.int64)
        for col, f in enumerate(psi):
            m[:, col] = hom.coordinates(matmul(f, phi, d.p))
        acts.append(m)
    if hom.dim == 0:
        acts = [np.zeros((0, 0), dtype=np.int64) for _ in ends]
    mod = ScModule(r, acts, check=True, basis_maps=psi)
    mod.hom = hom
    return mod


def compositions(first: HomSpace, second: HomSpace) -> Subspace:
    """Span of ``h o g`` for g in ``first`` and h in ``second``."""
    x, y = first.source, second.target
    n = y.dim * x.dim
    vecs = [matmul(h, g, x.p).ravel() for g in first.basis for h in second.basis]
    return Subspace.span(stack_rows(vecs, n), x.p, n)


def hom_through(x: Module, c: Module, y: Module) -> Subspace:
    """Maps ``x -> y`` factoring through a module in add(c)."""
    return compositions(hom_space(x, c), hom_space(c, y))


def direct_sum_with_maps(modules: Sequence[Module], algebra=None) -> tuple[Module, list[np.ndarray]]:
    """Direct sum together with the inclusion matrix of each summand."""
    if not modules:
        if algebra is None:
            raise ValueError("empty direct sum needs an algebra")
        if isinstance(algebra, BoundAlgebra):
            return Representation(algebra, {}, {}), []
        return ScModule.zero(algebra), []
    first = modules[0]
    if isinstance(first, Representation):
        alg = first.algebra
        dims = {v: sum(m.dims[v] for m in modules) for v in alg.vertices}
        maps = {}
        for arr in alg.quiver.arrows:
            blocks = [m.maps[arr.label] for m in modules]
            maps[arr.label] = _block_diag(blocks, dims[arr.target], dims[arr.source])
        total = Representation(alg, dims, maps, check=False)
        incls = []
        inner = {v: 0 for v in alg.vertices}
        for m in modules:
            inc = np.zeros((total.dim, m.dim), dtype=np.int64)
            for v in alg.vertices:
                k = m.dims[v]
                start = total.offsets[v] + inner[v]
                inc[start : start + k, m.block(v)] = identity(k)
                inner[v] += k
            incls.append(inc)
        return total, incls
    dim = sum(m.dim for m in modules)
    acts = [_block_diag([m.action[i] for m in modules], dim, dim) for i in range(first.algebra.dim)]
    total = ScModule(first.algebra, acts, check=False)
    incls, start = [], 0
    for m in modules:
        inc = np.zeros((dim, m.dim), dtype=np.int64)
        inc[start : start + m.dim, :] = identity(m.dim)
        incls.append(inc)
        start += m.dim
    return total, incls


def _block_diag(blocks: Sequence[np.ndarray], rows: int, cols: int) -> np.ndarray:
    out = np.zeros((rows, cols), dtype=np.int64)
    r = c = 0
    for b in blocks:
        out[r : r + b.shape[0], c : c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def direct_sum(*modules: Module) -> Module:
    return direct_sum_with_maps(modules)[0]


def controlling_summand(xs: Sequence[Module], c_list: Sequence[Module], algebra=None) -> Module:
    """A single module C in add(c_list) through which every map that
    factors through add(c_list) already factors: the sum of the list."""
    if algebra is None:
        algebra = xs[0].algebra if xs else (c_list[0].algebra if c_list else None)
    c, _ = direct_sum_with_maps(list(c_list), algebra)
    for xi in xs:
        for xj in xs:
            through_c = hom_through(xi, c, xj)
            for cp in c_list:
                if not through_c.contains(hom_through(xi, cp, xj)):
                    raise AssertionError("controlling summand misses a factor-through map")
    return c


def submodule(m: Module, u: Subspace) -> tuple[Module, np.ndarray]:
    """The submodule ``u`` as a module in its own right, with its inclusion."""
    if not m.is_submodule(u):
        raise NotInvariantError("subspace is not a submodule")
    p = m.p
    if isinstance(m, Representation):
        parts = {v: m.restrict_vertex(u, v) for v in m.algebra.vertices}
        if sum(s.dim for s in parts.values()) != u.dim:
            raise NotInvariantError("subspace is not graded by vertices")
        maps = {}
        for arr in m.algebra.quiver.arrows:
            src, tgt = parts[arr.source], parts[arr.target]
            img = matmul(m.maps[arr.label], src.basis.T, p)
            maps[arr.label] = img[list(tgt.pivots), :] if tgt.dim else np.zeros((0, src.dim), dtype=np.int64)
        sub = Representation(m.algebra, {v: s.dim for v, s in parts.items()}, maps, check=False)
        inc = np.zeros((m.dim, sub.dim), dtype=np.int64)
        for v, s in parts.items():
            inc[m.block(v), sub.block(v)] = s.basis.T
        return sub, inc
    b = u.basis
    acts = [matmul(a, b.T, p)[list(u.pivots), :] for a in m.action]
    if u.dim == 0:
        acts = [np.zeros((0, 0), dtype=np.int64) for _ in m.action]
    return ScModule(m.algebra, acts, check=False), b.T.copy()


def quotient_module(m: Module, u: Subspace) -> tuple[Module, np.ndarray]:
    """``m / u`` on the standard complement, with the projection matrix."""
    if not m.is_submodule(u):
        raise NotInvariantError("subspace is not a submodule")
    p = m.p
    proj, sec = u.projection(), u.section()
    if isinstance(m, Representation):
        free = u.complement_indices()
        dims = {v: sum(1 for c in free if m.offsets[v] <= c < m.offsets[v] + m.dims[v]) for v in m.algebra.vertices}
        q = Representation(m.algebra, dims, {}, check=False)
        maps = {}
        for arr in m.algebra.quiver.arrows:
            big = matmul(matmul(proj, m.arrow_total(arr.label), p), sec, p)
            maps[arr.label] = big[q.block(arr.target), q.block(arr.source)]
        return Representation(m.algebra, dims, maps, check=False), proj
    acts = [matmul(matmul(proj, a, p), sec, p) for a in m.action]
    return ScModule(m.algebra, acts, check=False), proj


@dataclass
class Layers:
    soc: Subspace
    rad: Subspace
    top: Module


def radical_operators(m: Module) -> list[np.ndarray]:
    """Matrices spanning the action of the algebra's radical on ``m``."""
    if isinstance(m, Representation):
        return m.arrow_matrices()
    from .meataxe import algebra_radical

    jac = algebra_radical(m.algebra)
    return [m.element(x) for x in jac.basis]


def socle_radical_top(m: Module) -> Layers:
    ops = radical_operators(m)
    if ops and m.dim:
        rad = image(np.hstack(ops), m.p)
        soc = kernel(np.vstack(ops), m.p)
    else:
        rad, soc = Subspace.zero(m.dim, m.p), Subspace.full(m.dim, m.p)
    if isinstance(m, Representation) and m.algebra.is_local_rsz() and not soc.contains(rad):
        raise AssertionError("rad M not inside soc M for a radical-square-zero algebra")
    top, _ = quotient_module(m, rad)
    return Layers(soc=soc, rad=rad, top=top)


def dual_module(m: Representation) -> Representation:
    """``Hom_k(m, k)`` for a module over a local radical-square-zero algebra."""
    if not isinstance(m, Representation) or not m.algebra.is_local_rsz():
        raise ValueError("dual_module is only defined here for local radical-square-zero algebras")
    return m.transpose()


def radical_filtration(m: Module) -> list[int]:
    """Dimensions of the layers ``rad^k m / rad^(k+1) m``."""
    ops = radical_operators(m)
    cur = Subspace.full(m.dim, m.p)
    layers = []
    while cur.dim:
        nxt = Subspace.span(
            np.vstack([matmul(cur.basis, o.T, m.p) for o in ops]) if ops else np.zeros((0, m.dim)),
            m.p,
            m.dim,
        )
        layers.append(cur.dim - nxt.dim)
        if nxt == cur:
            break
        cur = nxt
    return layers


@dataclass
class Summand:
    module: Module
    inclusion: np.ndarray


def _end_sc(m: Module) -> tuple[ScAlgebra, HomSpace]:
    """End(m) with the composition product (not the opposite)."""
    hom = hom_space(m, m)
    basis = hom.basis
    n = len(basis)
    table = np.zeros((n, n, n), dtype=np.int64)
    for i, fi in enumerate(basis):
        for j, fj in enumerate(basis):
            table[i, j] = hom.coordinates(matmul(fi, fj, m.p))
    return ScAlgebra(table, hom.coordinates(identity(m.dim)), m.p, elements=basis), hom


def end_radical(m: Module, seed: int = 0) -> Subspace:
    """Jacobson radical of End(m) as a subspace of flattened matrices."""
    from .meataxe import algebra_radical

    alg, hom = _end_sc(m)
    if alg.dim == 1:
        return Subspace.zero(m.dim * m.dim, m.p)
    jac = algebra_radical(alg, seed=seed)
    vecs = [hom.element(c).ravel() for c in jac.basis]
    return Subspace.span(stack_rows(vecs, m.dim * m.dim), m.p, m.dim * m.dim)


def is_local_end(m: Module, seed: int = 0) -> bool:
    """True iff End(m) is local, i.e. ``m`` is indecomposable."""
    from .meataxe import algebra_radical, simples_of

    alg, _ = _end_sc(m)
    if alg.dim == 1:
        return True
    reg = simples_of(alg, seed=seed)
    if len(reg) != 1:
        return False
    jac = algebra_radical(alg, reg, seed=seed)
    return alg.dim - jac.dim == reg[0].dim


def _fitting_split(m: Module, phi: np.ndarray) -> tuple[Subspace, Subspace] | None:
    p = m.p
    for g in factor_poly(min_poly(phi, p), p):
        big = matrix_power(poly_at_matrix(g, phi, p), m.dim, p)
        ker = kernel(big, p)
        if 0 < ker.dim < m.dim:
            return ker, image(big, p)
    return None


def decompose(m: Module, seed: int = 0, budget: int = 200) -> list[Summand]:
    """Split ``m`` into indecomposable summands by Fitting decomposition.

    Random endomorphisms (drawn from a seeded generator) are split along
    the irreducible factors of their minimal polynomials.  A summand is
    declared indecomposable only after its endomorphism ring is certified
    local.
    """
    rng = np.random.default_rng(seed)
    return _decompose(m, identity(m.dim), rng, budget, seed)


def _decompose(m: Module, inc: np.ndarray, rng, budget: int, seed: int) -> list[Summand]:
    if m.dim == 0:
        return []
    hom = hom_space(m, m)
    if hom.dim == 1:
        return [Summand(m, inc)]
    checked_local = False
    for attempt in range(budget):
        phi = hom.element(rng.integers(0, m.p, hom.dim))
        split = _fitting_split(m, phi)
        if split is not None:
            out = []
            for part in split:
                sub, sub_inc = submodule(m, part)
                out.extend(_decompose(sub, matmul(inc, sub_inc, m.p), rng, budget, seed))
            return out
        if attempt == 7 and not checked_local:
            checked_local = True
            if is_local_end(m, seed):
                return [Summand(m, inc)]
    if not checked_local and is_local_end(m, seed):
        return [Summand(m, inc)]
    raise BudgetExceeded(f"no splitting endomorphism found in {budget} tries")


def find_isomorphism(x: Module, y: Module, seed: int = 0) -> np.ndarray | None:
    """An isomorphism between indecomposable modules, or None."""
    if x.dim != y.dim:
        return None
    if x.dim == 0:
        return np.zeros((0, 0), dtype=np.int64)
    hxy, hyx = hom_space(x, y), hom_space(y, x)
    if hxy.dim == 0 or hyx.dim == 0:
        return None
    jac = end_radical(x, seed)
    for f in hxy.basis:
        for g in hyx.basis:
            if not jac.contains_vectors(matmul(g, f, x.p).ravel()):
                return f
    return None


def hom_radical(x: Module, y: Module, seed: int = 0) -> Subspace:
    """rad(x, y): maps with no invertible component between indecomposable summands."""
    _same_algebra(x, y)
    p = x.p
    n = y.dim * x.dim
    xs, ys = decompose(x, seed), decompose(y, seed)
    if not xs or not ys:
        return Subspace.zero(n, p)
    px = np.hstack([s.inclusion for s in xs])
    px_inv = inverse(px, p)
    projs, start = [], 0
    for s in xs:
        projs.append(px_inv[start : start + s.module.dim, :])
        start += s.module.dim
    vecs = []
    for xi, pi in zip(xs, projs):
        for yj in ys:
            h = hom_space(xi.module, yj.module)
            if h.dim == 0:
                continue
            theta = find_isomorphism(xi.module, yj.module, seed)
            if theta is None:
                blocks = h.basis
            else:
                jac = end_radical(xi.module, seed)
                d = xi.module.dim
                blocks = [matmul(theta, j.reshape(d, d), p) for j in jac.basis]
            for blk in blocks:
                vecs.append(matmul(matmul(yj.inclusion, blk, p), pi, p).ravel())
    return Subspace.span(stack_rows(vecs, n), p, n)


def load_representation(data: Mapping, algebra: BoundAlgebra | None = None, p: int | None = None) -> Representation:
    """Parse ``{"algebra": {...}, "dims": {...}, "maps": {...}}``.

    When ``p`` is given, the algebra and integer matrices are read mod p.
    """
    from .qalg import load_algebra

    if algebra is None:
        alg_data = dict(data["algebra"])
        if p is not None:
            alg_data["p"] = p
        algebra = load_algebra(alg_data)
    return Representation(algebra, data["dims"], {k: np.array(v, dtype=np.int64) for k, v in data.get("maps", {}).items()})
