"""Quivers, length-homogeneous relations and bound quiver algebras.

Paths are tuples of arrow labels in traversal order.  The algebra product
follows the left-module convention: ``u * v`` means "first v, then u", so
the product of two paths is the concatenation ``v + u`` and a path acts on
a representation as the composite of its arrow maps read right to left.
With this convention ``e_w * A * e_v`` is spanned by the paths v -> w.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .ffla import Subspace, as_matrix, check_prime, rref, stack_rows
from .polyvar import HomPoly

MAX_PATH_LENGTH = 24
MAX_PATHS = 200_000

Path = tuple[str, ...]


@dataclass(frozen=True)
class Arrow:
    label: str
    source: str
    target: str


class Quiver:
    def __init__(self, vertices: Sequence[str], arrows: Iterable[Arrow | tuple]):
        self.vertices = tuple(str(v) for v in vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex labels")
        arrs = []
        for a in arrows:
            if not isinstance(a, Arrow):
                src, tgt, label = a
                a = Arrow(str(label), str(src), str(tgt))
            arrs.append(a)
        self.arrows = tuple(arrs)
        self._by_label = {a.label: a for a in self.arrows}
        if len(self._by_label) != len(self.arrows):
            raise ValueError("arrow labels must be unique")
        for a in self.arrows:
            if a.source not in self.vertices or a.target not in self.vertices:
                raise ValueError(f"arrow {a.label} has an unknown endpoint")

    def arrow(self, label: str) -> Arrow:
        return self._by_label[label]

    def source(self, path: Path, vertex: str | None = None) -> str:
        return self._by_label[path[0]].source if path else vertex

    def target(self, path: Path, vertex: str | None = None) -> str:
        return self._by_label[path[-1]].target if path else vertex

    def is_path(self, path: Path) -> bool:
        return all(
            self._by_label[a].target == self._by_label[b].source for a, b in zip(path, path[1:])
        )

    def paths_of_length(self, length: int) -> list[Path]:
        paths: list[Path] = [(a.label,) for a in self.arrows]
        if length == 0:
            return []
        for _ in range(length - 1):
            paths = [
                p + (a.label,) for p in paths for a in self.arrows if a.source == self.target(p)
            ]
            if len(paths) > MAX_PATHS:
                raise ValueError(f"more than {MAX_PATHS} paths of length {length}")
        return paths

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "arrows": [{"label": a.label, "source": a.source, "target": a.target} for a in self.arrows],
        }


@dataclass(frozen=True)
class Relation:
    """A linear combination of parallel paths of one common length."""

    terms: tuple[tuple[int, Path], ...]

    @classmethod
    def of(cls, terms: Iterable[tuple[int, Sequence[str]]]) -> "Relation":
        return cls(tuple((int(c), tuple(path)) for c, path in terms))

    @property
    def length(self) -> int:
        return len(self.terms[0][1]) if self.terms else 0

    def validate(self, quiver: Quiver, min_length: int = 2) -> None:
        if not self.terms:
            raise ValueError("empty relation")
        lengths = {len(path) for _, path in self.terms}
        if len(lengths) != 1:
            raise ValueError(f"relation mixes path lengths {sorted(lengths)}")
        if self.length < min_length:
            raise ValueError(f"relations must have length >= {min_length}")
        ends = set()
        for _, path in self.terms:
            if not quiver.is_path(path):
                raise ValueError(f"{path} is not a path")
            ends.add((quiver.source(path), quiver.target(path)))
        if len(ends) != 1:
            raise ValueError("relation paths are not parallel")

    def to_json(self) -> list[dict]:
        return [{"path": list(path), "coef": c} for c, path in self.terms]


@dataclass(frozen=True)
class BasisPath:
    source: str
    target: str
    path: Path

    @property
    def length(self) -> int:
        return len(self.path)

    def __str__(self) -> str:
        return "*".join(reversed(self.path)) if self.path else f"e_{self.source}"


class ScAlgebra:
    """A finite-dimensional algebra given by structure constants.

    ``table[i, j, k]`` is the coefficient of basis element k in the product
    ``b_i * b_j``.  ``elements`` optionally records what each basis element
    stands for (e.g. an endomorphism matrix).
    """

    def __init__(self, table: np.ndarray, unit: np.ndarray, p: int, labels=None, elements=None):
        self.p = check_prime(p)
        self.table = np.asarray(table, dtype=np.int64) % p
        n = self.table.shape[0]
        if self.table.shape != (n, n, n):
            raise ValueError("structure constants must have shape (n, n, n)")
        self.unit = np.asarray(unit, dtype=np.int64).reshape(n) % p
        self.labels = list(labels) if labels is not None else [f"b{i}" for i in range(n)]
        self.elements = elements

    @property
    def dim(self) -> int:
        return self.table.shape[0]

    def mul(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        return np.einsum("i,j,ijk->k", x, y, self.table) % self.p

    def left_matrix(self, x) -> np.ndarray:
        """Matrix of ``v -> x * v`` on column coordinate vectors."""
        return np.einsum("i,ijk->kj", np.asarray(x, dtype=np.int64), self.table) % self.p

    def right_matrix(self, x) -> np.ndarray:
        """Matrix of ``v -> v * x``."""
        return np.einsum("j,ijk->ki", np.asarray(x, dtype=np.int64), self.table) % self.p

    def basis_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return v

    def regular_actions(self) -> list[np.ndarray]:
        """Left multiplication by each basis element."""
        return [self.table[i].T.copy() for i in range(self.dim)]

    def is_associative(self) -> bool:
        # (b_i b_j) b_l  vs  b_i (b_j b_l)
        left = np.einsum("ijm,mlk->ijlk", self.table, self.table) % self.p
        right = np.einsum("jlm,imk->ijlk", self.table, self.table) % self.p
        return bool(np.array_equal(left, right))

    def has_unit(self) -> bool:
        eye = np.eye(self.dim, dtype=np.int64)
        return bool(
            np.array_equal(self.left_matrix(self.unit), eye)
            and np.array_equal(self.right_matrix(self.unit), eye)
        )

    def is_idempotent(self, x) -> bool:
        x = np.asarray(x, dtype=np.int64) % self.p
        return bool(np.array_equal(self.mul(x, x), x))

    def two_sided_ideal(self, gens) -> Subspace:
        """Two-sided ideal generated by the given elements (rows)."""
        gens = as_matrix(gens, self.p, self.dim)
        vecs = []
        for g in gens:
            for i in range(self.dim):
                left = self.mul(self.basis_vector(i), g)
                for j in range(self.dim):
                    vecs.append(self.mul(left, self.basis_vector(j)))
        return Subspace.span(stack_rows(vecs, self.dim), self.p, self.dim)

    def quotient(self, ideal: Subspace) -> tuple["ScAlgebra", np.ndarray]:
        """Quotient algebra by a two-sided ideal, with the projection matrix."""
        proj = ideal.projection()
        sec = ideal.section()
        m = proj.shape[0]
        table = np.einsum("ia,jb,abk,ck->ijc", sec.T, sec.T, self.table, proj) % self.p
        unit = proj @ self.unit % self.p
        labels = [self.labels[c] for c in ideal.complement_indices()]
        return ScAlgebra(table.reshape(m, m, m), unit, self.p, labels), proj

    def opposite(self) -> "ScAlgebra":
        return ScAlgebra(
            self.table.transpose(1, 0, 2).copy(), self.unit, self.p, self.labels, self.elements
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, ScAlgebra):
            return NotImplemented
        return (
            self.p == other.p
            and np.array_equal(self.table, other.table)
            and np.array_equal(self.unit, other.unit)
        )

    def __repr__(self) -> str:
        return f"ScAlgebra(dim={self.dim}, p={self.p})"

    def to_json(self) -> dict:
        return {"p": self.p, "labels": self.labels, "table": self.table.tolist(), "unit": self.unit.tolist()}


def opposite(a: ScAlgebra) -> ScAlgebra:
    return a.opposite()


class BoundAlgebra:
    """Path algebra of a quiver modulo length-homogeneous relations.

    The basis is computed degree by degree: the degree-l slice of the ideal
    is spanned by all ``u * r * v`` of total length l.  Path columns are
    ordered lexicographically descending before row reduction, so pivots
    land on the larger paths and each surviving class is represented by
    a lexicographically smallest path.
    """

    def __init__(
        self,
        quiver: Quiver,
        relations: Sequence[Relation],
        p: int,
        *,
        min_relation_length: int = 2,
        max_length: int = MAX_PATH_LENGTH,
        name: str = "",
    ):
        self.quiver = quiver
        self.p = check_prime(p)
        self.name = name
        self.min_relation_length = min_relation_length
        rels = []
        for r in relations:
            r = Relation(tuple((c % p, path) for c, path in r.terms if c % p))
            if not r.terms:
                continue
            r.validate(quiver, min_relation_length)
            rels.append(r)
        self.relations = tuple(rels)
        self._slices: dict[int, tuple[list[Path], np.ndarray, tuple[int, ...], list[int]]] = {}
        self._build(max_length)

    def _build(self, max_length: int) -> None:
        q = self.quiver
        basis = [BasisPath(v, v, ()) for v in q.vertices]
        self.top_degree = 0
        length = 1
        paths = q.paths_of_length(1)
        while paths:
            if length > max_length:
                raise ValueError(
                    f"algebra still nonzero in degree {length}; relations are not admissible"
                )
            paths.sort(reverse=True)
            col = {path: i for i, path in enumerate(paths)}
            rows = []
            for rel in self.relations:
                extra = length - rel.length
                if extra < 0:
                    continue
                rs, rt = q.source(rel.terms[0][1]), q.target(rel.terms[0][1])
                for a in range(extra + 1):
                    prefixes = self._paths_ending(a, rs)
                    suffixes = self._paths_starting(extra - a, rt)
                    for pre in prefixes:
                        for suf in suffixes:
                            row = np.zeros(len(paths), dtype=np.int64)
                            for c, path in rel.terms:
                                row[col[pre + path + suf]] += c
                            rows.append(row % self.p)
            if rows:
                red, _, piv = rref(np.array(rows), self.p)
            else:
                red, piv = np.zeros((0, len(paths)), dtype=np.int64), ()
            free = [i for i in range(len(paths)) if i not in set(piv)]
            if not free:
                break
            self._slices[length] = (paths, red, piv, free)
            survivors = sorted(paths[i] for i in free)
            basis.extend(BasisPath(q.source(s), q.target(s), s) for s in survivors)
            self.top_degree = length
            length += 1
            paths = q.paths_of_length(length)
        self.basis = basis
        self._index = {b.path if b.path else ("#", b.source): i for i, b in enumerate(basis)}
        self._build_table()

    def _paths_ending(self, length: int, vertex: str) -> list[Path]:
        if length == 0:
            return [()]
        return [p for p in self.quiver.paths_of_length(length) if self.quiver.target(p) == vertex]

    def _paths_starting(self, length: int, vertex: str) -> list[Path]:
        if length == 0:
            return [()]
        return [p for p in self.quiver.paths_of_length(length) if self.quiver.source(p) == vertex]

    def path_coordinates(self, path: Sequence[str]) -> np.ndarray:
        """Coordinates of the class of a (traversal-order) path."""
        path = tuple(path)
        v = np.zeros(self.dim, dtype=np.int64)
        if not path:
            raise ValueError("use idempotent() for trivial paths")
        if not self.quiver.is_path(path):
            return v
        length = len(path)
        if length not in self._slices:
            return v
        paths, red, piv, free = self._slices[length]
        vec = np.zeros(len(paths), dtype=np.int64)
        vec[paths.index(path)] = 1
        if len(piv):
            vec = (vec - vec[list(piv)] @ red) % self.p
        for i in free:
            if vec[i]:
                v[self._index[paths[i]]] = vec[i]
        return v

    def idempotent(self, vertex: str) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[self._index[("#", vertex)]] = 1
        return v

    def _build_table(self) -> None:
        n = len(self.basis)
        t = np.zeros((n, n, n), dtype=np.int64)
        for i, bi in enumerate(self.basis):
            for j, bj in enumerate(self.basis):
                # b_i * b_j: first b_j, then b_i
                if bj.target != bi.source:
                    continue
                if not bi.path:
                    t[i, j, j] = 1
                elif not bj.path:
                    t[i, j, i] = 1
                else:
                    t[i, j] = self.path_coordinates(bj.path + bi.path)
        self.table = t % self.p

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.quiver.vertices

    def degree_dims(self) -> list[int]:
        dims = [0] * (self.top_degree + 1)
        for b in self.basis:
            dims[b.length] += 1
        return dims

    def basis_between(self, source: str, target: str) -> list[int]:
        """Indices of basis elements spanning ``e_target A e_source``."""
        return [i for i, b in enumerate(self.basis) if b.source == source and b.target == target]

    def is_local_rsz(self) -> bool:
        return (
            len(self.vertices) == 1
            and all(a.source == a.target for a in self.quiver.arrows)
            and self.top_degree <= 1
        )

    def to_sc(self) -> ScAlgebra:
        unit = sum(self.idempotent(v) for v in self.vertices) % self.p
        return ScAlgebra(self.table.copy(), unit, self.p, [str(b) for b in self.basis])

    @property
    def sc(self) -> ScAlgebra:
        if not hasattr(self, "_sc"):
            self._sc = self.to_sc()
        return self._sc

    def to_json(self) -> dict:
        data = self.quiver.to_json()
        data["p"] = self.p
        data["relations"] = [r.to_json() for r in self.relations]
        if self.min_relation_length != 2:
            data["min_relation_length"] = self.min_relation_length
        return data

    def __repr__(self) -> str:
        return f"BoundAlgebra({self.name or 'unnamed'}, dim={self.dim}, p={self.p})"


def to_sc(a: BoundAlgebra) -> ScAlgebra:
    return a.to_sc()


def build_bound_algebra(quiver: Quiver, rels: Sequence[Relation], p: int, **kw) -> BoundAlgebra:
    return BoundAlgebra(quiver, rels, p, **kw)


def beilinson_arrow(i: int, segment: str) -> str:
    """Label of x_i on the segment ``"ba"`` (b -> a) or ``"cb"`` (c -> b)."""
    return f"x{i}_{segment}"


def beilinson_algebra(n: int, quadrics: Sequence[HomPoly], p: int) -> BoundAlgebra:
    """Beilinson quiver a <- b <- c (n+1 arrows each) with commutativity
    relations and each quadric read as a combination of length-2 paths."""
    vertices = ("a", "b", "c")
    arrows = [Arrow(beilinson_arrow(i, "ba"), "b", "a") for i in range(n + 1)]
    arrows += [Arrow(beilinson_arrow(i, "cb"), "c", "b") for i in range(n + 1)]
    quiver = Quiver(vertices, arrows)

    def mono_path(i: int, j: int) -> Path:
        return (beilinson_arrow(i, "cb"), beilinson_arrow(j, "ba"))

    rels = []
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            rels.append(Relation.of([(1, mono_path(i, j)), (-1, mono_path(j, i))]))
    for f in quadrics:
        if f.num_vars != n + 1:
            raise ValueError(f"quadric in {f.num_vars} variables, expected {n + 1}")
        f = f.mod(p)
        if not f.terms:
            continue
        if f.degree != 2:
            raise ValueError("beilinson_algebra needs quadrics (degree 2)")
        terms = []
        for exps, coef in f.terms.items():
            idx = [k for k, e in enumerate(exps) for _ in range(e)]
            terms.append((coef, mono_path(idx[0], idx[1])))
        rels.append(Relation.of(terms))
    return BoundAlgebra(quiver, rels, p, name=f"beilinson(n={n}, m={len(quadrics)})")


def local_rsz_algebra(n: int, p: int) -> BoundAlgebra:
    """k<T1..Tn> / (T1..Tn)^2: one vertex, n loops, all products zero."""
    if n < 1:
        raise ValueError("need at least one loop")
    labels = [f"T{i}" for i in range(1, n + 1)]
    quiver = Quiver(("*",), [Arrow(t, "*", "*") for t in labels])
    rels = [Relation.of([(1, (s, t))]) for s in labels for t in labels]
    return BoundAlgebra(quiver, rels, p, name=f"local_rsz({n})")


def load_algebra(data: Mapping) -> BoundAlgebra:
    """Parse the algebra file format (vertices, arrows, relations, p)."""
    arrows = [Arrow(str(a["label"]), str(a["source"]), str(a["target"])) for a in data["arrows"]]
    quiver = Quiver(data["vertices"], arrows)
    rels = [Relation.of([(t["coef"], t["path"]) for t in r]) for r in data.get("relations", [])]
    return BoundAlgebra(quiver, rels, int(data["p"]), min_relation_length=int(data.get("min_relation_length", 2)))


def standard_module(a: BoundAlgebra, kind: str, v: str):
    """Simple, indecomposable projective or indecomposable injective at ``v``."""
    from .modrep import Representation

    if v not in a.vertices:
        raise ValueError(f"unknown vertex {v!r}")
    p = a.p
    if kind == "simple":
        dims = {w: int(w == v) for w in a.vertices}
        return Representation(a, dims, {})
    if kind == "projective":
        # P(v) = A e_v, at w spanned by the basis paths v -> w
        at = {w: a.basis_between(v, w) for w in a.vertices}
        maps = {}
        for arr in a.quiver.arrows:
            src, tgt = at[arr.source], at[arr.target]
            m = np.zeros((len(tgt), len(src)), dtype=np.int64)
            alpha = a.path_coordinates((arr.label,))
            for k, j in enumerate(src):
                prod = a.sc.mul(alpha, a.sc.basis_vector(j))
                m[:, k] = prod[tgt]
            maps[arr.label] = m % p
        return Representation(a, {w: len(at[w]) for w in a.vertices}, maps)
    if kind == "injective":
        # I(v) = D(e_v A), at w the dual of the basis paths w -> v;
        # (alpha . phi)(r) = phi(r * alpha)
        at = {w: a.basis_between(w, v) for w in a.vertices}
        maps = {}
        for arr in a.quiver.arrows:
            src, tgt = at[arr.source], at[arr.target]
            m = np.zeros((len(tgt), len(src)), dtype=np.int64)
            alpha = a.path_coordinates((arr.label,))
            for jrow, j in enumerate(tgt):
                prod = a.sc.mul(a.sc.basis_vector(j), alpha)
                m[jrow, :] = prod[src]
            maps[arr.label] = m % p
        return Representation(a, {w: len(at[w]) for w in a.vertices}, maps)
    raise ValueError(f"unknown kind {kind!r}")
