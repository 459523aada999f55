"""Exact linear algebra over prime fields F_p.

Matrices are plain ``numpy.int64`` arrays whose entries are kept reduced
into ``[0, p)``.  Subspaces of ``F_p^d`` are stored by their reduced
row-echelon basis, which makes equality of subspaces an entrywise
comparison.
"""
from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np
from sympy import Poly, isprime, symbols

from .errors import BudgetExceeded

DEFAULT_BUDGET = 10**6

_CHUNK = 1 << 15


@lru_cache(maxsize=None)
def check_prime(p: int) -> int:
    if not isinstance(p, (int, np.integer)) or not isprime(int(p)):
        raise ValueError(f"modulus {p!r} is not prime")
    return int(p)


def as_matrix(m, p: int, cols: int | None = None) -> np.ndarray:
    """Coerce ``m`` to a reduced 2-d int64 array."""
    a = np.asarray(m, dtype=np.int64)
    if a.size == 0:
        if a.ndim == 2:
            return a.reshape(a.shape).astype(np.int64)
        return np.zeros((0, cols or 0), dtype=np.int64)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    return a % p


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return (np.asarray(a, dtype=np.int64) @ np.asarray(b, dtype=np.int64)) % p


def stack_rows(rows, width: int) -> np.ndarray:
    """Rows as a ``(len(rows), width)`` int64 array; safe for no rows or zero width."""
    rows = list(rows)
    return np.array(rows, dtype=np.int64).reshape(len(rows), width)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def rref(m, p: int) -> tuple[np.ndarray, int, tuple[int, ...]]:
    """Reduced row-echelon form of ``m`` over F_p.

    Returns the nonzero rows of the RREF, the rank and the pivot columns.
    """
    check_prime(p)
    a = as_matrix(m, p).copy()
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        others = np.flatnonzero(col)
        if others.size:
            a[others] = (a[others] - np.outer(col[others], a[r])) % p
        pivots.append(c)
        r += 1
    return a[:r], r, tuple(pivots)


def rank(m, p: int) -> int:
    return rref(m, p)[1]


def inverse(m, p: int) -> np.ndarray:
    a = as_matrix(m, p)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    r, rk, _ = rref(np.hstack([a, identity(n)]), p)
    if rk < n or not np.array_equal(r[:n, :n], identity(n)):
        raise ValueError("matrix is singular")
    return r[:, n:]


def is_invertible(m, p: int) -> bool:
    a = as_matrix(m, p)
    return a.shape[0] == a.shape[1] and rank(a, p) == a.shape[0]


def matrix_power(a: np.ndarray, k: int, p: int) -> np.ndarray:
    result = identity(a.shape[0])
    base = as_matrix(a, p)
    while k:
        if k & 1:
            result = matmul(result, base, p)
        base = matmul(base, base, p)
        k >>= 1
    return result


class Subspace:
    """A subspace of ``F_p^d`` held by its reduced row-echelon basis.

    Two instances compare equal exactly when their RREF bases agree entry
    by entry, so subspaces can be hashed, deduplicated and sorted.
    """

    __slots__ = ("p", "ambient_dim", "basis", "pivots", "_hash")

    def __init__(self, basis: np.ndarray, pivots: Sequence[int], p: int, ambient_dim: int):
        # trusted constructor; use Subspace.span for arbitrary input
        self.p = p
        self.ambient_dim = ambient_dim
        self.pivots = tuple(int(c) for c in pivots)
        b = np.asarray(basis, dtype=np.int64).reshape(len(self.pivots), ambient_dim)
        b.setflags(write=False)
        self.basis = b
        self._hash = None

    @classmethod
    def span(cls, vectors, p: int, ambient_dim: int) -> "Subspace":
        a = as_matrix(vectors, p, ambient_dim)
        if a.shape[0] == 0:
            return cls.zero(ambient_dim, p)
        if a.shape[1] != ambient_dim:
            raise ValueError(f"vectors have length {a.shape[1]}, expected {ambient_dim}")
        r, _, piv = rref(a, p)
        return cls(r, piv, p, ambient_dim)

    @classmethod
    def zero(cls, d: int, p: int) -> "Subspace":
        return cls(np.zeros((0, d), dtype=np.int64), (), p, d)

    @classmethod
    def full(cls, d: int, p: int) -> "Subspace":
        return cls(identity(d), range(d), p, d)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def key(self) -> tuple:
        """Canonical sort key: pivot pattern first, then RREF entries."""
        return (self.dim, self.pivots, tuple(self.basis.ravel().tolist()))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.p == other.p
            and self.ambient_dim == other.ambient_dim
            and self.pivots == other.pivots
            and np.array_equal(self.basis, other.basis)
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.p, self.ambient_dim, self.pivots, self.basis.tobytes()))
        return self._hash

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, p={self.p}, basis={self.basis.tolist()})"

    def _compatible(self, other: "Subspace") -> None:
        if self.p != other.p or self.ambient_dim != other.ambient_dim:
            raise ValueError(
                f"ambient mismatch: F_{self.p}^{self.ambient_dim} vs F_{other.p}^{other.ambient_dim}"
            )

    def residual(self, vectors) -> np.ndarray:
        """Reduce rows of ``vectors`` modulo this subspace."""
        v = as_matrix(vectors, self.p, self.ambient_dim)
        if self.dim == 0:
            return v
        return (v - v[:, list(self.pivots)] @ self.basis) % self.p

    def contains_vectors(self, vectors) -> bool:
        return not self.residual(vectors).any()

    def contains(self, other: "Subspace") -> bool:
        self._compatible(other)
        return self.contains_vectors(other.basis)

    def coordinates(self, vectors) -> np.ndarray:
        """Coordinates of row vectors in the RREF basis (rows in, rows out)."""
        v = as_matrix(vectors, self.p, self.ambient_dim)
        if self.residual(v).any():
            raise ValueError("vector not in subspace")
        return v[:, list(self.pivots)]

    def __add__(self, other: "Subspace") -> "Subspace":
        self._compatible(other)
        return Subspace.span(np.vstack([self.basis, other.basis]), self.p, self.ambient_dim)

    def intersection(self, other: "Subspace") -> "Subspace":
        self._compatible(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient_dim, self.p)
        # x A = y B  <=>  (x, y) in ker [A; -B]^T
        stacked = np.vstack([self.basis, (-other.basis) % self.p]).T
        ker = kernel(stacked, self.p)
        combos = ker.basis[:, : self.dim]
        return Subspace.span(matmul(combos, self.basis, self.p), self.p, self.ambient_dim)

    __and__ = intersection

    def complement_indices(self) -> list[int]:
        piv = set(self.pivots)
        return [c for c in range(self.ambient_dim) if c not in piv]

    def projection(self) -> np.ndarray:
        """Matrix of F_p^d -> F_p^d / self in the non-pivot coordinates.

        Column-vector convention: shape ``(d - dim, d)``.
        """
        free = self.complement_indices()
        proj = np.zeros((len(free), self.ambient_dim), dtype=np.int64)
        for r, c in enumerate(free):
            proj[r, c] = 1
            for i, pc in enumerate(self.pivots):
                proj[r, pc] = (-self.basis[i, c]) % self.p
        return proj

    def section(self) -> np.ndarray:
        """Inclusion of the standard complement (non-pivot unit vectors), shape ``(d, d - dim)``."""
        free = self.complement_indices()
        sec = np.zeros((self.ambient_dim, len(free)), dtype=np.int64)
        for r, c in enumerate(free):
            sec[c, r] = 1
        return sec

    def annihilator(self) -> "Subspace":
        """Linear forms (as row vectors) vanishing on this subspace."""
        if self.dim == 0:
            return Subspace.full(self.ambient_dim, self.p)
        return kernel(self.basis, self.p)

    def image(self, matrix) -> "Subspace":
        """Image under a linear map given by a matrix acting on column vectors."""
        a = as_matrix(matrix, self.p)
        return Subspace.span(matmul(self.basis, a.T, self.p), self.p, a.shape[0])

    def is_invariant(self, operators: Iterable[np.ndarray]) -> bool:
        for op in operators:
            if self.dim and self.residual(matmul(self.basis, np.asarray(op).T, self.p)).any():
                return False
        return True

    def to_json(self) -> dict:
        return {"p": self.p, "ambient_dim": self.ambient_dim, "basis": self.basis.tolist()}

    @classmethod
    def from_json(cls, data: dict) -> "Subspace":
        return cls.span(data["basis"], data["p"], data["ambient_dim"])


def kernel(m, p: int) -> Subspace:
    """Right null space ``{v : m v = 0}``."""
    a = as_matrix(m, p)
    cols = a.shape[1]
    if a.shape[0] == 0:
        return Subspace.full(cols, p)
    r, rk, piv = rref(a, p)
    free = [c for c in range(cols) if c not in set(piv)]
    vecs = np.zeros((len(free), cols), dtype=np.int64)
    for k, f in enumerate(free):
        vecs[k, f] = 1
        for i, pc in enumerate(piv):
            vecs[k, pc] = (-r[i, f]) % p
    return Subspace.span(vecs, p, cols)


def image(m, p: int) -> Subspace:
    """Column space of ``m``."""
    a = as_matrix(m, p)
    return Subspace.span(a.T, p, a.shape[0])


def subspace_ops(a: Subspace, b: Subspace) -> dict:
    """Sum, intersection and containment ``b <= a`` of two subspaces."""
    return {"sum": a + b, "intersection": a & b, "contains": a.contains(b)}


def gaussian_binomial(d: int, k: int, q: int) -> int:
    if k < 0 or k > d:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (d - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def _free_positions(pivots: tuple[int, ...], d: int) -> list[tuple[int, int]]:
    piv = set(pivots)
    return [(i, j) for i, c in enumerate(pivots) for j in range(c + 1, d) if j not in piv]


def iter_rref_cells(d: int, k: int, p: int) -> Iterator[tuple[tuple[int, ...], np.ndarray]]:
    """All k-dimensional subspaces of F_p^d as batches of RREF matrices.

    Yields ``(pivots, batch)`` with ``batch`` of shape ``(count, k, d)``;
    cells come in lexicographic pivot order and each cell lists its free
    entries lexicographically, in chunks.
    """
    for pivots in itertools.combinations(range(d), k):
        base = np.zeros((k, d), dtype=np.int64)
        for i, c in enumerate(pivots):
            base[i, c] = 1
        free = _free_positions(pivots, d)
        total = p ** len(free)
        rows = np.array([i for i, _ in free], dtype=np.intp)
        cols = np.array([j for _, j in free], dtype=np.intp)
        weights = p ** np.arange(len(free) - 1, -1, -1, dtype=np.int64)
        for start in range(0, total, _CHUNK):
            idx = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
            batch = np.broadcast_to(base, (idx.size, k, d)).copy()
            if free:
                digits = (idx[:, None] // weights[None, :]) % p
                batch[:, rows, cols] = digits
            yield pivots, batch


def _canonical_subspaces(d: int, k: int, p: int) -> Iterator[Subspace]:
    for pivots, batch in iter_rref_cells(d, k, p):
        for m in batch:
            yield Subspace(m, pivots, p, d)


def enumerate_subspaces(
    d: int,
    k: int,
    p: int,
    containing: Subspace | None = None,
    inside: Subspace | None = None,
    budget: int = DEFAULT_BUDGET,
) -> list[Subspace]:
    """All k-dimensional subspaces W with ``containing <= W <= inside``.

    Output is in canonical order (pivot pattern, then RREF entries).  The
    count is estimated with a Gaussian binomial before any work is done and
    ``BudgetExceeded`` is raised if it is larger than ``budget``.
    """
    check_prime(p)
    if not 0 <= k <= d:
        raise ValueError(f"need 0 <= k <= d, got k={k}, d={d}")
    for s in (containing, inside):
        if s is not None and (s.ambient_dim != d or s.p != p):
            raise ValueError("constraint subspace has the wrong ambient space")
    if containing is None and inside is None:
        est = gaussian_binomial(d, k, p)
        if est > budget:
            raise BudgetExceeded(f"{est} subspaces of dim {k} in F_{p}^{d} exceed budget {budget}")
        return list(_canonical_subspaces(d, k, p))

    outer = inside if inside is not None else Subspace.full(d, p)
    low = containing if containing is not None else Subspace.zero(d, p)
    if not outer.contains(low) or not low.dim <= k <= outer.dim:
        return []
    # complement of low inside outer, taken from outer's RREF rows
    comp: list[np.ndarray] = []
    acc = low
    for row in outer.basis:
        if not acc.contains_vectors(row):
            comp.append(row)
            acc = acc + Subspace.span(row, p, d)
    m, j = len(comp), k - low.dim
    est = gaussian_binomial(m, j, p)
    if est > budget:
        raise BudgetExceeded(f"{est} candidate subspaces exceed budget {budget}")
    c = np.array(comp, dtype=np.int64).reshape(m, d)
    out = []
    for pivots, batch in iter_rref_cells(m, j, p):
        for s in batch:
            out.append(Subspace.span(np.vstack([low.basis, matmul(s, c, p)]), p, d))
    out.sort(key=Subspace.key)
    return out


class _Echelon:
    """Incrementally grown semi-echelon basis used for spinning."""

    def __init__(self, d: int, p: int):
        self.d, self.p = d, p
        self.rows: list[np.ndarray] = []
        self.pivots: list[int] = []

    def reduce(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=np.int64) % self.p
        for row, c in zip(self.rows, self.pivots):
            if v[c]:
                v = (v - v[c] * row) % self.p
        return v

    def add(self, v: np.ndarray) -> np.ndarray | None:
        v = self.reduce(v)
        nz = np.flatnonzero(v)
        if nz.size == 0:
            return None
        c = int(nz[0])
        v = (v * pow(int(v[c]), -1, self.p)) % self.p
        self.rows.append(v)
        self.pivots.append(c)
        return v

    def __len__(self) -> int:
        return len(self.rows)


def invariant_closure(vectors, operators: Sequence[np.ndarray], p: int, ambient_dim: int | None = None) -> Subspace:
    """Smallest subspace containing ``vectors`` and stable under ``operators``.

    Operators act on column vectors; ``vectors`` are given as rows.
    """
    ops = [as_matrix(o, p) for o in operators]
    if ambient_dim is None:
        ambient_dim = ops[0].shape[0] if ops else np.atleast_2d(np.asarray(vectors)).shape[1]
    d = ambient_dim
    for o in ops:
        if o.shape != (d, d):
            raise ValueError(f"operator of shape {o.shape} on a {d}-dimensional space")
    vecs = as_matrix(vectors, p, d)
    if vecs.shape[0] and vecs.shape[1] != d:
        raise ValueError("vector length does not match operator size")
    ech = _Echelon(d, p)
    queue = []
    for v in vecs:
        w = ech.add(v)
        if w is not None:
            queue.append(w)
    while queue:
        v = queue.pop()
        for o in ops:
            w = ech.add(o @ v)
            if w is not None:
                queue.append(w)
                if len(ech) == d:
                    return Subspace.full(d, p)
    return Subspace.span(stack_rows(ech.rows, d), p, d)


def min_poly(a: np.ndarray, p: int) -> list[int]:
    """Minimal polynomial of a square matrix, monic, highest degree first."""
    a = as_matrix(a, p)
    n = a.shape[0]
    powers = [identity(n).ravel()]
    cur = identity(n)
    for k in range(1, n + 1):
        cur = matmul(cur, a, p)
        powers.append(cur.ravel())
        ker = kernel(np.array(powers).T, p)
        if ker.dim:
            # first dependency among I, a, ..., a^k: the kernel is a line
            v = ker.basis[0]
            v = (v * pow(int(v[k]), -1, p)) % p
            return [int(c) for c in v[::-1]]
    raise AssertionError("minimal polynomial degree exceeds matrix size")


_X = symbols("x")


def factor_poly(coeffs: Sequence[int], p: int) -> list[list[int]]:
    """Distinct monic irreducible factors over F_p, sorted by degree."""
    poly = Poly([int(c) for c in coeffs], _X, modulus=p)
    out = []
    for f, _ in poly.factor_list()[1]:
        c = [int(x) % p for x in f.all_coeffs()]
        inv = pow(c[0], -1, p)
        out.append([(x * inv) % p for x in c])
    out.sort(key=lambda c: (len(c), c))
    return out


def poly_at_matrix(coeffs: Sequence[int], a: np.ndarray, p: int) -> np.ndarray:
    n = a.shape[0]
    result = np.zeros((n, n), dtype=np.int64)
    for c in coeffs:
        result = (matmul(result, a, p) + int(c) * identity(n)) % p
    return result


def all_vectors(d: int, p: int) -> np.ndarray:
    """Every vector of F_p^d, lexicographic, shape ``(p**d, d)``."""
    if d == 0:
        return np.zeros((1, 0), dtype=np.int64)
    idx = np.arange(p**d, dtype=np.int64)
    weights = p ** np.arange(d - 1, -1, -1, dtype=np.int64)
    return (idx[:, None] // weights[None, :]) % p


def matrix_to_json(m: np.ndarray, p: int) -> dict:
    m = np.asarray(m)
    return {"p": p, "rows": int(m.shape[0]), "cols": int(m.shape[1]), "entries": m.tolist()}


def matrix_from_json(data: dict) -> np.ndarray:
    p = data["p"]
    m = as_matrix(data["entries"], p, data.get("cols"))
    return m.reshape(data.get("rows", m.shape[0]), data.get("cols", m.shape[1]))
