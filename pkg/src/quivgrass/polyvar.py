"""Homogeneous polynomials over F_p, projective points and the reduction
of an arbitrary homogeneous system to quadrics by a Veronese re-embedding."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb
from typing import Callable, Mapping, Sequence

import numpy as np

from .ffla import check_prime


def normalize_point(coords: Sequence[int], p: int) -> tuple[int, ...]:
    """Scale so that the first nonzero coordinate is 1."""
    c = [int(x) % p for x in coords]
    for x in c:
        if x:
            inv = pow(x, -1, p)
            return tuple((y * inv) % p for y in c)
    raise ValueError("the zero vector is not a projective point")


@dataclass(frozen=True, order=True)
class ProjPoint:
    coords: tuple[int, ...]
    p: int

    @classmethod
    def of(cls, coords: Sequence[int], p: int) -> "ProjPoint":
        return cls(normalize_point(coords, p), p)

    def __str__(self) -> str:
        return "(" + ":".join(map(str, self.coords)) + ")"


@dataclass(frozen=True)
class HomPoly:
    """A homogeneous polynomial with integer coefficients.

    Coefficients are reduced modulo the working prime only when the
    polynomial is evaluated or passed to :meth:`mod`.
    """

    num_vars: int
    terms: Mapping[tuple[int, ...], int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for exps, coef in dict(self.terms).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != self.num_vars or min(exps, default=0) < 0:
                raise ValueError(f"bad exponent vector {exps} for {self.num_vars} variables")
            if coef:
                clean[exps] = clean.get(exps, 0) + int(coef)
        clean = {e: c for e, c in clean.items() if c}
        degs = {sum(e) for e in clean}
        if len(degs) > 1:
            raise ValueError(f"polynomial is not homogeneous (degrees {sorted(degs)})")
        object.__setattr__(self, "terms", dict(sorted(clean.items(), reverse=True)))

    @classmethod
    def from_terms(cls, num_vars: int, terms: Sequence[tuple[Sequence[int], int]]) -> "HomPoly":
        acc: dict[tuple[int, ...], int] = {}
        for exps, coef in terms:
            key = tuple(exps)
            acc[key] = acc.get(key, 0) + int(coef)
        return cls(num_vars, acc)

    @property
    def degree(self) -> int:
        if not self.terms:
            return 0
        return sum(next(iter(self.terms)))

    def mod(self, p: int) -> "HomPoly":
        return HomPoly(self.num_vars, {e: c % p for e, c in self.terms.items() if c % p})

    def is_zero_mod(self, p: int) -> bool:
        return not self.mod(p).terms

    def evaluate(self, point: Sequence[int], p: int) -> int:
        total = 0
        for exps, coef in self.terms.items():
            term = coef
            for x, e in zip(point, exps):
                term = (term * pow(int(x), e, p)) % p
            total += term
        return total % p

    def evaluate_many(self, points: np.ndarray, p: int) -> np.ndarray:
        """Vectorized evaluation on the rows of ``points``."""
        points = np.asarray(points, dtype=np.int64) % p
        total = np.zeros(points.shape[0], dtype=np.int64)
        for exps, coef in self.terms.items():
            term = np.full(points.shape[0], coef % p, dtype=np.int64)
            for j, e in enumerate(exps):
                for _ in range(e):
                    term = (term * points[:, j]) % p
            total = (total + term) % p
        return total

    def to_json(self) -> dict:
        return {"terms": [{"exps": list(e), "coef": c} for e, c in self.terms.items()]}

    @classmethod
    def from_json(cls, data: Mapping, num_vars: int) -> "HomPoly":
        return cls.from_terms(num_vars, [(t["exps"], t["coef"]) for t in data["terms"]])

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps, coef in self.terms.items():
            mono = "*".join(f"x{i}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(exps) if e)
            parts.append(f"{coef}*{mono}" if mono else str(coef))
        return " + ".join(parts)


def projective_points(n: int, q: int) -> np.ndarray:
    """All points of P^n(F_q) in normalized form, sorted lexicographically."""
    check_prime(q)
    blocks = []
    for lead in range(n, -1, -1):
        tail = n - lead
        if tail:
            rest = np.array(list(itertools.product(range(q), repeat=tail)), dtype=np.int64)
        else:
            rest = np.zeros((1, 0), dtype=np.int64)
        head = np.zeros((rest.shape[0], lead + 1), dtype=np.int64)
        head[:, lead] = 1
        blocks.append(np.hstack([head, rest]))
    # leading zeros first gives lexicographic order since blocks are ordered by lead position
    return np.vstack(blocks)


def variety_points(polys: Sequence[HomPoly], n: int, q: int) -> list[ProjPoint]:
    """F_q-points of the projective variety cut out by ``polys`` in P^n."""
    for f in polys:
        if f.num_vars != n + 1:
            raise ValueError(f"polynomial in {f.num_vars} variables, expected {n + 1}")
    pts = projective_points(n, q)
    keep = np.ones(pts.shape[0], dtype=bool)
    for f in polys:
        keep &= f.evaluate_many(pts, q) == 0
    return [ProjPoint(tuple(int(x) for x in row), q) for row in pts[keep]]


def monomials(num_vars: int, degree: int) -> list[tuple[int, ...]]:
    """Exponent vectors of the given degree, graded-lex (x0^d first)."""
    out = [
        e
        for e in itertools.product(range(degree + 1), repeat=num_vars)
        if sum(e) == degree
    ]
    out.sort(reverse=True)
    return out


@dataclass
class VeroneseReduction:
    n: int
    d: int
    n_prime: int
    quadrics: list[HomPoly]
    monomials: list[tuple[int, ...]]

    def point_map(self, pt: ProjPoint) -> ProjPoint:
        vals = []
        for alpha in self.monomials:
            v = 1
            for x, e in zip(pt.coords, alpha):
                v = (v * pow(x, e, pt.p)) % pt.p
            vals.append(v)
        return ProjPoint.of(vals, pt.p)

    def __iter__(self):
        # unpacks as (n', quadrics, point_map)
        return iter((self.n_prime, self.quadrics, self.point_map))


def _add(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


def veronese_reduce(polys: Sequence[HomPoly], n: int) -> VeroneseReduction:
    """Rewrite a homogeneous system as quadrics on a Veronese embedding.

    With ``D`` the largest degree, use ``d = ceil(D / 2)`` (at least 1) and
    the d-uple embedding into P^{n'} with ``n' + 1 = C(n + d, d)``.  The
    output holds the Veronese quadrics and, for each ``f``, the products
    ``f * m`` with every monomial ``m`` of degree ``2d - deg f`` written in
    the z-coordinates.
    """
    for f in polys:
        if f.num_vars != n + 1:
            raise ValueError(f"polynomial in {f.num_vars} variables, expected {n + 1}")
        if f.terms and f.degree < 1:
            raise ValueError("constant polynomials are not allowed")
    top = max((f.degree for f in polys if f.terms), default=2)
    d = max(1, -(-top // 2))
    monos = monomials(n + 1, d)
    nz = len(monos)
    assert nz == comb(n + d, d)

    # factorizations of each degree-2d monomial into two degree-d monomials,
    # in z-order; the first one is the canonical rewrite
    factorizations: dict[tuple[int, ...], list[tuple[int, int]]] = {}
    for i, a in enumerate(monos):
        for j in range(i, nz):
            factorizations.setdefault(_add(a, monos[j]), []).append((i, j))

    def zmono(i: int, j: int) -> tuple[int, ...]:
        e = [0] * nz
        e[i] += 1
        e[j] += 1
        return tuple(e)

    quadrics: list[HomPoly] = []
    if d > 1:
        for gamma in sorted(factorizations, reverse=True):
            first, *others = factorizations[gamma]
            for other in others:
                quadrics.append(HomPoly(nz, {zmono(*first): 1, zmono(*other): -1}))

    for f in polys:
        if not f.terms:
            continue
        if d == 1 and f.degree == 2:
            # already quadric: keep verbatim
            quadrics.append(f)
            continue
        for m in monomials(n + 1, 2 * d - f.degree):
            acc: dict[tuple[int, ...], int] = {}
            for exps, coef in f.terms.items():
                key = zmono(*factorizations[_add(exps, m)][0])
                acc[key] = acc.get(key, 0) + coef
            g = HomPoly(nz, acc)
            if g.terms:
                quadrics.append(g)
    return VeroneseReduction(n=n, d=d, n_prime=nz - 1, quadrics=quadrics, monomials=monos)


def load_variety(data: Mapping) -> tuple[list[HomPoly], int, int]:
    """Parse ``{"p": .., "n": .., "polys": [{"terms": [{"exps", "coef"}]}]}``."""
    n = int(data["n"])
    polys = [HomPoly.from_json(f, n + 1) for f in data.get("polys", [])]
    return polys, n, int(data["p"])


def dump_variety(polys: Sequence[HomPoly], n: int, p: int) -> dict:
    return {"p": p, "n": n, "polys": [f.to_json() for f in polys]}


PointMap = Callable[[ProjPoint], ProjPoint]
