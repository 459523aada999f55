"""MeatAxe: irreducibility, composition factors and simple modules of
structure-constant algebras over F_p.

Random algebra elements are uniform linear combinations of the action
matrices (these span the image of the algebra).  For an irreducible factor
``g`` of the minimal polynomial of such an element, a vector in the kernel
of ``g(a)`` is spun up; if that and the dual spin are both the whole space
and ``dim ker g(a) == deg g``, the module is irreducible (Norton's test in
the Holt--Rees form).  Every answer is exact; only the running time
depends on the seed.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import BudgetExceeded
from .ffla import (
    Subspace,
    all_vectors,
    factor_poly,
    inverse,
    invariant_closure,
    kernel,
    matmul,
    min_poly,
    poly_at_matrix,
)
from .modrep import DimensionVector, ScModule, quotient_module, submodule
from .qalg import ScAlgebra

DEFAULT_TRIES = 200


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


@dataclass
class NortonWitness:
    """Data certifying irreducibility: ``dim ker g(a) == deg g`` with both spins full."""

    coeffs: np.ndarray
    factor: list[int]
    vector: np.ndarray


def _spin_dual(m: ScModule, w: np.ndarray) -> Subspace:
    return invariant_closure(w, [a.T for a in m.action], m.p, m.dim)


def _norton(m: ScModule, rng, tries: int) -> tuple[bool, Subspace | NortonWitness]:
    n, p = m.dim, m.p
    for _ in range(tries):
        coeffs = rng.integers(0, p, m.algebra.dim)
        a = m.element(coeffs)
        for g in factor_poly(min_poly(a, p), p):
            theta = poly_at_matrix(g, a, p)
            ker = kernel(theta, p)
            v = ker.basis[0]
            sub = invariant_closure(v, m.action, p, n)
            if sub.dim < n:
                return False, sub
            kt = kernel(theta.T, p)
            dual = _spin_dual(m, kt.basis[0])
            if dual.dim < n:
                return False, dual.annihilator()
            if ker.dim == len(g) - 1:
                return True, NortonWitness(coeffs, g, v)
    raise BudgetExceeded(f"MeatAxe inconclusive after {tries} random elements")


def is_irreducible(m: ScModule, seed=0, tries: int = DEFAULT_TRIES) -> tuple[bool, Subspace | None]:
    """Return ``(True, None)`` or ``(False, proper nonzero submodule)``."""
    if m.dim == 0:
        raise ValueError("the zero module is neither reducible nor irreducible")
    if m.dim == 1:
        return True, None
    ok, wit = _norton(m, _rng(seed), tries)
    return (True, None) if ok else (False, wit)


def composition_factors(m: ScModule, seed=0, tries: int = DEFAULT_TRIES) -> list[ScModule]:
    """Composition factors (with repetition) by recursive splitting."""
    rng = _rng(seed)
    out: list[ScModule] = []
    stack = [m]
    while stack:
        cur = stack.pop()
        if cur.dim == 0:
            continue
        if cur.dim == 1:
            out.append(cur)
            continue
        ok, wit = _norton(cur, rng, tries)
        if ok:
            out.append(cur)
            continue
        sub, _ = submodule(cur, wit)
        quo, _ = quotient_module(cur, wit)
        stack.extend([quo, sub])
    return out


def _spin_recipe(m: ScModule, v: np.ndarray) -> tuple[list[tuple[int, int]], np.ndarray]:
    """Standard basis spun from ``v``: recipe of (vector index, generator) steps."""
    p, n = m.p, m.dim
    vecs = [np.asarray(v, dtype=np.int64) % p]
    span = Subspace.span(vecs[0], p, n)
    recipe = []
    i = 0
    while i < len(vecs) and len(vecs) < n:
        for g, a in enumerate(m.action):
            w = a @ vecs[i] % p
            if not span.contains_vectors(w):
                vecs.append(w)
                recipe.append((i, g))
                span = span + Subspace.span(w, p, n)
                if len(vecs) == n:
                    break
        i += 1
    return recipe, np.array(vecs, dtype=np.int64).T


def _replay(m: ScModule, w: np.ndarray, recipe) -> np.ndarray:
    vecs = [np.asarray(w, dtype=np.int64) % m.p]
    for i, g in recipe:
        vecs.append(m.action[g] @ vecs[i] % m.p)
    return np.array(vecs, dtype=np.int64).T


@dataclass
class SimpleModule:
    """A simple module with the data used to recognise it up to isomorphism."""

    module: ScModule
    label: str
    witness: NortonWitness | None = None
    recipe: list = field(default_factory=list)
    std_action: list = field(default_factory=list)

    @property
    def dim(self) -> int:
        return self.module.dim

    @classmethod
    def register(cls, m: ScModule, label: str, rng, tries: int = DEFAULT_TRIES) -> "SimpleModule":
        if m.dim == 1:
            return cls(m, label)
        ok, wit = _norton(m, rng, tries)
        if not ok:
            raise ValueError("module is not simple")
        recipe, basis = _spin_recipe(m, wit.vector)
        binv = inverse(basis, m.p)
        std = [matmul(matmul(binv, a, m.p), basis, m.p) for a in m.action]
        return cls(m, label, wit, recipe, std)

    def is_isomorphic(self, other: ScModule) -> bool:
        p = self.module.p
        if other.dim != self.dim:
            return False
        if self.dim == 1:
            return all(np.array_equal(a, b) for a, b in zip(self.module.action, other.action))
        wit = self.witness
        theta = poly_at_matrix(wit.factor, other.element(wit.coeffs), p)
        ker = kernel(theta, p)
        if ker.dim != len(wit.factor) - 1:
            return False
        for c in all_vectors(ker.dim, p)[1:]:
            w = c @ ker.basis % p
            basis = _replay(other, w, self.recipe)
            if not _full_rank(basis, p):
                continue
            binv = inverse(basis, p)
            if all(
                np.array_equal(matmul(matmul(binv, a, p), basis, p), s)
                for a, s in zip(other.action, self.std_action)
            ):
                return True
        return False


def _full_rank(m: np.ndarray, p: int) -> bool:
    return Subspace.span(m.T, p, m.shape[0]).dim == m.shape[0]


class SimplesRegistry(list):
    """The simple modules of one algebra, in discovery order."""

    def __init__(self, algebra: ScAlgebra, simples: Sequence[SimpleModule] = ()):
        super().__init__(simples)
        self.algebra = algebra

    @property
    def labels(self) -> list[str]:
        return [s.label for s in self]

    def identify(self, m: ScModule) -> int | None:
        for i, s in enumerate(self):
            if s.is_isomorphic(m):
                return i
        return None

    def add(self, m: ScModule, rng, tries: int = DEFAULT_TRIES) -> int:
        idx = self.identify(m)
        if idx is None:
            self.append(SimpleModule.register(m, f"S{len(self)}", rng, tries))
            idx = len(self) - 1
        return idx

    def relabel(self, labels: Sequence[str]) -> None:
        for s, lab in zip(self, labels):
            s.label = str(lab)


def regular_module(a: ScAlgebra) -> ScModule:
    return ScModule(a, a.regular_actions(), check=False)


def simples_of(a: ScAlgebra, seed=0, tries: int = DEFAULT_TRIES) -> SimplesRegistry:
    """Simple modules of ``a``: deduplicated factors of the regular module."""
    rng = _rng(seed)
    reg = SimplesRegistry(a)
    for f in composition_factors(regular_module(a), rng, tries):
        reg.add(f, rng, tries)
    return reg


def annihilator(a: ScAlgebra, m: ScModule) -> Subspace:
    """Elements of ``a`` acting as zero on ``m``."""
    cols = np.array([act.ravel() for act in m.action], dtype=np.int64).T
    if cols.size == 0:
        return Subspace.full(a.dim, a.p)
    return kernel(cols, a.p)


def algebra_radical(a: ScAlgebra, simples: SimplesRegistry | None = None, seed=0) -> Subspace:
    """Jacobson radical: the intersection of the annihilators of all simples."""
    if simples is None:
        simples = simples_of(a, seed)
    blocks = [np.array([act.ravel() for act in s.module.action], dtype=np.int64).T for s in simples]
    return kernel(np.vstack(blocks), a.p)


def dimension_vector_sc(a: ScAlgebra, m: ScModule, simples: SimplesRegistry, seed=0) -> DimensionVector:
    """Multiplicity of each registered simple among the composition factors of ``m``."""
    counts = {s.label: 0 for s in simples}
    for f in composition_factors(m, seed):
        idx = simples.identify(f)
        if idx is None:
            raise ValueError("composition factor matches no registered simple")
        counts[simples[idx].label] += 1
    return DimensionVector(counts, keys=simples.labels)


def label_simples_by_vertex(a, simples: SimplesRegistry) -> None:
    """For the structure-constant form of a bound quiver algebra, name each
    simple after the vertex whose idempotent acts nonzero on it."""
    labels = []
    for s in simples:
        hit = [v for v in a.vertices if s.module.element(a.idempotent(v)).any()]
        labels.append(hit[0] if len(hit) == 1 else s.label)
    simples.relabel(labels)
