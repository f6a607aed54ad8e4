"""Polyhedral cones in exact arithmetic.

A cone is stored in both representations, generators (extreme rays) and
inequalities ``q . x >= 0`` (facet normals), cross-checked by the double
description method.  All vectors are primitive integer tuples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

from . import rational as Q


def _dot(u, v):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def _project_out(vec, lineality):
    """Orthogonal projection of ``vec`` onto the complement of span(lineality)."""
    if not lineality:
        return list(vec)
    gram = [[_dot(a, b) for b in lineality] for a in lineality]
    coef = Q.solve(gram, [_dot(a, vec) for a in lineality])
    out = list(vec)
    for c, l in zip(coef, lineality):
        out = [x - c * y for x, y in zip(out, l)]
    return out


def double_description(inequalities: Sequence[Sequence], dim: int):
    """Extreme rays and lineality basis of ``{x : q . x >= 0 for all q}``.

    Incremental Motzkin double description with the combinatorial
    adjacency test.  Returns ``(rays, lineality)`` as lists of primitive
    integer tuples; rays are taken modulo the lineality space.
    """
    lineality = [[Fraction(int(i == j)) for j in range(dim)] for i in range(dim)]
    rays: list[list[Fraction]] = []
    processed: list[list[Fraction]] = []
    for q in inequalities:
        q = [Q.to_fraction(x) for x in q]
        if all(x == 0 for x in q):
            continue
        hit = next((l for l in lineality if _dot(q, l) != 0), None)
        if hit is not None:
            ql0 = _dot(q, hit)
            l0 = hit if ql0 > 0 else [-x for x in hit]
            ql0 = abs(ql0)
            new_lin = []
            for l in lineality:
                if l is hit:
                    continue
                c = _dot(q, l) / ql0
                new_lin.append([x - c * y for x, y in zip(l, l0)])
            new_rays = []
            for r in rays:
                c = _dot(q, r) / ql0
                new_rays.append([x - c * y for x, y in zip(r, l0)])
            new_rays.append(l0)
            lineality = new_lin
            rays = [_project_out(r, lineality) for r in new_rays]
            processed.append(q)
            rays = _dedupe(rays)
            continue

        processed.append(q)
        vals = [_dot(q, r) for r in rays]
        pos = [r for r, v in zip(rays, vals) if v > 0]
        zero = [r for r, v in zip(rays, vals) if v == 0]
        neg = [(r, v) for r, v in zip(rays, vals) if v < 0]
        target = dim - len(lineality) - 2
        new = pos + zero
        if neg:
            tight = {id(r): _tight_set(r, processed[:-1]) for r in rays}
            for p in pos:
                vp = _dot(q, p)
                for n, vn in neg:
                    common = tight[id(p)] & tight[id(n)]
                    if target > 0 and Q.rank([processed[i] for i in common]) < target:
                        continue
                    new.append([vp * b - vn * a for a, b in zip(p, n)])
        rays = _dedupe([_project_out(r, lineality) for r in new])
    rays = [r for r in rays if any(x != 0 for x in r)]
    return ([Q.primitive(r) for r in rays], [Q.primitive(l) for l in lineality])


def _tight_set(r, ineqs):
    return frozenset(i for i, q in enumerate(ineqs) if _dot(q, r) == 0)


def _dedupe(vectors):
    seen = set()
    out = []
    for v in vectors:
        if all(x == 0 for x in v):
            continue
        key = Q.primitive(v)
        if key not in seen:
            seen.add(key)
            out.append(list(v))
    return out


def dual_generators(generators: Sequence[Sequence], dim: int):
    """Facet normals of cone(generators): extreme rays of the dual cone.

    Lineality of the dual (cone not full dimensional) is returned as pairs
    of opposite inequalities so the result is a plain inequality list.
    """
    rays, lin = double_description(generators, dim)
    return rays + [l for l in lin] + [tuple(-x for x in l) for l in lin]


def facets_bruteforce(generators: Sequence[Sequence], dim: int):
    """Facet normals by enumerating (dim-1)-subsets of generators.

    Independent of :func:`double_description`; used to cross-validate it.
    Only valid for full-dimensional cones.
    """
    gens = [[Q.to_fraction(x) for x in g] for g in generators]
    found = set()
    for sub in itertools.combinations(range(len(gens)), dim - 1):
        rows = [gens[i] for i in sub]
        if Q.rank(rows) < dim - 1:
            continue
        ns = Q.nullspace(rows, dim)
        if len(ns) != 1:
            continue
        q = ns[0]
        vals = [_dot(q, g) for g in gens]
        if all(v >= 0 for v in vals):
            found.add(Q.primitive(q))
        elif all(v <= 0 for v in vals):
            found.add(Q.primitive([-x for x in q]))
    return sorted(found)


@dataclass(frozen=True)
class ConeDescription:
    """A pointed, full-dimensional rational cone in both representations."""

    generators: tuple
    inequalities: tuple
    dim: int
    name: str = ""
    _gen_float: np.ndarray = field(init=False, repr=False, compare=False)
    _ineq_float: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_gen_float", np.array(self.generators, dtype=float).reshape(-1, self.dim))
        object.__setattr__(self, "_ineq_float", np.array(self.inequalities, dtype=float).reshape(-1, self.dim))

    @classmethod
    def from_generators(cls, generators, dim: int, name: str = "") -> "ConeDescription":
        ineqs = dual_generators(generators, dim)
        rays, lin = double_description(ineqs, dim)
        if lin:
            raise ValueError(f"cone {name!r} is not pointed")
        return cls(tuple(sorted(rays)), tuple(sorted(ineqs)), dim, name)

    @classmethod
    def from_inequalities(cls, inequalities, dim: int, name: str = "") -> "ConeDescription":
        rays, lin = double_description(inequalities, dim)
        if lin:
            raise ValueError(f"cone {name!r} is not pointed")
        ineqs = dual_generators(rays, dim)
        return cls(tuple(sorted(rays)), tuple(sorted(ineqs)), dim, name)

    def is_full_dimensional(self) -> bool:
        return Q.rank(self.generators) == self.dim if self.generators else False

    def dual(self, name: str = "") -> "ConeDescription":
        return ConeDescription(self.inequalities, self.generators, self.dim, name)

    def values(self, x):
        """Inequality values q . x (exact when x is exact)."""
        if Q.is_exact(x):
            return [_dot(q, x) for q in self.inequalities]
        return list(self._ineq_float @ np.asarray(x, dtype=float))

    def min_value(self, x) -> float:
        """Most violated normalized inequality value, q.x / |q|."""
        x = np.asarray([float(v) for v in x])
        norms = np.linalg.norm(self._ineq_float, axis=1)
        return float(np.min(self._ineq_float @ x / norms))


@dataclass(frozen=True)
class Membership:
    status: str  # "interior" | "boundary" | "outside"
    certificate: object  # generator weights (inside) or violated inequality (outside)

    @property
    def inside(self) -> bool:
        return self.status != "outside"


def cone_membership(x: Sequence, cone: ConeDescription, tol=0) -> Membership:
    """Classify x against the cone by its inequalities.

    With exact input and ``tol == 0`` the decision is exact.  The inside
    certificate is a nonnegative combination of generators reproducing x;
    the outside certificate is a violated inequality.
    """
    if len(x) != cone.dim:
        raise ValueError(f"dimension mismatch: class has {len(x)} coordinates, cone lives in {cone.dim}")
    vals = cone.values(x)
    worst = min(range(len(vals)), key=lambda i: vals[i])
    if vals[worst] < -tol:
        return Membership("outside", cone.inequalities[worst])
    status = "boundary" if any(abs(v) <= tol for v in vals) else "interior"
    return Membership(status, _combination(x, cone))


def _combination(x, cone: ConeDescription):
    """Nonnegative generator weights w with sum w_j g_j = x (exact if possible)."""
    if all(v == 0 for v in x):
        return tuple(Fraction(0) for _ in cone.generators)
    gens = cone._gen_float
    res = linprog(np.zeros(len(gens)), A_eq=gens.T, b_eq=np.asarray(x, dtype=float),
                  bounds=[(0, None)] * len(gens), method="highs")
    if not Q.is_exact(x):
        return tuple(res.x) if res.status == 0 else None
    if res.status == 0:
        support = [j for j, w in enumerate(res.x) if w > 1e-12]
        exact = _exact_on_support(x, cone.generators, support)
        if exact is not None:
            return exact
    # Caratheodory: some basis of generators carries x
    for sub in itertools.combinations(range(len(cone.generators)), cone.dim):
        exact = _exact_on_support(x, cone.generators, list(sub))
        if exact is not None:
            return exact
    return None


def _exact_on_support(x, generators, support):
    if not support:
        return None
    cols = [generators[j] for j in support]
    a = [[Fraction(c[i]) for c in cols] for i in range(len(x))]
    sol = Q.solve_any(a, x)
    if sol is None or any(s < 0 for s in sol):
        return None
    w = [Fraction(0)] * len(generators)
    for j, s in zip(support, sol):
        w[j] = s
    return tuple(w)
