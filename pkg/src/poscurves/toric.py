"""Simplicial projective toric varieties: numerical groups, pairing and cones.

Divisor classes are coefficient vectors ``a`` on the rays modulo the image
of ``u -> (<u, v_i>)_i``; curve classes are Minkowski weights ``t`` with
``sum t_i v_i = 0``.  Both are given quotient coordinates in which the
intersection pairing ``sum a_i t_i`` is the standard dot product: with
``K`` an integral kernel basis of the ray relations (identity on the free
indices), a divisor has coordinates ``K^T a`` and a curve ``t = K c`` has
coordinates ``c``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from . import rational as Q
from .cones import ConeDescription, cone_membership
from .errors import PreconditionError


class FanError(PreconditionError):
    """Invalid fan data; ``index`` names the offending ray or cone."""

    def __init__(self, message: str, index=None):
        super().__init__(message if index is None else f"{message} (index {index})")
        self.index = index


@dataclass(frozen=True)
class Fan:
    dim: int
    rays: tuple
    max_cones: tuple

    def __init__(self, dim: int, rays: Sequence[Sequence[int]], max_cones: Sequence[Sequence[int]]):
        object.__setattr__(self, "dim", int(dim))
        object.__setattr__(self, "rays", tuple(tuple(int(x) for x in v) for v in rays))
        object.__setattr__(self, "max_cones", tuple(tuple(sorted(int(i) for i in c)) for c in max_cones))

    def validate(self) -> None:
        """Raise FanError unless the fan is simplicial, complete and has primitive rays."""
        n = self.dim
        if n < 1:
            raise FanError("dimension must be positive")
        for i, v in enumerate(self.rays):
            if len(v) != n:
                raise FanError(f"ray {v} has length {len(v)}, expected {n}", i)
            g = 0
            for x in v:
                g = math.gcd(g, abs(x))
            if g != 1:
                raise FanError(f"ray {v} is not primitive", i)
        used = set()
        for k, c in enumerate(self.max_cones):
            if len(c) != n or len(set(c)) != n:
                raise FanError(f"maximal cone {c} does not have {n} distinct rays", k)
            if any(i < 0 or i >= len(self.rays) for i in c):
                raise FanError(f"maximal cone {c} refers to a missing ray", k)
            if Q.rank([self.rays[i] for i in c]) < n:
                raise FanError(f"maximal cone {c} is not simplicial", k)
            used.update(c)
        for i in range(len(self.rays)):
            if i not in used:
                raise FanError("ray lies in no maximal cone", i)
        self._check_complete()

    def walls(self) -> dict:
        """Map each codimension-one face to the maximal cones containing it."""
        walls: dict = {}
        for k, c in enumerate(self.max_cones):
            for tau in itertools.combinations(c, self.dim - 1):
                walls.setdefault(tau, []).append(k)
        return walls

    def _check_complete(self) -> None:
        n = self.dim
        for tau, owners in self.walls().items():
            if len(owners) != 2:
                raise FanError(f"wall {tau} bounds {len(owners)} maximal cones; fan is not complete",
                               owners[0])
            if n == 1:
                side = [self.rays[next(iter(set(self.max_cones[k]) - set(tau)))][0] for k in owners]
                if side[0] * side[1] >= 0:
                    raise FanError("cones overlap", owners[1])
                continue
            normal = Q.nullspace([self.rays[i] for i in tau], n)[0]
            side = []
            for k in owners:
                (off,) = set(self.max_cones[k]) - set(tau)
                side.append(sum(a * b for a, b in zip(normal, self.rays[off])))
            if side[0] * side[1] >= 0:
                raise FanError(f"cones across wall {tau} overlap", owners[1])
        rng = np.random.default_rng(12345)
        inv = [np.linalg.inv(np.array([self.rays[i] for i in c], dtype=float).T) for c in self.max_cones]
        for p in rng.normal(size=(64, n)):
            hits = sum(1 for m in inv if np.all(m @ p > 1e-12))
            if hits != 1:
                raise FanError(f"generic point covered by {hits} maximal cones; fan is not complete")

    def to_json(self) -> dict:
        return {"dim": self.dim, "rays": [list(v) for v in self.rays],
                "max_cones": [list(c) for c in self.max_cones]}


class _ClassBase:
    __slots__ = ("variety", "coeffs")

    def __init__(self, variety: "ToricVariety", coeffs):
        coeffs = tuple(coeffs)
        if len(coeffs) != variety.r:
            raise ValueError(f"expected {variety.r} entries, got {len(coeffs)}")
        if Q.is_exact(coeffs):
            coeffs = tuple(Fraction(x) for x in coeffs)
        elif all(isinstance(x, str) or Q.is_exact([x]) for x in coeffs):
            coeffs = Q.fvec(coeffs)
        else:
            coeffs = tuple(float(x) for x in coeffs)
        object.__setattr__(self, "variety", variety)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("classes are immutable")

    @property
    def exact(self) -> bool:
        return isinstance(self.coeffs[0], Fraction)

    def as_float(self) -> np.ndarray:
        return np.array([float(x) for x in self.coeffs])

    def _combine(self, other, sign):
        if type(other) is not type(self) or other.variety is not self.variety:
            raise ValueError("classes live on different varieties or in different groups")
        return type(self)(self.variety, [a + sign * b for a, b in zip(self.coeffs, other.coeffs)])

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return type(self)(self.variety, [-a for a in self.coeffs])

    def __mul__(self, s):
        if isinstance(s, float) and self.exact:
            return type(self)(self.variety, [float(a) * s for a in self.coeffs])
        if isinstance(s, (int, Fraction)) and not self.exact:
            s = float(s)
        return type(self)(self.variety, [a * s for a in self.coeffs])

    __rmul__ = __mul__

    def __truediv__(self, s):
        return self * (1 / (Fraction(s) if isinstance(s, int) else s))

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.coords)

    def close_to(self, other, tol: float = 1e-9) -> bool:
        a = np.array([float(x) for x in self.coords])
        b = np.array([float(x) for x in other.coords])
        return bool(np.max(np.abs(a - b), initial=0.0) <= tol * max(1.0, np.max(np.abs(b), initial=0.0)))

    def to_json(self) -> list:
        return [Q.format_rational(x) for x in self.coeffs]


class DivisorClass(_ClassBase):
    """A divisor class, stored through a coefficient representative."""

    __slots__ = ()

    @property
    def coords(self) -> tuple:
        K = self.variety._K_exact if self.exact else self.variety.curve_basis
        if self.exact:
            return tuple(sum((K[i][k] * a for i, a in enumerate(self.coeffs)), Fraction(0))
                         for k in range(self.variety.picard_rank))
        return tuple(float(x) for x in K.T @ self.as_float())

    def __eq__(self, other):
        if not isinstance(other, DivisorClass) or other.variety is not self.variety:
            return NotImplemented
        return self.coords == other.coords

    def __hash__(self):
        return hash(("D", self.coords))

    def __repr__(self):
        return f"DivisorClass({[str(x) if isinstance(x, Fraction) else x for x in self.coeffs]})"

    def to_json(self) -> dict:
        return {"divisor": super().to_json()}


class CurveClass(_ClassBase):
    """A curve class as a Minkowski weight ``t`` with ``sum t_i v_i = 0``."""

    __slots__ = ()

    def __init__(self, variety, coeffs, check: bool = True):
        super().__init__(variety, coeffs)
        if check:
            variety._check_weight(self.coeffs)

    @property
    def weights(self) -> tuple:
        return self.coeffs

    @property
    def coords(self) -> tuple:
        return tuple(self.coeffs[i] for i in self.variety.free)

    @property
    def movable(self) -> bool:
        return all(t >= 0 for t in self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, CurveClass) or other.variety is not self.variety:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("C", self.coeffs))

    def __repr__(self):
        return f"CurveClass({[str(x) if isinstance(x, Fraction) else x for x in self.coeffs]})"

    def to_json(self) -> dict:
        return {"curve": super().to_json()}


def pair(L: DivisorClass, alpha: CurveClass):
    """Intersection number ``sum a_i t_i``; exact for exact inputs."""
    if len(L.coeffs) != len(alpha.coeffs):
        raise ValueError(f"length mismatch: divisor has {len(L.coeffs)} entries, curve {len(alpha.coeffs)}")
    if L.exact and alpha.exact:
        return sum((a * t for a, t in zip(L.coeffs, alpha.coeffs)), Fraction(0))
    return float(np.dot(L.as_float(), alpha.as_float()))


@dataclass(eq=False)
class ToricVariety:
    """A simplicial projective toric variety with its five positivity cones."""

    fan: Fan
    curve_basis: np.ndarray
    free: tuple
    wall_curves: list
    cones: dict
    non_smooth_cones: list
    _K_exact: list = field(repr=False)

    @property
    def n(self) -> int:
        return self.fan.dim

    @property
    def r(self) -> int:
        return len(self.fan.rays)

    @property
    def picard_rank(self) -> int:
        return self.r - self.n

    @cached_property
    def ray_matrix(self) -> np.ndarray:
        return np.array(self.fan.rays, dtype=float)

    @cached_property
    def ray_norms(self) -> np.ndarray:
        return np.linalg.norm(self.ray_matrix, axis=1)

    # -- constructors for classes -------------------------------------------
    def divisor(self, coeffs) -> DivisorClass:
        return DivisorClass(self, coeffs)

    def curve(self, weights, check: bool = True) -> CurveClass:
        return CurveClass(self, weights, check=check)

    def basis_divisor(self, i: int) -> DivisorClass:
        return DivisorClass(self, [int(j == i) for j in range(self.r)])

    def divisor_from_coords(self, coords) -> DivisorClass:
        a = [0] * self.r if Q.is_exact(coords) else [0.0] * self.r
        for f, x in zip(self.free, coords):
            a[f] = x
        return DivisorClass(self, a)

    def curve_from_coords(self, coords) -> CurveClass:
        if Q.is_exact(coords):
            c = [Fraction(x) for x in coords]
            t = [sum((self._K_exact[i][k] * c[k] for k in range(self.picard_rank)), Fraction(0))
                 for i in range(self.r)]
        else:
            t = list(self.curve_basis @ np.asarray(coords, dtype=float))
        return CurveClass(self, t, check=False)

    def _check_weight(self, t) -> None:
        if isinstance(t[0], Fraction):
            for j in range(self.n):
                if sum((t[i] * self.fan.rays[i][j] for i in range(self.r)), Fraction(0)) != 0:
                    raise ValueError(f"weights {list(map(str, t))} do not satisfy sum t_i v_i = 0")
        else:
            tv = np.asarray(t) @ self.ray_matrix
            if np.max(np.abs(tv)) > 1e-8 * max(1.0, float(np.max(np.abs(t)))):
                raise ValueError(f"weights {list(t)} do not satisfy sum t_i v_i = 0")

    # -- cones ----------------------------------------------------------------
    @property
    def nef(self) -> ConeDescription:
        return self.cones["nef_divisors"]

    @property
    def eff(self) -> ConeDescription:
        return self.cones["eff_divisors"]

    @property
    def mov(self) -> ConeDescription:
        return self.cones["mov_divisors"]

    @property
    def mori(self) -> ConeDescription:
        return self.cones["eff_curves"]

    @property
    def mov_curves(self) -> ConeDescription:
        return self.cones["mov_curves"]

    def cone_for(self, x) -> str:
        return "divisor" if isinstance(x, DivisorClass) else "curve"

    def membership(self, x, cone_name: str, tol=0):
        cone = self.cones[cone_name]
        return cone_membership(list(x.coords), cone, tol)

    def is_nef(self, L: DivisorClass, tol=0) -> bool:
        return self.membership(L, "nef_divisors", tol).inside

    def is_ample(self, L: DivisorClass, tol=0) -> bool:
        return self.membership(L, "nef_divisors", tol).status == "interior"

    def is_effective(self, L: DivisorClass, tol=0) -> bool:
        return self.membership(L, "eff_divisors", tol).inside

    def is_big(self, L: DivisorClass, tol=0) -> bool:
        return self.membership(L, "eff_divisors", tol).status == "interior"

    def is_movable_divisor(self, L: DivisorClass, tol=0) -> bool:
        return self.membership(L, "mov_divisors", tol).inside

    def is_psef_curve(self, alpha: CurveClass, tol=0) -> bool:
        return self.membership(alpha, "eff_curves", tol).inside

    def is_big_curve(self, alpha: CurveClass, tol=0) -> bool:
        return self.membership(alpha, "eff_curves", tol).status == "interior"

    def generator_divisors(self, cone_name: str) -> list:
        return [self.divisor_from_coords([Fraction(x) for x in g]) for g in self.cones[cone_name].generators]

    def generator_curves(self, cone_name: str) -> list:
        return [self.curve_from_coords([Fraction(x) for x in g]) for g in self.cones[cone_name].generators]

    # -- intersection theory ----------------------------------------------------
    @cached_property
    def _faces(self) -> frozenset:
        faces = set()
        for c in self.fan.max_cones:
            for k in range(len(c) + 1):
                faces.update(frozenset(s) for s in itertools.combinations(c, k))
        return frozenset(faces)

    def intersection_number(self, indices: Sequence[int]) -> Fraction:
        """Exact product D_{i1} ... D_{in} of n torus-invariant divisors."""
        if len(indices) != self.n:
            raise ValueError(f"need {self.n} divisors, got {len(indices)}")
        return self._inum(tuple(sorted(indices)))

    def _inum(self, idx: tuple) -> Fraction:
        cache = self.__dict__.setdefault("_inum_cache", {})
        if idx in cache:
            return cache[idx]
        distinct = sorted(set(idx))
        if frozenset(distinct) not in self._faces:
            val = Fraction(0)
        elif len(distinct) == self.n:
            val = 1 / abs(Q.determinant([self.fan.rays[i] for i in distinct]))
        else:
            i = next(j for j in distinct if idx.count(j) > 1)
            rows = [self.fan.rays[j] for j in distinct]
            m = Q.solve_any(rows, [int(j == i) for j in distinct])
            rest = list(idx)
            rest.remove(i)
            val = Fraction(0)
            for k in range(self.r):
                if k in distinct:
                    continue
                coef = sum((a * b for a, b in zip(m, self.fan.rays[k])), Fraction(0))
                if coef != 0:
                    val -= coef * self._inum(tuple(sorted(rest + [k])))
        cache[idx] = val
        return val

    @cached_property
    def intersection_tensor(self) -> np.ndarray:
        """Float tensor of D_{i1}...D_{in} restricted to the free indices (coordinate basis)."""
        d = self.picard_rank
        T = np.zeros((d,) * self.n)
        for combo in itertools.combinations_with_replacement(range(d), self.n):
            val = float(self.intersection_number([self.free[k] for k in combo]))
            for perm in set(itertools.permutations(combo)):
                T[perm] = val
        return T

    def top_power(self, L: DivisorClass):
        """L^n as an intersection number (equals vol(L) only when L is nef)."""
        if L.exact:
            return self._multilinear([L.coeffs] * self.n)
        x = np.array(L.coords, dtype=float)
        T = self.intersection_tensor
        for _ in range(self.n):
            T = T @ x
        return float(T)

    def curve_power(self, L: DivisorClass) -> CurveClass:
        """L^{n-1} as a curve class (weights t_j = L^{n-1} . D_j)."""
        if L.exact:
            t = [self._multilinear([L.coeffs] * (self.n - 1) + [[int(i == j) for i in range(self.r)]])
                 for j in range(self.r)]
            return CurveClass(self, t)
        x = np.array(L.coords, dtype=float)
        T = self.intersection_tensor
        for _ in range(self.n - 1):
            T = T @ x
        return self.curve_from_coords(T)

    def product_curve(self, divisors: Sequence[DivisorClass]) -> CurveClass:
        """Curve class of a product of n-1 exact divisor classes."""
        if len(divisors) != self.n - 1:
            raise ValueError(f"need {self.n - 1} divisors")
        vecs = [D.coeffs for D in divisors]
        return CurveClass(self, [self._multilinear(vecs + [[int(i == j) for i in range(self.r)]])
                                 for j in range(self.r)])

    def _multilinear(self, vectors) -> Fraction:
        total = Fraction(0)
        supports = [[(i, a) for i, a in enumerate(v) if a != 0] for v in vectors]
        for combo in itertools.product(*supports):
            coef = Fraction(1)
            for _, a in combo:
                coef *= a
            total += coef * self.intersection_number([i for i, _ in combo])
        return total

    def summary(self) -> dict:
        return {
            "dim": self.n,
            "rays": self.r,
            "picard_rank": self.picard_rank,
            "wall_curves": [c.to_json()["curve"] for c in self.wall_curves],
            "non_smooth_cones": [list(c) for c in self.non_smooth_cones],
        }


def build_variety(fan: Fan) -> ToricVariety:
    """Validate the fan and compute classes, wall curves and all five cones."""
    fan.validate()
    n, r = fan.dim, len(fan.rays)
    if r <= n:
        raise FanError("a complete fan needs more rays than its dimension")
    # kernel basis of the ray relations, identity on free indices
    transposed = [[fan.rays[i][j] for i in range(r)] for j in range(n)]
    red, pivots = Q.rref(transposed)
    free = tuple(c for c in range(r) if c not in pivots)
    K = Q.nullspace(transposed, r)
    K_exact = [[K[k][i] for k in range(len(K))] for i in range(r)]
    K_float = np.array(K_exact, dtype=float)

    non_smooth = [c for c in fan.max_cones
                  if abs(Q.determinant([fan.rays[i] for i in c])) != 1]

    variety = ToricVariety(fan, K_float, free, [], {}, non_smooth, K_exact)

    walls = []
    seen = set()
    for tau, owners in sorted(fan.walls().items()):
        (i,) = set(fan.max_cones[owners[0]]) - set(tau)
        (j,) = set(fan.max_cones[owners[1]]) - set(tau)
        idx = list(tau) + [i, j]
        cols = [[fan.rays[k][row] for k in idx] for row in range(n)]
        (rel,) = Q.nullspace(cols, n + 1)
        if rel[-2] < 0:
            rel = [-x for x in rel]
        prim = Q.primitive(rel)
        t = [0] * r
        for k, x in zip(idx, prim):
            t[k] = x
        key = tuple(t)
        if key not in seen:
            seen.add(key)
            walls.append(CurveClass(variety, t))
    variety.wall_curves.extend(walls)

    d = r - n
    try:
        mori = ConeDescription.from_generators([c.coords for c in walls], d, "eff_curves")
    except ValueError as exc:
        raise FanError("nef cone is not full dimensional; fan is not projective") from exc
    nef = mori.dual("nef_divisors")
    if not nef.is_full_dimensional():
        raise FanError("nef cone is not full dimensional; fan is not projective")
    eff_gens = [tuple(K_exact[i]) for i in range(r)]
    eff = ConeDescription.from_generators(eff_gens, d, "eff_divisors")
    mov_curves = eff.dual("mov_curves")
    # L is movable iff every halfspace of Q_L is active, i.e. for each i the
    # class lies in cone(D_j : j != i); intersect those cones.
    ineqs = set()
    for i in range(r):
        sub = ConeDescription.from_generators([eff_gens[j] for j in range(r) if j != i], d)
        ineqs.update(sub.inequalities)
    mov = ConeDescription.from_inequalities(sorted(ineqs), d, "mov_divisors")
    variety.cones.update({
        "nef_divisors": nef,
        "eff_divisors": eff,
        "mov_divisors": mov,
        "eff_curves": mori,
        "mov_curves": mov_curves,
    })
    return variety


def sigma_decompose(L: DivisorClass):
    """Split L = P + N with P the positive part read off the divisor polytope.

    The positive part has coefficients ``h_{Q_L}(v_i)``; N is effective
    coefficientwise and Q_P = Q_L.
    """
    from .polytope import divisor_polytope

    Qp = divisor_polytope(L)
    if Qp.is_empty:
        raise ValueError("not effective: divisor polytope is empty")
    X = L.variety
    p = [Qp.support(v) for v in X.fan.rays]
    P = DivisorClass(X, p)
    N = DivisorClass(X, [a - b for a, b in zip(L.coeffs, p)])
    return P, N


def is_movable_sigma(L: DivisorClass) -> bool:
    """Movability by the sigma-criterion: every halfspace of Q_L is active."""
    try:
        _, N = sigma_decompose(L)
    except ValueError:
        return False
    return all(x == 0 for x in N.coeffs)


def volume(L: DivisorClass):
    """vol(L) = n! * volume(Q_L); zero when L is not big."""
    from .polytope import divisor_polytope

    return math.factorial(L.variety.n) * divisor_polytope(L).volume()


def psef_threshold(L1: DivisorClass, L2: DivisorClass):
    """Largest s with L1 - s L2 pseudo-effective (exact for exact input)."""
    X = L1.variety
    x1, x2 = L1.coords, L2.coords
    best = None
    for q in X.eff.inequalities:
        a = sum((Fraction(c) * v for c, v in zip(q, x1)), Fraction(0)) if L1.exact else float(np.dot(q, x1))
        b = sum((Fraction(c) * v for c, v in zip(q, x2)), Fraction(0)) if L2.exact else float(np.dot(q, x2))
        if b > 0:
            s = a / b
            best = s if best is None or s < best else best
    if best is None:
        raise ValueError("L2 is not a nonzero effective class")
    return best
