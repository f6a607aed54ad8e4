"""Halfspace polytopes {x : <x, w_i> <= c_i} with exact or floating arithmetic.

Volumes use the pyramid decomposition from the lexicographically smallest
vertex: vol = (1/d) * sum over facets of (c_i - <w_i, p>) * lvol_i, where
``lvol_i`` is the lattice-normalized facet volume (Euclidean volume divided
by |w_i|).  Facet volumes are obtained recursively by eliminating the
coordinate on which w_i is largest, which divides the projected volume by
|w_i[k]| and keeps everything rational on rational input.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from . import rational as Q
from .errors import PreconditionError


class UnboundedError(PreconditionError):
    """Raised for unbounded halfspace systems; ``direction`` is a recession ray."""

    def __init__(self, direction):
        super().__init__(f"polytope is unbounded along {list(direction)}")
        self.direction = tuple(direction)


def _float_tol(A, b) -> float:
    scale = max(1.0, float(np.max(np.abs(b), initial=0.0)))
    return 1e-9 * scale


def _affine_rank(points, exact: bool, tol: float = 1e-9) -> int:
    if len(points) <= 1:
        return 0
    base = points[0]
    diffs = [[x - y for x, y in zip(p, base)] for p in points[1:]]
    if exact:
        return Q.rank(diffs)
    arr = np.array(diffs, dtype=float)
    return int(np.linalg.matrix_rank(arr, tol=tol * max(1.0, float(np.max(np.abs(arr))))))


def _enumerate(A, b, dim, exact):
    """Vertices and their tight constraint sets by solving all dim-subsets."""
    m = len(A)
    found: dict = {}
    tol = 0 if exact else _float_tol(A, b)
    if exact:
        for sub in itertools.combinations(range(m), dim):
            x = Q.solve([A[i] for i in sub], [b[i] for i in sub])
            if x is None:
                continue
            key = tuple(x)
            if key in found:
                continue
            vals = [sum((a * y for a, y in zip(A[j], x)), Fraction(0)) for j in range(m)]
            if all(v <= b[j] for j, v in enumerate(vals)):
                found[key] = frozenset(j for j, v in enumerate(vals) if v == b[j])
        return list(found.keys()), list(found.values())
    Af = np.asarray(A, dtype=float)
    bf = np.asarray(b, dtype=float)
    verts, tight = _float_vertices(Af, bf, tol)
    return [tuple(float(x) for x in v) for v in verts], [frozenset(int(i) for i in np.flatnonzero(t)) for t in tight]


_INV_CACHE: dict = {}


def _subset_inverses(A: np.ndarray):
    key = (A.shape, A.tobytes())
    hit = _INV_CACHE.get(key)
    if hit is not None:
        return hit
    m, n = A.shape
    subs = np.array(list(itertools.combinations(range(m), n)), dtype=int).reshape(-1, n)
    mats = A[subs]
    dets = np.linalg.det(mats)
    ok = np.abs(dets) > 1e-12
    subs, inv = subs[ok], np.linalg.inv(mats[ok])
    if len(_INV_CACHE) > 256:
        _INV_CACHE.clear()
    _INV_CACHE[key] = (subs, inv)
    return subs, inv


def _float_vertices(A: np.ndarray, b: np.ndarray, tol: float):
    subs, inv = _subset_inverses(A)
    if len(subs) == 0:
        return np.zeros((0, A.shape[1])), np.zeros((0, len(b)), dtype=bool)
    x = np.einsum("kij,kj->ki", inv, b[subs])
    slack = b[None, :] - x @ A.T
    feas = np.all(slack >= -tol, axis=1)
    x, slack = x[feas], slack[feas]
    if len(x) == 0:
        return x, np.zeros((0, len(b)), dtype=bool)
    tight = np.abs(slack) <= tol
    # merge numerically equal points (degenerate vertices hit by several subsets)
    order = np.lexsort(x.T[::-1])
    x, tight = x[order], tight[order]
    keep = [0]
    for i in range(1, len(x)):
        if np.max(np.abs(x[i] - x[keep[-1]])) > 10 * tol:
            keep.append(i)
        else:
            tight[keep[-1]] |= tight[i]
    return x[keep], tight[keep]


def _pyramid(A, b, verts, tight, d, exact, top=False):
    """Volume and centroid of the polytope spanned by ``verts`` in R^d.

    Returns ``(volume, centroid, facets)`` where ``facets`` maps each
    facet-supporting constraint index to its lattice-normalized volume
    (only filled at the top level).
    """
    zero = Fraction(0) if exact else 0.0
    facets: dict = {}
    if not verts:
        return zero, None, facets
    if d == 1:
        xs = [v[0] for v in verts]
        lo, hi = min(xs), max(xs)
        if top:
            for i, row in enumerate(A):
                if row[0] == 0:
                    continue
                if any(i in tight[j] for j, v in enumerate(verts)):
                    facets[i] = (Fraction(1) if exact else 1.0) / abs(row[0])
        return hi - lo, ((lo + hi) / 2,), facets
    if _affine_rank(verts, exact) < d:
        return zero, None, facets
    p = min(verts)
    total = zero
    moment = [zero] * d
    seen = set()
    for i, row in enumerate(A):
        members = [j for j, t in enumerate(tight) if i in t]
        key = frozenset(members)
        if len(members) < d or _affine_rank([verts[j] for j in members], exact) != d - 1:
            continue
        k = max(range(d), key=lambda c: abs(row[c]))
        piv = row[k]
        rows2, rhs2 = [], []
        for j, rj in enumerate(A):
            f = rj[k] / piv
            rows2.append([rj[c] - f * row[c] for c in range(d) if c != k])
            rhs2.append(b[j] - f * b[i])
        fverts = [tuple(verts[j][c] for c in range(d) if c != k) for j in members]
        ftight = [tight[j] - {i} for j in members]
        fvol, fcent, _ = _pyramid(rows2, rhs2, fverts, ftight, d - 1, exact)
        lvol = fvol / abs(piv)
        if top:
            facets[i] = lvol
        if key in seen:
            continue
        seen.add(key)
        height = b[i] - sum((a * x for a, x in zip(row, p)), zero)
        piece = height * lvol / d
        if piece == 0:
            continue
        total += piece
        # lift the facet centroid back and take the pyramid centroid
        c = list(fcent)
        xk = (b[i] - sum((row[cc] * y for cc, y in zip([cc for cc in range(d) if cc != k], c)), zero)) / piv
        c.insert(k, xk)
        for cc in range(d):
            moment[cc] += piece * (p[cc] + (c[cc] - p[cc]) * d / (d + 1))
    if total == 0:
        return zero, None, facets
    return total, tuple(m / total for m in moment), facets


class Polytope:
    """Bounded intersection of halfspaces ``<x, normal> <= offset``.

    Exact (Fraction) when all data are rational, floating otherwise.
    Redundant halfspaces are kept and flagged so indices stay aligned with
    the rays of a fan.
    """

    def __init__(self, halfspaces: Sequence, dim: int | None = None, check_bounded: bool = True):
        normals = [tuple(h[0]) for h in halfspaces]
        offsets = [h[1] for h in halfspaces]
        if dim is None:
            if not normals:
                raise ValueError("dimension required for an empty halfspace list")
            dim = len(normals[0])
        self.dim = int(dim)
        flat = [x for row in normals for x in row] + list(offsets)
        self.exact = Q.is_exact(flat) or all(isinstance(x, str) or Q.is_exact([x]) for x in flat)
        if self.exact:
            self.normals = [Q.fvec(w) for w in normals]
            self.offsets = [Q.to_fraction(c) for c in offsets]
        else:
            self.normals = [tuple(float(x) for x in w) for w in normals]
            self.offsets = [float(c) for c in offsets]
        for w in self.normals:
            if len(w) != self.dim:
                raise ValueError(f"normal {w} has wrong length for dimension {self.dim}")
        if check_bounded:
            self._check_bounded()

    # -- construction helpers ------------------------------------------------
    @classmethod
    def from_vertices(cls, points: Sequence[Sequence]) -> "Polytope":
        """Halfspace description of conv(points), equalities as opposite pairs."""
        pts = [Q.fvec(p) for p in points]
        if not pts:
            raise ValueError("need at least one point")
        n = len(pts[0])
        base = pts[0]
        diffs = [[x - y for x, y in zip(p, base)] for p in pts[1:]]
        red, _ = Q.rref(diffs) if diffs else ([], [])
        D = len(red)
        comp = Q.nullspace(red, n) if red else [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        halfspaces = set()
        for c in comp:
            c = Q.primitive(c)
            off = sum((a * x for a, x in zip(c, base)), Fraction(0))
            halfspaces.add((c, off))
            halfspaces.add((tuple(-x for x in c), -off))
        if D >= 1:
            for sub in itertools.combinations(range(len(pts)), D):
                dirs = [[x - y for x, y in zip(pts[s], pts[sub[0]])] for s in sub[1:]]
                ns = Q.nullspace(dirs + [list(c) for c in comp], n)
                if len(ns) != 1:
                    continue
                w = Q.primitive(ns[0])
                vals = [sum((a * x for a, x in zip(w, p)), Fraction(0)) for p in pts]
                top = max(vals)
                bot = min(vals)
                at = vals[sub[0]]
                if at == top:
                    halfspaces.add((w, top))
                if at == bot:
                    halfspaces.add((tuple(-x for x in w), -bot))
        out = cls(sorted(halfspaces), n)
        return out

    def _check_bounded(self) -> None:
        from .cones import double_description

        if self.exact:
            rays, lin = double_description([[-x for x in w] for w in self.normals], self.dim)
        else:
            rays, lin = _float_recession(np.array(self.normals, dtype=float).reshape(-1, self.dim), self.dim)
        if lin:
            raise UnboundedError(lin[0])
        if rays:
            raise UnboundedError(rays[0])

    # -- vertex data ------------------------------------------------------------
    @cached_property
    def _vdata(self):
        return _enumerate(self.normals, self.offsets, self.dim, self.exact)

    @property
    def vertices(self) -> list:
        return list(self._vdata[0])

    def enumerate_vertices(self) -> list:
        return self.vertices

    @property
    def is_empty(self) -> bool:
        return not self._vdata[0]

    @cached_property
    def affine_dim(self) -> int:
        if self.is_empty:
            return -1
        return _affine_rank(self.vertices, self.exact)

    @property
    def is_full_dimensional(self) -> bool:
        return self.affine_dim == self.dim

    @cached_property
    def _geometry(self):
        verts, tight = self._vdata
        return _pyramid(self.normals, self.offsets, verts, tight, self.dim, self.exact, top=True)

    def volume(self):
        """Euclidean n-volume; exact on rational data, 0 if degenerate."""
        return self._geometry[0]

    def centroid(self):
        c = self._geometry[1]
        if c is None:
            verts = self.vertices
            if not verts:
                raise ValueError("empty polytope has no centroid")
            return tuple(sum(v[i] for v in verts) / len(verts) for i in range(self.dim))
        return c

    @property
    def redundant(self) -> tuple:
        """Flag per halfspace: True when it supports no facet."""
        facets = self._geometry[2] if self.is_full_dimensional else {}
        return tuple(i not in facets for i in range(len(self.normals)))

    def lattice_facet_volume(self, i: int):
        """Facet volume for halfspace i divided by |normal_i| (0 when not a facet)."""
        if not self.is_full_dimensional:
            raise ValueError("facet volumes need a full-dimensional polytope")
        return self._geometry[2].get(i, Fraction(0) if self.exact else 0.0)

    def facet_volume(self, w: Sequence, lattice: bool = False):
        """Volume of the face maximizing <x, w>; 0 unless that face is a facet.

        ``lattice=True`` returns the Euclidean volume divided by |w|, which
        is rational for rational polytopes and integral w.
        """
        if all(x == 0 for x in w):
            raise ValueError("zero direction")
        if not self.is_full_dimensional:
            raise ValueError("facet volumes need a full-dimensional polytope")
        w = list(w)
        for i, row in enumerate(self.normals):
            if i not in self._geometry[2]:
                continue
            if _positively_parallel(row, w, self.exact):
                lv = self._geometry[2][i]
                if lattice:
                    scale = _ratio(row, w)
                    return lv * scale if self.exact and Q.is_exact(w) else float(lv) * float(scale)
                return float(lv) * math.sqrt(sum(float(x) ** 2 for x in row))
        return Fraction(0) if (lattice and self.exact and Q.is_exact(w)) else 0.0

    def support(self, w: Sequence):
        """h_P(w) = max over vertices of <x, w>."""
        if self.is_empty:
            raise ValueError("support function of an empty polytope")
        exact = self.exact and Q.is_exact(w)
        if exact:
            wf = Q.fvec(w)
            return max(sum((a * x for a, x in zip(wf, v)), Fraction(0)) for v in self.vertices)
        V = np.array(self.vertices, dtype=float)
        return float(np.max(V @ np.asarray(w, dtype=float)))

    def translate(self, c: Sequence) -> "Polytope":
        shifted = []
        for w, off in zip(self.normals, self.offsets):
            shifted.append((w, off + sum((a * x for a, x in zip(w, c)), Fraction(0) if self.exact else 0.0)))
        return Polytope(shifted, self.dim, check_bounded=False)

    def scale(self, s) -> "Polytope":
        return Polytope([(w, off * s) for w, off in zip(self.normals, self.offsets)], self.dim, check_bounded=False)

    def to_json(self) -> dict:
        return {
            "halfspaces": [{"normal": [Q.format_rational(x) for x in w], "offset": Q.format_rational(c)}
                           for w, c in zip(self.normals, self.offsets)],
            "vertices": [[Q.format_rational(x) for x in v] for v in self.vertices],
        }


def _float_recession(A: np.ndarray, dim: int):
    """Recession directions of {Ax <= b} (floating): nonzero d with A d <= 0."""
    from scipy.optimize import linprog

    if np.linalg.matrix_rank(A) < dim:
        _, _, vt = np.linalg.svd(A)
        return [], [tuple(vt[-1])]
    for k in range(dim):
        for sgn in (1.0, -1.0):
            c = np.zeros(dim)
            c[k] = -sgn
            res = linprog(c, A_ub=A, b_ub=np.zeros(len(A)), bounds=[(-1, 1)] * dim, method="highs")
            if res.status == 0 and -res.fun > 1e-9:
                return [tuple(res.x)], []
    return [], []


def _positively_parallel(u, w, exact) -> bool:
    if exact and Q.is_exact(w):
        u = Q.fvec(u)
        w = Q.fvec(w)
        k = next(i for i, x in enumerate(w) if x != 0)
        if u[k] == 0 or (u[k] > 0) != (w[k] > 0):
            return False
        f = u[k] / w[k]
        return all(a == f * b for a, b in zip(u, w))
    uu = np.array([float(x) for x in u])
    ww = np.array([float(x) for x in w])
    cos = uu @ ww / (np.linalg.norm(uu) * np.linalg.norm(ww))
    return cos > 1 - 1e-12


def _ratio(u, w):
    """|u| / |w| for positively parallel u, w (exact when both rational)."""
    if Q.is_exact(list(u)) and Q.is_exact(list(w)):
        k = next(i for i, x in enumerate(w) if x != 0)
        return Fraction(u[k]) / Fraction(w[k])
    return math.sqrt(sum(float(x) ** 2 for x in u)) / math.sqrt(sum(float(x) ** 2 for x in w))


def divisor_polytope(L) -> Polytope:
    """Q_L = {u : <u, v_i> <= a_i} for a divisor class representative."""
    X = L.variety
    return Polytope(list(zip(X.fan.rays, L.coeffs)), X.n)


def mixed_volume_top(P: Polytope, Qb: Polytope):
    """V(P^{n-1}, Q) = (1/n) sum over facets of P of h_Q(w_i) * lvol_i(P)."""
    if not P.is_full_dimensional:
        raise ValueError("mixed_volume_top needs a full-dimensional first argument")
    if Qb.is_empty:
        raise ValueError("second polytope is empty")
    n = P.dim
    facets = P._geometry[2]
    total = Fraction(0) if (P.exact and Qb.exact) else 0.0
    seen = set()
    for i, lv in facets.items():
        key = Q.primitive(P.normals[i]) if P.exact else tuple(np.round(np.asarray(P.normals[i]) / np.linalg.norm(P.normals[i]), 12))
        if key in seen:
            continue
        seen.add(key)
        total += Qb.support(P.normals[i]) * lv
    return total / n


# -- fast floating path used by the Minkowski solver ----------------------------

def halfspace_geometry(A: np.ndarray, b: np.ndarray):
    """Volume, Euclidean facet volumes (for unit rows of A) and vertices.

    Specialized to dimensions 2 and 3 with vectorized numpy; other
    dimensions use the generic recursion.  Also returns the boolean
    vertex/facet incidence matrix.
    """
    m, n = A.shape
    tol = _float_tol(A, b)
    V, T = _float_vertices(A, b, tol)
    areas = np.zeros(m)
    if len(V) <= n:
        return 0.0, areas, V, T
    if n == 2:
        tang = np.stack([-A[:, 1], A[:, 0]], axis=1)
        proj = V @ tang.T
        hi = np.where(T, proj, -np.inf).max(axis=0)
        lo = np.where(T, proj, np.inf).min(axis=0)
        counts = T.sum(axis=0)
        areas = np.where(counts >= 2, hi - lo, 0.0)
    elif n == 3:
        for i in range(m):
            idx = np.flatnonzero(T[:, i])
            if len(idx) < 3:
                continue
            P = V[idx]
            c = P.mean(axis=0)
            e1 = P[0] - c
            if np.linalg.norm(e1) < tol:
                e1 = P[1] - c
            e1 = e1 - (e1 @ A[i]) * A[i]
            e1 /= np.linalg.norm(e1)
            e2 = np.cross(A[i], e1)
            ang = np.arctan2((P - c) @ e2, (P - c) @ e1)
            P = P[np.argsort(ang)]
            cr = np.cross(P - c, np.roll(P, -1, axis=0) - c)
            areas[i] = 0.5 * abs(float(np.sum(cr @ A[i])))
    else:
        verts = [tuple(v) for v in V]
        tight = [frozenset(np.flatnonzero(t)) for t in T]
        vol, _, facets = _pyramid([tuple(r) for r in A], list(b), verts, tight, n, False, top=True)
        for i, lv in facets.items():
            areas[i] = lv * np.linalg.norm(A[i])
        return float(vol), areas, V, T
    p = V.mean(axis=0)
    vol = float(np.sum((b - A @ p) * areas) / n)
    return vol, areas, V, T
