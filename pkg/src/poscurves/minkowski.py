"""Reconstruct a polytope from its facet normals and facet volumes.

Given unit normals u_i and targets r_i > 0 with sum r_i u_i = 0 and the
u_i spanning, there is a polytope, unique up to translation, whose facet
in direction u_i has volume r_i.  It minimizes sum r_i h_i over support
vectors h with vol(Q(h)) = 1 after rescaling.  We run projected gradient
descent on that problem until every facet is present and the facet
volumes are roughly proportional to r, then finish with Newton's method
on the facet-volume map F(h) = r, whose Jacobian is the ridge-volume
matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import PreconditionError
from .polytope import Polytope, halfspace_geometry


class MinkowskiError(PreconditionError):
    """Facet data violate a precondition of the Minkowski problem."""


@dataclass(frozen=True)
class FacetData:
    normals: np.ndarray  # (k, n) unit vectors
    volumes: np.ndarray  # (k,) positive targets
    dim: int
    rays: tuple = ()  # indices of the fan rays carrying each facet

    def balance(self) -> float:
        return float(np.linalg.norm(self.volumes @ self.normals))


@dataclass
class SolverReport:
    polytope: Polytope | None
    support: np.ndarray
    residual: float
    iterations: int
    converged: bool
    objective_trace: list = field(default_factory=list)

    def to_json(self) -> dict:
        out = {
            "converged": self.converged,
            "residual": self.residual,
            "iterations": self.iterations,
        }
        if self.polytope is not None:
            out["vertices"] = [list(map(float, v)) for v in self.polytope.vertices]
            out["volume"] = float(self.polytope.volume())
        return out


def weight_to_facet_data(alpha, fan=None) -> FacetData:
    """Facet data u_i = v_i/|v_i|, r_i = t_i |v_i| / (n-1)! on the support of t."""
    X = alpha.variety
    fan = fan or X.fan
    t = alpha.as_float()
    if any(x < 0 for x in alpha.coeffs):
        raise MinkowskiError("not a nonnegative Minkowski weight")
    idx = tuple(i for i, x in enumerate(alpha.coeffs) if x > 0)
    V = np.array([fan.rays[i] for i in idx], dtype=float).reshape(-1, fan.dim)
    if len(idx) == 0 or np.linalg.matrix_rank(V) < fan.dim:
        raise MinkowskiError("degenerate: positive support does not span, the volume vanishes")
    norms = np.linalg.norm(V, axis=1)
    U = V / norms[:, None]
    r = t[list(idx)] * norms / math.factorial(fan.dim - 1)
    return FacetData(U, r, fan.dim, idx)


def _check(data: FacetData) -> None:
    U, r = data.normals, data.volumes
    if len(r) == 0 or np.any(r <= 0):
        raise MinkowskiError("facet volumes must be positive")
    if np.linalg.matrix_rank(U) < data.dim:
        raise MinkowskiError("normals do not span")
    if data.balance() > 1e-8 * float(np.sum(r)):
        raise MinkowskiError(f"unbalanced facet data: |sum r_i u_i| = {data.balance():.3e}")


def _jacobian(U, h, V, T, n):
    """dF_i/dh_j: ridge volume over sin of the dihedral angle, diagonal by translation invariance."""
    k = len(h)
    J = np.zeros((k, k))
    if n not in (2, 3):
        return None
    cos = U @ U.T
    for i in range(k):
        for j in range(i + 1, k):
            common = T[:, i] & T[:, j]
            c = cos[i, j]
            if abs(c) > 1 - 1e-12:
                continue
            s = math.sqrt(1 - c * c)
            if n == 2:
                ridge = 1.0 if common.any() else 0.0
            else:
                if common.sum() < 2:
                    continue
                d = np.cross(U[i], U[j])
                proj = V[common] @ (d / np.linalg.norm(d))
                ridge = float(proj.max() - proj.min())
            J[i, j] = J[j, i] = ridge / s
    J[np.diag_indices(k)] = -np.sum(J * cos, axis=1)
    return J


def _fd_jacobian(U, h, F0):
    k = len(h)
    J = np.zeros((k, k))
    step = 1e-6 * max(1.0, float(np.max(np.abs(h))))
    for j in range(k):
        e = np.zeros(k)
        e[j] = step
        Fp = halfspace_geometry(U, h + e)[1]
        Fm = halfspace_geometry(U, h - e)[1]
        J[:, j] = (Fp - Fm) / (2 * step)
    return J


def _residual(F, r) -> float:
    return float(np.max(np.abs(F - r) / r))


def _recenter(U, h, V):
    c = V.mean(axis=0)
    return h - U @ c


def solve_minkowski(data: FacetData, tol: float = 1e-8, max_iter: int = 10_000) -> SolverReport:
    """Polytope with facet volume r_i in direction u_i, centroid at the origin."""
    _check(data)
    U, r, n = data.normals, data.volumes, data.dim
    h = np.ones(len(r))
    trace: list = []
    it = 0
    switch = 1e-2
    step = 1.0
    best = None
    while it < max_iter:
        # phase 1: projected gradient on the vol = 1 slice
        while it < max_iter:
            it += 1
            vol, F, V, T = halfspace_geometry(U, h)
            h = _recenter(U, h, V)
            scale = vol ** (1.0 / n)
            h, F = h / scale, F / scale ** (n - 1)
            obj = float(r @ h)
            trace.append(obj)
            lam = obj / n
            if np.all(F > 0) and _residual(lam * F, r) < switch:
                break
            g = r - (r @ F) / (F @ F) * F
            gg = float(g @ g)
            while True:
                cand = h - step * g
                cvol = halfspace_geometry(U, cand)[0]
                if cvol > 0 and float(r @ cand) / cvol ** (1.0 / n) <= obj - 1e-4 * step * gg:
                    h = cand
                    step *= 2.0
                    break
                step *= 0.5
                if step < 1e-16:
                    break
            if step < 1e-16:
                step = 1.0
                break
        # phase 2: Newton on F(h) = r from the rescaled iterate
        vol, F, V, T = halfspace_geometry(U, h)
        lam = float(r @ h) / (n * vol)
        h = h * lam ** (1.0 / (n - 1))
        for _ in range(60):
            it += 1
            vol, F, V, T = halfspace_geometry(U, h)
            res = _residual(F, r)
            trace.append(float(r @ h))
            if best is None or res < best[0]:
                best = (res, h.copy())
            if res < tol * 1e-3 or it >= max_iter:
                break
            J = _jacobian(U, h, V, T, n)
            if J is None:
                J = _fd_jacobian(U, h, F)
            delta = np.linalg.lstsq(J, r - F, rcond=None)[0]
            a = 1.0
            while a > 1e-6:
                cand = h + a * delta
                cvol, cF, cV, _ = halfspace_geometry(U, cand)
                if cvol > 0 and _residual(cF, r) < res:
                    h = cand
                    break
                a *= 0.5
            else:
                break
        if best[0] < tol:
            break
        switch /= 10
        if switch < 1e-8:
            break
    res, h = best
    vol, F, V, T = halfspace_geometry(U, h)
    poly = Polytope(list(zip(U.tolist(), h.tolist())), n, check_bounded=False)
    c = np.array(poly.centroid(), dtype=float)
    h = h - U @ c
    poly = Polytope(list(zip(U.tolist(), h.tolist())), n, check_bounded=False)
    return SolverReport(poly, h, res, it, res < tol, trace)
