"""Numerical polar transform of weight-s log-concave functions on a cone.

For f on a cone C, homogeneous of weight s > 1 with f^{1/s} concave,

    Hf(w) = inf_{v in C, f(v) > 0} (w.v / f(v)^{1/s})^{s/(s-1)}

for w in the dual cone.  The ratio is scale invariant, so we minimize it
over the simplex of generator weights v = sum lam_j g_j by projected
gradient descent.  A lower bound comes from the supergradient q of
f^{1/s} at the candidate minimizer: f(x)^{1/s} <= q.x on all of C, hence
Hf(w) >= (min_j w.g_j / q.g_j)^{s/(s-1)} over generators with q.g_j > 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .cones import ConeDescription
from .errors import ConvergenceError, PreconditionError


@dataclass(frozen=True)
class ConcaveConeFunction:
    cone: ConeDescription
    weight: float
    eval: Callable[[np.ndarray], float]
    supergradient: Callable[[np.ndarray], np.ndarray] | None = None

    def gradient(self, v: np.ndarray) -> np.ndarray:
        if self.supergradient is not None:
            return np.asarray(self.supergradient(v), dtype=float)
        step = 1e-6 * max(1.0, float(np.linalg.norm(v)))
        f0 = self.eval(v)
        g = np.zeros_like(v)
        for k in range(len(v)):
            e = np.zeros_like(v)
            e[k] = step
            g[k] = (self.eval(v + e) - f0) / step
        return g


@dataclass
class PolarResult:
    value: float
    lower_bound: float
    argmin: np.ndarray
    converged: bool
    restarts: int


def project_simplex(y: np.ndarray) -> np.ndarray:
    """Euclidean projection onto {x >= 0, sum x = 1}."""
    u = np.sort(y)[::-1]
    css = np.cumsum(u) - 1.0
    k = np.arange(1, len(y) + 1)
    rho = np.nonzero(u - css / k > 0)[0][-1]
    return np.maximum(y - css[rho] / (rho + 1), 0.0)


def _dual_status(f: ConcaveConeFunction, w: np.ndarray, exact_w=None) -> str:
    gens = f.cone.generators
    if exact_w is not None:
        vals = [sum(a * b for a, b in zip(g, exact_w)) for g in gens]
        if min(vals) < 0:
            return "outside"
        return "boundary" if min(vals) == 0 else "interior"
    vals = np.asarray(gens, dtype=float) @ w
    scale = max(1.0, float(np.max(np.abs(w))))
    if vals.min() < -1e-12 * scale:
        return "outside"
    return "boundary" if vals.min() <= 1e-12 * scale else "interior"


def _lower_bound(f, w, G, v) -> float:
    s = f.weight
    fv = f.eval(v)
    q = f.gradient(v) * fv ** (1.0 / s - 1.0) / s  # gradient of f^{1/s}
    qg = G @ q
    wg = G @ w
    pos = qg > 1e-300
    if not np.any(pos):
        return 0.0
    return max(0.0, float(np.min(wg[pos] / qg[pos]))) ** (s / (s - 1.0))


def _descend(f, w, G, lam, max_iter):
    s = f.weight

    def phi(l):
        v = G.T @ l
        fv = f.eval(v)
        if fv <= 0:
            return np.inf, None
        return float(w @ v) / fv ** (1.0 / s), v

    def grad(l, v):
        fv = f.eval(v)
        df = f.gradient(v)
        return G @ (w / fv ** (1.0 / s) - float(w @ v) / s * fv ** (-1.0 / s - 1.0) * df)

    val, v = phi(lam)
    g = grad(lam, v)
    step = 0.1 / max(1e-12, float(np.linalg.norm(g)))
    for _ in range(max_iter):
        while True:
            cand = project_simplex(lam - step * g)
            cval, cv = phi(cand)
            if cval <= val - 1e-4 * float(g @ (lam - cand)):
                break
            step *= 0.5
            if step < 1e-18:
                return val, lam
        moved = cand - lam
        gnew = grad(cand, cv)
        dg = gnew - g
        lam, val, v = cand, cval, cv
        if float(np.linalg.norm(moved)) < 1e-13:
            break
        curv = float(moved @ dg)
        step = float(moved @ moved) / curv if curv > 1e-300 else step * 2.0
        g = gnew
    return val, lam


def polar_solve(f: ConcaveConeFunction, w, tol: float = 1e-6, restarts: int = 16,
                seed: int = 0, max_iter: int = 500, exact_w=None) -> PolarResult:
    """Minimize over the cone; stop early once the value/lower-bound bracket closes."""
    w = np.asarray(w, dtype=float)
    s = f.weight
    G = np.asarray(f.cone.generators, dtype=float)
    status = _dual_status(f, w, exact_w)
    if status != "interior":
        return PolarResult(0.0, 0.0, np.zeros(G.shape[1]), True, 0)
    if f.eval(G.mean(axis=0)) <= 0:
        raise PreconditionError("f not positive in interior")
    rng = np.random.default_rng(seed)
    best = None
    best_lb = 0.0
    for k in range(restarts):
        lam0 = np.ones(len(G)) / len(G) if k == 0 else rng.dirichlet(np.ones(len(G)))
        ratio, lam = _descend(f, w, G, lam0, max_iter)
        value = ratio ** (s / (s - 1.0))
        v = G.T @ lam
        lb = _lower_bound(f, w, G, v)
        best_lb = max(best_lb, lb)
        if best is None or value < best[0]:
            best = (value, v)
        # any feasible point bounds Hf from above; an estimate past it is gradient noise
        best_lb = min(best_lb, best[0])
        if best[0] - best_lb <= tol * best[0]:
            return PolarResult(best[0], best_lb, best[1] / f.eval(best[1]) ** (1.0 / s), True, k + 1)
    value, v = best
    return PolarResult(value, best_lb, v / f.eval(v) ** (1.0 / s), value - best_lb <= tol * value, restarts)


def polar_value(f: ConcaveConeFunction, w, tol: float = 1e-6, **kw) -> float:
    return polar_solve(f, w, tol, **kw).value


def polar_argmin(f: ConcaveConeFunction, w, tol: float = 1e-6, **kw) -> np.ndarray:
    """A minimizer normalized to f = 1."""
    res = polar_solve(f, w, tol, **kw)
    if res.value == 0:
        raise PreconditionError("polar transform vanishes; no minimizer on the slice")
    if not res.converged:
        raise ConvergenceError(f"bracket [{res.lower_bound}, {res.value}] did not close")
    return res.argmin


def formal_zariski(f: ConcaveConeFunction, w, tol: float = 1e-6, **kw):
    """w = p + n with p on the ray of D(v) = Df(v)/s for a minimizer v, Hf(p) = Hf(w)."""
    res = polar_solve(f, w, tol, **kw)
    if res.value <= 0:
        raise PreconditionError("vanishing polar transform has no Zariski decomposition")
    v = res.argmin
    Dv = f.gradient(v) / f.weight
    p = res.value ** ((f.weight - 1.0) / f.weight) * Dv
    return p, np.asarray(w, dtype=float) - p


# -- cone functions for the two volume functions -------------------------------------

def nef_volume_function(X) -> ConcaveConeFunction:
    """A -> A^n on the nef cone (divisor coordinates), weight n."""
    from .positivity import contract

    T, n = X.intersection_tensor, X.n
    return ConcaveConeFunction(X.nef, float(n), lambda x: float(contract(T, x, n)),
                               lambda x: n * contract(T, x, n - 1))


def divisor_volume_function(X) -> ConcaveConeFunction:
    """D -> vol(D) = n! vol(Q_D) on the effective cone, with gradient n <D^{n-1}>."""
    import math

    from .polytope import halfspace_geometry

    V = X.ray_matrix
    norms = X.ray_norms
    U = V / norms[:, None]
    free = list(X.free)
    n = X.n

    def rep(x):
        a = np.zeros(X.r)
        a[free] = x
        return a / norms

    def value(x):
        vol, _, _, _ = halfspace_geometry(U, rep(x))
        return math.factorial(n) * vol

    def grad(x):
        _, areas, _, _ = halfspace_geometry(U, rep(x))
        t = math.factorial(n - 1) * areas / norms
        return n * t[free]

    return ConcaveConeFunction(X.eff, float(n), value, grad)
