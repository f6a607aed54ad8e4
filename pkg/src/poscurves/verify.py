"""Randomized verification of every invariant, with a deterministic JSON report.

Each property draws ``count`` instances from a per-instance seed derived
from (seed, property name, instance index), so reports do not depend on
scheduling.  Instances of a property may run in a thread pool whose size
comes from ``POSCURVES_THREADS``.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from . import __version__
from .cones import ConeDescription
from .errors import PreconditionError, TheoremViolation
from .fans import BUILTIN_FANS, validate_bundle
from .minkowski import FacetData, solve_minkowski, weight_to_facet_data
from .polar import (ConcaveConeFunction, divisor_volume_function, formal_zariski,
                    nef_volume_function, polar_value)
from .polytope import Polytope, divisor_polytope, halfspace_geometry, mixed_volume_top
from .positivity import (ci_membership, classify_boundary, mcal, mcal_derivative, morse_bound,
                         nef_margin, pi_hat, positive_product_top, volhat, zariski_decompose)
from .toric import (DivisorClass, is_movable_sigma, pair, psef_threshold,
                    sigma_decompose, volume)

CONE_ALIASES = {
    "nef": "nef_divisors", "eff": "eff_divisors", "mov": "mov_divisors",
    "mori": "eff_curves", "psef_curves": "eff_curves", "movable_curves": "mov_curves",
}


@dataclass(frozen=True)
class Tolerances:
    solver: float = 1e-8
    volume: float = 1e-5
    derivative: float = 1e-3
    polar: float = 1e-4
    orthogonality: float = 1e-6
    psef: float = 1e-8
    gap: float = 1e-5
    gap_margin: float = 1e-2


def random_class(variety, cone_id: str, seed, interior: bool = True):
    """Convex combination of cone generators with coefficients in (1/1000)Z.

    Weights are uniform on the simplex, mixed with the barycenter at 1/10
    so the class is interior; ``seed`` is an int or a numpy Generator.
    """
    name = CONE_ALIASES.get(cone_id, cone_id)
    cone = variety.cones[name]
    gens = cone.generators
    if not gens:
        raise PreconditionError(f"cone {name} is trivial")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    m = len(gens)
    u = rng.dirichlet(np.ones(m))
    if interior:
        u = 0.9 * u + 0.1 / m
    k = np.floor(u * 1000).astype(int)
    rest = 1000 - int(k.sum())
    order = np.argsort(-(u * 1000 - k), kind="stable")
    k[order[:rest]] += 1
    coords = [sum((Fraction(int(k[j]), 1000) * gens[j][i] for j in range(m)), Fraction(0))
              for i in range(cone.dim)]
    if name.endswith("curves"):
        return variety.curve_from_coords(coords)
    return variety.divisor_from_coords(coords)


def _rng(seed: int, prop: str, k: int) -> np.random.Generator:
    digest = hashlib.sha256(f"{seed}:{prop}:{k}".encode()).digest()
    return np.random.default_rng(int.from_bytes(digest[:8], "little"))


class Skip(Exception):
    """Property does not apply to this fan or instance."""


@dataclass
class Outcome:
    ok: bool
    residual: float = 0.0
    witness: dict | None = None


def _rel(a, b) -> float:
    a, b = float(a), float(b)
    return abs(a - b) / max(abs(b), 1e-300)


def _cls(x) -> list:
    return x.to_json()["divisor" if isinstance(x, DivisorClass) else "curve"]


# -- toric core ------------------------------------------------------------------

def p_cone_duality(X, rng, tol):
    worst = 0
    for name, C in X.cones.items():
        dual = ConeDescription.from_inequalities(C.generators, C.dim)
        back = ConeDescription.from_inequalities(dual.generators, C.dim)
        if sorted(back.generators) != sorted(C.generators):
            return Outcome(False, 1.0, {"cone": name})
        for g in C.generators:
            if min(C.values(g)) < 0:
                return Outcome(False, 1.0, {"cone": name, "generator": list(g)})
    return Outcome(True, worst)


def p_pairing_invariance(X, rng, tol):
    L = random_class(X, "eff", rng)
    alpha = random_class(X, "mov_curves", rng)
    u = rng.integers(-5, 6, size=X.n)
    shift = [int(sum(int(a) * b for a, b in zip(u, v))) for v in X.fan.rays]
    L2 = X.divisor([a + s for a, s in zip(L.coeffs, shift)])
    ok = pair(L, alpha) == pair(L2, alpha) and L == L2
    return Outcome(ok, 0.0 if ok else 1.0, {"divisor": _cls(L), "curve": _cls(alpha), "shift": shift})


def p_cone_pairings(X, rng, tol):
    nef = X.generator_divisors("nef_divisors")
    vals = [pair(D, C) for D in nef for C in X.wall_curves]
    movc = X.generator_curves("mov_curves")
    vals += [pair(X.basis_divisor(i), a) for a in movc for i in range(X.r)]
    ok = min(vals) >= 0
    return Outcome(ok, float(-min(min(vals), 0)))


def p_sigma_idempotence(X, rng, tol):
    L = random_class(X, "eff", rng)
    P, N = sigma_decompose(L)
    P2, N2 = sigma_decompose(P)
    ok = all(x >= 0 for x in N.coeffs) and N2.is_zero() and P2 == P and volume(L) == volume(P)
    return Outcome(ok, 0.0 if ok else 1.0, {"divisor": _cls(L)})


def p_movable_sigma(X, rng, tol):
    L = random_class(X, "eff", rng, interior=bool(rng.integers(0, 2)))
    ok = X.is_movable_divisor(L) == is_movable_sigma(L)
    for g in X.generator_divisors("mov_divisors"):
        ok = ok and is_movable_sigma(g)
    return Outcome(ok, 0.0 if ok else 1.0, {"divisor": _cls(L)})


# -- polytope geometry ---------------------------------------------------------------

def p_pairing_identity(X, rng, tol):
    A = random_class(X, "nef", rng)
    alpha = positive_product_top(A)
    L = random_class(X, "eff", rng)
    mv = math.factorial(X.n) * mixed_volume_top(divisor_polytope(A), divisor_polytope(L))
    P, _ = sigma_decompose(L)
    M = random_class(X, "mov", rng)
    mvm = math.factorial(X.n) * mixed_volume_top(divisor_polytope(A), divisor_polytope(M))
    ok = mv == pair(P, alpha) and mvm == pair(M, alpha)
    # floating reconstruction of P_alpha instead of the exact Q_A
    rep = solve_minkowski(weight_to_facet_data(alpha), tol.solver)
    mvf = math.factorial(X.n) * float(mixed_volume_top(rep.polytope, divisor_polytope(M)))
    res = _rel(mvf, pair(M, alpha))
    ok = ok and res <= 1e-9
    return Outcome(ok, res, {"ample": _cls(A), "divisor": _cls(L), "movable": _cls(M)})


def p_brunn_minkowski(X, rng, tol):
    A = random_class(X, "eff", rng)
    B = random_class(X, "eff", rng)
    P, Qb = divisor_polytope(A), divisor_polytope(B)
    n = X.n
    mv = float(mixed_volume_top(P, Qb))
    rhs = float(P.volume()) ** ((n - 1) / n) * float(Qb.volume()) ** (1 / n)
    return Outcome(mv >= rhs * (1 - 1e-12), max(0.0, rhs - mv), {"first": _cls(A), "second": _cls(B)})


def p_volume_homogeneity(X, rng, tol):
    A = random_class(X, "eff", rng)
    B = random_class(X, "eff", rng)
    lam = Fraction(int(rng.integers(1, 30)), int(rng.integers(1, 10)))
    P, Qb = divisor_polytope(A), divisor_polytope(B)
    n = X.n
    ok = P.scale(lam).volume() == lam ** n * P.volume()
    ok = ok and mixed_volume_top(P.scale(lam), Qb) == lam ** (n - 1) * mixed_volume_top(P, Qb)
    return Outcome(ok, 0.0 if ok else 1.0, {"first": _cls(A), "second": _cls(B), "scale": str(lam)})


def p_vertex_roundtrip(X, rng, tol):
    A = random_class(X, "eff", rng)
    P = divisor_polytope(A)
    P2 = Polytope.from_vertices(P.vertices)
    ok = sorted(P2.vertices) == sorted(P.vertices) and P2.volume() == P.volume()
    return Outcome(ok, 0.0 if ok else 1.0, {"divisor": _cls(A)})


# -- Minkowski reconstruction -----------------------------------------------------------

def _hausdorff(V1, V2) -> float:
    a, b = np.asarray(V1, dtype=float), np.asarray(V2, dtype=float)
    d = np.linalg.norm(a[:, None, :] - b[None, :, :], axis=2)
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def p_minkowski_roundtrip(X, rng, tol):
    A = random_class(X, "nef", rng)
    alpha = positive_product_top(A)
    rep = solve_minkowski(weight_to_facet_data(alpha), tol.solver)
    QA = divisor_polytope(A)
    c = np.array(QA.centroid(), dtype=float)
    target = np.array(QA.vertices, dtype=float) - c
    dist = _hausdorff(rep.polytope.vertices, target)
    vres = _rel(rep.polytope.volume(), QA.volume())
    ok = rep.converged and dist <= 1e-6 and vres <= 1e-8
    return Outcome(ok, max(dist, vres), {"ample": _cls(A)})


def p_minkowski_scaling(X, rng, tol):
    alpha = random_class(X, "mov_curves", rng)
    data = weight_to_facet_data(alpha)
    lam = float(rng.uniform(0.5, 2.0))
    r1 = solve_minkowski(data, tol.solver)
    r2 = solve_minkowski(FacetData(data.normals, data.volumes * lam, data.dim, data.rays), tol.solver)
    n = X.n
    vres = _rel(r2.polytope.volume(), float(r1.polytope.volume()) * lam ** (n / (n - 1)))
    dist = _hausdorff(r2.polytope.vertices, np.array(r1.polytope.vertices) * lam ** (1 / (n - 1)))
    ok = vres <= 1e-8 and dist <= 1e-6
    return Outcome(ok, max(vres, dist), {"curve": _cls(alpha), "scale": lam})


def p_facet_gradient(X, rng, tol):
    A = random_class(X, "nef", rng)
    U = X.ray_matrix / X.ray_norms[:, None]
    h = np.array([float(a) for a in A.coeffs]) / X.ray_norms
    h = h + rng.uniform(-1e-3, 1e-3, size=len(h))
    _, areas, _, _ = halfspace_geometry(U, h)
    step = 1e-6
    worst = 0.0
    for i in range(len(h)):
        e = np.zeros(len(h))
        e[i] = step
        fd = (halfspace_geometry(U, h + e)[0] - halfspace_geometry(U, h - e)[0]) / (2 * step)
        if areas[i] > 1e-6:
            worst = max(worst, abs(fd - areas[i]) / areas[i])
        else:
            worst = max(worst, abs(fd))
    return Outcome(worst <= 1e-5, worst, {"ample": _cls(A)})


# -- positivity transforms ----------------------------------------------------------------

def p_bijection(X, rng, tol):
    L = random_class(X, "mov", rng)
    alpha = positive_product_top(L)
    res = mcal(alpha, tol.solver)
    P, _ = sigma_decompose(L)
    vol = volume(L)
    if res.exact:
        ok = res.witness_divisor == P and res.value == vol
        resid = 0.0 if ok else 1.0
    else:
        resid = max(_rel(res.value, vol), max(abs(a - float(b)) for a, b in
                                              zip(res.witness_divisor.coords, P.coords)))
        ok = resid <= 1e-6
    return Outcome(ok, resid, {"divisor": _cls(L)})


def relative_margin(L) -> float:
    """Nef margin of L divided by its largest coefficient (scale invariant)."""
    return float(nef_margin(L)) / float(max(abs(x) for x in L.coeffs))


def p_dichotomy(X, rng, tol):
    alpha = random_class(X, "mov_curves", rng)
    ci = ci_membership(alpha, tol.solver)
    m, vh = float(ci.mcal), float(ci.volhat)
    gap = (vh - m) / m
    ok = gap >= -tol.volume
    margin = relative_margin(ci.witness)
    if ci.member:
        ok = ok and abs(gap) <= tol.volume
    elif margin <= -tol.gap_margin:
        # the gap vanishes to second order at the nef boundary, so only
        # witnesses a fixed distance inside the non-nef region are tested
        ok = ok and gap > tol.gap
    return Outcome(ok, abs(gap) if ci.member else max(0.0, -gap),
                   {"curve": _cls(alpha), "relative_margin": margin, "gap": gap})


def _proportional(u, v, tol=1e-8) -> bool:
    u = np.asarray([float(x) for x in u])
    v = np.asarray([float(x) for x in v])
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    return float(np.linalg.norm(u / nu - v / nv)) <= tol


def p_log_concavity(X, rng, tol):
    a1 = random_class(X, "mov_curves", rng)
    a2 = random_class(X, "mov_curves", rng) if rng.random() < 0.8 else a1 * Fraction(int(rng.integers(1, 5)))
    n = X.n
    e = (n - 1) / n
    m1, m2, m12 = (float(mcal(a, tol.solver).value) for a in (a1, a2, a1 + a2))
    lhs, rhs = m12 ** e, m1 ** e + m2 ** e
    ok = lhs >= rhs * (1 - 1e-9)
    if abs(lhs - rhs) <= 1e-6 * lhs:
        ok = ok and _proportional(a1.coords, a2.coords)
    return Outcome(ok, max(0.0, rhs - lhs) / rhs, {"first": _cls(a1), "second": _cls(a2)})


def p_teissier(X, rng, tol):
    L1 = random_class(X, "mov", rng)
    L2 = random_class(X, "mov", rng) if rng.random() < 0.8 else L1 * Fraction(int(rng.integers(1, 4)))
    n = X.n
    lhs = float(pair(L2, positive_product_top(L1)))
    rhs = float(volume(L1)) ** ((n - 1) / n) * float(volume(L2)) ** (1 / n)
    ok = lhs >= rhs * (1 - 1e-12)
    if abs(lhs - rhs) <= 1e-9 * lhs:
        ok = ok and _proportional(L1.coords, L2.coords)
    return Outcome(ok, max(0.0, rhs - lhs) / rhs, {"first": _cls(L1), "second": _cls(L2)})


def p_diskant(X, rng, tol):
    L1 = random_class(X, "mov", rng)
    L2 = random_class(X, "mov", rng)
    n = X.n
    s = psef_threshold(L1, L2)
    v1, v2 = float(volume(L1)), float(volume(L2))
    x = float(pair(L2, positive_product_top(L1)))
    base = x ** (1 / (n - 1)) - float(s) * v2 ** (1 / (n - 1))
    lhs = x ** (n / (n - 1)) - v1 * v2 ** (1 / (n - 1))
    rhs = base ** n
    scale = x ** (n / (n - 1))
    ok = lhs >= rhs - 1e-10 * scale and base >= -1e-12 and float(s) ** n <= v1 / v2 * (1 + 1e-12)
    return Outcome(ok, max(0.0, rhs - lhs) / scale, {"first": _cls(L1), "second": _cls(L2), "s": str(s)})


def p_derivative(X, rng, tol):
    alpha = random_class(X, "mov_curves", rng)
    beta = random_class(X, "mov_curves", rng, interior=False)
    t = Fraction(1, 10000)
    d = float(mcal_derivative(alpha, beta, tol.solver))
    fd = (float(mcal(alpha + beta * t, tol.solver).value) - float(mcal(alpha - beta * t, tol.solver).value)) / (2 * float(t))
    res = abs(fd - d) / max(abs(d), 1e-12)
    return Outcome(res <= tol.derivative, res, {"alpha": _cls(alpha), "beta": _cls(beta)})


def p_zariski(X, rng, tol):
    alpha = random_class(X, "mori", rng)
    dec = zariski_decompose(alpha)
    nef = X.is_nef(dec.positive_divisor)
    vh = float(dec.volhat)
    # B.gamma scales like the volume itself
    orth_ok = dec.orthogonality_residual <= tol.orthogonality * vh
    agree = _rel(dec.sup_value, vh)
    ok = nef and dec.psef_residual <= tol.psef and orth_ok and agree <= tol.volume
    return Outcome(ok, max(dec.psef_residual, agree, dec.orthogonality_residual),
                   {"curve": _cls(alpha), "nef": nef, "psef_residual": dec.psef_residual,
                    "orthogonality_residual": dec.orthogonality_residual, "inf_sup_gap": agree})


def p_zariski_uniqueness(X, rng, tol):
    alpha = random_class(X, "mori", rng)
    B0 = zariski_decompose(alpha).positive_divisor
    start = rng.dirichlet(np.ones(len(X.nef.generators)))
    B1 = zariski_decompose(alpha, start=start).positive_divisor
    a, b = np.array(B0.coords, dtype=float), np.array(B1.coords, dtype=float)
    res = float(np.linalg.norm(a - b) / np.linalg.norm(a))
    return Outcome(res <= 1e-6, res, {"curve": _cls(alpha)})


def p_morse(X, rng, tol):
    alpha = random_class(X, "mov_curves", rng)
    beta = random_class(X, "mov_curves", rng, interior=False) * Fraction(int(rng.integers(1, 60)), 100)
    try:
        res = morse_bound(alpha, beta, tol.solver)
    except TheoremViolation as exc:
        return Outcome(False, 1.0, {"alpha": _cls(alpha), "beta": _cls(beta), "error": str(exc)})
    resid = 0.0
    ok = True
    diff = alpha - beta
    if res.certified_big and diff.movable:
        m = float(mcal(diff, tol.solver).value)
        resid = max(0.0, float(res.bound) - m)
        ok = m >= float(res.bound) - 1e-9 * float(res.mcal_alpha)
    return Outcome(ok, resid, {"alpha": _cls(alpha), "beta": _cls(beta), "certified": res.certified_big})


def p_pi_hat(X, rng, tol):
    L = random_class(X, "eff", rng)
    p = pi_hat(L, tol.solver)
    ok = X.is_effective(L - p) and X.is_nef(p)
    p2 = pi_hat(p, tol.solver)
    res = float(np.linalg.norm(np.array(p2.coords, float) - np.array(p.coords, float)))
    A = random_class(X, "nef", rng)
    ok = ok and res <= 1e-6 and pi_hat(A) == A
    return Outcome(ok, res, {"divisor": _cls(L)})


def _boundary_curve(X, rng):
    C = X.mov_curves
    q = C.inequalities[int(rng.integers(0, len(C.inequalities)))]
    face = [g for g in C.generators if sum(a * b for a, b in zip(q, g)) == 0]
    w = rng.dirichlet(np.ones(len(face)))
    k = np.maximum(np.round(w * 1000).astype(int), 1)
    coords = [sum((Fraction(int(k[j]), 1000) * face[j][i] for j in range(len(face))), Fraction(0))
              for i in range(C.dim)]
    return X.curve_from_coords(coords)


def p_boundary(X, rng, tol):
    alpha = _boundary_curve(X, rng)
    try:
        res = classify_boundary(alpha, tol.solver)
    except TheoremViolation as exc:
        return Outcome(False, 1.0, {"curve": _cls(alpha), "error": str(exc)})
    gens = X.generator_divisors("mov_divisors")
    pairings = [pair(g, alpha) for g in gens]
    if res.kind == "orthogonal":
        ok = pair(res.divisor, alpha) == 0 and X.is_movable_divisor(res.divisor) and not res.divisor.is_zero()
    else:
        # exactly one alternative: no movable divisor is orthogonal to alpha
        ok = min(pairings) > 0 and positive_product_top(res.divisor).close_to(alpha, 1e-6)
    return Outcome(ok, 0.0 if ok else 1.0, {"curve": _cls(alpha), "kind": res.kind})


def p_outside_movable(X, rng, tol):
    if X.mori.generators == X.mov_curves.generators:
        raise Skip
    for _ in range(50):
        alpha = random_class(X, "mori", rng)
        if not alpha.movable:
            break
    else:
        raise Skip
    m = mcal(alpha, tol.solver)
    vh = float(zariski_decompose(alpha).volhat)
    ok = m.value == 0 and m.status == "not movable" and vh > 0
    return Outcome(ok, 0.0 if ok else 1.0, {"curve": _cls(alpha), "volhat": vh})


def p_surface(X, rng, tol):
    if X.n != 2:
        raise Skip
    alpha = random_class(X, "mov_curves", rng)
    m = mcal(alpha, tol.solver)
    vh = float(volhat(alpha))
    vq = float(volume(m.witness_divisor)) if m.exact else float(m.value)
    res = max(_rel(vh, m.value), _rel(vq, m.value))
    return Outcome(res <= tol.volume, res, {"curve": _cls(alpha)})


def p_bundle_fixture(X, rng, tol):
    if X.fan != BUILTIN_FANS["PBundle"]:
        raise Skip
    try:
        validate_bundle(X)
    except Exception as exc:  # noqa: BLE001 - any failure is report content
        return Outcome(False, 1.0, {"error": str(exc)})
    alpha = X.curve([1, 0, 0, 1, 1])
    res = mcal(alpha)
    ok = res.value == 0 and res.degeneracy == X.basis_divisor(1)
    return Outcome(ok, 0.0 if ok else 1.0)


# -- polar engine --------------------------------------------------------------------------

def p_polar_volhat(X, rng, tol):
    alpha = random_class(X, "mov_curves", rng)
    hv = polar_value(nef_volume_function(X), alpha.coords, tol.polar * 1e-2, exact_w=alpha.coords)
    res = _rel(hv, volhat(alpha))
    return Outcome(res <= tol.polar, res, {"curve": _cls(alpha)})


def p_polar_mcal(X, rng, tol):
    alpha = random_class(X, "mov_curves", rng)
    hv = polar_value(divisor_volume_function(X), alpha.coords, tol.polar * 1e-2, exact_w=alpha.coords)
    res = _rel(hv, mcal(alpha, tol.solver).value)
    return Outcome(res <= tol.polar, res, {"curve": _cls(alpha)})


def p_polar_zariski(X, rng, tol):
    alpha = random_class(X, "mori", rng)
    f = nef_volume_function(X)
    p, n = formal_zariski(f, alpha.coords, tol.polar * 1e-2)
    dec = zariski_decompose(alpha)
    hp = polar_value(f, p, tol.polar * 1e-2)
    hw = float(dec.volhat)
    psef = float(min(np.array(X.nef.generators, float) @ n)) / max(1.0, float(np.linalg.norm(p)))
    target = np.array(dec.positive_curve.coords, dtype=float)
    res = max(_rel(hp, hw), float(np.linalg.norm(p - target) / np.linalg.norm(target)), max(0.0, -psef))
    return Outcome(res <= tol.polar, res, {"curve": _cls(alpha)})


def p_polar_homogeneity(X, rng, tol):
    f = nef_volume_function(X)
    s = f.weight
    w1 = np.array(random_class(X, "mori", rng).coords, dtype=float)
    w2 = np.array(random_class(X, "mori", rng).coords, dtype=float)
    lam = float(rng.uniform(0.5, 3.0))
    t = tol.polar * 1e-2
    h1, h2, h12, hl = (polar_value(f, w, t) for w in (w1, w2, w1 + w2, lam * w1))
    e = (s - 1) / s
    res = max(_rel(hl, lam ** (s / (s - 1)) * h1), max(0.0, h1 ** e + h2 ** e - h12 ** e) / h12 ** e)
    return Outcome(res <= tol.polar, res, {"first": list(w1), "second": list(w2)})


def p_concave_sampling(X, rng, tol):
    worst = 0.0
    for f, cone in ((nef_volume_function(X), "nef"), (divisor_volume_function(X), "eff")):
        x = np.array(random_class(X, cone, rng).coords, dtype=float)
        y = np.array(random_class(X, cone, rng).coords, dtype=float)
        lam = float(rng.uniform(0.5, 3.0))
        s = f.weight
        worst = max(worst, _rel(f.eval(lam * x), lam ** s * f.eval(x)))
        gap = f.eval(x) ** (1 / s) + f.eval(y) ** (1 / s) - f.eval(x + y) ** (1 / s)
        worst = max(worst, max(0.0, gap) / f.eval(x + y) ** (1 / s))
    return Outcome(worst <= 1e-9, worst)


def p_polar_involution(X, rng, tol):
    if X.n != 2:
        raise Skip
    n = X.n
    inner = tol.polar * 1e-2

    def hv(c):
        a = X.curve_from_coords(list(c))
        if X.membership(a, "eff_curves", 1e-12).status != "interior":
            return 0.0
        return float(zariski_decompose(a).volhat)

    def hgrad(c):
        dec = zariski_decompose(X.curve_from_coords(list(c)))
        return n / (n - 1) * np.array(dec.positive_divisor.coords, dtype=float)

    g = ConcaveConeFunction(X.mori, n / (n - 1), hv, hgrad)
    A = random_class(X, "nef", rng)
    val = polar_value(g, A.coords, inner, restarts=4, exact_w=A.coords)
    res = _rel(val, volume(A))
    return Outcome(res <= 1e-3, res, {"divisor": _cls(A)})


PROPERTIES = {
    "cone_duality_closure": (p_cone_duality, "once"),
    "pairing_representative_invariance": (p_pairing_invariance, "each"),
    "cone_generator_pairings": (p_cone_pairings, "once"),
    "sigma_decomposition_idempotence": (p_sigma_idempotence, "each"),
    "movable_cone_sigma_criterion": (p_movable_sigma, "each"),
    "pairing_identity_mixed_volume": (p_pairing_identity, "each"),
    "brunn_minkowski_mixed_volume": (p_brunn_minkowski, "each"),
    "volume_homogeneity": (p_volume_homogeneity, "each"),
    "vertex_halfspace_roundtrip": (p_vertex_roundtrip, "each"),
    "minkowski_roundtrip": (p_minkowski_roundtrip, "each"),
    "minkowski_scaling": (p_minkowski_scaling, "each"),
    "facet_volume_gradient": (p_facet_gradient, "each"),
    "mcal_positive_product_bijection": (p_bijection, "each"),
    "volhat_mcal_dichotomy": (p_dichotomy, "each"),
    "mcal_log_concavity": (p_log_concavity, "each"),
    "teissier_proportionality": (p_teissier, "each"),
    "diskant_inequality": (p_diskant, "each"),
    "mcal_derivative": (p_derivative, "each"),
    "zariski_certificates": (p_zariski, "each"),
    "zariski_uniqueness": (p_zariski_uniqueness, "each"),
    "morse_criterion": (p_morse, "each"),
    "pi_hat_properties": (p_pi_hat, "each"),
    "boundary_alternative": (p_boundary, "each"),
    "surface_volumes_coincide": (p_surface, "each"),
    "volhat_positive_outside_movable": (p_outside_movable, "each"),
    "bundle_fixture_relations": (p_bundle_fixture, "once"),
    "polar_volhat_agreement": (p_polar_volhat, "each"),
    "polar_mcal_agreement": (p_polar_mcal, "each"),
    "polar_formal_zariski": (p_polar_zariski, "each"),
    "polar_homogeneity_concavity": (p_polar_homogeneity, "each"),
    "concave_function_sampling": (p_concave_sampling, "each"),
    "polar_involution": (p_polar_involution, "each"),
}

# Claims the suite must exercise, each mapped to the properties that test it.
CLAIMS = {
    "volhat definition with zero outside the pseudo-effective cone": ["zariski_certificates", "polar_volhat_agreement"],
    "mcal vanishes off the movable cone while volhat stays positive on big classes": [
        "volhat_positive_outside_movable"],
    "polar transform duality on log-concave cone functions": ["polar_homogeneity_concavity", "polar_involution",
                                                             "concave_function_sampling"],
    "formal Zariski decomposition from the polar argmin": ["polar_formal_zariski"],
    "Zariski decomposition for curves exists and is unique": ["zariski_certificates", "zariski_uniqueness"],
    "psef threshold bound and Diskant inequality for movable divisors": ["diskant_inequality"],
    "Teissier proportionality for big movable divisors": ["teissier_proportionality"],
    "mcal vanishes iff a movable divisor is orthogonal": ["boundary_alternative", "bundle_fixture_relations"],
    "unique big movable witness L_alpha": ["mcal_positive_product_bijection"],
    "boundary classes have boundary witnesses": ["boundary_alternative"],
    "derivative of mcal": ["mcal_derivative"],
    "strict log concavity of mcal": ["mcal_log_concavity"],
    "Morse-type bigness criterion": ["morse_criterion"],
    "positive product map is a homeomorphism onto movable curves": ["mcal_positive_product_bijection",
                                                                    "minkowski_roundtrip"],
    "positive products as mixed volumes": ["pairing_identity_mixed_volume", "brunn_minkowski_mixed_volume"],
    "Minkowski weights and facet volume data": ["minkowski_roundtrip", "minkowski_scaling", "facet_volume_gradient"],
    "mcal equals n! times the volume of P_alpha": ["mcal_positive_product_bijection", "polar_mcal_agreement"],
    "CI classes have polytopes refined by the fan": ["volhat_mcal_dichotomy"],
    "volhat equals mcal exactly on the complete intersection cone": ["volhat_mcal_dichotomy",
                                                                      "surface_volumes_coincide"],
    "pi_hat retraction onto nef classes": ["pi_hat_properties"],
    "boundary alternative for movable curve classes": ["boundary_alternative"],
    "toric cones and pairing": ["cone_duality_closure", "pairing_representative_invariance",
                                "cone_generator_pairings", "movable_cone_sigma_criterion"],
    "sigma decomposition on toric divisors": ["sigma_decomposition_idempotence"],
    "polytope volume calculus": ["volume_homogeneity", "vertex_halfspace_roundtrip"],
}

OUT_OF_SCOPE = [
    {"topic": "mobility counts, weighted mobility and movable mobility of curve classes",
     "status": "not reproducible",
     "reason": "defined as asymptotic limits of enumerative counts of curves through general points; "
               "no finite computation on a fan approximates them with a certificate"},
    {"topic": "comparison conjecture between mobility and volhat", "status": "out of scope",
     "reason": "open conjecture; nothing to verify"},
    {"topic": "positive characteristic and Kahler extensions", "status": "out of scope",
     "reason": "statements about non-toric settings"},
    {"topic": "CI cone via birational models", "status": "out of scope",
     "reason": "requires non-toric birational models"},
]


@dataclass
class PropertyStats:
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    worst_residual: float = 0.0
    failures: list = field(default_factory=list)


@dataclass
class VerificationReport:
    fan_id: str
    seed: int
    count: int
    tolerances: dict
    version: str
    properties: dict
    coverage: dict
    out_of_scope: list

    @property
    def ok(self) -> bool:
        return all(p["failed"] == 0 for p in self.properties.values()) and self.coverage["ok"]

    @property
    def theorem_violations(self) -> int:
        return sum(p["failed"] for p in self.properties.values())

    def to_json(self) -> dict:
        return {
            "fan_id": self.fan_id, "seed": self.seed, "count": self.count,
            "tolerances": self.tolerances, "version": self.version,
            "status": "pass" if self.ok else "fail",
            "properties": self.properties, "coverage": self.coverage,
            "out_of_scope": self.out_of_scope,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)


def coverage_audit(properties=PROPERTIES, claims=CLAIMS) -> dict:
    missing = {c: [p for p in ps if p not in properties] for c, ps in claims.items()}
    missing = {c: ps for c, ps in missing.items() if ps or not claims[c]}
    unclaimed = sorted(set(properties) - {p for ps in claims.values() for p in ps})
    return {"ok": not missing, "claims": {c: ps for c, ps in claims.items()},
            "missing": missing, "unclaimed_properties": unclaimed}


def _run_instance(fn, X, seed, name, k, tol):
    rng = _rng(seed, name, k)
    try:
        return fn(X, rng, tol)
    except Skip:
        return None
    except TheoremViolation as exc:
        return Outcome(False, 1.0, {"error": str(exc), "witness": exc.witness})


def verify_suite(X, seed: int = 0, count: int = 10, tolerances: Tolerances | None = None,
                 fan_id: str = "custom", properties=None) -> VerificationReport:
    """Run every registered property ``count`` times (once for structural checks)."""
    tol = tolerances or Tolerances()
    threads = max(1, int(os.environ.get("POSCURVES_THREADS", "1")))
    out = {}
    for name, (fn, mode) in PROPERTIES.items():
        if properties is not None and name not in properties:
            continue
        n_inst = 1 if mode == "once" else count
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(lambda k: _run_instance(fn, X, seed, name, k, tol), range(n_inst)))
        else:
            results = [_run_instance(fn, X, seed, name, k, tol) for k in range(n_inst)]
        stats = PropertyStats()
        for k, res in enumerate(results):
            if res is None:
                stats.skipped += 1
                continue
            stats.worst_residual = max(stats.worst_residual, float(res.residual))
            if res.ok:
                stats.passed += 1
            else:
                stats.failed += 1
                stats.failures.append({"instance": k, "fan": X.fan.to_json(), "data": res.witness})
        out[name] = asdict(stats)
    return VerificationReport(fan_id, seed, count, asdict(tol), __version__, out,
                              coverage_audit(), OUT_OF_SCOPE)
