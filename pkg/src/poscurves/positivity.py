"""Volume functions of curve classes: positive products, the movable volume
mcal, the nef-side volume volhat, Zariski decompositions for curves and the
statements built on them.

Floating results are snapped to nearby rationals (denominator <= 10^6)
and re-verified exactly whenever that is cheap; otherwise they are
reported at floating tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import minimize

from . import rational as Q
from .errors import ConvergenceError, PreconditionError, TheoremViolation
from .minkowski import MinkowskiError, SolverReport, solve_minkowski, weight_to_facet_data
from .polytope import divisor_polytope
from .toric import CurveClass, DivisorClass, pair, sigma_decompose, volume

NEF_TOL = 1e-8


def contract(T: np.ndarray, x: np.ndarray, k: int) -> np.ndarray:
    """Contract the symmetric tensor T with k copies of x."""
    for _ in range(k):
        T = T @ x
    return T


def _num(x):
    return x if isinstance(x, Fraction) else float(x)


def _json_num(x):
    return Q.format_rational(x) if isinstance(x, Fraction) else float(x)


# -- positive products and mcal ------------------------------------------------

def positive_product_top(L: DivisorClass) -> CurveClass:
    """<L^{n-1}> as the weight t_i = (n-1)! * lattice facet volume of Q_L along v_i."""
    X = L.variety
    P = divisor_polytope(L)
    if P.is_empty or not P.is_full_dimensional:
        raise PreconditionError("not big: divisor polytope is not full dimensional")
    fact = math.factorial(X.n - 1)
    return X.curve([fact * P.lattice_facet_volume(i) for i in range(X.r)])


@dataclass
class McalResult:
    value: object
    witness_divisor: DivisorClass | None
    degeneracy: DivisorClass | None
    status: str  # "ok", "degenerate" or "not movable"
    exact: bool = False
    report: SolverReport | None = None

    def to_json(self) -> dict:
        out = {"value": _json_num(self.value), "status": self.status, "exact": self.exact}
        if self.witness_divisor is not None:
            out["witness_divisor"] = self.witness_divisor.to_json()["divisor"]
        if self.degeneracy is not None:
            out["degeneracy_certificate"] = self.degeneracy.to_json()["divisor"]
        if self.report is not None:
            out["solver"] = self.report.to_json()
        return out


def orthogonal_movable(alpha: CurveClass) -> DivisorClass:
    """A nonzero movable divisor M with M . alpha = 0 (sum of such Mov^1 generators)."""
    X = alpha.variety
    gens = X.generator_divisors("mov_divisors")
    if alpha.exact:
        zero = [g for g in gens if pair(g, alpha) == 0]
    else:
        scale = max(1.0, float(np.max(np.abs(alpha.as_float()))))
        zero = [g for g in gens if abs(pair(g, alpha)) <= 1e-12 * scale]
    if not zero:
        raise TheoremViolation("no movable divisor is orthogonal to a class of vanishing volume",
                               witness=alpha.to_json())
    M = zero[0]
    for g in zero[1:]:
        M = M + g
    return M


def _exact_witness(L: DivisorClass, alpha: CurveClass):
    """Snap L to a rational class and accept it iff <L^{n-1}> == alpha exactly."""
    X = L.variety
    coords = Q.snap_vector(L.coords, 1e-9)
    if coords is None:
        return None
    Lx = X.divisor_from_coords(coords)
    try:
        P, _ = sigma_decompose(Lx)
        if positive_product_top(P) == alpha:
            return P
    except PreconditionError:
        return None
    return None


def mcal(alpha: CurveClass, tol: float = 1e-8) -> McalResult:
    """Movable volume n! vol(P_alpha) with its big movable witness L_alpha."""
    X = alpha.variety
    zero = Fraction(0) if alpha.exact else 0.0
    if any(t < 0 for t in alpha.coeffs):
        return McalResult(zero, None, None, "not movable", alpha.exact)
    try:
        data = weight_to_facet_data(alpha)
    except MinkowskiError:
        return McalResult(zero, None, orthogonal_movable(alpha), "degenerate", alpha.exact)
    rep = solve_minkowski(data, tol)
    if not rep.converged:
        raise ConvergenceError(f"Minkowski solver stopped at residual {rep.residual:.3e}", rep)
    L = X.divisor([rep.polytope.support(v) for v in X.fan.rays])
    if alpha.exact:
        P = _exact_witness(L, alpha)
        if P is not None:
            return McalResult(volume(P), P, None, "ok", True, rep)
    value = math.factorial(X.n) * float(rep.polytope.volume())
    return McalResult(value, L, None, "ok", False, rep)


# -- volhat and the Zariski decomposition --------------------------------------

def _nef_data(X):
    return np.array(X.nef.generators, dtype=float), X.intersection_tensor


def _inf_form(X, c: np.ndarray, start=None):
    """min alpha.A over nef A = G^T lam with A^n >= 1.  Returns (ratio, lam)."""
    n = X.n
    G, T = _nef_data(X)
    m = len(G)
    w = G @ c

    def vol(lam):
        return float(contract(T, G.T @ lam, n))

    def cons(lam):
        return max(vol(lam), 0.0) ** (1.0 / n) - 1.0

    def cons_jac(lam):
        x = G.T @ lam
        v = max(float(contract(T, x, n)), 1e-300)
        return v ** (1.0 / n - 1.0) * (G @ contract(T, x, n - 1))

    lam0 = np.ones(m) / m if start is None else np.asarray(start, dtype=float)
    lam0 = lam0 / vol(lam0) ** (1.0 / n)
    res = minimize(lambda l: float(w @ l), lam0, jac=lambda l: w, method="SLSQP",
                   bounds=[(0.0, None)] * m,
                   constraints=[{"type": "ineq", "fun": cons, "jac": cons_jac}],
                   options={"ftol": 1e-15, "maxiter": 2000})
    lam = np.maximum(res.x, 0.0)
    lam = lam / vol(lam) ** (1.0 / n)
    return float(w @ lam), lam


def _polish(X, c: np.ndarray, lamB: np.ndarray):
    """Newton on the optimality system of a face: g_j.(alpha - B^{n-1}) = 0 for active j.

    Active-set updates drop generators with negative weight and add
    generators whose pairing with gamma is negative.  Returns the weights
    of B or None.
    """
    n = X.n
    G, T = _nef_data(X)
    m = len(G)
    scale = max(1.0, float(np.max(np.abs(G @ c))))
    active = set(np.flatnonzero(lamB > 1e-6 * lamB.max()).tolist())
    lamB = lamB.copy()
    for _ in range(2 * m + 2):
        idx = sorted(active)
        GF = G[idx]
        lam = lamB[idx].copy()
        for _ in range(60):
            B = GF.T @ lam
            E = GF @ (c - contract(T, B, n - 1))
            if np.max(np.abs(E)) <= 1e-14 * scale:
                break
            H = contract(T, B, n - 2)
            J = -(n - 1) * GF @ H @ GF.T
            lam = lam + np.linalg.lstsq(J, -E, rcond=None)[0]
        full = np.zeros(m)
        full[idx] = lam
        gamma = c - contract(T, G.T @ full, n - 1)
        viol = G @ gamma
        if lam.min() < -1e-12 * scale:
            active.discard(idx[int(np.argmin(lam))])
            lamB = np.maximum(full, 0.0)
            continue
        if viol.min() < -1e-12 * scale:
            active.add(int(np.argmin(viol)))
            lamB = full
            continue
        if np.max(np.abs(E)) > 1e-9 * scale:
            return None
        return np.maximum(full, 0.0)
    return None


def _scale_rule(X, c, lam):
    """Largest s with alpha - (s B)^{n-1} pseudo-effective for B = G^T lam."""
    n = X.n
    G, T = _nef_data(X)
    beta = G @ contract(T, G.T @ lam, n - 1)
    a = G @ c
    pos = beta > 1e-300
    k = float(np.min(a[pos] / beta[pos]))
    return lam * k ** (1.0 / (n - 1))


def _sup_form(X, c: np.ndarray) -> float:
    """max B^n over nef B with alpha - B^{n-1} pseudo-effective."""
    n = X.n
    G, T = _nef_data(X)
    m = len(G)

    def obj(mu):
        return -max(float(contract(T, G.T @ mu, n)), 0.0) ** (1.0 / n)

    def obj_jac(mu):
        x = G.T @ mu
        v = max(float(contract(T, x, n)), 1e-300)
        return -(v ** (1.0 / n - 1.0)) * (G @ contract(T, x, n - 1))

    def cons(mu):
        return G @ (c - contract(T, G.T @ mu, n - 1))

    def cons_jac(mu):
        return -(n - 1) * G @ contract(T, G.T @ mu, n - 2) @ G.T

    mu0 = np.ones(m) / m
    beta = G @ contract(T, G.T @ mu0, n - 1)
    a = G @ c
    k = float(np.min(a[beta > 0] / beta[beta > 0]))
    mu0 = mu0 * (0.5 * k) ** (1.0 / (n - 1))
    res = minimize(obj, mu0, jac=obj_jac, method="SLSQP", bounds=[(0.0, None)] * m,
                   constraints=[{"type": "ineq", "fun": cons, "jac": cons_jac}],
                   options={"ftol": 1e-16, "maxiter": 2000})
    mu = np.maximum(res.x, 0.0)
    return float(contract(T, G.T @ mu, n))


@dataclass
class ZariskiDecomposition:
    positive_divisor: DivisorClass
    positive_curve: CurveClass
    negative: CurveClass
    volhat: object
    orthogonality_residual: float
    psef_residual: float
    sup_value: float
    exact: bool

    def to_json(self) -> dict:
        return {
            "positive_divisor": self.positive_divisor.to_json()["divisor"],
            "positive_curve": self.positive_curve.to_json()["curve"],
            "negative": self.negative.to_json()["curve"],
            "volhat": _json_num(self.volhat),
            "volhat_sup_form": self.sup_value,
            "orthogonality_residual": self.orthogonality_residual,
            "psef_residual": self.psef_residual,
            "exact": self.exact,
        }


def _psef_residual(gamma: CurveClass) -> float:
    """Most violated normalized Mori-cone inequality (0 when inside)."""
    X = gamma.variety
    vals = []
    for g in X.nef.generators:
        v = sum((Fraction(a) * b for a, b in zip(g, gamma.coords)), Fraction(0)) if gamma.exact \
            else float(np.dot(g, gamma.coords))
        vals.append(float(v) / math.sqrt(sum(x * x for x in g)))
    return max(0.0, -min(vals))


def _decomposition(alpha: CurveClass, B: DivisorClass, sup_value: float, snapped: bool) -> ZariskiDecomposition:
    X = alpha.variety
    beta = X.curve_power(B)
    if alpha.exact and not beta.exact:
        beta_c = X.curve_from_coords([float(x) for x in beta.coords])
        gamma = alpha.__class__(X, [float(a) - float(b) for a, b in zip(alpha.coeffs, beta_c.coeffs)], check=False)
    else:
        gamma = alpha - beta
    psef = _psef_residual(gamma)
    exact = snapped and gamma.exact and psef == 0
    vh = X.top_power(B)
    return ZariskiDecomposition(B, beta, gamma, vh if exact else float(vh), abs(float(pair(B, gamma))),
                                psef, sup_value, exact)


def zariski_decompose(alpha: CurveClass, start=None) -> ZariskiDecomposition:
    """alpha = B^{n-1} + gamma with B nef, gamma pseudo-effective and B.gamma = 0."""
    X = alpha.variety
    if X.membership(alpha, "eff_curves", 0 if alpha.exact else 1e-12).status != "interior":
        raise PreconditionError("Zariski decomposition requires interior class")
    n = X.n
    c = np.array([float(x) for x in alpha.coords])
    G, _ = _nef_data(X)
    ratio, lam = _inf_form(X, c, start)
    candidates = [ratio ** (1.0 / (n - 1)) * lam]
    polished = _polish(X, c, candidates[0])
    if polished is not None:
        candidates.insert(0, polished)
    sup_value = _sup_form(X, c)
    best = None
    for cand in candidates:
        lamB = _scale_rule(X, c, cand)
        for B, snapped in _exact_candidates(X, lamB, alpha):
            dec = _decomposition(alpha, B, sup_value, snapped)
            key = (dec.psef_residual > 1e-8, not dec.exact, dec.orthogonality_residual)
            if best is None or key < best[0]:
                best = (key, dec)
    return best[1]


def _exact_candidates(X, lamB: np.ndarray, alpha: CurveClass):
    """Snapped rational B when it is nef, then the exact image of the float weights."""
    G = X.nef.generators
    coords = [sum((Fraction(float(l)) * g[k] for l, g in zip(lamB, G)), Fraction(0))
              for k in range(X.picard_rank)]
    out = []
    snapped = Q.snap_vector([float(x) for x in coords], 1e-9)
    if snapped is not None and alpha.exact:
        B = X.divisor_from_coords(snapped)
        if X.is_nef(B):
            out.append((B, True))
    out.append((X.divisor_from_coords(coords) if alpha.exact
                else X.divisor_from_coords([float(x) for x in coords]), False))
    return out


def volhat(alpha: CurveClass):
    """Nef-side volume of a curve class; 0 outside the interior of the Mori cone."""
    X = alpha.variety
    status = X.membership(alpha, "eff_curves", 0 if alpha.exact else 1e-12).status
    if status != "interior":
        return Fraction(0) if alpha.exact else 0.0
    return zariski_decompose(alpha).volhat


def volhat_sup(alpha: CurveClass) -> float:
    """The same volume from the maximization side, computed independently."""
    X = alpha.variety
    status = X.membership(alpha, "eff_curves", 0 if alpha.exact else 1e-12).status
    if status != "interior":
        return 0.0
    return _sup_form(X, np.array([float(x) for x in alpha.coords]))


# -- statements built on mcal and volhat -------------------------------------------

def nef_margin(L: DivisorClass):
    """min over wall curves of L . C (negative iff L is not nef)."""
    return min(pair(L, C) for C in L.variety.wall_curves)


@dataclass
class CIMembership:
    member: bool
    witness: DivisorClass
    margin: object
    mcal: object
    volhat: object
    volumes_agree: bool

    @property
    def consistent(self) -> bool:
        return self.member == self.volumes_agree

    def to_json(self) -> dict:
        return {
            "member": self.member,
            "witness_divisor": self.witness.to_json()["divisor"],
            "nef_margin": _json_num(self.margin),
            "mcal": _json_num(self.mcal),
            "volhat": _json_num(self.volhat),
            "volumes_agree": self.volumes_agree,
            "consistent": self.consistent,
        }


def _require_witness(alpha: CurveClass, tol: float = 1e-8) -> McalResult:
    res = mcal(alpha, tol)
    if res.status != "ok":
        raise PreconditionError(f"class is {res.status}: mcal vanishes")
    return res


def ci_membership(alpha: CurveClass, tol: float = 1e-8) -> CIMembership:
    """Is alpha a limit of A^{n-1}, A ample?  Tested by L_alpha nef and by volhat == mcal."""
    res = _require_witness(alpha, tol)
    L = res.witness_divisor
    margin = nef_margin(L)
    member = margin >= 0 if L.exact else margin >= -NEF_TOL * max(1.0, float(np.max(np.abs(L.as_float()))))
    vh = volhat(alpha)
    agree = abs(float(vh) - float(res.value)) <= 1e-5 * float(res.value)
    return CIMembership(bool(member), L, margin, res.value, vh, agree)


def mcal_derivative(alpha: CurveClass, beta: CurveClass, tol: float = 1e-8):
    """Directional derivative of mcal at alpha along beta: n/(n-1) P_sigma(L_alpha) . beta."""
    X = alpha.variety
    L = _require_witness(alpha, tol).witness_divisor
    return Fraction(X.n, X.n - 1) * pair(L, beta) if L.exact and beta.exact \
        else X.n / (X.n - 1) * float(pair(L, beta))


@dataclass
class MorseResult:
    bound: object
    certified_big: bool
    bigness_verified: bool | None
    mcal_alpha: object
    pairing: object

    def to_json(self) -> dict:
        return {"bound": _json_num(self.bound), "certified_big": self.certified_big,
                "bigness_verified": self.bigness_verified, "mcal_alpha": _json_num(self.mcal_alpha),
                "witness_pairing": _json_num(self.pairing)}


def morse_bound(alpha: CurveClass, beta: CurveClass, tol: float = 1e-8) -> MorseResult:
    """mcal(alpha) - n^2/(n-1) L_alpha.beta, and bigness of alpha - beta when mcal(alpha) > n L_alpha.beta.

    A certified instance whose difference fails the exact interior test
    raises TheoremViolation.
    """
    X = alpha.variety
    n = X.n
    res = _require_witness(alpha, tol)
    L = res.witness_divisor
    p = pair(L, beta)
    exact = isinstance(p, Fraction) and isinstance(res.value, Fraction)
    if exact:
        bound = res.value - Fraction(n * n, n - 1) * p
        certified = res.value - n * p > 0
    else:
        bound = float(res.value) - n * n / (n - 1) * float(p)
        certified = float(res.value) - n * float(p) > 0
    verified = None
    if certified:
        diff = alpha - beta
        verified = X.membership(diff, "eff_curves", 0 if diff.exact else 1e-12).status == "interior"
        if not verified:
            raise TheoremViolation("certified difference is not big",
                                   witness={"alpha": alpha.to_json(), "beta": beta.to_json()})
    return MorseResult(bound, bool(certified), verified, res.value, p)


def pi_hat(L: DivisorClass, tol: float = 1e-8) -> DivisorClass:
    """(1 - (1 - mcal/volhat)^{1/n}) B for alpha = <L^{n-1}> with Zariski positive part B."""
    X = L.variety
    if not X.is_big(L, 0 if L.exact else 1e-12):
        raise PreconditionError("pi_hat requires a big divisor")
    if X.is_nef(L, 0 if L.exact else 1e-12):
        return L
    alpha = positive_product_top(L)
    m = mcal(alpha, tol).value
    dec = zariski_decompose(alpha)
    ratio = min(1.0, float(m) / float(dec.volhat))
    coef = 1.0 - (1.0 - ratio) ** (1.0 / X.n)
    B = dec.positive_divisor
    if B.exact:
        out = B * Fraction(coef)
        snapped = Q.snap(coef, 1e-9)
        if snapped is not None and abs(float(snapped) - coef) < 1e-12:
            out = B * snapped
        return out
    return B * coef


@dataclass
class BoundaryResult:
    kind: str  # "positive_product" or "orthogonal"
    divisor: DivisorClass
    certificate: object

    def to_json(self) -> dict:
        return {"kind": self.kind, "divisor": self.divisor.to_json()["divisor"],
                "certificate": self.certificate}


def classify_boundary(alpha: CurveClass, tol: float = 1e-8) -> BoundaryResult:
    """For alpha on the boundary of Mov_1: either L_alpha on the boundary of Mov^1, or M.alpha = 0."""
    X = alpha.variety
    status = X.membership(alpha, "mov_curves", 0 if alpha.exact else 1e-12).status
    if status != "boundary":
        raise PreconditionError("not a boundary class" if status == "interior" else "class is not movable")
    res = mcal(alpha, tol)
    if res.status == "ok":
        L = res.witness_divisor
        memb = X.membership(L, "mov_divisors", 0 if L.exact else 1e-9)
        if memb.status != "boundary":
            raise TheoremViolation("witness of a boundary class is not on the movable boundary",
                                   witness=alpha.to_json())
        vals = X.mov.values(list(L.coords))
        tight = [list(q) for q, v in zip(X.mov.inequalities, vals) if abs(float(v)) <= (0 if L.exact else 1e-9)]
        return BoundaryResult("positive_product", L, {"tight_inequalities": tight})
    M = res.degeneracy
    return BoundaryResult("orthogonal", M, {"pairing": Q.format_rational(pair(M, alpha))
                                           if alpha.exact else float(pair(M, alpha))})
