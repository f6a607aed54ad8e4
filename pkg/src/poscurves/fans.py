"""Built-in fan fixtures."""

from __future__ import annotations

from functools import lru_cache

from .toric import Fan, FanError, ToricVariety, build_variety

BUILTIN_FANS = {
    "P2": Fan(2, [(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (0, 2)]),
    "P3": Fan(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)],
              [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]),
    "P1xP1": Fan(2, [(1, 0), (-1, 0), (0, 1), (0, -1)], [(0, 2), (0, 3), (1, 2), (1, 3)]),
    # rays e1, e2, -e1-e2 and the exceptional ray e1+e2
    "BlP2": Fan(2, [(1, 0), (0, 1), (-1, -1), (1, 1)], [(0, 3), (1, 3), (1, 2), (0, 2)]),
    "Bl2P2": Fan(2, [(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1)],
                 [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]),
    # P(O + O + O(-1)) over P^1: fiber rays e1, e2, -e1-e2 and base rays
    # e3, -e3 - e1.  xi is the divisor of ray 1, f the divisor of ray 3.
    "PBundle": Fan(3, [(1, 0, 0), (0, 1, 0), (-1, -1, 0), (0, 0, 1), (-1, 0, -1)],
                   [(0, 1, 3), (0, 1, 4), (1, 2, 3), (1, 2, 4), (0, 2, 3), (0, 2, 4)]),
}

BUNDLE_XI = 1
BUNDLE_F = 3


def validate_bundle(X: ToricVariety) -> dict:
    """Check the bundle fixture's intersection relations and cones exactly.

    Returns the computed relations; raises FanError on any mismatch.
    """
    xi, f = X.basis_divisor(BUNDLE_XI), X.basis_divisor(BUNDLE_F)
    I = X.intersection_number
    rel = {
        "f^2.xi": I([BUNDLE_F, BUNDLE_F, BUNDLE_XI]),
        "f^2.f": I([BUNDLE_F, BUNDLE_F, BUNDLE_F]),
        "xi^2.f": I([BUNDLE_XI, BUNDLE_XI, BUNDLE_F]),
        "xi^3": I([BUNDLE_XI] * 3),
    }
    if rel != {"f^2.xi": 0, "f^2.f": 0, "xi^2.f": 1, "xi^3": -1}:
        raise FanError(f"bundle fixture intersection relations wrong: {rel}")
    prim = lambda gens: sorted(tuple(int(x) for x in g) for g in gens)
    from .rational import primitive

    mov_expected = sorted(primitive(D.coords) for D in (xi, f))
    if prim(X.mov.generators) != mov_expected:
        raise FanError("bundle fixture movable divisor cone is not <f, xi>")
    xf = X.product_curve([xi, f])
    xx = X.product_curve([xi, xi])
    curves_expected = sorted(primitive(c.coords) for c in (xf, xx + xf))
    if prim(X.mov_curves.generators) != curves_expected:
        raise FanError("bundle fixture movable curve cone is not <xi f, xi^2 + xi f>")
    return rel


@lru_cache(maxsize=None)
def builtin(name: str) -> ToricVariety:
    if name not in BUILTIN_FANS:
        raise KeyError(f"unknown builtin fan {name!r}; choose from {sorted(BUILTIN_FANS)}")
    X = build_variety(BUILTIN_FANS[name])
    if name == "PBundle":
        validate_bundle(X)
    return X
