"""JSON readers for fans, classes and polytopes.

Rationals are integers or "p/q" strings.  A fan argument may also be
``builtin:NAME`` for one of the fixtures in :mod:`poscurves.fans`.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .errors import PreconditionError
from .fans import BUILTIN_FANS, builtin
from .polytope import Polytope
from .toric import Fan, ToricVariety, build_variety


def parse_rational(x) -> Fraction:
    if isinstance(x, bool):
        raise PreconditionError(f"not a rational: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise PreconditionError(f"not a rational: {x!r}") from exc
    if isinstance(x, float):
        return Fraction(x)
    raise PreconditionError(f"not a rational: {x!r}")


def _load(source):
    if isinstance(source, (dict, list)):
        return source
    text = Path(source).read_text() if not str(source).lstrip().startswith(("{", "[")) else str(source)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise PreconditionError(f"invalid JSON: {exc}") from exc


def fan_from_json(data) -> Fan:
    data = _load(data)
    try:
        return Fan(int(data["dim"]), [[int(a) for a in v] for v in data["rays"]],
                   [[int(i) for i in c] for c in data["max_cones"]])
    except (KeyError, TypeError) as exc:
        raise PreconditionError(f"fan JSON needs dim, rays, max_cones: {exc}") from exc


def load_variety(source) -> tuple[str, ToricVariety]:
    """(fan id, variety) from ``builtin:NAME``, a path, or a parsed dict."""
    if isinstance(source, str) and source.startswith("builtin:"):
        name = source.split(":", 1)[1]
        if name not in BUILTIN_FANS:
            raise PreconditionError(f"unknown builtin fan {name!r}; choose from {sorted(BUILTIN_FANS)}")
        return name, builtin(name)
    fan = fan_from_json(source)
    fan.validate()
    fan_id = str(source) if isinstance(source, (str, Path)) else "custom"
    return fan_id, build_variety(fan)


def divisor_from_json(X: ToricVariety, data):
    data = _load(data)
    if "divisor" not in data:
        raise PreconditionError('divisor JSON needs a "divisor" key')
    return X.divisor([parse_rational(a) for a in data["divisor"]])


def curve_from_json(X: ToricVariety, data):
    data = _load(data)
    if "curve" not in data:
        raise PreconditionError('curve JSON needs a "curve" key')
    return X.curve([parse_rational(a) for a in data["curve"]])


def polytope_from_json(data) -> Polytope:
    data = _load(data)
    if "halfspaces" in data:
        hs = [([parse_rational(a) for a in h["normal"]], parse_rational(h["offset"])) for h in data["halfspaces"]]
        return Polytope(hs)
    if "vertices" in data:
        return Polytope.from_vertices([[parse_rational(a) for a in v] for v in data["vertices"]])
    raise PreconditionError('polytope JSON needs "halfspaces" or "vertices"')
