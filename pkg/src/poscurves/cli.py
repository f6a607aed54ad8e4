"""Command line entry point: ``poscurves <command> ...``.

Exit codes: 0 success, 2 precondition failure, 3 non-convergence,
4 an invariant was violated.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from . import rational as Q
from .errors import ConvergenceError, PreconditionError, TheoremViolation
from .io import curve_from_json, divisor_from_json, load_variety, polytope_from_json
from .minkowski import solve_minkowski, weight_to_facet_data
from .positivity import (ci_membership, classify_boundary, mcal, morse_bound, pi_hat, volhat,
                         zariski_decompose)
from .verify import Tolerances, verify_suite

EXIT_OK, EXIT_PRECONDITION, EXIT_CONVERGENCE, EXIT_VIOLATION = 0, 2, 3, 4


def _emit(obj, path=None) -> None:
    text = json.dumps(obj, sort_keys=True, indent=2)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _num(x):
    return Q.format_rational(x) if isinstance(x, (int,)) or hasattr(x, "denominator") else float(x)


def write_mesh(P, path: str) -> None:
    """Plain-text mesh: ``v x y [z]`` lines, then ``f i j ...`` per facet (0-based, cyclic order)."""
    V = np.array(P.vertices, dtype=float)
    if P.dim not in (2, 3):
        raise PreconditionError("mesh output supports dimensions 2 and 3")
    lines = [f"# poscurves mesh dim={P.dim}"]
    lines += ["v " + " ".join(f"{x:.12g}" for x in v) for v in V]
    scale = max(1.0, float(np.abs(V).max())) if len(V) else 1.0
    seen = set()
    for w, c in zip(P.normals, P.offsets):
        w = np.array(w, dtype=float)
        idx = [i for i, v in enumerate(V) if abs(v @ w - float(c)) <= 1e-9 * scale * max(1.0, np.linalg.norm(w))]
        if len(idx) < P.dim or tuple(idx) in seen:
            continue
        seen.add(tuple(idx))
        if P.dim == 3:
            ctr = V[idx].mean(axis=0)
            u = V[idx[0]] - ctr
            u /= np.linalg.norm(u)
            e = np.cross(w / np.linalg.norm(w), u)
            idx.sort(key=lambda i: np.arctan2((V[i] - ctr) @ e, (V[i] - ctr) @ u))
        lines.append("f " + " ".join(map(str, idx)))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


# -- commands ---------------------------------------------------------------------

def cmd_verify(args) -> int:
    fan_id, X = load_variety(args.fan)
    tol = Tolerances(solver=args.tol_solver, volume=args.tol_volume, derivative=args.tol_derivative,
                     polar=args.tol_polar, orthogonality=args.tol_orthogonality, psef=args.tol_psef)
    report = verify_suite(X, seed=args.seed, count=args.count, tolerances=tol, fan_id=fan_id)
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(report.dumps() + "\n")
    for name, st in report.properties.items():
        flag = "FAIL" if st["failed"] else "ok"
        print(f"{flag:4} {name:40} pass={st['passed']} fail={st['failed']} skip={st['skipped']} "
              f"worst={st['worst_residual']:.3g}")
    if not report.coverage["ok"]:
        print(f"coverage audit failed: {report.coverage['missing']}")
    for entry in report.out_of_scope:
        print(f"out of scope: {entry['topic']} ({entry['status']})")
    if report.theorem_violations:
        return EXIT_VIOLATION
    return EXIT_OK if report.ok else EXIT_VIOLATION


def cmd_fan_check(args) -> int:
    fan_id, X = load_variety(args.fan)
    out = {"fan_id": fan_id, "valid": True, **X.summary()}
    _emit(out)
    return EXIT_OK


def cmd_cones(args) -> int:
    fan_id, X = load_variety(args.fan)
    cones = {name: {"generators": [[Q.format_rational(a) for a in g] for g in C.generators],
                    "inequalities": [[Q.format_rational(a) for a in q] for q in C.inequalities]}
             for name, C in X.cones.items()}
    _emit({"fan_id": fan_id, "free_indices": list(X.free), "cones": cones})
    return EXIT_OK


def cmd_polytope(args) -> int:
    P = polytope_from_json(args.polytope)
    if args.action == "vol":
        out = {"volume": _num(P.volume()), "dim": P.dim, "affine_dim": P.affine_dim}
    elif args.action == "facets":
        out = {"facets": [{"normal": [_num(a) for a in w], "offset": _num(c),
                           "volume": float(P.facet_volume(w)),
                           "lattice_volume": _num(P.facet_volume(w, lattice=True))
                           if all(float(a).is_integer() for a in w) else None}
                          for w, c in zip(P.normals, P.offsets)]}
    else:
        if args.direction is None:
            raise PreconditionError("support needs --direction")
        w = [Q.to_fraction(x) for x in args.direction.split(",")]
        out = {"direction": [_num(a) for a in w], "support": _num(P.support(w))}
    if args.mesh:
        write_mesh(P, args.mesh)
    _emit(out)
    return EXIT_OK


def cmd_minkowski(args) -> int:
    _, X = load_variety(args.fan)
    alpha = curve_from_json(X, args.curve)
    rep = solve_minkowski(weight_to_facet_data(alpha), tol=args.tol)
    if not rep.converged:
        raise ConvergenceError(f"Minkowski solver stopped at residual {rep.residual:.3g}", rep)
    if args.mesh and rep.polytope is not None:
        write_mesh(rep.polytope, args.mesh)
    _emit(rep.to_json())
    return EXIT_OK


def cmd_transform(args) -> int:
    _, X = load_variety(args.fan)
    cmd = args.command
    if cmd == "pihat":
        if args.divisor is None:
            raise PreconditionError("pihat needs --divisor")
        L = divisor_from_json(X, args.divisor)
        _emit({"divisor": L.to_json()["divisor"], "pi_hat": pi_hat(L, args.tol).to_json()["divisor"]})
        return EXIT_OK
    if args.curve is None:
        raise PreconditionError(f"{cmd} needs --curve")
    alpha = curve_from_json(X, args.curve)
    if cmd == "mcal":
        out = mcal(alpha, args.tol).to_json()
    elif cmd == "volhat":
        out = {"volhat": _num(volhat(alpha))}
    elif cmd == "zariski":
        out = zariski_decompose(alpha).to_json()
    elif cmd == "cihood":
        out = ci_membership(alpha, args.tol).to_json()
    elif cmd == "morse":
        if args.beta is None:
            raise PreconditionError("morse needs --beta")
        out = morse_bound(alpha, curve_from_json(X, args.beta), args.tol).to_json()
    else:
        out = classify_boundary(alpha, args.tol).to_json()
    _emit(out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="poscurves", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    fan_help = "fan JSON file or builtin:NAME"
    defaults = Tolerances()

    v = sub.add_parser("verify", help="run the randomized invariant suite")
    v.add_argument("--fan", required=True, help=fan_help)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--count", type=int, default=10)
    v.add_argument("--json", help="write the report here")
    for key in ("solver", "volume", "derivative", "polar", "orthogonality", "psef"):
        v.add_argument(f"--tol-{key}", type=float, default=getattr(defaults, key))
    v.set_defaults(func=cmd_verify)

    f = sub.add_parser("fan", help="fan utilities")
    fsub = f.add_subparsers(dest="fan_command", required=True)
    fc = fsub.add_parser("check", help="validate a fan and print a summary")
    fc.add_argument("--fan", required=True, help=fan_help)
    fc.set_defaults(func=cmd_fan_check)

    c = sub.add_parser("cones", help="dump the five cones")
    c.add_argument("--fan", required=True, help=fan_help)
    c.set_defaults(func=cmd_cones)

    pp = sub.add_parser("polytope", help="polytope volume, facets or support")
    pp.add_argument("action", choices=["vol", "facets", "support"])
    pp.add_argument("--polytope", required=True, help="polytope JSON file")
    pp.add_argument("--direction", help="comma separated rationals, for support")
    pp.add_argument("--mesh", help="write a vertex/facet mesh here (2D/3D)")
    pp.set_defaults(func=cmd_polytope)

    m = sub.add_parser("minkowski", help="reconstruct P_alpha from a movable curve class")
    m.add_argument("--fan", required=True, help=fan_help)
    m.add_argument("--curve", required=True)
    m.add_argument("--tol", type=float, default=1e-8)
    m.add_argument("--mesh", help="write a vertex/facet mesh here (2D/3D)")
    m.set_defaults(func=cmd_minkowski)

    for name, text in (("mcal", "movable-side volume with witness"), ("volhat", "nef-side volume"),
                       ("zariski", "Zariski decomposition of a big curve class"),
                       ("cihood", "complete intersection membership"), ("morse", "bigness bound for alpha - beta"),
                       ("pihat", "nef retraction of a big divisor"), ("boundary", "classify a boundary class")):
        s = sub.add_parser(name, help=text)
        s.add_argument("--fan", required=True, help=fan_help)
        s.add_argument("--curve")
        s.add_argument("--beta", help="second curve class (morse)")
        s.add_argument("--divisor")
        s.add_argument("--tol", type=float, default=1e-8)
        s.set_defaults(func=cmd_transform)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except TheoremViolation as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        if exc.witness is not None:
            print(json.dumps(exc.witness, sort_keys=True), file=sys.stderr)
        return EXIT_VIOLATION
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
