"""Exact rational helpers: parsing, elimination, lattice normalization, snapping."""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

Vector = tuple  # tuple of Fraction


def to_fraction(x) -> Fraction:
    """Parse an int, Fraction, float or ``"p/q"`` string into a Fraction.

    Floats are converted exactly (binary expansion), not rounded.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite value {x!r}")
        return Fraction(x)
    # numpy scalars
    if hasattr(x, "item"):
        return to_fraction(x.item())
    raise TypeError(f"cannot interpret {x!r} as a rational")


def fvec(xs: Iterable) -> Vector:
    return tuple(to_fraction(x) for x in xs)


def is_exact(xs: Iterable) -> bool:
    return all(isinstance(x, (int, Fraction)) and not isinstance(x, bool) for x in xs)


def format_rational(x) -> str | float:
    """JSON form of a rational: integer-valued -> int string, else ``"p/q"``."""
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return str(x)
    return float(x)


def dot(u: Sequence, v: Sequence):
    if len(u) != len(v):
        raise ValueError(f"length mismatch: {len(u)} vs {len(v)}")
    return sum((a * b for a, b in zip(u, v)), Fraction(0) if is_exact(u) and is_exact(v) else 0.0)


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q. Returns (rows, pivot columns)."""
    m = [[to_fraction(x) for x in row] for row in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    """Exact rank; uses fraction-free elimination on integer-valued input."""
    rows = [list(row) for row in rows if any(x != 0 for x in row)]
    if not rows:
        return 0
    m = [[to_fraction(x) for x in row] for row in rows]
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        piv = m[r][c]
        for i in range(r + 1, len(m)):
            if m[i][c] != 0:
                f = m[i][c] / piv
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of {x : rows @ x = 0}; each basis vector has a 1 at its free column."""
    if ncols is None:
        ncols = len(rows[0])
    red, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(red, pivots):
            x[p] = -row[f]
        basis.append(x)
    return basis


def solve(a: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """Solve the square system a @ x = b exactly; None if singular."""
    n = len(a)
    aug = [[to_fraction(x) for x in row] + [to_fraction(bi)] for row, bi in zip(a, b)]
    for c in range(n):
        pr = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if pr is None:
            return None
        aug[c], aug[pr] = aug[pr], aug[c]
        piv = aug[c][c]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c] / piv
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return [aug[i][n] / aug[i][i] for i in range(n)]


def solve_any(a: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """Some exact solution of a (possibly non-square) consistent system, else None."""
    ncols = len(a[0])
    red, pivots = rref([list(row) + [bi] for row, bi in zip(a, b)])
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(red, pivots):
        x[p] = row[ncols]
    return x


def determinant(a: Sequence[Sequence]) -> Fraction:
    m = [[to_fraction(x) for x in row] for row in a]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        pr = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pr is None:
            return Fraction(0)
        if pr != c:
            m[c], m[pr] = m[pr], m[c]
            det = -det
        piv = m[c][c]
        det *= piv
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / piv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return det


def primitive(v: Sequence) -> tuple[int, ...]:
    """Scale a nonzero rational vector to the primitive integer vector on its ray."""
    fr = [to_fraction(x) for x in v]
    if all(x == 0 for x in fr):
        raise ValueError("zero vector has no primitive representative")
    lcm = 1
    for x in fr:
        lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
    ints = [int(x * lcm) for x in fr]
    g = 0
    for x in ints:
        g = math.gcd(g, abs(x))
    return tuple(x // g for x in ints)


def simplest_in_interval(lo: Fraction, hi: Fraction) -> Fraction:
    """Fraction with the smallest denominator in the closed interval [lo, hi]."""
    if lo > hi:
        lo, hi = hi, lo
    if lo <= 0 <= hi:
        return Fraction(0)
    if hi < 0:
        return -simplest_in_interval(-hi, -lo)
    fl = math.floor(lo)
    if fl == lo:
        return Fraction(fl)
    if fl + 1 <= hi:
        return Fraction(fl + 1)
    # lo, hi share integer part; recurse on reciprocals of fractional parts
    rest = simplest_in_interval(1 / (hi - fl), 1 / (lo - fl))
    return fl + 1 / rest


def snap(x: float, tol: float = 1e-9, max_denominator: int = 10**6) -> Fraction | None:
    """Simplest rational within ``tol * max(1, |x|)`` of x, or None past the cap."""
    if isinstance(x, Fraction):
        return x
    width = tol * max(1.0, abs(x))
    q = simplest_in_interval(Fraction(x) - Fraction(width), Fraction(x) + Fraction(width))
    return q if q.denominator <= max_denominator else None


def snap_vector(xs: Iterable[float], tol: float = 1e-9, max_denominator: int = 10**6):
    out = []
    for x in xs:
        q = snap(x, tol, max_denominator)
        if q is None:
            return None
        out.append(q)
    return tuple(out)
