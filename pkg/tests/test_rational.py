from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from poscurves import rational as Q

small = st.integers(-6, 6)


def test_to_fraction_forms():
    assert Q.to_fraction("3/4") == Fraction(3, 4)
    assert Q.to_fraction(2) == 2
    assert Q.to_fraction(0.5) == Fraction(1, 2)
    assert Q.to_fraction(np.int64(7)) == 7
    with pytest.raises(TypeError):
        Q.to_fraction(True)
    with pytest.raises(ValueError):
        Q.to_fraction(float("nan"))


def test_format_rational():
    assert Q.format_rational(Fraction(3, 1)) == "3"
    assert Q.format_rational(Fraction(-1, 4)) == "-1/4"
    assert Q.format_rational(0.25) == 0.25


def test_nullspace_of_p2_rays():
    # V^T for rays (1,0),(0,1),(-1,-1): kernel spanned by (1,1,1)
    ker = Q.nullspace([[1, 0, -1], [0, 1, -1]])
    assert len(ker) == 1
    assert Q.primitive(ker[0]) == (1, 1, 1)


def test_determinant_and_solve():
    a = [[2, 1], [1, 3]]
    assert Q.determinant(a) == 5
    x = Q.solve(a, [1, 2])
    assert x == [Fraction(1, 5), Fraction(3, 5)]
    assert Q.solve([[1, 1], [2, 2]], [1, 3]) is None


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=1, max_size=4))
def test_nullspace_annihilates(rows):
    ker = Q.nullspace(rows, 3)
    assert len(ker) + Q.rank(rows) == 3
    for k in ker:
        assert all(Q.dot(r, k) == 0 for r in rows)


@given(st.integers(-1000, 1000), st.integers(1, 97))
def test_snap_recovers_simple_fractions(p, q):
    x = Fraction(p, q)
    assert Q.snap(float(x)) == x


def test_snap_rejects_large_denominators():
    assert Q.snap(np.pi, tol=1e-15, max_denominator=1000) is None
    assert Q.snap_vector([0.5, np.pi], tol=1e-15, max_denominator=1000) is None


@given(st.fractions(), st.fractions())
def test_simplest_in_interval_is_inside(a, b):
    q = Q.simplest_in_interval(a, b)
    assert min(a, b) <= q <= max(a, b)


def test_primitive():
    assert Q.primitive([Fraction(2, 3), Fraction(4, 3)]) == (1, 2)
    assert Q.primitive([0, -3, 6]) == (0, -1, 2)
