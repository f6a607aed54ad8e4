from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from poscurves.cones import ConeDescription, cone_membership, facets_bruteforce


def test_quadrant_both_ways():
    C = ConeDescription.from_generators([[1, 0], [0, 1]], 2)
    assert sorted(C.inequalities) == [(0, 1), (1, 0)]
    D = ConeDescription.from_inequalities([[1, 0], [0, 1]], 2)
    assert sorted(D.generators) == sorted(C.generators)


def test_not_pointed_rejected():
    with pytest.raises(ValueError):
        ConeDescription.from_generators([[1, 0], [-1, 0], [0, 1]], 2)


def test_membership_statuses():
    C = ConeDescription.from_generators([[1, 0], [1, 1]], 2)
    assert cone_membership([2, 1], C).status == "interior"
    assert cone_membership([1, 0], C).status == "boundary"
    assert cone_membership([0, 0], C).status == "boundary"
    out = cone_membership([0, 1], C)
    assert out.status == "outside"
    assert sum(a * b for a, b in zip(out.certificate, [0, 1])) < 0


def test_inside_certificate_reproduces_point():
    C = ConeDescription.from_generators([[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, -1]], 3)
    x = [Fraction(3, 2), 2, Fraction(1, 3)]
    m = cone_membership(x, C)
    assert m.inside
    combo = [sum(w * g[i] for w, g in zip(m.certificate, C.generators)) for i in range(3)]
    assert combo == x
    assert all(w >= 0 for w in m.certificate)


@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=3, max_size=7))
def test_double_description_matches_bruteforce(gens):
    gens = [g for g in gens if any(g)]
    try:
        C = ConeDescription.from_generators(gens + [[1, 0, 0], [0, 1, 0], [0, 0, 1]], 3)
    except ValueError:
        return
    assert sorted(C.inequalities) == sorted(facets_bruteforce(C.generators, 3))
    assert sorted(C.dual().dual().generators) == sorted(C.generators)


def test_builtin_cones_match_bruteforce(variety):
    for C in variety.cones.values():
        assert sorted(C.inequalities) == sorted(facets_bruteforce(C.generators, C.dim))
