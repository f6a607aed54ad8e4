import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from poscurves.cones import ConeDescription
from poscurves.errors import PreconditionError
from poscurves.polar import (ConcaveConeFunction, divisor_volume_function, formal_zariski, nef_volume_function,
                             polar_argmin, polar_solve, polar_value, project_simplex)
from poscurves.positivity import mcal, volhat
from poscurves.verify import random_class

QUADRANT = ConeDescription.from_generators([[1, 0], [0, 1]], 2)
PRODUCT = ConcaveConeFunction(QUADRANT, 2.0, lambda x: float(x[0] * x[1]), lambda x: np.array([x[1], x[0]]))
PRODUCT_FD = ConcaveConeFunction(QUADRANT, 2.0, lambda x: float(x[0] * x[1]))


def test_product_examples():
    assert math.isclose(polar_value(PRODUCT, [1, 1]), 4, rel_tol=1e-6)
    assert math.isclose(polar_value(PRODUCT, [2, 3]), 24, rel_tol=1e-6)
    d = polar_argmin(PRODUCT, [2, 3])
    assert np.allclose(d / np.linalg.norm(d), np.array([3, 2]) / math.sqrt(13), atol=1e-5)


def test_boundary_vanishes():
    assert polar_value(PRODUCT, [1, 0]) == 0
    with pytest.raises(PreconditionError):
        polar_argmin(PRODUCT, [1, 0])
    assert polar_value(PRODUCT, [-1, 1]) == 0


@given(st.floats(0.05, 20), st.floats(0.05, 20))
def test_product_closed_form(a, b):
    res = polar_solve(PRODUCT_FD, [a, b], tol=1e-7)
    assert math.isclose(res.value, 4 * a * b, rel_tol=1e-4)
    assert res.lower_bound <= res.value * (1 + 1e-12)


def test_formal_zariski_interior_has_no_negative_part():
    p, n = formal_zariski(PRODUCT, [1, 1], tol=1e-9)
    assert np.allclose(p, [1, 1], atol=1e-6) and np.allclose(n, 0, atol=1e-6)


def test_formal_zariski_surface(blp2):
    alpha = blp2.curve([3, 3, 2, -1])
    p, n = formal_zariski(nef_volume_function(blp2), alpha.coords, tol=1e-10)
    ell2 = np.array((blp2.curve([1, 1, 1, 0]) * 2).coords, dtype=float)
    eta = np.array(blp2.curve([1, 1, 0, -1]).coords, dtype=float)
    assert np.allclose(p, ell2, atol=1e-5) and np.allclose(n, eta, atol=1e-5)


def test_nef_volume_on_p2(p2):
    f = nef_volume_function(p2)
    ell = p2.curve([1, 1, 1])
    assert math.isclose(polar_value(f, ell.coords), 1, rel_tol=1e-6)
    d = polar_argmin(f, ell.coords)
    assert len(d) == 1 and d[0] > 0


def test_engine_matches_specialised_solvers(variety):
    rng = np.random.default_rng(4)
    alpha = random_class(variety, "mov_curves", rng)
    hv = polar_value(nef_volume_function(variety), alpha.coords, 1e-8)
    assert math.isclose(hv, float(volhat(alpha)), rel_tol=1e-5)
    hm = polar_value(divisor_volume_function(variety), alpha.coords, 1e-8)
    assert math.isclose(hm, float(mcal(alpha).value), rel_tol=1e-5)


@given(st.lists(st.floats(-10, 10), min_size=1, max_size=6))
def test_project_simplex(y):
    x = project_simplex(np.array(y))
    assert math.isclose(x.sum(), 1, rel_tol=1e-9) and np.all(x >= 0)
