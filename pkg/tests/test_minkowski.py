import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from poscurves.fans import builtin
from poscurves.minkowski import FacetData, MinkowskiError, solve_minkowski, weight_to_facet_data
from poscurves.polytope import divisor_polytope
from poscurves.positivity import positive_product_top
from poscurves.verify import random_class


def test_p2_facet_data(p2):
    data = weight_to_facet_data(p2.curve([1, 1, 1]))
    assert np.allclose(data.volumes, [1, 1, math.sqrt(2)])
    assert np.allclose(data.normals[2], [-1 / math.sqrt(2), -1 / math.sqrt(2)])


def test_p3_facet_data():
    X = builtin("P3")
    data = weight_to_facet_data(X.curve([1, 1, 1, 1]))
    assert np.allclose(data.volumes, [0.5, 0.5, 0.5, math.sqrt(3) / 2])


def test_zero_weight_rejected(p2):
    with pytest.raises(MinkowskiError):
        weight_to_facet_data(p2.curve([0, 0, 0]))


def test_p2_triangle(p2):
    rep = solve_minkowski(weight_to_facet_data(p2.curve([1, 1, 1])))
    assert rep.converged and rep.residual <= 1e-8
    V = np.array(rep.polytope.vertices, dtype=float)
    target = np.array([(0, 0), (1, 0), (1, -1)], dtype=float) - [2 / 3, -1 / 3]
    assert np.allclose(sorted(map(tuple, V)), sorted(map(tuple, target)), atol=1e-9)
    assert math.isclose(float(rep.polytope.volume()), 0.5, rel_tol=1e-12)


def test_square():
    U = np.array([[1.0, 0], [-1, 0], [0, 1], [0, -1]])
    rep = solve_minkowski(FacetData(U, np.ones(4), 2))
    V = np.array(rep.polytope.vertices, dtype=float)
    assert np.allclose(np.abs(V), 0.5, atol=1e-9)


def test_non_spanning_rejected():
    U = np.array([[1.0, 0], [-1, 0]])
    with pytest.raises(MinkowskiError):
        solve_minkowski(FacetData(U, np.ones(2), 2))


def test_unbalanced_rejected():
    U = np.array([[1.0, 0], [-1, 0], [0, 1], [0, -1]])
    with pytest.raises(MinkowskiError):
        solve_minkowski(FacetData(U, np.array([1.0, 2, 1, 1]), 2))


def test_roundtrip_on_fans(variety):
    rng = np.random.default_rng(3)
    for _ in range(5):
        A = random_class(variety, "nef", rng)
        rep = solve_minkowski(weight_to_facet_data(positive_product_top(A)))
        assert rep.converged
        assert math.isclose(float(rep.polytope.volume()), float(divisor_polytope(A).volume()), rel_tol=1e-9)


@given(st.integers(0, 10**6))
def test_solution_reproduces_facet_data(seed):
    X = builtin("Bl2P2")
    alpha = random_class(X, "mov_curves", seed)
    data = weight_to_facet_data(alpha)
    rep = solve_minkowski(data)
    P = rep.polytope
    got = [float(P.facet_volume(u)) for u in data.normals]
    assert np.allclose(got, data.volumes, rtol=1e-7)
    assert np.allclose(np.asarray(P.centroid(), dtype=float), 0, atol=1e-9)
