from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from poscurves.fans import BUILTIN_FANS, validate_bundle
from poscurves.toric import Fan, FanError, build_variety, is_movable_sigma, pair, psef_threshold, sigma_decompose, volume
from poscurves.verify import random_class


def _curves(X):
    return sorted(tuple(c.weights) for c in X.wall_curves)


def test_p2_wall_curve_and_rank(p2):
    assert p2.picard_rank == 1
    assert _curves(p2) == [(1, 1, 1)]


def test_p1p1_wall_curves(p1p1):
    assert p1p1.picard_rank == 2
    assert _curves(p1p1) == [(0, 0, 1, 1), (1, 1, 0, 0)]


def test_blp2_wall_curves(blp2):
    walls = _curves(blp2)
    assert (1, 1, 0, -1) in walls
    assert (0, 0, 1, 1) in walls


def test_pairing_examples(p2, blp2):
    assert pair(p2.divisor([1, 0, 0]), p2.curve([1, 1, 1])) == 1
    assert pair(p2.divisor([0, 0, 0]), p2.curve([1, 1, 1])) == 0
    E = blp2.divisor([0, 0, 0, 1])
    eta = blp2.curve([1, 1, 0, -1])
    assert pair(E, eta) == -1


def test_pairing_length_mismatch(p2, blp2):
    with pytest.raises(ValueError):
        pair(p2.divisor([1, 0, 0]), blp2.curve([1, 1, 0, -1]))


def test_curve_relation_checked(p2):
    with pytest.raises(ValueError):
        p2.curve([1, 0, 0])


def test_membership_examples(blp2):
    H = blp2.divisor([0, 0, 1, 0])
    E = blp2.divisor([0, 0, 0, 1])
    assert blp2.membership(H, "nef_divisors").status == "boundary"
    m = blp2.membership(E, "nef_divisors")
    assert m.status == "outside"
    assert blp2.membership(blp2.divisor([0, 0, 0, 0]), "nef_divisors").status == "boundary"
    assert blp2.is_effective(E) and not blp2.is_big(E)
    assert blp2.is_ample(H * 2 - E)


def test_linear_equivalence_is_class_equality(blp2):
    # div(chi^{e1}) = D0 - D2 + D3, so D0 ~ D2 - D3 = H - E
    assert blp2.divisor([1, 0, 0, 0]) == blp2.divisor([0, 0, 1, -1])


def test_sigma_examples(blp2):
    P, N = sigma_decompose(blp2.divisor([0, 0, 2, 1]))
    assert P == blp2.divisor([0, 0, 2, 0])
    assert N.coeffs == (0, 0, 0, 1)
    P, N = sigma_decompose(blp2.divisor([0, 0, 0, 1]))
    assert P.is_zero()
    with pytest.raises(ValueError):
        sigma_decompose(blp2.divisor([0, 0, -1, 0]))


def test_nef_sigma_is_trivial(variety):
    for g in variety.generator_divisors("nef_divisors"):
        P, N = sigma_decompose(g)
        assert P == g and N.is_zero()


def test_intersection_numbers():
    X = build_variety(BUILTIN_FANS["Bl2P2"])
    assert [X.intersection_number([i, i]) for i in range(5)] == [0, -1, -1, -1, 0]
    P3 = build_variety(BUILTIN_FANS["P3"])
    assert P3.intersection_number([0, 1, 2]) == 1
    assert P3.intersection_number([0, 0, 0]) == 1


def test_bundle_relations(bundle):
    rel = validate_bundle(bundle)
    assert rel == {"f^2.xi": 0, "f^2.f": 0, "xi^2.f": 1, "xi^3": -1}


def test_volume_of_nef_is_top_power(variety):
    for g in variety.generator_divisors("nef_divisors"):
        assert volume(g) == variety.top_power(g)


def test_movable_cone_matches_sigma(variety):
    for g in variety.generator_divisors("eff_divisors"):
        assert variety.is_movable_divisor(g) == is_movable_sigma(g)


def test_psef_threshold(blp2):
    H = blp2.divisor([0, 0, 1, 0])
    E = blp2.divisor([0, 0, 0, 1])
    assert psef_threshold(H * 3, H) == 3
    # H + E - sE = (H - E) + (2 - s)E
    assert psef_threshold(H + E, E) == 2


def test_non_projective_and_bad_fans():
    with pytest.raises(FanError):
        Fan(2, [(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2)]).validate()
    with pytest.raises(FanError):
        Fan(2, [(2, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (0, 2)]).validate()


def test_non_smooth_cone_flagged():
    # weighted projective plane P(1,1,2)
    X = build_variety(Fan(2, [(1, 0), (1, 2), (-1, -1)], [(0, 1), (1, 2), (0, 2)]))
    assert X.non_smooth_cones
    H = X.generator_divisors("nef_divisors")[0]
    assert isinstance(X.top_power(H), Fraction)


def test_fan_json_roundtrip():
    fan = BUILTIN_FANS["PBundle"]
    assert Fan(**fan.to_json()) == fan


@given(st.integers(0, 10**6))
def test_random_class_in_cone(seed):
    X = build_variety(BUILTIN_FANS["P1xP1"])
    alpha = random_class(X, "mov_curves", seed)
    assert all(t >= 0 for t in alpha.weights)
    assert all(sum(t * v[k] for t, v in zip(alpha.weights, X.fan.rays)) == 0 for k in range(2))
    assert X.membership(alpha, "mov_curves").status == "interior"
    assert random_class(X, "mov_curves", seed) == alpha


def test_random_class_on_ray(p2):
    L = random_class(p2, "nef", 3)
    assert p2.is_ample(L)
