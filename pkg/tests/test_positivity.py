import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from poscurves.errors import PreconditionError
from poscurves.fans import builtin
from poscurves.positivity import (ci_membership, classify_boundary, mcal, mcal_derivative, morse_bound,
                                  pi_hat, positive_product_top, volhat, volhat_sup, zariski_decompose)
from poscurves.toric import pair, volume
from poscurves.verify import random_class


def test_positive_product_examples(p2, p1p1):
    assert positive_product_top(p2.divisor([1, 0, 0])).weights == (1, 1, 1)
    L = p1p1.divisor([1, 0, 1, 0])
    alpha = positive_product_top(L)
    assert alpha.weights == (1, 1, 1, 1)
    assert pair(L, alpha) == 2 == volume(L)


def test_positive_product_homogeneity(variety):
    L = random_class(variety, "mov", 5)
    n = variety.n
    assert positive_product_top(L * 2) == positive_product_top(L) * 2 ** (n - 1)


def test_mcal_examples(blp2, p1p1):
    res = mcal(blp2.curve([1, 1, 1, 0]))
    assert res.exact and res.value == 1
    assert res.witness_divisor == blp2.divisor([0, 0, 1, 0])
    assert mcal(p1p1.curve([1, 1, 1, 1])).value == 2
    res = mcal(p1p1.curve([1, 1, 0, 0]))
    assert res.value == 0 and res.status == "degenerate"
    assert res.degeneracy == p1p1.divisor([0, 0, 1, 0])


def test_mcal_not_movable(blp2):
    res = mcal(blp2.curve([3, 3, 2, -1]))
    assert res.value == 0 and res.status == "not movable"


def test_volhat_examples(blp2):
    assert volhat(blp2.curve([3, 3, 2, -1])) == 4
    assert volhat(blp2.curve([1, 1, 1, 0])) == 1
    assert volhat(blp2.curve([-1, -1, -1, 0])) == 0
    assert math.isclose(volhat_sup(blp2.curve([3, 3, 2, -1])), 4, rel_tol=1e-9)


def test_zariski_examples(blp2, p2):
    dec = zariski_decompose(blp2.curve([3, 3, 2, -1]))
    assert dec.exact
    assert dec.positive_divisor == blp2.divisor([0, 0, 2, 0])
    assert dec.negative == blp2.curve([1, 1, 0, -1])
    assert dec.volhat == 4
    dec = zariski_decompose(p2.curve([1, 1, 1]))
    assert dec.positive_divisor == p2.divisor([1, 0, 0]) and dec.negative.is_zero()


@given(st.fractions(min_value=Fraction(1, 10), max_value=10, max_denominator=20))
def test_zariski_homogeneity(lam):
    X = builtin("P3")
    dec = zariski_decompose(X.curve([1, 1, 1, 1]) * lam)
    expected = float(lam) ** 0.5
    assert np.allclose(np.array(dec.positive_divisor.coords, float), [expected], rtol=1e-9)


def test_ci_examples(blp2, p1p1, bundle):
    assert ci_membership(blp2.curve([1, 1, 1, 0])).member
    assert ci_membership(p1p1.curve([1, 1, 1, 1])).member
    L = bundle.basis_divisor(1) + bundle.basis_divisor(3) * Fraction(1, 4)
    ci = ci_membership(positive_product_top(L))
    assert not ci.member
    assert ci.margin == Fraction(-3, 4)
    assert ci.mcal == Fraction(11, 64)
    assert math.isclose(float(ci.volhat), 0.25, rel_tol=1e-9)
    assert float(ci.volhat) - float(ci.mcal) > 0


def test_bundle_gap_closed_form(bundle):
    # along L = xi + t f the two volumes are 3t^2 - t^3 and 2 t^{3/2}
    xi, f = bundle.basis_divisor(1), bundle.basis_divisor(3)
    for t in (Fraction(1, 2), Fraction(3, 4), Fraction(9, 10)):
        ci = ci_membership(positive_product_top(xi + f * t))
        assert ci.mcal == 3 * t ** 2 - t ** 3
        assert math.isclose(float(ci.volhat), 2 * float(t) ** 1.5, rel_tol=1e-8)


def test_derivative_examples(blp2, p1p1):
    ell = blp2.curve([1, 1, 1, 0])
    assert mcal_derivative(ell, blp2.curve([1, 1, 0, -1])) == 0
    assert mcal_derivative(p1p1.curve([1, 1, 1, 1]), p1p1.curve([1, 1, 0, 0])) == 2


def test_derivative_euler(variety):
    alpha = random_class(variety, "mov_curves", 11)
    n = variety.n
    m = mcal(alpha)
    assert math.isclose(float(mcal_derivative(alpha, alpha)), n / (n - 1) * float(m.value), rel_tol=1e-9)


def test_morse_examples(blp2):
    ell = blp2.curve([1, 1, 1, 0])
    eta = blp2.curve([1, 1, 0, -1])
    res = morse_bound(ell, eta * Fraction(1, 2))
    assert res.bound == 1 and res.certified_big and res.bigness_verified
    assert not morse_bound(ell, ell * Fraction(1, 2)).certified_big
    zero = blp2.curve([0, 0, 0, 0])
    res = morse_bound(ell, zero)
    assert res.bound == 1 and res.certified_big


def test_pi_hat_examples(blp2, bundle):
    L = blp2.divisor([0, 0, 2, 1])
    assert mcal(positive_product_top(L)).value == 4
    assert pi_hat(L) == blp2.divisor([0, 0, 2, 0])
    A = blp2.divisor([0, 0, 2, -1])
    assert pi_hat(A) == A
    L = bundle.basis_divisor(1) + bundle.basis_divisor(3) * Fraction(1, 4)
    p = pi_hat(L)
    B = zariski_decompose(positive_product_top(L)).positive_divisor
    ratio = float(p.coords[0]) / float(B.coords[0]) if B.coords[0] else float(p.coords[1]) / float(B.coords[1])
    assert 0 < ratio < 1
    assert bundle.is_effective(L - p, 1e-12) and bundle.is_nef(p, 1e-12)


def test_pi_hat_requires_big(blp2):
    with pytest.raises(PreconditionError):
        pi_hat(blp2.divisor([0, 0, 0, 1]))


def test_boundary_examples(blp2, bundle):
    res = classify_boundary(blp2.curve([1, 1, 1, 0]))
    assert res.kind == "positive_product" and res.divisor == blp2.divisor([0, 0, 1, 0])
    xi2_xif = bundle.product_curve([bundle.basis_divisor(1)] * 2) + bundle.product_curve(
        [bundle.basis_divisor(1), bundle.basis_divisor(3)])
    res = classify_boundary(xi2_xif)
    assert res.kind == "orthogonal" and res.divisor == bundle.basis_divisor(1)
    assert mcal(xi2_xif).value == 0
    with pytest.raises(PreconditionError):
        classify_boundary(blp2.curve([1, 1, 2, 1]))


def test_mcal_equals_volume_of_witness(variety):
    rng = np.random.default_rng(2)
    for _ in range(4):
        L = random_class(variety, "mov", rng)
        res = mcal(positive_product_top(L))
        assert res.exact and res.value == volume(L)
