import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from elsim import tensor_core as tc
from elsim import tensor_oracle as to
from elsim.oseen_frank import (
    FrankConstants,
    F_h,
    F_S,
    OneConstant,
    energy_density,
    energy_density_tensor_form,
    frank_original_density,
    one_constant_density,
    quad_form_ellipticity,
)

E3 = np.array([0.0, 0.0, 1.0])


def test_splittings():
    c = FrankConstants(1.0, 0.8, 1.2)
    assert c.k == pytest.approx((0.5, 0.4, 0.5, 0.4, 0.8))
    e = FrankConstants(1.0, 0.8, 1.2, "equal_split")
    assert e.k == pytest.approx((0.4, 0.4, 0.6, 0.4, 0.8))
    for x in (c, e):
        assert x.k1 + x.k3 == pytest.approx(x.K1)
        assert x.k2 + x.k4 == pytest.approx(x.K2)
        assert x.k2 + x.k5 == pytest.approx(x.K3)
        assert min(x.k) >= 0


def test_invalid_constants():
    with pytest.raises(ValueError):
        FrankConstants(1.0, -1.0, 1.0)
    with pytest.raises(ValueError):
        FrankConstants(1.0, 1.0, 1.0, "other")
    with pytest.raises(ValueError):
        FrankConstants.custom(k1=-1)


def test_density_examples(frank):
    c = frank
    assert energy_density(c, E3, np.zeros((3, 3))) == 0.0
    # tr S = 0, |W|² = 2, hat(h):W = 2, W h = 0
    assert energy_density(c, E3, tc.hat(E3)) == pytest.approx(2 * c.k2 + 2 * c.k4)
    assert energy_density(c, np.zeros(3), np.eye(3)) == pytest.approx(4.5 * c.k1)
    for h, S in ((E3, np.zeros((3, 3))), (E3, tc.hat(E3)), (np.zeros(3), np.eye(3))):
        assert energy_density_tensor_form(c, h, S) == pytest.approx(energy_density(c, h, S), abs=1e-14)


def test_frozen_density_value():
    c = FrankConstants(1.0, 0.8, 1.2)
    h = np.array([0.3, -0.2, 0.9])
    S = np.arange(9.0).reshape(3, 3) / 10 - 0.4
    # by hand: tr S = 0, |W|² = 0.12, hat(h):W = 0.32, |W h|² = 0.0308
    # 0.4*0.12 + 0.5*0.4*0.32² + 0.5*0.8*4*0.0308
    assert energy_density(c, h, S) == pytest.approx(0.11776, rel=1e-13)


def test_tensor_form_random(frank, rng):
    h = rng.standard_normal((1000, 3))
    S = rng.standard_normal((1000, 3, 3))
    a = energy_density(frank, h, S)
    b = energy_density_tensor_form(frank, h, S)
    assert np.max(np.abs(a - b) / (1 + np.abs(a))) < 1e-12


def test_lambda_theta_match_index_formulas(frank):
    np.testing.assert_array_equal(frank.Lambda, to.build_lambda(frank.k1, frank.k2))
    np.testing.assert_allclose(frank.Theta, to.build_theta(frank.k3, frank.k4, frank.k5), atol=1e-15)
    L = frank.Lambda
    np.testing.assert_array_equal(L, L.transpose(2, 3, 0, 1))


def test_lambda_pure_trace(rng):
    c = FrankConstants.custom(k1=1.0)
    A = rng.standard_normal((3, 3))
    np.testing.assert_allclose(tc.ten4_colon_mat(c.Lambda, A), np.trace(A) * np.eye(3), atol=1e-15)
    np.testing.assert_array_equal(c.Theta, 0.0)
    np.testing.assert_array_equal(tc.ten4_colon_mat(c.Lambda, np.zeros((3, 3))), 0.0)


def test_ellipticity_formula(rng):
    c = FrankConstants.custom(k1=2.0, k2=3.0)
    e = np.eye(3)
    assert quad_form_ellipticity(c, e[0], e[1]) == pytest.approx(3.0)
    assert quad_form_ellipticity(c, e[0], e[0]) == pytest.approx(2.0)
    assert quad_form_ellipticity(c, np.zeros(3), e[0]) == 0.0
    a, b = rng.standard_normal((2, 500, 3))
    ab = tc.dot(a, b)
    expected = 2 * ab**2 + 3 * (tc.dot(a, a) * tc.dot(b, b) - ab**2)
    np.testing.assert_allclose(quad_form_ellipticity(c, a, b), expected, rtol=1e-12)


def test_derivative_examples(frank, rng):
    h = rng.standard_normal(3)
    np.testing.assert_array_equal(F_h(frank, h, np.zeros((3, 3))), 0.0)
    S = rng.standard_normal((3, 3))
    expected = frank.k1 * np.trace(S) * np.eye(3) + 2 * frank.k2 * tc.skw(S)
    np.testing.assert_allclose(F_S(frank, np.zeros(3), S), expected, atol=1e-14)


def _central(fun, x, i, eps=1e-5):
    dx = np.zeros_like(x)
    dx.flat[i] = eps
    return (fun(x + dx) - fun(x - dx)) / (2 * eps)


def test_derivatives_finite_differences(frank, rng):
    for _ in range(100):
        h = rng.standard_normal(3)
        S = rng.standard_normal((3, 3))
        gS = np.array([_central(lambda X: energy_density(frank, h, X), S, i) for i in range(9)])
        gh = np.array([_central(lambda x: energy_density(frank, x, S), h, i) for i in range(3)])
        fs, fh = F_S(frank, h, S).ravel(), F_h(frank, h, S)
        assert np.abs(fs - gS).max() <= 1e-6 * max(np.abs(fs).max(), 1.0)
        assert np.abs(fh - gh).max() <= 1e-6 * max(np.abs(fh).max(), 1.0)


@settings(max_examples=200, deadline=None)
@given(arrays(np.float64, (3,), elements=st.floats(-10, 10)),
       arrays(np.float64, (3, 3), elements=st.floats(-10, 10)))
def test_density_nonnegative(h, S):
    for mode in ("min_split", "equal_split"):
        assert energy_density(FrankConstants(1.0, 0.5, 2.0, mode), h, S) >= 0.0


def test_original_frank_form_for_unit_director(frank, rng):
    h = rng.standard_normal((500, 3))
    h /= np.linalg.norm(h, axis=-1, keepdims=True)
    S = rng.standard_normal((500, 3, 3))
    np.testing.assert_allclose(energy_density(frank, h, S), frank_original_density(frank, h, S),
                               rtol=1e-12, atol=1e-13)


def test_one_constant():
    assert one_constant_density(2.0, np.zeros((3, 3))) == 0.0
    assert one_constant_density(2.0, np.eye(3)) == pytest.approx(3.0)
    assert one_constant_density(1.0, tc.hat(E3)) == pytest.approx(1.0)
    oc = OneConstant(1.5)
    S = np.arange(9.0).reshape(3, 3)
    np.testing.assert_array_equal(oc.F_S(E3, S), 1.5 * S)
    assert oc.terms(E3, S).sum() == pytest.approx(oc.density(E3, S))
    with pytest.raises(ValueError):
        OneConstant(0.0)
