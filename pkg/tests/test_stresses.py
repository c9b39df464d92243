import numpy as np
import pytest

from elsim import tensor_core as tc
from elsim.checks import ericksen_pair
from elsim.oseen_frank import FrankConstants, OneConstant
from elsim.regularized import RegularizationParams, variational_derivative_q
from elsim.spectral import SpectralDirector, SpectralField, leray_project, random_band_limited
from elsim.stresses import (
    LeslieCoefficientError,
    LeslieCoefficients,
    corotational_rate_pointwise,
    discrete_leslie_stress_pointwise,
    dissipation_density,
    ericksen_identity_residual,
    ericksen_stress,
    leslie_stress_pointwise,
    regularized_ericksen_stress,
)


def test_validation_examples(parodi):
    rep = parodi.validate()
    assert rep.valid and rep.parodi
    assert rep.aniso == pytest.approx(1.0)
    bad = LeslieCoefficients(1, 0.1, 0.4, -1, 0.6, 0.65, 0.5).validate()
    assert not bad.valid and "mu4 > 0" in bad.failures
    rep = LeslieCoefficients(1, 1.0, 1.0, 1, 0.5, 0.5, 0.0).validate()
    assert not rep.valid
    assert any("4(" in f for f in rep.failures)
    with pytest.raises(LeslieCoefficientError):
        LeslieCoefficients(1, 1.0, 1.0, 1, 0.5, 0.5, 0.0).require_valid()


def test_mu1_zero_warns():
    with pytest.warns(UserWarning):
        LeslieCoefficients(0, 0.1, 0.4, 1, 0.6, 0.65, 0.5).require_valid()


def test_corotational_examples(rng):
    d = rng.standard_normal((10, 3))
    zero3, zero33 = np.zeros((10, 3)), np.zeros((10, 3, 3))
    np.testing.assert_array_equal(corotational_rate_pointwise(zero3, zero3, zero33, zero33, d), 0)
    psi = rng.standard_normal((10, 3))
    np.testing.assert_array_equal(corotational_rate_pointwise(psi, zero3, zero33, zero33, d), psi)
    # rigid rotation: ∇v = hat(ω), uniform director turning with the flow
    omega = np.array([0.3, -0.7, 1.1])
    grad_v = np.broadcast_to(tc.hat(omega), (10, 3, 3))
    v = rng.standard_normal((10, 3))
    e = corotational_rate_pointwise(tc.cross(omega, d), v, grad_v, zero33, d)
    assert np.abs(e).max() < 1e-15


def test_leslie_forms_agree(parodi, rng):
    for lc in (parodi, LeslieCoefficients(0.5, 0.3, 0.6, 2.0, 1.0, 1.2, 0.4)):
        d = rng.standard_normal((200, 3))
        D = tc.sym(rng.standard_normal((200, 3, 3)))
        q = rng.standard_normal((200, 3))
        e = -lc.lam * tc.matvec(D, d) - q
        a = leslie_stress_pointwise(lc, d, D, e)
        b = discrete_leslie_stress_pointwise(lc, d, D, q)
        assert np.abs(a - b).max() < 1e-12 * max(1.0, np.abs(a).max())


def test_leslie_trivial_cases(rng):
    lc = LeslieCoefficients(0, 0, 0, 1.7, 0, 0, 0)
    d = rng.standard_normal((5, 3))
    D = tc.sym(rng.standard_normal((5, 3, 3)))
    np.testing.assert_allclose(leslie_stress_pointwise(lc, d, D, np.zeros((5, 3))), 1.7 * D)
    full = LeslieCoefficients(1, 0.1, 0.4, 1, 0.6, 0.65, 0.5)
    np.testing.assert_array_equal(
        leslie_stress_pointwise(full, d, np.zeros((5, 3, 3)), np.zeros((5, 3))), 0)


def test_dissipation_is_power_of_stress(parodi, rng):
    """T^L:∇v - q·(W d - λ D d) + |q|² equals the dissipation density: the
    energy rate of the velocity and director equations, pointwise."""
    lc = LeslieCoefficients(0.5, 0.3, 0.6, 2.0, 1.0, 1.2, 0.4)
    for c in (parodi, lc):
        d = rng.standard_normal((300, 3))
        G = rng.standard_normal((300, 3, 3))
        D, W = tc.sym(G), tc.skw(G)
        q = rng.standard_normal((300, 3))
        T = discrete_leslie_stress_pointwise(c, d, D, q)
        power = (tc.frob(T, G) - tc.dot(q, tc.matvec(W, d) - c.lam * tc.matvec(D, d))
                 + tc.dot(q, q))
        np.testing.assert_allclose(power, dissipation_density(c, d, D, q), rtol=1e-10, atol=1e-10)
        assert np.all(dissipation_density(c, d, D, q) >= -1e-12)


def test_ericksen_examples(grid16, rng):
    g = grid16
    const = np.zeros((16,) * 3 + (3,))
    const[..., 2] = 1.0
    c = FrankConstants(1.0, 0.8, 1.2)
    p = RegularizationParams(0.1)
    dc = SpectralDirector(g, const)
    assert np.abs(regularized_ericksen_stress(dc, c, p)).max() < 1e-14
    d = SpectralDirector(g, const + 0.3 * random_band_limited(g, rng, kmax=3))
    TE = ericksen_stress(d, OneConstant(2.0))
    np.testing.assert_allclose(TE, np.swapaxes(TE, -1, -2), atol=1e-13)
    assert np.linalg.eigvalsh(TE).min() > -1e-12
    w = leray_project(SpectralField(g, random_band_limited(g, rng, kmax=3)))
    assert ericksen_identity_residual(dc, c, p, w) == 0.0
    grad = SpectralField(g, g.grad(random_band_limited(g, rng, ncomp=1, kmax=3))[..., 0, :])
    with pytest.raises(ValueError):
        ericksen_identity_residual(d, c, p, grad)


def test_ericksen_identity_converges():
    r16, r32 = ericksen_pair()
    assert r32 < 1e-8
    assert r32 < r16


def test_skew_parts_do_not_dissipate(parodi, rng):
    d = rng.standard_normal((100, 3))
    D = tc.sym(rng.standard_normal((100, 3, 3)))
    q = rng.standard_normal((100, 3))
    skew = -tc.skw(tc.outer(d, q))
    assert np.abs(tc.frob(skew, D)).max() < 1e-14
