"""Leslie and Ericksen stresses, viscosity validation and the corotational rate.

Matrix fields contract with gradients as ``(T;∇w) = sum_ij T_ij d_j w_i``
and ``(div T)_i = sum_j d_j T_ij``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import tensor_core as tc
from .regularized import RegularizationParams, variational_derivative_q
from .spectral import SpectralField


class LeslieCoefficientError(ValueError):
    pass


@dataclass
class ValidationReport:
    valid: bool
    failures: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    parodi: bool = False
    aniso: float = 0.0
    cross_coefficient: float = 0.0


@dataclass(frozen=True)
class LeslieCoefficients:
    mu1: float
    mu2: float
    mu3: float
    mu4: float
    mu5: float
    mu6: float
    lam: float

    @property
    def mu23(self) -> float:
        return self.mu2 + self.mu3

    @property
    def mu56(self) -> float:
        return self.mu5 + self.mu6

    @property
    def aniso(self) -> float:
        """(μ5+μ6) - λ(μ2+μ3), the coefficient of ‖(∇v)_sym d‖² in the
        dissipation."""
        return self.mu56 - self.lam * self.mu23

    @property
    def cross_coefficient(self) -> float:
        """(μ2+μ3) - λ, zero under Parodi's relation."""
        return self.mu23 - self.lam

    def validate(self) -> ValidationReport:
        return validate(self)

    def require_valid(self) -> "LeslieCoefficients":
        rep = validate(self)
        if not rep.valid:
            raise LeslieCoefficientError("invalid Leslie coefficients: " + "; ".join(rep.failures))
        for w in rep.warnings:
            warnings.warn(w, stacklevel=2)
        return self


def validate(lc: LeslieCoefficients) -> ValidationReport:
    failures, warns = [], []
    if lc.mu1 < 0:
        failures.append("mu1 > 0")
    elif lc.mu1 == 0:
        warns.append("mu1 = 0: the mu1 stress term is switched off")
    if not lc.mu4 > 0:
        failures.append("mu4 > 0")
    if not lc.aniso > 0:
        failures.append("(mu5+mu6) - lambda(mu2+mu3) > 0")
    if not 4 * lc.aniso > lc.cross_coefficient**2:
        failures.append("4((mu5+mu6) - lambda(mu2+mu3)) > ((mu2+mu3) - lambda)^2")
    scale = max(abs(lc.lam), abs(lc.mu23), 1e-300)
    parodi = abs(lc.cross_coefficient) <= 1e-14 * scale or lc.cross_coefficient == 0
    return ValidationReport(
        valid=not failures,
        failures=failures,
        warnings=warns,
        parodi=parodi,
        aniso=lc.aniso,
        cross_coefficient=lc.cross_coefficient,
    )


# pointwise stresses ---------------------------------------------------------

def leslie_stress_pointwise(lc: LeslieCoefficients, d, D, e) -> np.ndarray:
    """Leslie stress from director ``d``, rate of strain ``D = (∇v)_sym`` and
    corotational rate ``e``."""
    Dd = tc.matvec(D, d)
    dDd = tc.dot(d, Dd)[..., None, None]
    dDd_outer = tc.outer(d, Dd)
    de = tc.outer(d, e)
    return (
        lc.mu1 * dDd * tc.outer(d, d)
        + lc.mu4 * D
        + lc.mu56 * tc.sym(dDd_outer)
        + lc.mu23 * tc.sym(de)
        + lc.lam * tc.skw(dDd_outer)
        + tc.skw(de)
    )


def discrete_leslie_stress_pointwise(lc: LeslieCoefficients, d, D, q,
                                     include_mu4: bool = True) -> np.ndarray:
    """Leslie stress with e replaced by -λ(∇v)_sym d - q."""
    Dd = tc.matvec(D, d)
    dDd = tc.dot(d, Dd)[..., None, None]
    dq = tc.outer(d, q)
    out = (
        lc.mu1 * dDd * tc.outer(d, d)
        - lc.mu23 * tc.sym(dq)
        - tc.skw(dq)
        + lc.aniso * tc.sym(tc.outer(d, Dd))
    )
    if include_mu4:
        out = out + lc.mu4 * D
    return out


def dissipation_density(lc: LeslieCoefficients, d, D, q) -> np.ndarray:
    """Pointwise dissipation μ1(d·Dd)² + μ4|D|² + α|Dd|² + |q|² - ((μ2+μ3)-λ) q·Dd."""
    Dd = tc.matvec(D, d)
    return (
        lc.mu1 * tc.dot(d, Dd) ** 2
        + lc.mu4 * tc.frob(D, D)
        + lc.aniso * tc.dot(Dd, Dd)
        + tc.dot(q, q)
        - lc.cross_coefficient * tc.dot(q, Dd)
    )


# field-level operations -------------------------------------------------------

def corotational_rate_pointwise(dt_d, v, grad_v, grad_d, d) -> np.ndarray:
    """e = ∂t d + (v·∇)d - (∇v)_skw d."""
    return dt_d + tc.matvec(grad_d, v) - tc.matvec(tc.skw(grad_v), d)


def corotational_rate(v: SpectralField, d: SpectralField, dt_d: np.ndarray) -> np.ndarray:
    return corotational_rate_pointwise(dt_d, v.values, v.grad(), d.grad(), d.values)


def ericksen_stress(d: SpectralField, energy) -> np.ndarray:
    """T^E = (∇d)^T F_S(d, ∇d)."""
    S = d.grad()
    return tc.matmul(tc.transpose(S), energy.F_S(d.values, S))


def regularized_ericksen_stress(d: SpectralField, energy, p: RegularizationParams) -> np.ndarray:
    """T^E + δ Δd·∇²d - δ (∇d)^T ∇Δd."""
    TE = ericksen_stress(d, energy)
    if p.delta == 0:
        return TE
    g = d.grid
    S = d.grad()
    lap_hat = -g._k2(d.hat) * d.hat
    lap = g.ifft(lap_hat)
    grad_lap = g.ifft(g.grad_hat(lap_hat))
    hess = d.hessian()
    # (Δd·∇²d)_jk = sum_i Δd_i d_k d_j d_i
    term1 = np.einsum("...i,...ijk->...jk", lap, hess)
    term2 = tc.matmul(tc.transpose(S), grad_lap)
    return TE + p.delta * (term1 - term2)


def leslie_stress(lc: LeslieCoefficients, v: SpectralField, d: SpectralField,
                  e: np.ndarray) -> np.ndarray:
    return leslie_stress_pointwise(lc, d.values, tc.sym(v.grad()), e)


def discrete_leslie_stress(lc: LeslieCoefficients, v: SpectralField, d: SpectralField,
                           q: np.ndarray) -> np.ndarray:
    return discrete_leslie_stress_pointwise(lc, d.values, tc.sym(v.grad()), q)


def ericksen_identity_residual(d: SpectralField, energy, p: RegularizationParams,
                               w: SpectralField, div_tol: float = 1e-10) -> float:
    """Normalized |(T^E_δ;∇w) - ((∇d)^T q_δ, w)| for divergence-free ``w``.

    Everything is evaluated pseudo-spectrally on the grid of ``d`` without
    projection, so the residual measures aliasing and vanishes as the grid
    resolves the nonlinear products.
    """
    g = d.grid
    Gw = w.grad()
    divw = np.abs(tc.trace(Gw)).max()
    if divw > div_tol * max(np.abs(Gw).max(), 1e-300):
        raise ValueError("test field w is not divergence-free")
    T = regularized_ericksen_stress(d, energy, p)
    q = variational_derivative_q(d, energy, p)
    a = g.integrate(tc.frob(T, Gw))
    b = g.integrate(tc.dot(tc.matvec(tc.transpose(d.grad()), q), w.values))
    scale = abs(a) + abs(b)
    return abs(a - b) / scale if scale > 0 else 0.0

