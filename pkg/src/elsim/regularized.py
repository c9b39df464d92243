"""Regularized, penalized free energy and its variational derivative."""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

from . import tensor_core as tc
from .oseen_frank import DirectorSample
from .spectral import SpectralField

SCHEDULES = ("linear", "seven_thirds")


@dataclass(frozen=True)
class RegularizationParams:
    """Regularization weight δ and the penalty weight ε(δ).

    ``linear`` sets ε = δ, ``seven_thirds`` sets ε = δ^(7/3). With
    ``penalty=False`` the quartic penalty is dropped entirely.
    """

    delta: float
    schedule: str = "linear"
    penalty: bool = True

    def __post_init__(self):
        if not (0.0 < self.delta <= 1.0):
            raise ValueError(f"delta must lie in (0, 1], got {self.delta}")
        if self.schedule not in SCHEDULES:
            raise ValueError(f"unknown schedule {self.schedule!r}")

    @property
    def epsilon(self) -> float:
        if self.schedule == "linear":
            return self.delta
        return self.delta ** (7.0 / 3.0)

    @property
    def inv_epsilon(self) -> float:
        return 1.0 / self.epsilon if self.penalty else 0.0


@dataclass
class EnergyBreakdown:
    """Per-term energy ledger; ``total`` is the sum of all parts."""

    kinetic: float = 0.0
    frank_k1: float = 0.0
    frank_k2: float = 0.0
    frank_k3: float = 0.0
    frank_k4: float = 0.0
    frank_k5: float = 0.0
    penalty: float = 0.0
    reg_delta: float = 0.0

    @property
    def frank(self) -> float:
        return self.frank_k1 + self.frank_k2 + self.frank_k3 + self.frank_k4 + self.frank_k5

    @property
    def free_energy(self) -> float:
        return self.frank + self.penalty + self.reg_delta

    @property
    def total(self) -> float:
        return self.kinetic + self.free_energy

    def as_dict(self) -> dict:
        out = {f.name: getattr(self, f.name) for f in fields(self)}
        out["total"] = self.total
        return out


def penalty_density(p: RegularizationParams, h) -> np.ndarray:
    h = np.asarray(h, dtype=float)
    return 0.25 * p.inv_epsilon * (tc.dot(h, h) - 1.0) ** 2


def reg_energy_parts(energy, p: RegularizationParams, s: DirectorSample):
    """(δ-term, elastic term, penalty) of the regularized density."""
    if s.Gamma is None:
        raise ValueError("regularized energy needs the second gradient Gamma")
    lap = tc.ten3_colon_mat(s.Gamma, tc.IDENTITY)
    return (
        0.5 * p.delta * tc.dot(lap, lap),
        energy.density(s.h, s.S),
        penalty_density(p, s.h),
    )


def reg_energy_density(energy, p: RegularizationParams, s: DirectorSample) -> np.ndarray:
    a, b, c = reg_energy_parts(energy, p, s)
    return a + b + c


def total_free_energy(d: SpectralField, energy, p: RegularizationParams) -> EnergyBreakdown:
    """Grid quadrature of the regularized density (kinetic left at 0)."""
    g = d.grid
    h = d.values
    terms = energy.terms(h, d.grad())
    per_term = np.sum(terms, axis=(0, 1, 2)) * g.cell_volume
    lap = d.laplacian()
    return EnergyBreakdown(
        frank_k1=float(per_term[0]),
        frank_k2=float(per_term[1]),
        frank_k3=float(per_term[2]),
        frank_k4=float(per_term[3]),
        frank_k5=float(per_term[4]),
        penalty=g.integrate(penalty_density(p, h)),
        reg_delta=0.5 * p.delta * g.integrate(lap * lap),
    )


def free_energy_value(d: SpectralField, energy, p: RegularizationParams) -> float:
    return total_free_energy(d, energy, p).free_energy


def elastic_derivative(d: SpectralField, energy, p: RegularizationParams) -> np.ndarray:
    """``F_h - div F_S + (1/ε)(|d|²-1)d`` on the grid (not projected)."""
    g = d.grid
    h = d.values
    S = d.grad()
    out = energy.F_h(h, S) - g.div(energy.F_S(h, S))
    if p.penalty:
        out = out + p.inv_epsilon * (tc.dot(h, h) - 1.0)[..., None] * h
    return out


def variational_derivative_q(d: SpectralField, energy, p: RegularizationParams,
                             n: float | None = None) -> np.ndarray:
    """q_δ on the grid.

    With ``n`` given, the elastic and penalty part is projected onto the
    modes |m| <= n before the δΔ²d term is added, which is the Galerkin
    form used by the integrator. Without ``n`` nothing is projected.
    """
    g = d.grid
    nl_hat = g.fft(elastic_derivative(d, energy, p))
    if n is not None:
        nl_hat = g.truncate_hat(nl_hat, n)
    qh = nl_hat + p.delta * g.k2[..., None] ** 2 * d.hat
    return g.ifft(qh)
