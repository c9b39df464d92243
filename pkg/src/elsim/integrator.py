"""Time stepping for the spectral Galerkin system.

The velocity obeys

    ∂t v = P_n[v × ω + div T^L + (∇d)^T q + g] + (μ4/2) Δv

where ``ω = curl v`` and ``T^L`` is the discrete Leslie stress without its
μ4 part (on divergence-free fields ``div(μ4 D) = μ4/2 Δv``). The
rotational advection form differs from ``-(v·∇)v`` by a gradient, which the
projection removes, and it keeps the discrete transport exactly energy
neutral. The director obeys

    ∂t d = R_n[-(v·∇)d + W d - λ D d] - q,
    q    = R_n[F_h - div F_S + penalty] + δ Δ²d.

``imex1`` treats μ4/2 Δv, δΔ²d and the constant-coefficient part of
``-div F_S`` implicitly; each is diagonal per Fourier mode (the latter on the
longitudinal/transverse split of each mode).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np

from . import tensor_core as tc
from .regularized import RegularizationParams
from .spectral import SpectralDirector, SpectralVelocity, TorusGrid
from .stresses import LeslieCoefficients, discrete_leslie_stress_pointwise

SCHEMES = ("imex1", "rk4_explicit")


class BlowUpError(FloatingPointError):
    """Raised when a step produces non-finite coefficients."""

    def __init__(self, t: float, step: int):
        super().__init__(f"non-finite coefficients at t={t:.6g} (step {step})")
        self.t = t
        self.step = step


class CFLError(ValueError):
    pass


@dataclass(frozen=True)
class Model:
    """Physics of a run: elastic energy, viscosities, regularization and
    the Galerkin radius ``n`` (defaults to the grid's dealiasing cutoff).
    ``frozen_velocity`` pins v to its initial value, which reduces the
    director equation to a gradient flow when v = 0."""

    energy: object
    leslie: LeslieCoefficients
    reg: RegularizationParams
    n: Optional[float] = None
    frozen_velocity: bool = False

    def radius(self, grid: TorusGrid) -> float:
        n = grid.cutoff if self.n is None else self.n
        if n > grid.N / 2:
            raise ValueError(f"Galerkin radius {n} exceeds N/2")
        return n


@dataclass
class SimState:
    t: float
    v: SpectralVelocity
    d: SpectralDirector
    model: Model
    forcing: Optional[np.ndarray] = None
    step: int = 0

    @property
    def grid(self) -> TorusGrid:
        return self.v.grid

    def copy(self) -> "SimState":
        return replace(self, v=self.v.copy(), d=self.d.copy())


@dataclass(frozen=True)
class StepperConfig:
    dt: float
    t_end: float
    scheme: str = "imex1"
    cfl_safety: Optional[float] = None

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.t_end < 0:
            raise ValueError("t_end must be nonnegative")
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.cfl_safety is not None and not (0 < self.cfl_safety <= 1):
            raise ValueError("cfl_safety must lie in (0, 1]")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_end / self.dt))


class Evaluation(NamedTuple):
    """Everything computed from one state that the stepper and the
    diagnostics both need. Arrays are grid values unless marked ``_hat``."""

    D: np.ndarray          # (∇v)_sym
    q: np.ndarray          # projected variational derivative
    q_hat: np.ndarray
    rhs_v_hat: np.ndarray  # full velocity rate
    rhs_d_hat: np.ndarray  # full director rate
    lin_v: np.ndarray      # diagonal implicit symbol of the velocity (≤ 0)
    lin_d: tuple           # (longitudinal, transverse) implicit symbols (≤ 0)


def _implicit_symbols(grid: TorusGrid, model: Model):
    k2 = grid.k2
    lin_v = -0.5 * model.leslie.mu4 * k2
    aL, aT = model.energy.implicit_rates()
    bi = model.reg.delta * k2**2
    return lin_v, (-(aL * k2 + bi), -(aT * k2 + bi))


def _longitudinal(grid: TorusGrid, uh: np.ndarray) -> np.ndarray:
    """k (k·û)/|k|^2 using the derivative wavevectors (zero at k = 0)."""
    kd = grid.k_deriv
    kk = np.sum(kd**2, axis=-1)
    safe = np.where(kk > 0, kk, 1.0)
    return kd * (np.sum(kd * uh, axis=-1) / safe)[..., None]


def _apply_split(grid, uh, sym_L, sym_T):
    """Apply the symbol ``sym_L P_L + sym_T P_T`` to a vector coefficient
    field. Modes with vanishing derivative wavevector are purely transverse."""
    uL = _longitudinal(grid, uh)
    return sym_L[..., None] * uL + sym_T[..., None] * (uh - uL)


def evaluate(state: SimState) -> Evaluation:
    g = state.grid
    m = state.model
    n = m.radius(g)
    e = m.energy
    lc = m.leslie
    d = state.d.values
    v = state.v.values
    mask = g.ball(n)[..., None]

    S = state.d.grad()
    G = state.v.grad()
    D = tc.sym(G)
    W = tc.skw(G)

    nl = e.F_h(d, S) - g.div(e.F_S(d, S))
    if m.reg.penalty:
        nl = nl + m.reg.inv_epsilon * (tc.dot(d, d) - 1.0)[..., None] * d
    q_hat = g.fft(nl) * mask + m.reg.delta * g.k2[..., None] ** 2 * state.d.hat
    q = g.ifft(q_hat)

    transport = -tc.matvec(S, v) + tc.matvec(W, d) - lc.lam * tc.matvec(D, d)
    rhs_d_hat = g.fft(transport) * mask - q_hat

    lin_v, lin_d = _implicit_symbols(g, m)
    omega = 2.0 * tc.vee(W)
    force = tc.cross(v, omega) + tc.matvec(tc.transpose(S), q)
    if state.forcing is not None:
        force = force + state.forcing
    TL = discrete_leslie_stress_pointwise(lc, d, D, q, include_mu4=False)
    f_hat = g.fft(force) + g.div_hat(g.fft(TL))
    f_hat = g.leray_hat(f_hat) * mask
    f_hat[0, 0, 0] = 0.0
    rhs_v_hat = f_hat + lin_v[..., None] * state.v.hat
    if m.frozen_velocity:
        rhs_v_hat = np.zeros_like(rhs_v_hat)
        lin_v = np.zeros_like(lin_v)

    return Evaluation(D, q, q_hat, rhs_v_hat, rhs_d_hat, lin_v, lin_d)


def assemble_rhs(state: SimState) -> tuple[np.ndarray, np.ndarray]:
    """(dv/dt, dd/dt) as Fourier coefficients."""
    ev = evaluate(state)
    return ev.rhs_v_hat, ev.rhs_d_hat


def _check_cfl(state: SimState, cfg: StepperConfig):
    if cfg.cfl_safety is None:
        return
    g = state.grid
    vmax = float(np.sqrt(np.max(tc.dot(state.v.values, state.v.values))))
    if vmax > 0 and cfg.dt > cfg.cfl_safety * g.dx / vmax:
        raise CFLError(f"dt={cfg.dt} violates the advective CFL bound at t={state.t:.6g}")
    if cfg.scheme == "rk4_explicit" and state.model.reg.delta > 0:
        limit = cfg.cfl_safety * g.dx**4 / state.model.reg.delta
        if cfg.dt > limit:
            raise CFLError(f"dt={cfg.dt} exceeds the explicit biharmonic bound {limit:.3g}")


def _finish(state: SimState, vh: np.ndarray, dh: np.ndarray, dt: float) -> SimState:
    g = state.grid
    t = state.t + dt
    if not (np.all(np.isfinite(vh)) and np.all(np.isfinite(dh))):
        raise BlowUpError(t, state.step + 1)
    v = SpectralVelocity.from_hat(g, g.leray_hat(vh))
    d = SpectralDirector.from_hat(g, dh)
    return replace(state, t=t, v=v, d=d, step=state.step + 1)


def _imex_step(state: SimState, ev: Evaluation, dt: float) -> SimState:
    g = state.grid
    vh = state.v.hat
    dh = state.d.hat
    lin_v = ev.lin_v[..., None]
    # explicit parts are the full rates minus the implicit linear terms
    exp_v = ev.rhs_v_hat - lin_v * vh
    exp_d = ev.rhs_d_hat - _apply_split(g, dh, *ev.lin_d)
    vh_new = (vh + dt * exp_v) / (1.0 - dt * lin_v)
    sL, sT = (1.0 / (1.0 - dt * s) for s in ev.lin_d)
    dh_new = _apply_split(g, dh + dt * exp_d, sL, sT)
    return _finish(state, vh_new, dh_new, dt)


def _stage(state: SimState, vh, dh) -> SimState:
    g = state.grid
    return replace(state, v=SpectralVelocity.from_hat(g, vh), d=SpectralDirector.from_hat(g, dh))


def _rk4_step(state: SimState, ev: Evaluation, dt: float) -> SimState:
    vh0, dh0 = state.v.hat, state.d.hat
    k1 = (ev.rhs_v_hat, ev.rhs_d_hat)
    k2 = assemble_rhs(_stage(state, vh0 + 0.5 * dt * k1[0], dh0 + 0.5 * dt * k1[1]))
    k3 = assemble_rhs(_stage(state, vh0 + 0.5 * dt * k2[0], dh0 + 0.5 * dt * k2[1]))
    k4 = assemble_rhs(_stage(state, vh0 + dt * k3[0], dh0 + dt * k3[1]))
    vh = vh0 + dt / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
    dh = dh0 + dt / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
    return _finish(state, vh, dh, dt)


def step(state: SimState, cfg: StepperConfig, ev: Optional[Evaluation] = None) -> SimState:
    """Advance one step of size ``cfg.dt``; ``ev`` may carry a precomputed
    evaluation of ``state``. Returns a new state."""
    _check_cfl(state, cfg)
    if ev is None:
        ev = evaluate(state)
    if cfg.scheme == "imex1":
        return _imex_step(state, ev, cfg.dt)
    return _rk4_step(state, ev, cfg.dt)


Hook = Callable[[SimState, Evaluation], None]


def run(state: SimState, cfg: StepperConfig, hooks: Sequence = (), cadence: int = 1) -> SimState:
    """Advance to ``cfg.t_end`` and return the final state.

    Each hook is a callable ``hook(state, evaluation)`` or a pair
    ``(hook, every)``; bare callables use ``cadence``. Hooks run on the
    initial state, every ``every`` steps, and on the final state. States
    are never mutated in place, so a hook may keep the objects it receives.
    """
    plan = [(h, cadence) if callable(h) else (h[0], int(h[1])) for h in hooks]
    n_steps = cfg.n_steps
    for i in range(n_steps + 1):
        ev = evaluate(state) if (plan or i < n_steps) else None
        for hook, every in plan:
            if i % every == 0 or i == n_steps:
                hook(state, ev)
        if i == n_steps:
            break
        state = step(state, cfg, ev)
    return state
