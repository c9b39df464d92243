"""Periodic-torus Fourier discretization.

Physical fields live on a uniform ``N^3`` grid with component axes trailing,
e.g. a vector field has shape ``(N, N, N, 3)``. Coefficients use the
real-to-complex layout of ``rfftn`` over the first three axes, so Hermitian
symmetry is implied by construction.

The Galerkin spaces are the Fourier modes with integer wavevector
``|m| <= n`` (a ball). The default ``n`` equals the 2/3-rule cutoff
``N // 3``; quadratic products of band-limited fields are then alias-free
on the retained band.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np
import scipy.fft as sfft

from . import tensor_core as tc

_AXES = (0, 1, 2)


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("EL_SIM_THREADS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class TorusGrid:
    """Uniform grid on ``[0, L)^3`` with ``N`` points per axis."""

    N: int
    L: float = 2 * np.pi

    def __post_init__(self):
        if self.N < 8 or self.N % 2:
            raise ValueError(f"N must be even and >= 8, got {self.N}")
        if not self.L > 0:
            raise ValueError("L must be positive")

    @property
    def cutoff(self) -> int:
        return self.N // 3

    @property
    def dx(self) -> float:
        return self.L / self.N

    @property
    def cell_volume(self) -> float:
        return self.dx**3

    @property
    def volume(self) -> float:
        return self.L**3

    @cached_property
    def x(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        x1 = np.arange(self.N) * self.dx
        return tuple(np.meshgrid(x1, x1, x1, indexing="ij"))

    @cached_property
    def modes(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Integer wavevector components broadcastable to ``(N, N, N//2+1)``."""
        m = np.fft.fftfreq(self.N, 1.0 / self.N)
        mz = np.arange(self.N // 2 + 1, dtype=float)
        return m[:, None, None], m[None, :, None], mz[None, None, :]

    @cached_property
    def mode_radius(self) -> np.ndarray:
        m1, m2, m3 = self.modes
        return np.sqrt(m1**2 + m2**2 + m3**2)

    @cached_property
    def k(self) -> np.ndarray:
        """Physical wavevector, shape ``(N, N, N//2+1, 3)``."""
        s = 2 * np.pi / self.L
        m1, m2, m3 = np.broadcast_arrays(*self.modes)
        return s * np.stack([m1, m2, m3], axis=-1)

    @cached_property
    def k_deriv(self) -> np.ndarray:
        """Wavevector for first derivatives; Nyquist entries zeroed so the
        discrete derivative is skew-adjoint and maps real to real."""
        kd = self.k.copy()
        nyq = self.N // 2
        kd[nyq, :, :, 0] = 0.0
        kd[:, nyq, :, 1] = 0.0
        kd[:, :, nyq, 2] = 0.0
        return kd

    @cached_property
    def k2(self) -> np.ndarray:
        return np.sum(self.k**2, axis=-1)

    def ball(self, n: float) -> np.ndarray:
        return self.mode_radius <= n + 1e-9

    @cached_property
    def dealias_mask(self) -> np.ndarray:
        return self.ball(self.cutoff)

    # transforms -----------------------------------------------------------

    def fft(self, u: np.ndarray) -> np.ndarray:
        return sfft.rfftn(u, axes=_AXES, workers=_workers())

    def ifft(self, uh: np.ndarray) -> np.ndarray:
        return sfft.irfftn(uh, s=(self.N,) * 3, axes=_AXES, workers=_workers())

    def _kd(self, ndim_extra: int) -> np.ndarray:
        # wavevector reshaped to broadcast against coefficient arrays with
        # ndim_extra trailing component axes, plus a new derivative axis
        kd = self.k_deriv
        return kd.reshape(kd.shape[:3] + (1,) * ndim_extra + (3,))

    # spectral calculus on coefficients -------------------------------------

    def grad_hat(self, uh: np.ndarray) -> np.ndarray:
        """Append a derivative axis: ``out[..., j] = i k_j uh``."""
        return 1j * self._kd(uh.ndim - 3) * uh[..., None]

    def div_hat(self, uh: np.ndarray) -> np.ndarray:
        """Contract the last component axis with i k."""
        return 1j * np.sum(self._kd(uh.ndim - 4) * uh, axis=-1)

    # spectral calculus on grid values --------------------------------------

    def grad(self, u: np.ndarray) -> np.ndarray:
        """``out[..., i, j] = d_j u_i`` (scalar input gives a vector)."""
        return self.ifft(self.grad_hat(self.fft(u)))

    def div(self, A: np.ndarray) -> np.ndarray:
        """Divergence over the last axis: ``(div A)_i = sum_j d_j A_ij``."""
        return self.ifft(self.div_hat(self.fft(A)))

    def curl(self, u: np.ndarray) -> np.ndarray:
        G = self.grad(u)
        return 2.0 * tc.vee(tc.skw(G))

    def laplacian(self, u: np.ndarray) -> np.ndarray:
        uh = self.fft(u)
        return self.ifft(-self._k2(uh) * uh)

    def bilaplacian(self, u: np.ndarray) -> np.ndarray:
        uh = self.fft(u)
        return self.ifft(self._k2(uh) ** 2 * uh)

    def hessian(self, u: np.ndarray) -> np.ndarray:
        """Second gradient, ``out[..., i, j, k] = d_k d_j u_i``."""
        return self.ifft(self.grad_hat(self.grad_hat(self.fft(u))))

    def _k2(self, uh: np.ndarray) -> np.ndarray:
        return self.k2.reshape(self.k2.shape + (1,) * (uh.ndim - 3))

    # projections ------------------------------------------------------------

    def leray_hat(self, uh: np.ndarray) -> np.ndarray:
        kd = self.k_deriv
        kk = np.sum(kd**2, axis=-1)
        safe = np.where(kk > 0, kk, 1.0)
        kdotu = np.sum(kd * uh, axis=-1)
        return uh - kd * (kdotu / safe)[..., None]

    def truncate_hat(self, uh: np.ndarray, n: float | None = None) -> np.ndarray:
        mask = self.dealias_mask if n is None else self.ball(n)
        return uh * mask.reshape(mask.shape + (1,) * (uh.ndim - 3))

    # quadrature -------------------------------------------------------------

    def integrate(self, f: np.ndarray) -> float:
        """Rectangle rule over the three spatial axes (summing any component
        axes as well)."""
        return float(np.sum(f) * self.cell_volume)

    def inner(self, a: np.ndarray, b: np.ndarray) -> float:
        return self.integrate(a * b)


class SpectralField:
    """A real field on a :class:`TorusGrid`.

    The grid values are canonical; Fourier coefficients are derived from
    them on demand (and cached), so writing and re-reading the values
    reproduces the coefficients bit for bit.
    """

    __slots__ = ("grid", "values", "_hat")

    def __init__(self, grid: TorusGrid, values: np.ndarray):
        values = np.ascontiguousarray(values, dtype=np.float64)
        if values.shape[:3] != (grid.N,) * 3:
            raise ValueError(f"field shape {values.shape} does not match grid N={grid.N}")
        self.grid = grid
        self.values = values
        self._hat = None

    @classmethod
    def from_hat(cls, grid: TorusGrid, uh: np.ndarray):
        return cls(grid, grid.ifft(uh))

    @classmethod
    def zeros(cls, grid: TorusGrid, ncomp: int = 3):
        return cls(grid, np.zeros((grid.N,) * 3 + (ncomp,)))

    @property
    def hat(self) -> np.ndarray:
        if self._hat is None:
            self._hat = self.grid.fft(self.values)
        return self._hat

    def grad(self) -> np.ndarray:
        return self.grid.ifft(self.grid.grad_hat(self.hat))

    def laplacian(self) -> np.ndarray:
        return self.grid.ifft(-self.grid._k2(self.hat) * self.hat)

    def hessian(self) -> np.ndarray:
        return self.grid.ifft(self.grid.grad_hat(self.grid.grad_hat(self.hat)))

    def copy(self):
        return type(self)(self.grid, self.values.copy())

    def __repr__(self):
        return f"{type(self).__name__}(N={self.grid.N}, shape={self.values.shape})"


class SpectralVelocity(SpectralField):
    """Divergence-free velocity field."""

    __slots__ = ()

    def divergence_residual(self) -> float:
        """max_k |k·v̂(k)| relative to max |v̂|."""
        uh = self.hat
        r = np.abs(np.sum(self.grid.k_deriv * uh, axis=-1)).max()
        scale = np.abs(uh).max()
        return float(r / scale) if scale > 0 else 0.0


class SpectralDirector(SpectralField):
    """Director field; the mean mode carries the constant background."""

    __slots__ = ()


def leray_project(field: SpectralField) -> SpectralVelocity:
    """``v̂(k) <- (I - k⊗k/|k|^2) v̂(k)`` for k != 0."""
    g = field.grid
    return SpectralVelocity.from_hat(g, g.leray_hat(field.hat))


def mode_truncate(field: SpectralField, n: float) -> SpectralField:
    """Zero every coefficient with integer wavevector |m| > n."""
    g = field.grid
    if n > g.N / 2:
        raise ValueError(f"truncation radius {n} exceeds N/2 = {g.N // 2}")
    return type(field).from_hat(g, g.truncate_hat(field.hat, n))


def dealiased_product(grid: TorusGrid, *factors: np.ndarray) -> np.ndarray:
    """Pointwise product of grid fields, truncated to the 2/3-rule band.

    Factors broadcast against each other like numpy arrays, so a scalar
    field of shape ``(N, N, N, 1)`` can multiply a vector field.
    """
    out = factors[0]
    for f in factors[1:]:
        out = out * f
    return grid.ifft(grid.truncate_hat(grid.fft(out)))


class CoercivityReport(NamedTuple):
    grad_norm: float
    div_curl_norm: float
    residual: float
    relative: float
    curl_weighted: float
    curl_split: float
    curl_residual: float
    curl_relative: float

    @property
    def passed(self) -> bool:
        return self.relative < 1e-10 and self.curl_relative < 1e-10


def coercivity_identity_check(d: SpectralField) -> CoercivityReport:
    """Integrated forms of |∇d|² = (div d)² + |curl d|² + div(∇d d − (div d)d)
    and |d|²|curl d|² = (d·curl d)² + |d×curl d|² on the torus, where the
    divergence term integrates to zero."""
    g = d.grid
    G = d.grad()
    divd = tc.trace(G)
    curl = 2.0 * tc.vee(tc.skw(G))
    a = g.integrate(G * G)
    b = g.integrate(divd**2) + g.integrate(curl * curl)
    dd = tc.dot(d.values, d.values)
    dc = tc.dot(d.values, curl)
    dxc = tc.cross(d.values, curl)
    c1 = g.integrate(dd * tc.dot(curl, curl))
    c2 = g.integrate(dc**2) + g.integrate(dxc * dxc)
    scale = max(abs(a), abs(b), 1e-300)
    scale2 = max(abs(c1), abs(c2), 1e-300)
    return CoercivityReport(
        a, b, a - b, abs(a - b) / scale, c1, c2, c1 - c2, abs(c1 - c2) / scale2
    )


def random_band_limited(grid: TorusGrid, rng: np.random.Generator, ncomp: int = 3,
                        kmax: float = 4.0, decay: float = 1.0) -> np.ndarray:
    """Smooth random grid field with modes |m| <= kmax and Gaussian
    coefficients damped by exp(-decay |m|^2 / kmax^2), scaled to unit RMS
    per component."""
    shape = (grid.N,) * 3 + (ncomp,)
    white = rng.standard_normal(shape)
    uh = grid.fft(white)
    r = grid.mode_radius
    weight = np.where(r <= kmax, np.exp(-decay * r**2 / max(kmax, 1.0) ** 2), 0.0)
    u = grid.ifft(uh * weight[..., None])
    u -= u.mean(axis=(0, 1, 2))
    rms = np.sqrt(np.mean(u**2))
    return u / rms if rms > 0 else u


def resample(field: SpectralField, N: int) -> SpectralField:
    """Spectral interpolation of a band-limited field onto an ``N^3`` grid.

    Modes beyond the smaller grid's Nyquist are dropped (or zero-filled),
    so refining and coarsening a field that lives below both cutoffs is
    exact up to round-off.
    """
    src = field.grid
    dst = TorusGrid(N, src.L)
    n = min(src.N, N) // 2
    uh = field.hat
    out = np.zeros((N, N, N // 2 + 1) + uh.shape[3:], dtype=complex)
    # signed mode indices -n+1..n-1 on both grids (Nyquist dropped)
    idx_src = np.r_[0:n, src.N - n + 1:src.N]
    idx_dst = np.r_[0:n, N - n + 1:N]
    out[np.ix_(idx_dst, idx_dst, np.arange(n))] = uh[np.ix_(idx_src, idx_src, np.arange(n))]
    out *= (N / src.N) ** 3
    return type(field).from_hat(dst, out)
