"""Deterministic initial data."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import tensor_core as tc
from .spectral import SpectralDirector, SpectralVelocity, TorusGrid, random_band_limited

INITIAL_KINDS = ("constant", "random_smooth", "file")

# Named generator fixed by the snapshot/config format version.
RNG_ALGORITHM = "PCG64"


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


@dataclass
class InitialData:
    v: SpectralVelocity
    d: SpectralDirector
    norm_defect: float  # max | |d0| - 1 | after truncation


def _truncate(grid: TorusGrid, u: np.ndarray, n: float) -> np.ndarray:
    return grid.ifft(grid.truncate_hat(grid.fft(u), n))


def make_initial(kind: str, seed: int, grid: TorusGrid, *, n: Optional[float] = None,
                 direction=(0.0, 0.0, 1.0), smoothing: float = 2.0,
                 director_amplitude: float = 0.15, velocity_amplitude: float = 0.2,
                 floor: float = 0.1, d_file: Optional[str] = None,
                 v_file: Optional[str] = None) -> InitialData:
    """Build (v0, d0).

    ``constant``: uniform director ``direction`` and zero velocity.
    ``random_smooth``: the background direction plus seeded smooth noise with
    modes up to ``smoothing``, normalized pointwise (points where the raw
    field is shorter than ``floor`` take the background direction) and then
    truncated to the Galerkin ball of radius ``n``; the velocity is seeded
    smooth noise, Leray-projected and truncated.
    ``file``: snapshots written by :mod:`elsim.snapshots`.
    """
    n = grid.cutoff if n is None else n
    e = np.asarray(direction, dtype=float)
    if not np.isclose(np.linalg.norm(e), 1.0, atol=1e-14):
        raise ValueError("background direction must be a unit vector")
    shape = (grid.N,) * 3 + (3,)

    if kind == "constant":
        d = np.broadcast_to(e, shape).copy()
        v = np.zeros(shape)
    elif kind == "random_smooth":
        rng = make_rng(seed)
        raw = e + director_amplitude * random_band_limited(grid, rng, kmax=smoothing)
        vel = velocity_amplitude * random_band_limited(grid, rng, kmax=smoothing)
        length = np.sqrt(tc.dot(raw, raw))[..., None]
        d = np.where(length < floor, e, raw / np.maximum(length, floor))
        d = _truncate(grid, d, n)
        v = grid.ifft(grid.truncate_hat(grid.leray_hat(grid.fft(vel)), n))
    elif kind == "file":
        from .snapshots import read_snapshot

        if d_file is None:
            raise ValueError("file initial data needs a director snapshot path")
        d, _ = read_snapshot(d_file)
        if d.shape != shape:
            raise ValueError(f"director snapshot shape {d.shape} does not match grid {shape}")
        if v_file is not None:
            v, _ = read_snapshot(v_file)
            if v.shape != shape:
                raise ValueError(f"velocity snapshot shape {v.shape} does not match grid {shape}")
            # already divergence-free fields are kept bit for bit
            if SpectralVelocity(grid, v).divergence_residual() > 1e-12:
                v = grid.ifft(grid.leray_hat(grid.fft(v)))
        else:
            v = np.zeros(shape)
    else:
        raise ValueError(f"unknown initial kind {kind!r}")

    defect = float(np.abs(np.sqrt(tc.dot(d, d)) - 1.0).max())
    return InitialData(SpectralVelocity(grid, v), SpectralDirector(grid, d), defect)
