"""Compactification transform, vetted integrands and empirical Young-measure
pairings.

Samples ``(h, S)`` are mapped to the open unit balls by
``h̃ = h/√(1+|h|²)``, ``S̃ = S/√(1+|S|²)`` and an integrand transforms as

    f̃(h̃, S̃) = f(h̃/√(1-|h̃|²), S̃/√(1-|S̃|²)) (1-|h̃|²)(1-|S̃|²).

Integrands with quadratic growth in both arguments are fixed by this map;
the built-in ones carry closed forms of f̃ that stay exact up to the
boundary of the balls.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np

from . import tensor_core as tc
from .oseen_frank import FrankConstants, energy_terms
from .spectral import SpectralField, TorusGrid


class YoungDomainError(ValueError):
    """A compactified sample lies on or outside the unit ball."""


def _sq_h(h):
    return tc.dot(h, h)


def _sq_S(S):
    return tc.frob(S, S)


def compactify(h, S):
    h = np.asarray(h, dtype=float)
    S = np.asarray(S, dtype=float)
    return h / np.sqrt(1.0 + _sq_h(h))[..., None], S / np.sqrt(1.0 + _sq_S(S))[..., None, None]


def decompactify(ht, St):
    ht = np.asarray(ht, dtype=float)
    St = np.asarray(St, dtype=float)
    _check_domain(ht, St)
    return (ht / np.sqrt(1.0 - _sq_h(ht))[..., None],
            St / np.sqrt(1.0 - _sq_S(St))[..., None, None])


def _check_domain(ht, St):
    if np.any(_sq_h(ht) >= 1.0) or np.any(_sq_S(St) >= 1.0):
        raise YoungDomainError(
            "compactified sample on or outside the unit ball; use the recession function"
        )


@dataclass(frozen=True)
class Integrand:
    """A function f(h, S) with an optional closed form of its transform."""

    name: str
    f: Callable
    closed: Optional[Callable] = None

    def __call__(self, h, S):
        return self.f(h, S)


def young_transform(f, ht, St, use_closed_form: bool = True) -> np.ndarray:
    """f̃(h̃, S̃), vectorized over leading axes.

    Raises :class:`YoungDomainError` if |h̃| >= 1 or |S̃| >= 1 anywhere.
    """
    ht = np.asarray(ht, dtype=float)
    St = np.asarray(St, dtype=float)
    _check_domain(ht, St)
    if use_closed_form and isinstance(f, Integrand) and f.closed is not None:
        return f.closed(ht, St)
    h, S = decompactify(ht, St)
    return f(h, S) * (1.0 - _sq_h(ht)) * (1.0 - _sq_S(St))


def _unit(a, sq):
    n = np.sqrt(sq)
    safe = np.where(n > 0, n, 1.0)
    return a / safe.reshape(safe.shape + (1,) * (a.ndim - safe.ndim))


def recession_invariant(name: str, g: Callable) -> Integrand:
    """The family g(h/|h|, S/|S|)|h|²|S|², whose transform is itself."""

    def f(h, S):
        hh, SS = _sq_h(h), _sq_S(S)
        return g(_unit(h, hh), _unit(S, SS)) * hh * SS

    return Integrand(name, f, f)


def frank_integrand(c: FrankConstants, term: Optional[int] = None) -> Integrand:
    """Oseen-Frank density (or one of its five terms, 0-based).

    The k1, k2 terms do not depend on h and are quadratic in S, so their
    transform is F0(S̃)(1-|h̃|²); the k3, k4, k5 terms are quadratic in both
    arguments and are fixed by the transform.
    """

    def pick(t):
        return t.sum(axis=-1) if term is None else t[..., term]

    def f(h, S):
        return pick(energy_terms(c, h, S))

    def closed(ht, St):
        t = energy_terms(c, ht, St)
        t[..., :2] *= (1.0 - _sq_h(ht))[..., None]
        return pick(t)

    name = "frank" if term is None else f"frank_k{term + 1}"
    return Integrand(name, f, closed)


def builtin_integrands(c: Optional[FrankConstants] = None) -> dict:
    out = {
        "one": Integrand(
            "one",
            lambda h, S: np.ones(np.shape(h)[:-1]),
            lambda ht, St: (1.0 - _sq_h(ht)) * (1.0 - _sq_S(St)),
        ),
        "h2S2": recession_invariant("h2S2", lambda hu, Su: np.ones(np.shape(hu)[:-1])),
        "norm_defect": Integrand(
            "norm_defect",
            lambda h, S: (_sq_h(h) - 1.0) * (1.0 + _sq_S(S)),
            lambda ht, St: 2.0 * _sq_h(ht) - 1.0,
        ),
        "S_mean": Integrand("S_mean", lambda h, S: np.sum(S, axis=(-2, -1))),
        "S2": Integrand("S2", lambda h, S: _sq_S(S)),
    }
    if c is not None:
        out["frank"] = frank_integrand(c)
        for i in range(5):
            fi = frank_integrand(c, i)
            out[fi.name] = fi
    return out


# empirical measures ------------------------------------------------------------

class FieldSamples(NamedTuple):
    """Point samples (h, S) with equal quadrature weight ``cell_volume``."""

    h: np.ndarray
    S: np.ndarray
    cell_volume: float


def samples_of(field) -> FieldSamples:
    if isinstance(field, FieldSamples):
        return field
    if isinstance(field, SpectralField):
        return FieldSamples(field.values, field.grad(), field.grid.cell_volume)
    raise TypeError("expected a SpectralField or FieldSamples")


@dataclass
class EmpiricalYoungMeasure:
    """Weighted histogram over the radii (|h̃|, |S̃|) plus angular summaries.

    ``mass`` is the quadrature of (1+|d|²)(1+|∇d|²); the histogram is a
    summary only, pairings are computed from the samples directly.
    """

    counts: np.ndarray          # (bins, bins) weighted
    edges: np.ndarray
    mass: float
    mean_h_direction: np.ndarray
    mean_S_direction: np.ndarray
    max_radius_h: float
    max_radius_S: float

    @classmethod
    def from_samples(cls, samples, bins: int = 16) -> "EmpiricalYoungMeasure":
        s = samples_of(samples)
        h = s.h.reshape(-1, 3)
        S = s.S.reshape(-1, 3, 3)
        w = (1.0 + _sq_h(h)) * (1.0 + _sq_S(S)) * s.cell_volume
        ht, St = compactify(h, S)
        rh = np.sqrt(_sq_h(ht))
        rS = np.sqrt(_sq_S(St))
        edges = np.linspace(0.0, 1.0, bins + 1)
        counts, _, _ = np.histogram2d(rh, rS, bins=[edges, edges], weights=w)
        mass = float(w.sum())
        return cls(
            counts=counts,
            edges=edges,
            mass=mass,
            mean_h_direction=np.einsum("p,pi->i", w, _unit(ht, rh**2)) / mass,
            mean_S_direction=np.einsum("p,pij->ij", w, _unit(St, rS**2)) / mass,
            max_radius_h=float(rh.max()),
            max_radius_S=float(rS.max()),
        )


@dataclass
class PairingResult:
    values: np.ndarray
    measures: list


def pairing(samples, f) -> float:
    """Quadrature of f(d, ∇d) over the samples."""
    s = samples_of(samples)
    return float(np.sum(f(s.h, s.S)) * s.cell_volume)


def empirical_pairing(family: Sequence, f, bins: int = 16) -> PairingResult:
    samples = [samples_of(m) for m in family]
    return PairingResult(
        values=np.array([pairing(s, f) for s in samples]),
        measures=[EmpiricalYoungMeasure.from_samples(s, bins) for s in samples],
    )


def laminate_family(grid: TorusGrid, A: np.ndarray, orders: Sequence[int] = (1, 2, 4)) -> list:
    """Two-phase laminates: ∇d = ±A on alternating slabs normal to x1.

    The member of order m has 2m slabs of equal width; d is the matching
    piecewise-linear (triangle-wave) profile along the direction A e1. The
    gradient is taken from the construction, not from a spectral
    derivative, so both phases carry exactly ±A. Requires N divisible by 2m.
    """
    A = np.asarray(A, dtype=float)
    N, L = grid.N, grid.L
    x1 = (np.arange(N) + 0.5) * grid.dx
    out = []
    for m in orders:
        if N % (2 * m):
            raise ValueError(f"N={N} is not divisible by {2 * m}")
        width = L / (2 * m)
        slab = np.floor(x1 / width).astype(int)
        sign = np.where(slab % 2 == 0, 1.0, -1.0)
        local = x1 - slab * width
        tri = np.where(sign > 0, local, width - local)
        S = sign[:, None, None, None, None] * np.broadcast_to(A, (N, N, N, 3, 3))
        h = tri[:, None, None, None] * A[:, 0]
        h = np.broadcast_to(h, (N, N, N, 3))
        out.append(FieldSamples(np.ascontiguousarray(h), np.ascontiguousarray(S), grid.cell_volume))
    return out
