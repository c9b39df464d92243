"""Oseen-Frank elastic energy in its reformulated (k1..k5) and tensor forms.

Pointwise functions take the director value ``h`` with shape ``(..., 3)`` and
its gradient ``S`` with shape ``(..., 3, 3)``, ``S[..., i, j] = d_j h_i``.

With ``W = skw(S)`` and ``c = 2 vee(W)`` (the curl for an actual field)::

    2F = k1 tr(S)^2 + 2 k2 |W|^2 + k3 |h|^2 tr(S)^2
         + k4 (hat(h):W)^2 + 4 k5 |W h|^2

which is the same as ``k1 (div d)^2 + k2 |curl d|^2 + k3 |d|^2 (div d)^2
+ k4 (d.curl d)^2 + k5 |d x curl d|^2`` and as ``S:Λ:S + (S⊗h)⋮Θ⋮(S⊗h)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Optional

import numpy as np

from . import tensor_core as tc

SPLIT_MODES = ("min_split", "equal_split", "custom")


class DirectorSample(NamedTuple):
    """Director value, gradient and (optionally) second gradient at points."""

    h: np.ndarray
    S: np.ndarray
    Gamma: Optional[np.ndarray] = None


@dataclass(frozen=True)
class FrankConstants:
    """Elastic constants K1, K2, K3 and their nonnegative splitting k1..k5.

    ``min_split`` uses k1 = k3 = K1/2, k2 = min(K2, K3)/2; ``equal_split``
    uses k1 = k2 = min(K1, K2, K3)/2. In both cases k1 + k3 = K1,
    k2 + k4 = K2 and k2 + k5 = K3.
    """

    K1: float
    K2: float
    K3: float
    split_mode: str = "min_split"
    k: tuple = field(init=False, repr=False)

    def __post_init__(self):
        if self.split_mode not in ("min_split", "equal_split"):
            raise ValueError(f"unknown split_mode {self.split_mode!r}")
        bad = [n for n in ("K1", "K2", "K3") if not getattr(self, n) > 0]
        if bad:
            raise ValueError(f"elastic constants must be positive: {', '.join(bad)}")
        K1, K2, K3 = self.K1, self.K2, self.K3
        if self.split_mode == "min_split":
            k2 = min(K2, K3) / 2
            k = (K1 / 2, k2, K1 / 2, K2 - k2, K3 - k2)
        else:
            kk = min(K1, K2, K3) / 2
            k = (kk, kk, K1 - kk, K2 - kk, K3 - kk)
        object.__setattr__(self, "k", tuple(float(x) for x in k))

    @classmethod
    def custom(cls, k1=0.0, k2=0.0, k3=0.0, k4=0.0, k5=0.0) -> "FrankConstants":
        """Constants given directly by their splitting (nonnegative)."""
        k = (k1, k2, k3, k4, k5)
        if min(k) < 0:
            raise ValueError("split constants must be nonnegative")
        obj = object.__new__(cls)
        for name, val in zip(("K1", "K2", "K3"), (k1 + k3, k2 + k4, k2 + k5)):
            object.__setattr__(obj, name, float(val))
        object.__setattr__(obj, "split_mode", "custom")
        object.__setattr__(obj, "k", tuple(float(x) for x in k))
        return obj

    k1 = property(lambda self: self.k[0])
    k2 = property(lambda self: self.k[1])
    k3 = property(lambda self: self.k[2])
    k4 = property(lambda self: self.k[3])
    k5 = property(lambda self: self.k[4])

    @cached_property
    def Lambda(self) -> np.ndarray:
        return build_Lambda(self)

    @cached_property
    def Theta(self) -> np.ndarray:
        return build_Theta(self)

    # energy-model interface shared with OneConstant
    def density(self, h, S):
        return energy_density(self, h, S)

    def terms(self, h, S):
        return energy_terms(self, h, S)

    def F_S(self, h, S):
        return F_S(self, h, S)

    def F_h(self, h, S):
        return F_h(self, h, S)

    def implicit_rates(self) -> tuple[float, float]:
        """Coefficients of the Fourier symbol of the h-independent part of
        ``-div F_S``: (longitudinal, transverse), each multiplying |k|^2."""
        return self.k1, self.k2


@dataclass(frozen=True)
class OneConstant:
    """Dirichlet (one-constant) energy K/2 |S|^2."""

    K: float

    def __post_init__(self):
        if not self.K > 0:
            raise ValueError("K must be positive")

    def density(self, h, S):
        return one_constant_density(self.K, S)

    def terms(self, h, S):
        out = np.zeros(np.shape(S)[:-2] + (5,))
        out[..., 0] = one_constant_density(self.K, S)
        return out

    def F_S(self, h, S):
        return self.K * np.asarray(S, dtype=float)

    def F_h(self, h, S):
        return np.zeros(np.shape(h))

    def implicit_rates(self) -> tuple[float, float]:
        return self.K, self.K


def energy_terms(c: FrankConstants, h, S) -> np.ndarray:
    """The five contributions ½k_i·(term_i); trailing axis of length 5."""
    h = np.asarray(h, dtype=float)
    S = np.asarray(S, dtype=float)
    trS = tc.trace(S)
    W = tc.skw(S)
    hh = tc.dot(h, h)
    Wh = tc.matvec(W, h)
    t = np.stack(
        [
            c.k1 * trS**2,
            c.k2 * 2.0 * tc.frob(W, W),
            c.k3 * hh * trS**2,
            c.k4 * tc.frob(tc.hat(h), W) ** 2,
            c.k5 * 4.0 * tc.dot(Wh, Wh),
        ],
        axis=-1,
    )
    return 0.5 * t


def energy_density(c: FrankConstants, h, S) -> np.ndarray:
    return energy_terms(c, h, S).sum(axis=-1)


def energy_density_tensor_form(c: FrankConstants, h, S) -> np.ndarray:
    """``½[S:Λ:S + (S⊗h)⋮Θ⋮(S⊗h)]``."""
    h = np.asarray(h, dtype=float)
    S = np.asarray(S, dtype=float)
    Sh = tc.outer_mat_vec(S, h)
    return 0.5 * (tc.quad_form4(S, c.Lambda, S) + tc.quad_form6(Sh, c.Theta, Sh))


def build_Lambda(c: FrankConstants) -> np.ndarray:
    d = np.eye(3)
    L = c.k1 * np.einsum("ij,kl->ijkl", d, d) + c.k2 * (
        np.einsum("ik,jl->ijkl", d, d) - np.einsum("il,jk->ijkl", d, d)
    )
    return L


def build_Theta(c: FrankConstants) -> np.ndarray:
    d = np.eye(3)

    def e(spec):
        return np.einsum(spec + "->ijklmn", d, d, d)

    T = c.k3 * e("ij,lm,kn")
    T = T + c.k5 * (e("il,mn,jk") - e("mi,ln,jk") - e("lj,mn,ik") + e("jm,ln,ik"))
    T = T + c.k4 * (
        e("kn,jm,il") + e("km,jl,in") + e("kl,jn,im")
        - e("kn,jl,im") - e("km,jn,il") - e("kl,jm,in")
    )
    return T


def F_S(c: FrankConstants, h, S) -> np.ndarray:
    h = np.asarray(h, dtype=float)
    S = np.asarray(S, dtype=float)
    trS = tc.trace(S)[..., None, None]
    W = tc.skw(S)
    H = tc.hat(h)
    hh = tc.dot(h, h)[..., None, None]
    I = tc.IDENTITY
    out = c.k1 * trS * I + 2.0 * c.k2 * W + c.k3 * trS * hh * I
    out = out + c.k4 * H * tc.frob(H, W)[..., None, None]
    out = out + 4.0 * c.k5 * tc.skw(tc.outer(tc.matvec(W, h), h))
    return out


def F_h(c: FrankConstants, h, S) -> np.ndarray:
    h = np.asarray(h, dtype=float)
    S = np.asarray(S, dtype=float)
    trS = tc.trace(S)[..., None]
    W = tc.skw(S)
    out = c.k3 * trS**2 * h
    out = out + 2.0 * c.k4 * tc.frob(tc.hat(h), W)[..., None] * tc.vee(W)
    out = out + 4.0 * c.k5 * tc.matvec(tc.matmul(tc.transpose(W), W), h)
    return out


def quad_form_ellipticity(c: FrankConstants, a, b, check: bool = True) -> np.ndarray:
    """``a⊗b : Λ : a⊗b``; with ``check`` asserts the lower bound
    min(k1, k2)|a|^2|b|^2 (up to round-off)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    ab = tc.outer(a, b)
    val = tc.quad_form4(ab, c.Lambda, ab)
    if check:
        bound = min(c.k1, c.k2) * tc.dot(a, a) * tc.dot(b, b)
        slack = val - bound
        tol = 1e-12 * np.maximum(1.0, np.abs(bound))
        if np.any(slack < -tol):
            raise AssertionError("ellipticity bound violated")
    return val


def one_constant_density(K: float, S) -> np.ndarray:
    S = np.asarray(S, dtype=float)
    return 0.5 * K * tc.frob(S, S)


def frank_original_density(c: FrankConstants, h, S) -> np.ndarray:
    """½[K1 tr(S)^2 + K2 (h·c)^2 + K3 |h×c|^2] with c = 2 vee(skw S).

    Agrees with :func:`energy_density` only for |h| = 1.
    """
    h = np.asarray(h, dtype=float)
    S = np.asarray(S, dtype=float)
    curl = 2.0 * tc.vee(tc.skw(S))
    return 0.5 * (
        c.K1 * tc.trace(S) ** 2
        + c.K2 * tc.dot(h, curl) ** 2
        + c.K3 * tc.dot(tc.cross(h, curl), tc.cross(h, curl))
    )
