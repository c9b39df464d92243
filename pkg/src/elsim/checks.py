"""Named invariant checks run by ``el-sim check``.

Each check returns ``(passed, detail)``. Checks are small and seeded so the
table is reproducible. ``faults`` names checks whose inputs are corrupted
on purpose, which lets tests confirm that a failure is reported by name.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from . import tensor_core as tc
from . import tensor_oracle as to
from .oseen_frank import (
    FrankConstants,
    energy_density,
    energy_density_tensor_form,
    F_h,
    F_S,
    quad_form_ellipticity,
)
from .regularized import RegularizationParams, free_energy_value, variational_derivative_q
from .snapshots import read_snapshot, write_snapshot
from .spectral import (
    SpectralDirector,
    SpectralField,
    TorusGrid,
    coercivity_identity_check,
    leray_project,
    random_band_limited,
    resample,
)
from .stresses import ericksen_identity_residual

FAULTS = ("lambda_symmetry", "energy_forms")


def _rng(seed=0):
    return np.random.Generator(np.random.PCG64(seed))


def _rel(a, b):
    a, b = np.asarray(a), np.asarray(b)
    scale = max(np.abs(a).max(), np.abs(b).max(), 1e-300)
    return float(np.abs(a - b).max() / scale)


def _constants():
    return [FrankConstants(1.0, 0.8, 1.3, "min_split"), FrankConstants(1.2, 0.7, 0.9, "equal_split")]


def check_tensor_oracle(faults):
    rng = _rng(1)
    n = 200
    a, b = rng.standard_normal((2, n, 3))
    A, B = rng.standard_normal((2, n, 3, 3))
    G, H = rng.standard_normal((2, n, 3, 3, 3))
    L = rng.standard_normal((n, 3, 3, 3, 3))
    T = rng.standard_normal((n,) + (3,) * 6)
    pairs = [
        (tc.hat(a), to.hat(a)),
        (tc.cross(a, b), to.cross(a, b)),
        (tc.frob(A, B), to.frob(A, B)),
        (tc.tdot(G, H), to.tdot(G, H)),
        (tc.ten3_colon_mat(G, A), to.ten3_colon_mat(G, A)),
        (tc.ten3_dot_mat(G, A), to.ten3_dot_mat(G, A)),
        (tc.ten3_dot_vec(G, a), to.ten3_dot_vec(G, a)),
        (tc.ten4_colon_mat(L, A), to.ten4_colon_mat(L, A)),
        (tc.ten4_colon_vec(L, a), to.ten4_colon_vec(L, a)),
        (tc.ten4_colon_ten3(L, G), to.ten4_colon_ten3(L, G)),
        (tc.ten4_tdot_ten3(L, G), to.ten4_tdot_ten3(L, G)),
        (tc.mat_colon_ten6(A, T), to.mat_colon_ten6(A, T)),
        (tc.ten6_tdot_ten3(T, G), to.ten6_tdot_ten3(T, G)),
        (tc.vec_dot_ten6(a, T), to.vec_dot_ten6(a, T)),
    ]
    err = max(_rel(x, y) for x, y in pairs)
    return err < 1e-13, f"max rel err {err:.2e}"


def check_energy_forms(faults):
    rng = _rng(2)
    h = rng.standard_normal((500, 3))
    S = rng.standard_normal((500, 3, 3))
    err = 0.0
    for c in _constants():
        a = energy_density(c, h, S)
        b = energy_density_tensor_form(c, h, S)
        if "energy_forms" in faults:
            b = b * (1 + 1e-6)
        err = max(err, _rel(a, b))
    return err < 1e-12, f"max rel dev {err:.2e}"


def check_lambda_symmetry(faults):
    err = 0.0
    for c in _constants():
        L = c.Lambda.copy()
        if "lambda_symmetry" in faults:
            L[0, 1, 2, 2] += 1e-3
        err = max(err, np.abs(L - L.transpose(2, 3, 0, 1)).max(),
                  np.abs(L - to.build_lambda(c.k1, c.k2)).max())
    return err < 1e-15, f"max asymmetry / oracle mismatch {err:.2e}"


def check_ellipticity(faults):
    rng = _rng(3)
    a, b = rng.standard_normal((2, 10000, 3))
    for c in _constants():
        quad_form_ellipticity(c, a, b, check=True)
    return True, "lower bound holds on 1e4 pairs"


def _fd_matrix(fun, h, S, eps=1e-6):
    out = np.zeros(S.shape)
    for i in range(3):
        for j in range(3):
            E = np.zeros((3, 3))
            E[i, j] = eps
            out[..., i, j] = (fun(h, S + E) - fun(h, S - E)) / (2 * eps)
    return out


def _fd_vector(fun, h, S, eps=1e-6):
    out = np.zeros(h.shape)
    for i in range(3):
        e = np.zeros(3)
        e[i] = eps
        out[..., i] = (fun(h + e, S) - fun(h - e, S)) / (2 * eps)
    return out


def check_gradient_FS(faults):
    rng = _rng(4)
    h = rng.standard_normal((100, 3))
    S = rng.standard_normal((100, 3, 3))
    err = max(_rel(F_S(c, h, S), _fd_matrix(lambda x, y: energy_density(c, x, y), h, S))
              for c in _constants())
    return err < 1e-6, f"max rel err {err:.2e}"


def check_gradient_Fh(faults):
    rng = _rng(5)
    h = rng.standard_normal((100, 3))
    S = rng.standard_normal((100, 3, 3))
    err = max(_rel(F_h(c, h, S), _fd_vector(lambda x, y: energy_density(c, x, y), h, S))
              for c in _constants())
    return err < 1e-6, f"max rel err {err:.2e}"


def gateaux_error(grid: TorusGrid, c, p: RegularizationParams, rng, tau: float = 1e-5) -> float:
    """Relative mismatch between ∫ q·φ and the central difference of the
    discrete free energy along a band-limited direction φ."""
    n = grid.cutoff
    base = np.zeros((grid.N,) * 3 + (3,))
    base[..., 2] = 1.0
    d = SpectralDirector(grid, base + 0.3 * random_band_limited(grid, rng, kmax=3))
    phi = random_band_limited(grid, rng, kmax=3)
    q = variational_derivative_q(d, c, p, n=n)
    plus = SpectralDirector(grid, d.values + tau * phi)
    minus = SpectralDirector(grid, d.values - tau * phi)
    fd = (free_energy_value(plus, c, p) - free_energy_value(minus, c, p)) / (2 * tau)
    exact = grid.inner(q, phi)
    return abs(fd - exact) / max(abs(exact), 1e-300)


def check_gradient_q(faults):
    g = TorusGrid(16)
    rng = _rng(6)
    p = RegularizationParams(0.1)
    err = max(gateaux_error(g, c, p, rng) for c in _constants())
    return err < 1e-6, f"max rel err {err:.2e}"


def ericksen_pair(seed: int = 7, c=None, p=None):
    """Identity residuals at N=16 and N=32 for fields band-limited at the
    N=16 cutoff (so only the coarse grid aliases)."""
    c = c or _constants()[0]
    p = p or RegularizationParams(0.1)
    g = TorusGrid(16)
    rng = _rng(seed)
    base = np.zeros((16,) * 3 + (3,))
    base[..., 2] = 1.0
    d = SpectralDirector(g, base + 0.4 * random_band_limited(g, rng, kmax=g.cutoff))
    w = leray_project(SpectralField(g, random_band_limited(g, rng, kmax=g.cutoff)))
    r16 = ericksen_identity_residual(d, c, p, w)
    r32 = ericksen_identity_residual(resample(d, 32), c, p, resample(w, 32))
    return r16, r32


def check_ericksen_identity(faults):
    r16, r32 = ericksen_pair()
    return (r32 < 1e-8 and r32 < r16), f"N=16 {r16:.2e}, N=32 {r32:.2e}"


def check_coercivity(faults):
    g = TorusGrid(32)
    rng = _rng(8)
    base = np.zeros((32,) * 3 + (3,))
    base[..., 0] = 1.0
    d = SpectralDirector(g, base + 0.5 * random_band_limited(g, rng, kmax=6))
    rep = coercivity_identity_check(d)
    return rep.passed, f"rel residuals {rep.relative:.2e}, {rep.curl_relative:.2e}"


def check_leray(faults):
    g = TorusGrid(16)
    rng = _rng(9)
    u = SpectralField(g, random_band_limited(g, rng, kmax=5))
    v = leray_project(u)
    vv = leray_project(v)
    err = max(v.divergence_residual(), _rel(vv.values, v.values))
    return err < 1e-12, f"divergence / idempotence {err:.2e}"


def check_snapshot_roundtrip(faults):
    import tempfile

    g = TorusGrid(8)
    rng = _rng(10)
    d = SpectralDirector(g, random_band_limited(g, rng, kmax=2))
    with tempfile.TemporaryDirectory() as tmp:
        path = write_snapshot(tmp, "director", 0, d.values, time=0.0, L=g.L)
        vals, _ = read_snapshot(path)
    same = np.array_equal(SpectralDirector(g, vals).hat, d.hat)
    return same, "bit-exact" if same else "coefficients differ"


def check_young_fixed_points(faults):
    from .young import builtin_integrands, young_transform

    rng = _rng(11)
    ht = rng.standard_normal((2000, 3))
    ht *= (rng.uniform(0, 0.99, 2000) / np.linalg.norm(ht, axis=-1))[:, None]
    St = rng.standard_normal((2000, 3, 3))
    St *= (rng.uniform(0, 0.99, 2000) / np.linalg.norm(St, axis=(-2, -1)))[:, None, None]
    err = 0.0
    for f in builtin_integrands(_constants()[0]).values():
        if f.closed is not None:
            err = max(err, np.abs(young_transform(f, ht, St)
                                  - young_transform(f, ht, St, use_closed_form=False)).max())
    return err < 1e-13, f"max abs err {err:.2e}"


@dataclass(frozen=True)
class Check:
    name: str
    func: Callable


CHECKS = [
    Check("tensor_oracle", check_tensor_oracle),
    Check("energy_forms", check_energy_forms),
    Check("lambda_symmetry", check_lambda_symmetry),
    Check("ellipticity", check_ellipticity),
    Check("gradient_FS", check_gradient_FS),
    Check("gradient_Fh", check_gradient_Fh),
    Check("gradient_q", check_gradient_q),
    Check("ericksen_identity", check_ericksen_identity),
    Check("coercivity", check_coercivity),
    Check("leray", check_leray),
    Check("snapshot_roundtrip", check_snapshot_roundtrip),
    Check("young_fixed_points", check_young_fixed_points),
]


def run_checks(name_filter: str | None = None, faults: Iterable[str] = ()):
    """Run the checks whose name contains ``name_filter``; returns a list of
    (name, passed, detail)."""
    faults = set(faults)
    results = []
    for chk in CHECKS:
        if name_filter and name_filter not in chk.name:
            continue
        try:
            ok, detail = chk.func(faults)
        except AssertionError as exc:
            ok, detail = False, f"assertion: {exc}"
        results.append((chk.name, bool(ok), detail))
    return results
