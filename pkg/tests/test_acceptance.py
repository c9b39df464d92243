"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the table.
"""

import json
import time
from pathlib import Path

import numpy as np
import pytest

from elsim import tensor_core as tc
from elsim import tensor_oracle as to
from elsim.checks import ericksen_pair, gateaux_error
from elsim.cli import main
from elsim.diagnostics import EnergyLedger, defect_density, norm_constraint_residual
from elsim.integrator import StepperConfig, run
from elsim.oseen_frank import (
    FrankConstants,
    F_h,
    F_S,
    energy_density,
    energy_density_tensor_form,
    quad_form_ellipticity,
)
from elsim.regularized import RegularizationParams
from elsim.spectral import SpectralDirector, TorusGrid, coercivity_identity_check, random_band_limited
from elsim.young import builtin_integrands, empirical_pairing, laminate_family, young_transform
from helpers import smooth_state


def report(n, title, ok, detail, t0):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n:>2}: {title} ({detail}; {time.perf_counter() - t0:.1f} s)"
    print("\n" + line)
    assert ok, line


def rng(seed):
    return np.random.Generator(np.random.PCG64(seed))


def relerr(a, b):
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300)))


CONSTANTS = [FrankConstants(1.0, 0.8, 1.2, "min_split"), FrankConstants(1.0, 0.8, 1.2, "equal_split")]


def test_c01_tensor_oracle():
    t0 = time.perf_counter()
    r = rng(101)
    n = 1000
    a, b = r.standard_normal((2, n, 3))
    A, B = r.standard_normal((2, n, 3, 3))
    G, H = r.standard_normal((2, n, 3, 3, 3))
    L = r.standard_normal((n,) + (3,) * 4)
    T = r.standard_normal((n,) + (3,) * 6)
    pairs = [
        (tc.hat(a), to.hat(a)), (tc.cross(a, b), to.cross(a, b)),
        (tc.frob(A, B), to.frob(A, B)), (tc.tdot(G, H), to.tdot(G, H)),
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
    # relative to the magnitude of each product
    err = max(float(np.abs(x - y).max() / np.abs(y).max()) for x, y in pairs)
    elapsed = time.perf_counter() - t0
    report(1, "tensor products vs loop oracle", err < 1e-13 and elapsed < 5,
           f"max rel err {err:.1e}", t0)


def test_c02_energy_forms():
    t0 = time.perf_counter()
    r = rng(102)
    h = r.standard_normal((1000, 3))
    S = r.standard_normal((1000, 3, 3))
    err = max(relerr(energy_density_tensor_form(c, h, S), energy_density(c, h, S)) for c in CONSTANTS)
    report(2, "energy form equivalence", err < 1e-12 and time.perf_counter() - t0 < 5,
           f"max rel dev {err:.1e}", t0)


def test_c03_derivatives():
    t0 = time.perf_counter()
    r = rng(103)
    eps = 1e-5
    worst = 0.0
    for c in CONSTANTS:
        h = r.standard_normal((100, 3))
        S = r.standard_normal((100, 3, 3))
        fdS = np.zeros_like(S)
        fdh = np.zeros_like(h)
        for i in range(3):
            e = np.zeros(3)
            e[i] = eps
            fdh[:, i] = (energy_density(c, h + e, S) - energy_density(c, h - e, S)) / (2 * eps)
            for j in range(3):
                E = np.zeros((3, 3))
                E[i, j] = eps
                fdS[:, i, j] = (energy_density(c, h, S + E) - energy_density(c, h, S - E)) / (2 * eps)
        for exact, fd in ((F_S(c, h, S), fdS), (F_h(c, h, S), fdh)):
            axes = tuple(range(1, exact.ndim))
            scale = np.maximum(np.abs(exact).max(axis=axes), 1e-12)
            worst = max(worst, float((np.abs(exact - fd).max(axis=axes) / scale).max()))
    g = TorusGrid(16)
    r2 = rng(203)
    gat = max(gateaux_error(g, CONSTANTS[i % 2], RegularizationParams(0.1), r2) for i in range(20))
    ok = worst < 1e-6 and gat < 1e-6 and time.perf_counter() - t0 < 30
    report(3, "F_S/F_h finite differences and q Gateaux", ok,
           f"pointwise {worst:.1e}, Gateaux {gat:.1e}", t0)


def test_c04_ellipticity():
    t0 = time.perf_counter()
    r = rng(104)
    a, b = r.standard_normal((2, 100_000, 3))
    worst = np.inf
    for c in CONSTANTS:
        val = quad_form_ellipticity(c, a, b, check=False)
        slack = val - min(c.k1, c.k2) * tc.dot(a, a) * tc.dot(b, b)
        worst = min(worst, float(slack.min()))
    report(4, "ellipticity lower bound", worst >= -1e-12 and time.perf_counter() - t0 < 5,
           f"min slack {worst:.1e}", t0)


def test_c05_ericksen_identity():
    t0 = time.perf_counter()
    rows = [ericksen_pair(seed) for seed in (7, 8, 9)]
    ok = all(r32 < 1e-8 and r32 < r16 for r16, r32 in rows) and time.perf_counter() - t0 < 60
    detail = ", ".join(f"N16 {a:.1e} -> N32 {b:.1e}" for a, b in rows)
    report(5, "Ericksen identity residual", ok, detail, t0)


def test_c06_coercivity():
    t0 = time.perf_counter()
    g = TorusGrid(32)
    r = rng(106)
    worst = 0.0
    for _ in range(3):
        d = SpectralDirector(g, np.array([0.0, 0.0, 1.0]) + 0.5 * random_band_limited(g, r, kmax=8))
        rep = coercivity_identity_check(d)
        worst = max(worst, rep.relative, rep.curl_relative)
    report(6, "coercivity identities at N=32", worst < 1e-10 and time.perf_counter() - t0 < 30,
           f"max rel residual {worst:.1e}", t0)


_run_cache = {}


def _ledger(dt, t_end=0.5, delta=0.1):
    key = (dt, t_end, delta)
    if key not in _run_cache:
        led = EnergyLedger()
        defects = []
        run(smooth_state(delta=delta), StepperConfig(dt, t_end),
            [led, (lambda s, ev: defects.append(defect_density(s.d, s.model.reg.delta)), 10)])
        final = led
        _run_cache[key] = (final, defects)
    return _run_cache[key]


@pytest.mark.slow
def test_c07_energy_law():
    t0 = time.perf_counter()
    led, _ = _ledger(1e-3)
    half, _ = _ledger(5e-4)
    E = led.totals
    E0 = E[0]
    incr = float(np.diff(E).max())
    res, res_half = float(led.residuals.max()), float(half.residuals.max())
    ratio = res / res_half
    ok = (len(E) == 501 and incr <= 1e-8 * E0 and res < 1e-3 and 1.8 <= ratio <= 2.2
          and time.perf_counter() - t0 < 300)
    report(7, "discrete energy law (N=16, dt=1e-3, 500 steps, Parodi)", ok,
           f"max dE/E0 {incr / E0:.1e}, residual/E0 {res:.1e}, dt/2 ratio {ratio:.2f}", t0)


@pytest.mark.slow
def test_c08_penalty_and_sweep():
    t0 = time.perf_counter()
    led, _ = _ledger(1e-3)
    pen_ok = all(r.energy.penalty <= led.E0 for r in led.rows)
    norms = []
    for delta in (1e-1, 3e-2, 1e-2, 3e-3):
        st = smooth_state(delta=delta)
        out = run(st, StepperConfig(1e-3, 0.5))
        assert st.model.reg.epsilon == delta
        norms.append(norm_constraint_residual(out.d)[0])
    mono = all(b < a for a, b in zip(norms, norms[1:]))
    report(8, "penalty bound and monotone norm residual in delta", pen_ok and mono,
           "norms " + ", ".join(f"{x:.2e}" for x in norms), t0)


def test_c09_young_transform():
    t0 = time.perf_counter()
    r = rng(109)
    n = 10_000
    ht = r.standard_normal((n, 3))
    St = r.standard_normal((n, 3, 3))
    ht *= (r.uniform(0, 0.999, n) / np.linalg.norm(ht, axis=-1))[:, None]
    St *= (r.uniform(0, 0.999, n) / np.linalg.norm(St, axis=(-2, -1)))[:, None, None]
    B = builtin_integrands(CONSTANTS[1])
    hh, SS = tc.dot(ht, ht), tc.frob(St, St)
    errs = [
        np.abs(young_transform(B["h2S2"], ht, St, use_closed_form=False) - hh * SS).max(),
        np.abs(young_transform(B["one"], ht, St, use_closed_form=False) - (1 - hh) * (1 - SS)).max(),
        np.abs(young_transform(B["norm_defect"], ht, St, use_closed_form=False) - (2 * hh - 1)).max(),
    ]
    g = TorusGrid(16)
    A = r.standard_normal((3, 3))
    fam = laminate_family(g, A, orders=(1, 2, 4, 8))
    lin = np.abs(empirical_pairing(fam, B["S_mean"]).values).max()
    quad = empirical_pairing(fam, B["S2"]).values
    target = np.sum(A**2) * g.volume
    qerr = float(np.abs(quad - target).max() / target)
    ok = max(errs) < 1e-13 and lin < 1e-10 and qerr < 1e-10 and time.perf_counter() - t0 < 10
    report(9, "Young transform fixed points and laminate pairing", ok,
           f"transform {max(errs):.1e}, linear {lin:.1e}, quadratic {qerr:.1e}", t0)


@pytest.mark.slow
def test_c10_defect_bound():
    t0 = time.perf_counter()
    worst_ratio, worst_mismatch = 0.0, 0.0
    for delta in (1e-1, 3e-2, 1e-2, 3e-3):
        led, defects = _ledger(1e-3, delta=delta)
        worst_ratio = max(worst_ratio, max(d.total_laplacian for d in defects) / (2 * led.E0))
        worst_mismatch = max(worst_mismatch, max(d.difference for d in defects))
    ok = worst_ratio <= 1.0 and worst_mismatch < 1e-10
    report(10, "defect quantity bound across the sweep", ok,
           f"max delta|Lap d|^2 / 2E0 {worst_ratio:.2e}, hessian/laplacian mismatch {worst_mismatch:.1e}", t0)


def test_c11_determinism(tmp_path):
    t0 = time.perf_counter()
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "grid": {"N": 16}, "physics": {"K1": 1.0, "K2": 0.8, "K3": 1.2, "delta": 0.1},
        "time": {"dt": 0.001, "t_end": 0.02}, "initial": {"seed": 3},
        "output": {"cadence": 1, "snapshot_cadence": 10},
    }))
    for name in ("a", "b"):
        assert main(["run", "--config", str(cfg), "--out", str(tmp_path / name)]) == 0
    files = sorted(p.name for p in (tmp_path / "a").iterdir())
    same = all((tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes() for f in files)
    n_snap = sum(f.endswith(".bin") for f in files)
    report(11, "determinism of energy.csv and snapshots", same and n_snap == 6,
           f"{len(files)} files compared", t0)
