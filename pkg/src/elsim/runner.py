"""Driving a configured run or δ-sweep and writing its artifacts."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .config import RunConfig
from .diagnostics import (
    EnergyLedger,
    defect_density,
    energy_inequality_check,
    norm_constraint_residual,
)
from .initial import make_initial
from .integrator import BlowUpError, Evaluation, SimState, run
from .snapshots import FORMAT_VERSION, read_snapshot, write_snapshot
from .young import builtin_integrands, pairing

CSV_COLUMNS = [
    "t", "kinetic", "frank_k1", "frank_k2", "frank_k3", "frank_k4", "frank_k5",
    "penalty", "reg_delta", "total",
    "mu1_term", "mu4_term", "aniso_term", "q_term", "cross_term", "power_in",
    "energy_eq_residual", "norm_L2", "norm_Linf", "defect_total",
]


def _fmt(x: float) -> str:
    return repr(float(x))


@dataclass
class Recorder:
    """Run hook: feeds the energy ledger every step, writes CSV rows and
    snapshots at their cadences and tracks trajectory extremes."""

    out_dir: Path
    cadence: int
    snapshot_cadence: int
    n_steps: int
    fields: Sequence[str]
    L: float
    ledger: EnergyLedger = field(default_factory=EnergyLedger)
    rows: list = field(default_factory=list)
    snapshots: list = field(default_factory=list)
    max_step_increase: float = -math.inf
    max_penalty: float = 0.0
    max_defect: float = 0.0
    max_defect_mismatch: float = 0.0
    max_norm_L2: float = 0.0

    def __call__(self, state: SimState, ev: Evaluation):
        prev = self.ledger.rows[-1].energy.total if self.ledger.rows else None
        self.ledger(state, ev)
        row = self.ledger.rows[-1]
        if prev is not None:
            self.max_step_increase = max(self.max_step_increase, row.energy.total - prev)
        self.max_penalty = max(self.max_penalty, row.energy.penalty)
        i = state.step
        last = i == self.n_steps
        if i % self.cadence == 0 or last:
            L2, Linf = norm_constraint_residual(state.d)
            dd = defect_density(state.d, state.model.reg.delta)
            self.max_norm_L2 = max(self.max_norm_L2, L2)
            self.max_defect = max(self.max_defect, dd.total_laplacian)
            self.max_defect_mismatch = max(self.max_defect_mismatch, dd.difference)
            en, r = row.energy, row.rates
            self.rows.append([
                state.t, en.kinetic, en.frank_k1, en.frank_k2, en.frank_k3, en.frank_k4,
                en.frank_k5, en.penalty, en.reg_delta, en.total,
                r.mu1_term, r.mu4_term, r.aniso_term, r.q_term, r.cross_term, r.power_in,
                row.residual, L2, Linf, dd.total_hessian,
            ])
        snap = i == 0 or last or (self.snapshot_cadence and i % self.snapshot_cadence == 0)
        if snap:
            for name in self.fields:
                values = state.v.values if name == "velocity" else state.d.values
                p = write_snapshot(self.out_dir, name, i, values, time=state.t, L=self.L)
                self.snapshots.append(p.name)

    def write_csv(self):
        with open(self.out_dir / "energy.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_COLUMNS)
            for r in self.rows:
                w.writerow([_fmt(x) for x in r])


def _load_forcing(cfg: RunConfig, grid) -> Optional[np.ndarray]:
    if cfg.forcing.kind == "zero":
        return None
    g, _ = read_snapshot(cfg.resolve(cfg.forcing.path))
    if g.shape != (grid.N,) * 3 + (3,):
        raise ValueError(f"forcing shape {g.shape} does not match the grid")
    return g


def initial_state(cfg: RunConfig):
    grid = cfg.build_grid()
    model = cfg.build_model()
    ini = cfg.initial
    data = make_initial(
        ini.kind, ini.seed, grid,
        n=model.radius(grid),
        direction=ini.direction,
        smoothing=ini.smoothing,
        director_amplitude=ini.director_amplitude,
        velocity_amplitude=ini.velocity_amplitude,
        d_file=cfg.resolve(ini.d_file) if ini.d_file else None,
        v_file=cfg.resolve(ini.v_file) if ini.v_file else None,
    )
    state = SimState(0.0, data.v, data.d, model, _load_forcing(cfg, grid))
    return state, data.norm_defect


def run_config(cfg: RunConfig, out_dir) -> dict:
    """Run one configuration, write all artifacts to ``out_dir`` and return
    the run summary (also written as run_summary.json)."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    state, init_defect = initial_state(cfg)
    stepper = cfg.build_stepper()
    rec = Recorder(out_dir, cfg.output.cadence, cfg.output.snapshot_cadence, stepper.n_steps,
                   cfg.output.fields, state.grid.L)
    status, error = "ok", None
    final = state
    try:
        final = run(state, stepper, [rec])
    except BlowUpError as exc:
        status, error = "blowup", str(exc)
    rec.write_csv()

    led = rec.ledger
    E0 = led.E0
    ineq = energy_inequality_check(led, state.model.leslie)
    integrands = builtin_integrands(
        state.model.energy if hasattr(state.model.energy, "k") else None
    )
    pairings = {name: pairing(final.d, integrands[name])
                for name in cfg.output.pairings if name in integrands}
    L2, Linf = norm_constraint_residual(final.d)
    leslie = state.model.leslie.validate()
    summary = {
        "format_version": FORMAT_VERSION,
        "status": status,
        "error": error,
        "config": cfg.to_dict(),
        "steps": final.step,
        "t_final": final.t,
        "epsilon": state.model.reg.epsilon,
        "galerkin_radius": state.model.radius(state.grid),
        "initial_norm_defect": init_defect,
        "parodi": leslie.parodi,
        "E0": E0,
        "E_final": led.totals[-1],
        "max_step_increase_rel": (rec.max_step_increase / E0) if led.rows and E0 else 0.0,
        "max_energy_eq_residual": float(led.residuals.max()),
        "energy_inequality": {
            "holds": ineq.holds,
            "min_margin": ineq.min_margin,
            "tolerance": ineq.tolerance,
            "q_split_residual": ineq.split_residual,
        },
        "max_penalty_over_E0": rec.max_penalty / E0 if E0 else 0.0,
        "norm_L2_final": L2,
        "norm_Linf_final": Linf,
        "max_norm_L2": rec.max_norm_L2,
        "max_defect_laplacian": rec.max_defect,
        "max_defect_over_2E0": rec.max_defect / (2 * E0) if E0 else 0.0,
        "max_defect_mismatch": rec.max_defect_mismatch,
        "divergence_residual_final": final.v.divergence_residual(),
        "pairings_final": pairings,
        "snapshots": rec.snapshots,
    }
    with open(out_dir / "run_summary.json", "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return summary


def _delta_label(delta: float) -> str:
    return f"delta_{delta:.6g}"


def fit_loglog(x, y):
    """Least-squares slope of log y against log x; None for < 4 points or
    nonpositive data."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < 4 or np.any(x <= 0) or np.any(y <= 0):
        return None
    A = np.vstack([np.log(x), np.ones_like(x)]).T
    coef, res, *_ = np.linalg.lstsq(A, np.log(y), rcond=None)
    resid = float(np.sqrt(res[0] / len(x))) if res.size else 0.0
    return {"slope": float(coef[0]), "intercept": float(coef[1]), "rms_residual": resid}


def delta_sweep(cfg: RunConfig, deltas: Sequence[float], out_dir) -> dict:
    """Run ``cfg`` once per δ (largest first) under ``out_dir`` and write
    sweep_summary.json."""
    from .config import ConfigError

    bad = [d for d in deltas if not (isinstance(d, (int, float)) and 0 < d <= 1)]
    if bad or not deltas:
        raise ConfigError([f"sweep delta {d!r} must lie in (0, 1]" for d in bad] or
                          ["sweep needs at least one delta"])
    order = sorted(set(float(d) for d in deltas), reverse=True)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    members = []
    for delta in order:
        sub = cfg.with_delta(delta)
        s = run_config(sub, out_dir / _delta_label(delta))
        members.append({
            "delta": delta,
            "epsilon": s["epsilon"],
            "directory": _delta_label(delta),
            "status": s["status"],
            "E0": s["E0"],
            "E_final": s["E_final"],
            "norm_L2_final": s["norm_L2_final"],
            "norm_Linf_final": s["norm_Linf_final"],
            "max_penalty_over_E0": s["max_penalty_over_E0"],
            "max_defect_laplacian": s["max_defect_laplacian"],
            "max_defect_over_2E0": s["max_defect_over_2E0"],
            "max_energy_eq_residual": s["max_energy_eq_residual"],
            "pairings_final": s["pairings_final"],
        })
    norms = [m["norm_L2_final"] for m in members]
    fit = fit_loglog(order, norms)
    ph = cfg.physics
    target = ph.split_mode == "equal_split" and ph.schedule == "seven_thirds"
    summary = {
        "format_version": FORMAT_VERSION,
        "deltas": order,
        "members": members,
        "norm_L2_decreasing": bool(all(b < a for a, b in zip(norms, norms[1:]))),
        "defect_bounded": bool(all(m["max_defect_over_2E0"] <= 1.0 for m in members)),
        "norm_slope_fit": fit,
        "one_third_rate": {
            "applicable": target,
            "observed": bool(target and fit is not None and fit["slope"] >= 1.0 / 3.0),
        },
    }
    with open(out_dir / "sweep_summary.json", "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return summary
