"""Run configuration read from JSON.

Validation collects every violated constraint before raising, so a broken
config is reported in one go.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Optional

from .initial import INITIAL_KINDS
from .integrator import SCHEMES, Model, StepperConfig
from .oseen_frank import FrankConstants, OneConstant
from .regularized import SCHEDULES, RegularizationParams
from .spectral import TorusGrid
from .stresses import LeslieCoefficients

ENERGY_KINDS = ("oseen_frank", "one_constant")
SPLIT_MODES = ("min_split", "equal_split")
FORCING_KINDS = ("zero", "file")


class ConfigError(ValueError):
    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("invalid config:\n  - " + "\n  - ".join(self.problems))


@dataclass
class GridSection:
    N: int = 16
    L: float = 2 * math.pi


@dataclass
class PhysicsSection:
    energy: str = "oseen_frank"
    K1: float = 1.0
    K2: float = 1.0
    K3: float = 1.0
    K: float = 1.0
    split_mode: str = "min_split"
    mu1: float = 1.0
    mu2: float = 0.1
    mu3: float = 0.4
    mu4: float = 1.0
    mu5: float = 0.6
    mu6: float = 0.65
    lam: float = 0.5
    delta: float = 0.1
    schedule: str = "linear"
    penalty: bool = True
    galerkin_radius: Optional[float] = None


@dataclass
class TimeSection:
    dt: float = 1e-3
    t_end: float = 0.1
    scheme: str = "imex1"
    cfl_safety: Optional[float] = None


@dataclass
class InitialSection:
    kind: str = "random_smooth"
    seed: int = 0
    smoothing: float = 2.0
    director_amplitude: float = 0.15
    velocity_amplitude: float = 0.2
    direction: list = field(default_factory=lambda: [0.0, 0.0, 1.0])
    d_file: Optional[str] = None
    v_file: Optional[str] = None


@dataclass
class ForcingSection:
    kind: str = "zero"
    path: Optional[str] = None


@dataclass
class OutputSection:
    directory: str = "el_sim_out"
    cadence: int = 1             # energy.csv row every `cadence` steps
    snapshot_cadence: int = 0    # 0: initial and final state only
    fields: list = field(default_factory=lambda: ["velocity", "director"])
    pairings: list = field(default_factory=lambda: ["frank", "norm_defect", "one"])


SECTIONS = {
    "grid": GridSection,
    "physics": PhysicsSection,
    "time": TimeSection,
    "initial": InitialSection,
    "forcing": ForcingSection,
    "output": OutputSection,
}


@dataclass
class RunConfig:
    grid: GridSection = field(default_factory=GridSection)
    physics: PhysicsSection = field(default_factory=PhysicsSection)
    time: TimeSection = field(default_factory=TimeSection)
    initial: InitialSection = field(default_factory=InitialSection)
    forcing: ForcingSection = field(default_factory=ForcingSection)
    output: OutputSection = field(default_factory=OutputSection)
    base_dir: Path = field(default=Path("."), repr=False, compare=False)

    @classmethod
    def from_dict(cls, raw: dict, base_dir=".") -> "RunConfig":
        problems = []
        if not isinstance(raw, dict):
            raise ConfigError(["top level must be a JSON object"])
        parts = {}
        for key in raw:
            if key not in SECTIONS:
                problems.append(f"unknown section {key!r}")
        for name, kind in SECTIONS.items():
            sec = raw.get(name, {})
            if not isinstance(sec, dict):
                problems.append(f"{name}: must be an object")
                sec = {}
            known = {f.name for f in fields(kind)}
            for k in sec:
                if k not in known:
                    problems.append(f"{name}.{k}: unknown key")
            parts[name] = kind(**{k: v for k, v in sec.items() if k in known})
        cfg = cls(**parts, base_dir=Path(base_dir))
        problems += cfg.problems()
        if problems:
            raise ConfigError(problems)
        return cfg

    @classmethod
    def load(cls, path) -> "RunConfig":
        path = Path(path)
        try:
            raw = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError([f"{path}: not valid JSON ({exc})"]) from None
        return cls.from_dict(raw, base_dir=path.parent)

    def to_dict(self) -> dict:
        return {name: asdict(getattr(self, name)) for name in SECTIONS}

    # validation -------------------------------------------------------------

    def problems(self) -> list:
        out = []
        num = (int, float)

        def need(cond, msg):
            if not cond:
                out.append(msg)

        gr, ph, tm, ini, fo, op = (self.grid, self.physics, self.time, self.initial,
                                   self.forcing, self.output)
        need(isinstance(gr.N, int) and not isinstance(gr.N, bool) and gr.N >= 8 and gr.N % 2 == 0,
             f"grid.N must be an even integer >= 8, got {gr.N!r}")
        need(isinstance(gr.L, num) and gr.L > 0, f"grid.L must be positive, got {gr.L!r}")

        need(ph.energy in ENERGY_KINDS, f"physics.energy must be one of {ENERGY_KINDS}")
        if ph.energy == "oseen_frank":
            for k in ("K1", "K2", "K3"):
                val = getattr(ph, k)
                need(isinstance(val, num) and val > 0, f"physics.{k} must be positive, got {val!r}")
            need(ph.split_mode in SPLIT_MODES, f"physics.split_mode must be one of {SPLIT_MODES}")
        else:
            need(isinstance(ph.K, num) and ph.K > 0, f"physics.K must be positive, got {ph.K!r}")
        coeffs = [getattr(ph, k) for k in ("mu1", "mu2", "mu3", "mu4", "mu5", "mu6", "lam")]
        if all(isinstance(c, num) for c in coeffs):
            rep = LeslieCoefficients(*coeffs).validate()
            out += [f"physics: Leslie coefficients violate {f}" for f in rep.failures]
        else:
            out.append("physics: Leslie coefficients mu1..mu6, lam must be numbers")
        need(isinstance(ph.delta, num) and 0 < ph.delta <= 1,
             f"physics.delta must lie in (0, 1], got {ph.delta!r}")
        need(ph.schedule in SCHEDULES, f"physics.schedule must be one of {SCHEDULES}")
        need(isinstance(ph.penalty, bool), "physics.penalty must be true or false")
        if ph.galerkin_radius is not None and isinstance(gr.N, int):
            need(isinstance(ph.galerkin_radius, num) and 0 < ph.galerkin_radius <= gr.N / 2,
                 "physics.galerkin_radius must lie in (0, N/2]")

        need(isinstance(tm.dt, num) and tm.dt > 0, f"time.dt must be positive, got {tm.dt!r}")
        need(isinstance(tm.t_end, num) and tm.t_end >= 0, f"time.t_end must be >= 0, got {tm.t_end!r}")
        if isinstance(tm.dt, num) and isinstance(tm.t_end, num) and tm.dt > 0 and tm.t_end >= 0:
            steps = tm.t_end / tm.dt
            need(abs(steps - round(steps)) <= 1e-9 * max(1.0, steps),
                 "time.t_end must be an integer multiple of time.dt")
        need(tm.scheme in SCHEMES, f"time.scheme must be one of {SCHEMES}")
        if tm.cfl_safety is not None:
            need(isinstance(tm.cfl_safety, num) and 0 < tm.cfl_safety <= 1,
                 "time.cfl_safety must lie in (0, 1]")

        need(ini.kind in INITIAL_KINDS, f"initial.kind must be one of {INITIAL_KINDS}")
        need(isinstance(ini.seed, int) and not isinstance(ini.seed, bool) and ini.seed >= 0,
             "initial.seed must be a nonnegative integer")
        need(isinstance(ini.smoothing, num) and ini.smoothing > 0, "initial.smoothing must be positive")
        need(isinstance(ini.director_amplitude, num) and ini.director_amplitude >= 0,
             "initial.director_amplitude must be >= 0")
        need(isinstance(ini.velocity_amplitude, num) and ini.velocity_amplitude >= 0,
             "initial.velocity_amplitude must be >= 0")
        ok_dir = (isinstance(ini.direction, list) and len(ini.direction) == 3
                  and all(isinstance(c, num) for c in ini.direction))
        need(ok_dir and abs(math.sqrt(sum(c * c for c in ini.direction)) - 1.0) < 1e-12,
             "initial.direction must be a unit 3-vector")
        if ini.kind == "file":
            need(ini.d_file is not None, "initial.d_file is required for kind 'file'")

        need(fo.kind in FORCING_KINDS, f"forcing.kind must be one of {FORCING_KINDS}")
        if fo.kind == "file":
            need(fo.path is not None, "forcing.path is required for kind 'file'")

        need(isinstance(op.cadence, int) and op.cadence >= 1, "output.cadence must be an integer >= 1")
        need(isinstance(op.snapshot_cadence, int) and op.snapshot_cadence >= 0,
             "output.snapshot_cadence must be an integer >= 0")
        need(isinstance(op.fields, list) and set(op.fields) <= {"velocity", "director"},
             "output.fields must be a subset of ['velocity', 'director']")
        if isinstance(op.pairings, list):
            from .young import builtin_integrands

            known = builtin_integrands(FrankConstants(1, 1, 1))
            bad = [p for p in op.pairings if p not in known]
            need(not bad, f"output.pairings: unknown integrands {bad}")
        else:
            out.append("output.pairings must be a list")
        return out

    # builders -------------------------------------------------------------------

    def resolve(self, p) -> Path:
        p = Path(p)
        return p if p.is_absolute() else self.base_dir / p

    def build_grid(self) -> TorusGrid:
        return TorusGrid(self.grid.N, float(self.grid.L))

    def build_energy(self):
        ph = self.physics
        if ph.energy == "one_constant":
            return OneConstant(ph.K)
        return FrankConstants(ph.K1, ph.K2, ph.K3, ph.split_mode)

    def build_leslie(self) -> LeslieCoefficients:
        ph = self.physics
        return LeslieCoefficients(ph.mu1, ph.mu2, ph.mu3, ph.mu4, ph.mu5, ph.mu6, ph.lam)

    def build_model(self) -> Model:
        ph = self.physics
        return Model(
            self.build_energy(),
            self.build_leslie().require_valid(),
            RegularizationParams(ph.delta, ph.schedule, ph.penalty),
            ph.galerkin_radius,
        )

    def build_stepper(self) -> StepperConfig:
        tm = self.time
        return StepperConfig(tm.dt, tm.t_end, tm.scheme, tm.cfl_safety)

    def with_delta(self, delta: float) -> "RunConfig":
        raw = self.to_dict()
        raw["physics"]["delta"] = delta
        return RunConfig.from_dict(raw, self.base_dir)
