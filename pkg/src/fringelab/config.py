"""Run configuration: a YAML file with flat sections, SI units in every key name.

Example (every key shown with its default)::

    source:
      spectrum_csv: null          # path to a wavelength_nm,power CSV; overrides the comb
      wavelength_m: 6.6e-07
      cavity_length_m: 14.9896229 # 10 MHz mode spacing, desk-scale comb
      k: 1
      n_modes: 5
      amplitudes: null            # per-mode powers, null = uniform
      mode_linewidth_hz: 100000.0
      lineshape: lorentzian
    geometry:
      wavelength_m: 6.6e-07
      slit_spacing_m: 0.000125
      slit_width_m: 4.0e-06
      screen_distance_m: 0.315
      screen_extent_m: 0.06
      screen_samples: 4001
    paths:
      p1_m: 2.0
      p2_m: 602.0
      refractive_index: 1.4677
      split_ratio: 0.4
      overlap: 1.0
    schedule:
      t_on_s: 0.0
      t_off_s: 2.0e-05
      t0_s: 0.0
    simulation:
      duration_s: 5.0e-05
      dt_s: 2.5e-09
      n_seeds: 20
      seed: 0                     # falls back to $FRINGELAB_SEED when omitted
      window_s: 1.0e-06
      threshold: 0.5
      modes: [1, 2, 3, 5, 9]
    output:
      directory: out
      svg: false

``source`` and ``geometry`` must be present (they may be empty mappings).
"""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Optional, Tuple

import yaml

from .constants import C
from .errors import ConfigError
from .interference_engine import DoubleSlitGeometry, PathConfig
from .spectral_model import LINESHAPES, ModeComb
from .timing_logic import RunSchedule

SEED_ENV = "FRINGELAB_SEED"

DESK_CAVITY_LENGTH_M = 14.9896229


@dataclass(frozen=True)
class SourceSection:
    spectrum_csv: Optional[str] = None
    wavelength_m: float = 660e-9
    cavity_length_m: float = DESK_CAVITY_LENGTH_M
    k: int = 1
    n_modes: int = 5
    amplitudes: Optional[Tuple[float, ...]] = None
    mode_linewidth_hz: float = 100e3
    lineshape: str = "lorentzian"

    def comb(self, n_modes: Optional[int] = None) -> ModeComb:
        n = self.n_modes if n_modes is None else n_modes
        amps = self.amplitudes if n == self.n_modes else None
        return ModeComb(
            nu0=C / self.wavelength_m,
            cavity_length=self.cavity_length_m,
            n_modes=n,
            k=self.k,
            amplitudes=amps,
            mode_linewidth=self.mode_linewidth_hz,
            lineshape=self.lineshape,
        )


@dataclass(frozen=True)
class GeometrySection:
    wavelength_m: float = 660e-9
    slit_spacing_m: float = 125e-6
    slit_width_m: float = 4e-6
    screen_distance_m: float = 0.315
    screen_extent_m: float = 0.06
    screen_samples: int = 4001

    def build(self) -> DoubleSlitGeometry:
        return DoubleSlitGeometry(
            self.wavelength_m,
            self.slit_spacing_m,
            self.slit_width_m,
            self.screen_distance_m,
            self.screen_extent_m,
            self.screen_samples,
        )


@dataclass(frozen=True)
class PathsSection:
    p1_m: float = 2.0
    p2_m: float = 602.0
    refractive_index: float = 1.4677
    split_ratio: float = 0.4
    overlap: float = 1.0

    def build(self) -> PathConfig:
        return PathConfig(self.p1_m, self.p2_m, self.refractive_index, self.split_ratio)


@dataclass(frozen=True)
class ScheduleSection:
    t_on_s: float = 0.0
    t_off_s: float = 20e-6
    t0_s: float = 0.0


@dataclass(frozen=True)
class SimulationSection:
    duration_s: float = 50e-6
    dt_s: float = 2.5e-9
    n_seeds: int = 20
    seed: int = 0
    window_s: float = 1e-6
    threshold: float = 0.5
    modes: Tuple[int, ...] = (1, 2, 3, 5, 9)


@dataclass(frozen=True)
class OutputSection:
    directory: str = "out"
    svg: bool = False


_SECTIONS = {
    "source": SourceSection,
    "geometry": GeometrySection,
    "paths": PathsSection,
    "schedule": ScheduleSection,
    "simulation": SimulationSection,
    "output": OutputSection,
}
_REQUIRED = ("source", "geometry")


@dataclass(frozen=True)
class RunConfig:
    source: SourceSection = field(default_factory=SourceSection)
    geometry: GeometrySection = field(default_factory=GeometrySection)
    paths: PathsSection = field(default_factory=PathsSection)
    schedule: ScheduleSection = field(default_factory=ScheduleSection)
    simulation: SimulationSection = field(default_factory=SimulationSection)
    output: OutputSection = field(default_factory=OutputSection)

    def comb(self, n_modes: Optional[int] = None) -> ModeComb:
        return self.source.comb(n_modes)

    def geometry_obj(self) -> DoubleSlitGeometry:
        return self.geometry.build()

    def path_config(self) -> PathConfig:
        return self.paths.build()

    def run_schedule(self) -> RunSchedule:
        s = self.schedule
        return RunSchedule(s.t_on_s, s.t_off_s, self.path_config(), s.t0_s)

    def to_dict(self) -> dict:
        out = {}
        for name in _SECTIONS:
            sec = asdict(getattr(self, name))
            out[name] = {k: list(v) if isinstance(v, tuple) else v for k, v in sec.items()}
        return out

    def dump(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=False, default_flow_style=None)


def _coerce(section: str, key: str, value, annotation: str):
    where = f"{section}.{key}"
    if value is None:
        if "Optional" in annotation:
            return None
        raise ConfigError(f"{where}: must not be null")
    if "Tuple[int" in annotation or "Tuple[float" in annotation:
        if not isinstance(value, (list, tuple)):
            raise ConfigError(f"{where}: expected a list of numbers, got {type(value).__name__}")
        cast = int if "Tuple[int" in annotation else float
        return tuple(_scalar(where, v, cast) for v in value)
    if annotation.startswith("bool"):
        if not isinstance(value, bool):
            raise ConfigError(f"{where}: expected true/false, got {value!r}")
        return value
    if "str" in annotation:
        if not isinstance(value, str):
            raise ConfigError(f"{where}: expected a string, got {value!r}")
        return value
    cast = int if "int" in annotation else float
    return _scalar(where, value, cast)


def _scalar(where, v, cast):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {v!r}")
    if cast is int:
        if isinstance(v, float) and not v.is_integer():
            raise ConfigError(f"{where}: expected an integer, got {v!r}")
        return int(v)
    return float(v)


def _section(name: str, raw) -> object:
    cls = _SECTIONS[name]
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError(f"{name}: expected a mapping of keys, got {type(raw).__name__}")
    known = {f.name: f for f in fields(cls)}
    unknown = sorted(set(raw) - set(known))
    if unknown:
        raise ConfigError(f"{name}: unknown key(s) {', '.join(unknown)}; allowed: {', '.join(known)}")
    kwargs = {}
    for key, val in raw.items():
        f = known[key]
        kwargs[key] = _coerce(name, key, val, str(f.type))
    if name == "simulation" and "seed" not in raw and os.environ.get(SEED_ENV):
        try:
            kwargs["seed"] = int(os.environ[SEED_ENV])
        except ValueError:
            raise ConfigError(f"${SEED_ENV}: expected an integer, got {os.environ[SEED_ENV]!r}") from None
    return cls(**kwargs)


def _validate(cfg: RunConfig, base_dir: str) -> RunConfig:
    g, p, s, sim, src = cfg.geometry, cfg.paths, cfg.schedule, cfg.simulation, cfg.source
    if not g.slit_width_m < g.slit_spacing_m:
        raise ConfigError(
            f"geometry.slit_width_m ({g.slit_width_m}) must be < geometry.slit_spacing_m ({g.slit_spacing_m})"
        )
    if not g.screen_distance_m >= 100 * g.slit_spacing_m:
        raise ConfigError("geometry.screen_distance_m must be >= 100 * geometry.slit_spacing_m")
    if not p.p1_m <= p.p2_m:
        raise ConfigError(f"paths.p1_m ({p.p1_m}) must be <= paths.p2_m ({p.p2_m})")
    if not s.t_off_s > s.t_on_s:
        raise ConfigError(f"schedule.t_off_s ({s.t_off_s}) must be > schedule.t_on_s ({s.t_on_s})")
    if not 0 <= p.overlap <= 1:
        raise ConfigError("paths.overlap must be in [0, 1]")
    if not 0 < sim.threshold < 1:
        raise ConfigError("simulation.threshold must be in (0, 1)")
    if sim.n_seeds < 1:
        raise ConfigError("simulation.n_seeds must be >= 1")
    if not sim.dt_s > 0 or not sim.duration_s >= 10 * sim.dt_s:
        raise ConfigError("simulation.dt_s must be > 0 and simulation.duration_s >= 10 * dt_s")
    if not sim.window_s >= 10 * sim.dt_s:
        raise ConfigError("simulation.window_s must be >= 10 * simulation.dt_s")
    if not sim.modes or min(sim.modes) < 1:
        raise ConfigError("simulation.modes must list positive mode counts")
    if src.lineshape not in LINESHAPES:
        raise ConfigError(f"source.lineshape must be one of {', '.join(LINESHAPES)}")
    if src.spectrum_csv is not None:
        path = src.spectrum_csv
        if not os.path.isabs(path):
            path = os.path.join(base_dir, path)
        if not os.path.exists(path):
            raise ConfigError(f"source.spectrum_csv: file not found: {path}")
        cfg = replace(cfg, source=replace(src, spectrum_csv=os.path.abspath(path)))
    checks = [
        ("source", cfg.comb),
        ("geometry", cfg.geometry_obj),
        ("paths", cfg.path_config),
        ("schedule", cfg.run_schedule),
    ]
    for name, build in checks:
        try:
            build()
        except ValueError as exc:
            keys = ", ".join(f"{name}.{f.name}" for f in fields(_SECTIONS[name]))
            raise ConfigError(f"{name}: {exc} (keys: {keys})") from None
    return cfg


def config_from_dict(data, base_dir: str = ".") -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("config: top level must be a mapping of sections")
    unknown = sorted(set(data) - set(_SECTIONS))
    if unknown:
        raise ConfigError(f"config: unknown section(s) {', '.join(unknown)}; allowed: {', '.join(_SECTIONS)}")
    missing = [s for s in _REQUIRED if s not in data]
    if missing:
        raise ConfigError(f"config: missing required section(s) {', '.join(missing)}")
    cfg = RunConfig(**{name: _section(name, data.get(name)) for name in _SECTIONS})
    return _validate(cfg, base_dir)


def parse_config(path) -> RunConfig:
    """Load and validate a YAML run configuration."""
    with open(path, encoding="utf-8") as fh:
        try:
            data = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise ConfigError(f"{path}: not valid YAML: {exc}") from None
    return config_from_dict(data, os.path.dirname(os.path.abspath(path)))


def default_config() -> RunConfig:
    return config_from_dict({"source": {}, "geometry": {}})
