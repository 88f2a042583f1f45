"""Scenario configuration files (TOML).

Grammar (every table and key is optional unless noted)::

    preset = "opo"              # "opo" | "scattering" | "custom"

    [parameters]                # preset parameters
    chi = 0.25                  # OPO coupling χ
    gamma = 1.0                 # OPO damping γ (> 0)
    n_th = 0.0                  # thermal photons of the OPO bath
    omega = 1.0                 # scattering: oscillator frequency ω
    Gamma = 0.1                 # scattering: rate Γ (>= 0)

    [model]                     # required for preset = "custom"
    H_s = [[1.0, 0.0], [0.0, 1.0]]      # row-major nested lists
    C = [[1.0, 0.0], [0.0, 1.0]]
    sigma_B = [[1.0, 0.0], [0.0, 1.0]]

    [measurement]               # omit for unmonitored dynamics
    type = "homodyne_p"         # heterodyne | homodyne_x | homodyne_p | custom | none
    s = 1e-8                    # homodyne squeezing (small = sharp)
    efficiency = 0.5            # detector efficiency η in (0, 1]
    dark_noise = 1.0            # additive detector noise Δ >= 0
    sigma_m = [[...]]           # type = "custom" only

    [initial]                   # default: vacuum
    mean = [0.0, 0.0]
    cov = [[1.0, 0.0], [0.0, 1.0]]

    [run]
    duration = 5.0
    dt = 1e-3
    trajectories = 1
    seed = 0
    record_every = 1

    [output]
    path = "trajectory.csv"

The measurement ``type`` names the measured *bath* quadrature; for both
presets the system's ``x`` is monitored by ``homodyne_p``. Matrices may
also be flat row-major lists of length N².
"""

import sys
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import List, Optional

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover - exercised on 3.10 only
    import tomli as tomllib
import tomli_w

from .dynamics import DiffusiveModel
from .errors import ConfigError
from .measurements import (
    DEFAULT_HOMODYNE_S,
    DarkNoise,
    Efficiency,
    GeneralDyneMeasurement,
    heterodyne,
    homodyne,
)
from .scenarios import build_opo, build_scattering
from .states import GaussianState, vacuum

PRESETS = ("opo", "scattering", "custom")
MEASUREMENT_TYPES = ("heterodyne", "homodyne_x", "homodyne_p", "custom", "none")


@dataclass
class Parameters:
    chi: float = 0.25
    gamma: float = 1.0
    n_th: float = 0.0
    omega: float = 1.0
    Gamma: float = 0.1


@dataclass
class MeasurementSpec:
    type: str = "none"
    s: float = DEFAULT_HOMODYNE_S
    efficiency: Optional[float] = None
    dark_noise: Optional[float] = None
    sigma_m: Optional[List[List[float]]] = None


@dataclass
class RunSpec:
    duration: float = 5.0
    dt: float = 1e-3
    trajectories: int = 1
    seed: int = 0
    record_every: int = 1


@dataclass
class ScenarioConfig:
    preset: str = "opo"
    parameters: Parameters = field(default_factory=Parameters)
    model: Optional[dict] = None
    measurement: MeasurementSpec = field(default_factory=MeasurementSpec)
    initial: Optional[dict] = None
    run: RunSpec = field(default_factory=RunSpec)
    output: Optional[str] = None

    def __post_init__(self):
        if self.preset not in PRESETS:
            raise ConfigError(f"unknown preset {self.preset!r}; choose from {PRESETS}")
        if self.measurement.type not in MEASUREMENT_TYPES:
            raise ConfigError(
                f"unknown measurement type {self.measurement.type!r}; "
                f"choose from {MEASUREMENT_TYPES}"
            )
        if self.preset == "custom" and not self.model:
            raise ConfigError("preset 'custom' needs a [model] table with H_s, C, sigma_B")

    def build_model(self) -> DiffusiveModel:
        p = self.parameters
        if self.preset == "opo":
            return build_opo(p.chi, p.gamma, p.n_th)
        if self.preset == "scattering":
            return build_scattering(p.omega, p.Gamma)
        try:
            return DiffusiveModel(
                _matrix(self.model["H_s"]), _matrix(self.model["C"], square=False),
                _matrix(self.model["sigma_B"]),
            )
        except KeyError as exc:
            raise ConfigError(f"[model] lacks {exc.args[0]!r}") from None

    def build_measurement(self, m: int) -> Optional[GeneralDyneMeasurement]:
        spec = self.measurement
        if spec.type == "none":
            return None
        if spec.efficiency is not None and spec.dark_noise is not None:
            raise ConfigError("give either efficiency or dark_noise, not both")
        noise = None
        if spec.efficiency is not None:
            noise = Efficiency(spec.efficiency)
        elif spec.dark_noise is not None:
            noise = DarkNoise(spec.dark_noise)
        if spec.type == "heterodyne":
            return heterodyne(m, noise)
        if spec.type in ("homodyne_x", "homodyne_p"):
            return homodyne(m, spec.type[-1], spec.s, noise)
        if spec.sigma_m is None:
            raise ConfigError("measurement type 'custom' needs sigma_m")
        return GeneralDyneMeasurement(_matrix(spec.sigma_m), noise)

    def build_initial(self, n: int) -> GaussianState:
        if not self.initial:
            return vacuum(n)
        mean = self.initial.get("mean", [0.0] * (2 * n))
        cov = _matrix(self.initial["cov"]) if "cov" in self.initial else np.eye(2 * n)
        return GaussianState(np.asarray(mean, dtype=float), cov)


def _matrix(value, square: bool = True) -> np.ndarray:
    out = np.asarray(value, dtype=float)
    if out.ndim == 1 and square:
        side = int(round(np.sqrt(out.size)))
        if side * side != out.size:
            raise ConfigError(f"flat matrix with {out.size} entries is not square")
        out = out.reshape(side, side)
    if out.ndim != 2:
        raise ConfigError("matrices are nested lists in row-major order")
    return out


def _build(cls, table, where: str):
    if table is None:
        return cls()
    if not isinstance(table, dict):
        raise ConfigError(f"[{where}] must be a table")
    known = {f.name: f for f in fields(cls)}
    unknown = sorted(set(table) - set(known))
    if unknown:
        raise ConfigError(f"unknown key(s) {unknown} in [{where}]")
    out = {}
    for key, value in table.items():
        default = getattr(cls(), key)
        if isinstance(default, bool) or value is None:
            out[key] = value
        elif isinstance(default, int) and not isinstance(default, bool):
            if isinstance(value, bool) or not isinstance(value, int):
                raise ConfigError(f"[{where}] {key} must be an integer, got {value!r}")
            out[key] = value
        elif isinstance(default, float) or key in ("efficiency", "dark_noise"):
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError(f"[{where}] {key} must be a number, got {value!r}")
            out[key] = float(value)
        elif isinstance(default, str) and not isinstance(value, str):
            raise ConfigError(f"[{where}] {key} must be a string, got {value!r}")
        else:
            out[key] = value
    return cls(**out)


def config_from_dict(data: dict) -> ScenarioConfig:
    known = {"preset", "parameters", "model", "measurement", "initial", "run", "output"}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"unknown top-level key(s) {unknown}")
    output = data.get("output")
    if isinstance(output, dict):
        output = output.get("path")
    try:
        return ScenarioConfig(
            preset=data.get("preset", "opo"),
            parameters=_build(Parameters, data.get("parameters"), "parameters"),
            model=data.get("model"),
            measurement=_build(MeasurementSpec, data.get("measurement"), "measurement"),
            initial=data.get("initial"),
            run=_build(RunSpec, data.get("run"), "run"),
            output=output,
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from None


def loads_config(text: str) -> ScenarioConfig:
    """Parse TOML text; syntax errors report their line and column."""
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    return config_from_dict(data)


def load_config(path) -> ScenarioConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return loads_config(text)


def _strip_none(value):
    if isinstance(value, dict):
        return {k: _strip_none(v) for k, v in value.items() if v is not None}
    return value


def dumps_config(cfg: ScenarioConfig) -> str:
    data = _strip_none(asdict(cfg))
    if "output" in data:
        data["output"] = {"path": data["output"]}
    return tomli_w.dumps(data)
