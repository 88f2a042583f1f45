"""Command-line front end: ``gaussdyn {simulate,steady-state,validate,dilate}``.

Exit status: 0 success, 2 usage or configuration error, 3 violated physical
constraint (uncertainty relation, complete positivity, instability), 4
numerical failure. Failures print ``{"error": category, "message": ...}``
as one JSON line on stderr.
"""

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import serialization
from .channels import Dilation, GaussianChannel, dilate, validate_channel
from .config import ScenarioConfig, load_config
from .dynamics import DriftDiffusion, drift_diffusion, steady_state_lyapunov, validate_AD
from .errors import (
    CertificationError,
    ConfigError,
    ConvergenceError,
    DegeneracyError,
    GaussDynError,
    InstabilityError,
    InvalidChannelError,
    NotSymplecticError,
    SingularMatrixError,
    StepSizeError,
    UnphysicalError,
)
from .filtering import MonitoredModel, certify_steady_state, simulate_ensemble, steady_state_riccati
from .scenarios import reference_steady_states
from .states import GaussianState, validate_state
from .symplectic import is_symplectic

OUTPUT_DIR_ENV = "GAUSSDYN_OUTPUT_DIR"

EXIT_OK, EXIT_USAGE, EXIT_PHYSICS, EXIT_NUMERICAL = 0, 2, 3, 4

_PHYSICS = (UnphysicalError, InvalidChannelError, InstabilityError, NotSymplecticError)
_NUMERICAL = (
    ConvergenceError,
    CertificationError,
    StepSizeError,
    SingularMatrixError,
    DegeneracyError,
)


class _Violation(Exception):
    """A validated artifact failed its constraint (reported, exit 3)."""

    def __init__(self, category: str, message: str):
        super().__init__(message)
        self.category = category


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gaussdyn", description="Gaussian open-system and continuous-monitoring toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def scenario_flags(p):
        p.add_argument("--config", metavar="PATH", help="TOML scenario file")
        p.add_argument("--preset", choices=("opo", "scattering", "custom"))
        p.add_argument("--out", metavar="PATH", help="output file")
        p.add_argument("--seed", type=int)
        p.add_argument("--trajectories", type=int)
        p.add_argument("--dt", type=float)
        p.add_argument("--duration", type=float)

    scenario_flags(sub.add_parser("simulate", help="simulate monitored trajectories to CSV"))
    scenario_flags(sub.add_parser("steady-state", help="steady-state covariance with certificates"))
    val = sub.add_parser("validate", help="check a state, channel or (A, D) JSON record")
    val.add_argument("path", help="JSON record file")
    dil = sub.add_parser("dilate", help="symplectic dilation of a channel JSON record")
    dil.add_argument("path", help="channel JSON file")
    dil.add_argument("--out", metavar="PATH", help="where to write the dilation record")
    return parser


def _output_path(name: Optional[str], default: str) -> Path:
    path = Path(name or default)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    return path


def _scenario(args) -> ScenarioConfig:
    cfg = load_config(args.config) if args.config else ScenarioConfig()
    if args.preset:
        cfg.preset = args.preset
        cfg.__post_init__()
    run = cfg.run
    for flag, attr in (("seed", "seed"), ("trajectories", "trajectories"), ("dt", "dt"), ("duration", "duration")):
        value = getattr(args, flag)
        if value is not None:
            setattr(run, attr, value)
    if run.trajectories < 1:
        raise ConfigError("trajectories must be at least 1")
    if not run.dt > 0 or run.duration < 0:
        raise ConfigError("dt must be positive and duration non-negative")
    return cfg


def _emit(payload: dict, out: Optional[Path]):
    text = json.dumps(payload, indent=2, ensure_ascii=False)
    print(text)
    if out is not None:
        out.write_text(text + "\n")


def cmd_simulate(args) -> int:
    cfg = _scenario(args)
    model = cfg.build_model()
    mm = MonitoredModel(model, cfg.build_measurement(model.m))
    run = cfg.run
    records = simulate_ensemble(
        mm,
        cfg.build_initial(model.n),
        run.duration,
        run.dt,
        run.trajectories,
        run.seed,
        record_every=run.record_every,
    )
    out = _output_path(args.out or cfg.output, "trajectory.csv")
    serialization.write_trajectories(records, out)
    sidecar = serialization.covariance_sidecar_path(out)
    serialization.write_covariances(records[0].cov_times, records[0].cov_snapshots, sidecar)
    print(json.dumps({"trajectories": str(out), "covariances": str(sidecar), "count": len(records)}))
    return EXIT_OK


def cmd_steady_state(args) -> int:
    cfg = _scenario(args)
    model = cfg.build_model()
    meas = cfg.build_measurement(model.m)
    payload = {"kind": "steady_state", "preset": cfg.preset, "monitored": meas is not None}
    if meas is None:
        dd = drift_diffusion(model)
        sigma = steady_state_lyapunov(dd)
        residual = dd.A @ sigma + sigma @ dd.A.T + dd.D
        checks = [validate_state(GaussianState(np.zeros(2 * model.n), sigma)).as_dict()]
        payload["residual"] = float(np.max(np.abs(residual)))
    else:
        mm = MonitoredModel(model, meas)
        sigma = steady_state_riccati(mm)
        checks = [c.as_dict() for c in certify_steady_state(mm, sigma)]
    payload["cov"] = sigma.tolist()
    payload["certification"] = checks
    if cfg.preset == "opo":
        p, spec = cfg.parameters, cfg.measurement
        refs = reference_steady_states(p.chi, p.gamma, p.n_th, spec.efficiency, spec.dark_noise)
        payload["reference"] = {k: v.tolist() for k, v in refs.items()}
    out = _output_path(args.out, "steady_state.json") if args.out else None
    _emit(payload, out)
    return EXIT_OK


def cmd_validate(args) -> int:
    try:
        record = serialization.load(args.path)
    except OSError as exc:
        raise ConfigError(f"cannot read {args.path}: {exc.strerror}") from None
    payload = {"kind": serialization.to_dict(record)["kind"]}
    if isinstance(record, GaussianState):
        check, category = validate_state(record), UnphysicalError.category
    elif isinstance(record, GaussianChannel):
        check, category = validate_channel(record), InvalidChannelError.category
    elif isinstance(record, DriftDiffusion):
        check, category = validate_AD(record), "diffusion-constraint"
    elif isinstance(record, Dilation):
        residual = record.symplectic_residual()
        ok = is_symplectic(record.S, 1e-8)
        payload.update(ok=ok, constraint="SΩSᵀ = Ω", symplectic_residual=residual)
        print(json.dumps(payload))
        if not ok:
            raise _Violation(NotSymplecticError.category, "dilation matrix is not symplectic")
        return EXIT_OK
    payload.update(check.as_dict())
    print(json.dumps(payload))
    if not check:
        raise _Violation(category, f"violates {check.constraint}")
    return EXIT_OK


def cmd_dilate(args) -> int:
    try:
        channel = serialization.load(args.path)
    except OSError as exc:
        raise ConfigError(f"cannot read {args.path}: {exc.strerror}") from None
    if not isinstance(channel, GaussianChannel):
        raise ConfigError(f"{args.path} holds a {type(channel).__name__}, not a channel")
    dil = dilate(channel)
    out = _output_path(args.out, "dilation.json")
    serialization.save(dil, out)
    print(json.dumps({
        "dilation": str(out),
        "symplectic_residual": dil.symplectic_residual(),
        "epsilon": dil.epsilon,
    }))
    return EXIT_OK


_COMMANDS = {
    "simulate": cmd_simulate,
    "steady-state": cmd_steady_state,
    "validate": cmd_validate,
    "dilate": cmd_dilate,
}


def _fail(category: str, message: str, code: int) -> int:
    print(json.dumps({"error": category, "message": message}), file=sys.stderr)
    return code


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    """Run the command line and return the exit status instead of exiting."""
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except _Violation as exc:
        return _fail(exc.category, str(exc), EXIT_PHYSICS)
    except _PHYSICS as exc:
        return _fail(exc.category, str(exc), EXIT_PHYSICS)
    except _NUMERICAL as exc:
        return _fail(exc.category, str(exc), EXIT_NUMERICAL)
    except GaussDynError as exc:
        return _fail(exc.category, str(exc), EXIT_USAGE)
    except ValueError as exc:
        return _fail(ConfigError.category, str(exc), EXIT_USAGE)


def main():  # pragma: no cover - thin wrapper
    sys.exit(run_cli())
