"""JSON records for states, channels, (A, D) pairs and dilations; trajectory CSV.

Every JSON record is an object with a ``kind`` tag and row-major nested
lists for matrices::

    {"kind": "state", "mean": [...], "cov": [[...], ...]}
    {"kind": "channel", "X": [[...]], "Y": [[...]]}
    {"kind": "drift_diffusion", "A": [[...]], "D": [[...]]}
    {"kind": "dilation", "n": 1, "S": [[...]], "epsilon": 0.0}

Python's float repr is the shortest string that round-trips, so parsing a
serialised record gives back bit-identical arrays.
"""

import csv
import json
from pathlib import Path
from typing import Iterable, List, Union

import numpy as np

from .channels import Dilation, GaussianChannel
from .dynamics import DriftDiffusion
from .errors import ConfigError, DimensionError
from .filtering import TrajectoryRecord
from .states import GaussianState

PathLike = Union[str, Path]
Record = Union[GaussianState, GaussianChannel, DriftDiffusion, Dilation]

CSV_FORMAT = "%.17g"


def _matrix(value, name: str) -> np.ndarray:
    try:
        out = np.asarray(value, dtype=float)
    except (TypeError, ValueError):
        raise ConfigError(f"{name!r} is not a numeric array") from None
    if out.ndim == 1:
        side = int(round(np.sqrt(out.size)))
        if side * side != out.size:
            raise ConfigError(f"{name!r} has {out.size} entries, not a square matrix")
        out = out.reshape(side, side)
    if out.ndim != 2:
        raise ConfigError(f"{name!r} must be a matrix (nested lists, row-major)")
    return out


def to_dict(obj: Record) -> dict:
    if isinstance(obj, GaussianState):
        return {"kind": "state", "mean": obj.mean.tolist(), "cov": obj.cov.tolist()}
    if isinstance(obj, GaussianChannel):
        return {"kind": "channel", "X": obj.X.tolist(), "Y": obj.Y.tolist()}
    if isinstance(obj, DriftDiffusion):
        return {"kind": "drift_diffusion", "A": obj.A.tolist(), "D": obj.D.tolist()}
    if isinstance(obj, Dilation):
        return {
            "kind": "dilation",
            "n": obj.n,
            "S": obj.S.tolist(),
            "epsilon": obj.epsilon,
            "symplectic_residual": obj.symplectic_residual(),
        }
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def from_dict(data: dict) -> Record:
    if not isinstance(data, dict) or "kind" not in data:
        raise ConfigError("record must be an object with a 'kind' field")
    kind = data["kind"]
    try:
        if kind == "state":
            return GaussianState(np.asarray(data["mean"], float), _matrix(data["cov"], "cov"))
        if kind == "channel":
            return GaussianChannel(_matrix(data["X"], "X"), _matrix(data["Y"], "Y"))
        if kind == "drift_diffusion":
            return DriftDiffusion(_matrix(data["A"], "A"), _matrix(data["D"], "D"))
        if kind == "dilation":
            return Dilation(_matrix(data["S"], "S"), int(data["n"]), float(data.get("epsilon", 0)))
    except KeyError as exc:
        raise ConfigError(f"{kind} record lacks field {exc.args[0]!r}") from None
    raise ConfigError(
        f"unknown record kind {kind!r}; expected state, channel, drift_diffusion or dilation"
    )


def dumps(obj: Record) -> str:
    return json.dumps(to_dict(obj), indent=2)


def loads(text: str) -> Record:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return from_dict(data)


def save(obj: Record, path: PathLike):
    Path(path).write_text(dumps(obj) + "\n")


def load(path: PathLike) -> Record:
    return loads(Path(path).read_text())


def _fmt(x: float) -> str:
    return CSV_FORMAT % x


def trajectory_header(n: int, m: int, with_index: bool = False) -> List[str]:
    cols = ["t"] + [f"r{k}" for k in range(1, 2 * n + 1)] + [f"y{k}" for k in range(1, 2 * m + 1)]
    return (["trajectory"] if with_index else []) + cols


def write_trajectories(records: Iterable[TrajectoryRecord], path: PathLike):
    """Write trajectories as CSV with columns ``t, r1..r2n, y1..y2m``.

    With more than one record a leading ``trajectory`` column holds the
    trajectory index. Numbers use 17 significant digits; the first current
    of each trajectory is ``nan`` (no interval precedes ``t = 0``).
    """
    records = list(records)
    if not records:
        raise ValueError("no trajectories to write")
    multi = len(records) > 1
    n2, m2 = records[0].means.shape[1], records[0].current.shape[1]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(trajectory_header(n2 // 2, m2 // 2, multi))
        for rec in records:
            for t, r, y in zip(rec.times, rec.means, rec.current):
                row = [_fmt(t)] + [_fmt(v) for v in r] + [_fmt(v) for v in y]
                writer.writerow(([str(rec.index)] if multi else []) + row)


def read_trajectories(path: PathLike) -> dict:
    """Parse a trajectory CSV into ``{index: (times, means, current)}``."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    multi = header[0] == "trajectory"
    n2 = sum(1 for h in header if h.startswith("r"))
    out = {}
    for row in body:
        idx = int(row[0]) if multi else 0
        vals = [float(v) for v in row[1 if multi else 0:]]
        out.setdefault(idx, []).append(vals)
    result = {}
    for idx, vals in out.items():
        arr = np.array(vals)
        result[idx] = (arr[:, 0], arr[:, 1 : 1 + n2], arr[:, 1 + n2 :])
    return result


def covariance_sidecar_path(path: PathLike) -> Path:
    """``traj.csv`` -> ``traj.cov.csv``."""
    path = Path(path)
    return path.with_name(path.stem + ".cov" + (path.suffix or ".csv"))


def write_covariances(times: np.ndarray, covs: np.ndarray, path: PathLike):
    """Covariance snapshots as CSV with columns ``t, s_1_1, s_1_2, ...`` (row-major)."""
    N = covs.shape[1]
    header = ["t"] + [f"s_{i}_{j}" for i in range(1, N + 1) for j in range(1, N + 1)]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for t, cov in zip(times, covs):
            writer.writerow([_fmt(t)] + [_fmt(v) for v in cov.reshape(-1)])


def read_covariances(path: PathLike):
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    N = int(round(np.sqrt(data.shape[1] - 1)))
    if N * N != data.shape[1] - 1:
        raise DimensionError("covariance CSV does not hold square matrices")
    return data[:, 0], data[:, 1:].reshape(-1, N, N)
