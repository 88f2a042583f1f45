"""General-dyne measurements on a subset of modes.

A general-dyne measurement projects the measured modes onto Gaussian states
with a fixed covariance ``sigma_m`` and outcome-dependent first moments.
Detector imperfections enter through the dual of a Gaussian channel, which
replaces ``sigma_m`` by ``X* sigma_m X*ᵀ + Y*``.
"""

from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.linalg import block_diag, cho_factor, cho_solve

from .channels import GaussianChannel, dual_channel
from .errors import DimensionError, SingularMatrixError, UnphysicalError
from .states import GaussianState, _mode_indices
from .symplectic import check_symmetric, min_eig_plus_i_omega, mode_count, omega

#: squeezing of the finite-s approximation to homodyne detection
DEFAULT_HOMODYNE_S = 1e-8


@dataclass(frozen=True)
class Efficiency:
    """Detector with efficiency ``eta``: a loss channel before detection."""

    eta: float

    def __post_init__(self):
        if not 0 < self.eta <= 1:
            raise ValueError(f"efficiency must lie in (0, 1], got {self.eta}")


@dataclass(frozen=True)
class DarkNoise:
    """Gaussian additive noise ``delta * I`` before detection."""

    delta: float

    def __post_init__(self):
        if self.delta < 0:
            raise ValueError(f"additive noise must be non-negative, got {self.delta}")


@dataclass(frozen=True)
class ChannelNoise:
    """Arbitrary Gaussian channel acting on the measured modes before detection."""

    channel: GaussianChannel


Noise = Union[Efficiency, DarkNoise, ChannelNoise]


@dataclass(frozen=True, eq=False)
class GeneralDyneMeasurement:
    sigma_m: np.ndarray
    noise: Optional[Noise] = None

    def __post_init__(self):
        sigma_m = check_symmetric(self.sigma_m, 1e-9, "measurement covariance")
        m = mode_count(sigma_m)
        lam = min_eig_plus_i_omega(sigma_m, omega(m))
        if lam < -1e-9 * max(1.0, float(np.max(np.abs(sigma_m)))):
            raise UnphysicalError(
                f"measurement covariance violates σ_m + iΩ >= 0 (min eigenvalue {lam:.3e})"
            )
        if isinstance(self.noise, ChannelNoise) and self.noise.channel.n != m:
            raise DimensionError("noise channel and measurement act on different modes")
        object.__setattr__(self, "sigma_m", (sigma_m + sigma_m.T) / 2)

    @property
    def m(self) -> int:
        return self.sigma_m.shape[0] // 2

    def with_noise(self, noise: Optional[Noise]) -> "GeneralDyneMeasurement":
        return GeneralDyneMeasurement(self.sigma_m, noise)


def heterodyne(m: int = 1, noise: Optional[Noise] = None) -> GeneralDyneMeasurement:
    return GeneralDyneMeasurement(np.eye(2 * m), noise)


def homodyne(
    m: int = 1,
    quadrature: str = "x",
    s: float = DEFAULT_HOMODYNE_S,
    noise: Optional[Noise] = None,
) -> GeneralDyneMeasurement:
    """Homodyne detection of ``quadrature`` on every measured mode.

    Realised as projection on squeezed states ``diag(s, 1/s)`` (x) or
    ``diag(1/s, s)`` (p) with small ``s``; ``s = 1`` is heterodyne.
    """
    if not s > 0:
        raise ValueError(f"squeezing parameter must be positive, got {s}")
    if quadrature == "x":
        block = np.diag([s, 1.0 / s])
    elif quadrature == "p":
        block = np.diag([1.0 / s, s])
    else:
        raise ValueError(f"quadrature must be 'x' or 'p', got {quadrature!r}")
    return GeneralDyneMeasurement(block_diag(*([block] * m)), noise)


def effective_covariance(meas: GeneralDyneMeasurement) -> np.ndarray:
    """Covariance ``σ_m*`` of the noisy measurement's POVM elements."""
    noise = meas.noise
    sigma_m = meas.sigma_m
    if noise is None:
        return sigma_m.copy()
    if isinstance(noise, DarkNoise):
        return sigma_m + noise.delta * np.eye(2 * meas.m)
    if isinstance(noise, Efficiency):
        channel = GaussianChannel.loss(noise.eta, meas.m)
    elif isinstance(noise, ChannelNoise):
        channel = noise.channel
    else:
        raise TypeError(f"unknown noise model {noise!r}")
    dual, _ = dual_channel(channel)
    out = dual.X @ sigma_m @ dual.X.T + dual.Y
    return (out + out.T) / 2


def _split(state: GaussianState, measured: Sequence[int]):
    idx_b = _mode_indices(measured, state.n)
    rest = [k for k in range(state.n) if k not in set(int(j) for j in measured)]
    idx_a = np.ravel([[2 * k, 2 * k + 1] for k in rest]).astype(int)
    return idx_a, idx_b


def _factor(matrix: np.ndarray):
    try:
        return cho_factor(matrix)
    except np.linalg.LinAlgError:
        raise SingularMatrixError("σ_B + σ_m* is not positive definite") from None


def _log_density(delta: np.ndarray, factor) -> float:
    m = delta.size // 2
    log_det = 2.0 * np.sum(np.log(np.diag(factor[0])))
    return float(-delta @ cho_solve(factor, delta) - m * np.log(np.pi) - 0.5 * log_det)


def condition(
    state: GaussianState,
    measured: Sequence[int],
    meas: GeneralDyneMeasurement,
    outcome: Sequence[float],
) -> Tuple[GaussianState, float]:
    """Post-measurement state of the unmeasured modes and the outcome log-density.

    The unmeasured block is updated by the Schur complement
    ``σ_A - σ_AB (σ_B + σ_m*)⁻¹ σ_ABᵀ`` and its mean by
    ``r_A + σ_AB (σ_B + σ_m*)⁻¹ (r_m - r_B)``. The covariance update never
    looks at ``outcome``.
    """
    idx_a, idx_b = _split(state, measured)
    if idx_b.size != meas.sigma_m.shape[0]:
        raise DimensionError(f"measurement acts on {meas.m} mode(s), {idx_b.size // 2} given")
    if idx_a.size == 0:
        raise DimensionError("at least one mode must stay unmeasured")
    outcome = np.asarray(outcome, dtype=float).reshape(-1)
    if outcome.shape != (idx_b.size,):
        raise DimensionError(f"outcome has length {outcome.size}, expected {idx_b.size}")
    cov, mean = state.cov, state.mean
    sigma_a = cov[np.ix_(idx_a, idx_a)]
    sigma_ab = cov[np.ix_(idx_a, idx_b)]
    factor = _factor(cov[np.ix_(idx_b, idx_b)] + effective_covariance(meas))
    delta = outcome - mean[idx_b]
    new_cov = sigma_a - sigma_ab @ cho_solve(factor, sigma_ab.T)
    new_mean = mean[idx_a] + sigma_ab @ cho_solve(factor, delta)
    return GaussianState(new_mean, (new_cov + new_cov.T) / 2), _log_density(delta, factor)


class OutcomeDistribution(NamedTuple):
    """Outcomes are normal with this mean and (ordinary) covariance."""

    mean: np.ndarray
    cov: np.ndarray

    def log_density(self, r_m: Sequence[float]) -> float:
        delta = np.asarray(r_m, dtype=float) - self.mean
        return _log_density(delta, _factor(2.0 * self.cov))


class MeasurementOutcome(NamedTuple):
    r_m: np.ndarray
    log_density: float


def outcome_distribution(
    state: GaussianState, measured: Sequence[int], meas: GeneralDyneMeasurement
) -> OutcomeDistribution:
    _, idx_b = _split(state, measured)
    if idx_b.size != meas.sigma_m.shape[0]:
        raise DimensionError(f"measurement acts on {meas.m} mode(s), {idx_b.size // 2} given")
    total = state.cov[np.ix_(idx_b, idx_b)] + effective_covariance(meas)
    return OutcomeDistribution(state.mean[idx_b].copy(), (total + total.T) / 4)


def sample_outcome(
    state: GaussianState,
    measured: Sequence[int],
    meas: GeneralDyneMeasurement,
    rng: Union[int, np.random.Generator, None] = None,
) -> MeasurementOutcome:
    """Draw one outcome. ``rng`` is a seed or a generator owned by the caller."""
    rng = np.random.default_rng(rng)
    dist = outcome_distribution(state, measured, meas)
    L = np.linalg.cholesky(dist.cov)
    r_m = dist.mean + L @ rng.standard_normal(dist.mean.size)
    return MeasurementOutcome(r_m, dist.log_density(r_m))


def sample_outcomes(
    state: GaussianState,
    measured: Sequence[int],
    meas: GeneralDyneMeasurement,
    size: int,
    rng: Union[int, np.random.Generator, None] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorised :func:`sample_outcome`: outcomes ``(size, 2m)`` and log-densities."""
    rng = np.random.default_rng(rng)
    dist = outcome_distribution(state, measured, meas)
    L = np.linalg.cholesky(dist.cov)
    r_m = dist.mean + rng.standard_normal((size, dist.mean.size)) @ L.T
    factor = _factor(2.0 * dist.cov)
    delta = r_m - dist.mean
    m = dist.mean.size // 2
    quad = np.einsum("ij,ij->i", delta, cho_solve(factor, delta.T).T)
    log_det = 2.0 * np.sum(np.log(np.diag(factor[0])))
    return r_m, -quad - m * np.log(np.pi) - 0.5 * log_det
