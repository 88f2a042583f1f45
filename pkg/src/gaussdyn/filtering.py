"""Conditional dynamics under continuous general-dyne monitoring of the bath.

The covariance obeys the deterministic Riccati equation

    dσ/dt = Ã σ + σ Ãᵀ + D̃ - σ B Bᵀ σ,

while the first moments follow the stochastic equation

    dr' = A r' dt + G(σ) dw,      G(σ) = (ΩCσ_B - σCΩ)(σ_B + σ_m*)^{-1/2},

driven by Wiener increments normalised as ``<dw_j²> = dt/2`` (not ``dt``).
The measurement current is ``y dt = -Bᵀ r' dt + dw``.
"""

from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Sequence

import numpy as np

from .diagnostics import Validation
from .errors import (
    CertificationError,
    ConvergenceError,
    DimensionError,
    SingularMatrixError,
    StepSizeError,
)
from .dynamics import (
    CovariancePath,
    DiffusiveModel,
    check_hurwitz,
    drift_diffusion,
    integrate_rk4,
    solve_lyapunov,
    step_grid,
)
from .measurements import GeneralDyneMeasurement, effective_covariance
from .states import GaussianState
from .symplectic import min_eig_plus_i_omega, omega

#: target max-norm of the Riccati right-hand side at a steady state
RICCATI_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class MonitoredModel:
    """A diffusive model whose m output modes are monitored by ``meas``.

    ``meas=None`` means nothing is recorded (zero efficiency); all filter
    terms then vanish and the unconditional dynamics is recovered.
    """

    model: DiffusiveModel
    meas: Optional[GeneralDyneMeasurement] = None

    def __post_init__(self):
        if self.meas is not None and self.meas.m != self.model.m:
            raise DimensionError(
                f"measurement on {self.meas.m} mode(s) but the bath has {self.model.m}"
            )

    @property
    def n(self) -> int:
        return self.model.n

    @property
    def m(self) -> int:
        return self.model.m


def _inverse_and_root(total: np.ndarray):
    """``K = total⁻¹`` and ``K^{1/2}`` for a symmetric positive-definite ``total``."""
    w, V = np.linalg.eigh((total + total.T) / 2)
    if not w[0] > np.finfo(float).eps * len(w) * max(1.0, w[-1]):
        raise SingularMatrixError("σ_B + σ_m* is singular; the filter is undefined")
    K = (V / w) @ V.T
    root = (V / np.sqrt(w)) @ V.T
    return (K + K.T) / 2, (root + root.T) / 2


@dataclass(frozen=True, eq=False)
class FilterMatrices:
    """Riccati coefficients ``Ã, D̃, B`` plus what is needed for the gain.

    ``P = ΩCσ_B`` and ``CΩ`` enter the covariance-dependent gain
    ``G(σ) = (P - σCΩ) K^{1/2}`` with ``K = (σ_B + σ_m*)⁻¹``.
    """

    A: np.ndarray
    D: np.ndarray
    A_tilde: np.ndarray
    D_tilde: np.ndarray
    B: np.ndarray
    P: np.ndarray
    C_Omega: np.ndarray
    K_sqrt: np.ndarray

    def gain(self, sigma: np.ndarray) -> np.ndarray:
        return (self.P - sigma @ self.C_Omega) @ self.K_sqrt


def filter_matrices(mm: MonitoredModel) -> FilterMatrices:
    """Assemble ``Ã = A - ΩCσ_BKΩCᵀ``, ``D̃ = D + ΩCσ_BKσ_BCᵀΩ``, ``B = CΩK^{1/2}``."""
    model = mm.model
    dd = drift_diffusion(model)
    Om_n, Om_m = omega(model.n), omega(model.m)
    C, sigma_B = model.C, model.sigma_B
    P = Om_n @ C @ sigma_B
    C_Omega = C @ Om_m
    if mm.meas is None:
        zero = np.zeros((2 * model.n, 2 * model.m))
        K_sqrt = np.zeros((2 * model.m, 2 * model.m))
        return FilterMatrices(dd.A, dd.D, dd.A.copy(), dd.D.copy(), zero, P, C_Omega, K_sqrt)
    K, K_sqrt = _inverse_and_root(sigma_B + effective_covariance(mm.meas))
    A_tilde = dd.A - P @ K @ Om_m @ C.T
    D_tilde = dd.D + P @ K @ sigma_B @ C.T @ Om_n
    D_tilde = (D_tilde + D_tilde.T) / 2
    B = C_Omega @ K_sqrt
    return FilterMatrices(dd.A, dd.D, A_tilde, D_tilde, B, P, C_Omega, K_sqrt)


def riccati_rhs(mm: MonitoredModel, sigma: np.ndarray) -> np.ndarray:
    """``Aσ + σAᵀ + D - (ΩCσ_B - σCΩ)(σ_B+σ_m*)⁻¹(ΩCᵀσ - σ_BCᵀΩ)``."""
    return _riccati_from(filter_matrices(mm), np.asarray(sigma, dtype=float))


def _riccati_from(fm: FilterMatrices, sigma: np.ndarray) -> np.ndarray:
    G = fm.gain(sigma)
    out = fm.A @ sigma + sigma @ fm.A.T + fm.D - G @ G.T
    return (out + out.T) / 2


def riccati_rhs_filter(fm: FilterMatrices, sigma: np.ndarray) -> np.ndarray:
    """The same right-hand side as ``Ãσ + σÃᵀ + D̃ - σBBᵀσ``."""
    sB = sigma @ fm.B
    out = fm.A_tilde @ sigma + sigma @ fm.A_tilde.T + fm.D_tilde - sB @ sB.T
    return (out + out.T) / 2


def evolve_conditional_cov(
    mm: MonitoredModel,
    sigma0: np.ndarray,
    T: float,
    dt: float,
    record_every: int = 1,
) -> CovariancePath:
    """RK4 integration of the Riccati equation; every step is checked for physicality."""
    fm = filter_matrices(mm)
    sigma0 = np.asarray(sigma0, dtype=float)
    if sigma0.shape != fm.A.shape:
        raise DimensionError(f"initial covariance has shape {sigma0.shape}")
    return integrate_rk4(lambda s: _riccati_from(fm, s), sigma0, T, dt, record_every)


def _default_step(fm: FilterMatrices, sigma: np.ndarray) -> float:
    scale = (
        np.linalg.norm(fm.A_tilde, 2)
        + np.linalg.norm(fm.B @ fm.B.T, 2) * max(1.0, np.linalg.norm(sigma, 2))
    )
    return 0.05 / max(scale, 1e-3)


def _newton_polish(fm: FilterMatrices, sigma: np.ndarray, tol: float, max_iter: int = 50):
    """Newton–Kleinman iterations on the algebraic Riccati equation.

    Each iterate solves ``A_k σ' + σ' A_kᵀ + D̃ + σBBᵀσ = 0`` with the closed-loop
    drift ``A_k = Ã - σBBᵀ``. Returns the best iterate found.
    """
    best = sigma
    best_res = np.max(np.abs(riccati_rhs_filter(fm, sigma)))
    BB = fm.B @ fm.B.T
    for _ in range(max_iter):
        if best_res < tol:
            break
        A_k = fm.A_tilde - sigma @ BB
        if np.max(np.linalg.eigvals(A_k).real) >= 0:
            break
        sigma = solve_lyapunov(A_k, fm.D_tilde + sigma @ BB @ sigma)
        res = np.max(np.abs(riccati_rhs_filter(fm, sigma)))
        if not np.isfinite(res):
            break
        if res < best_res:
            best, best_res = sigma, res
        elif res > 10 * best_res:
            break
    return best, best_res


def certify_steady_state(
    mm: MonitoredModel, sigma: np.ndarray, tol: float = 1e-8
) -> List[Validation]:
    """Checks that ``σ`` is the physical, stabilising Riccati solution.

    Returns validations of ``Aσ + σAᵀ + D >= 0`` (the unconditional flow
    would add noise, so conditioning removed some) and of ``σ + iΩ >= 0``.
    """
    fm = filter_matrices(mm)
    lyap = fm.A @ sigma + sigma @ fm.A.T + fm.D
    lyap = (lyap + lyap.T) / 2
    scale = max(1.0, float(np.max(np.abs(sigma))))
    lam = float(np.linalg.eigvalsh(lyap)[0])
    first = Validation(lam >= -tol * scale, lam, "Aσ + σAᵀ + D >= 0")
    lam2 = min_eig_plus_i_omega(sigma, omega(mm.n))
    second = Validation(lam2 >= -tol * scale, lam2, "uncertainty relation σ + iΩ >= 0")
    return [first, second]


def steady_state_riccati(
    mm: MonitoredModel,
    sigma0: Optional[np.ndarray] = None,
    tol: float = RICCATI_TOL,
    dt: Optional[float] = None,
    max_time: float = 1e4,
    certify_tol: float = 1e-8,
) -> np.ndarray:
    """Stationary conditional covariance.

    The Riccati equation is integrated from ``sigma0`` (vacuum by default)
    until the right-hand side is small (``1e-3``, tightened if needed);
    Newton–Kleinman steps then polish the result to ``tol``. The answer is
    certified with :func:`certify_steady_state`.

    Raises
    ------
    InstabilityError
        If nothing is monitored (``B = 0``) and ``Ã`` is not Hurwitz.
    ConvergenceError
        If ``tol`` is not reached within ``max_time`` of integration.
    CertificationError
        If the converged matrix fails a certification check.
    """
    fm = filter_matrices(mm)
    if not np.any(fm.B):
        check_hurwitz(fm.A_tilde)
    sigma = np.eye(2 * mm.n) if sigma0 is None else np.array(sigma0, dtype=float)
    h = _default_step(fm, sigma) if dt is None else dt
    chunk = max(h, 1.0)
    rhs = lambda s: riccati_rhs_filter(fm, s)  # noqa: E731
    elapsed, switch = 0.0, 1e-3
    while True:
        res = float(np.max(np.abs(rhs(sigma))))
        if res < switch:
            polished, res = _newton_polish(fm, sigma, tol)
            if res < tol:
                sigma = polished
                break
            switch = max(switch / 100, 1e-10)
        if elapsed >= max_time:
            break
        try:
            path = integrate_rk4(rhs, sigma, chunk, h, record_every=10**12)
        except StepSizeError:
            h /= 2
            if h < 1e-9:
                raise
            continue
        sigma = path.covs[-1]
        elapsed += chunk
        chunk = min(2 * chunk, 100.0)
    if not res < tol:
        raise ConvergenceError(
            f"Riccati residual {res:.3e} above {tol:.1e} after t = {elapsed:.3g}"
        )
    for check in certify_steady_state(mm, sigma, certify_tol):
        if not check:
            raise CertificationError(
                f"steady state fails {check.constraint} (min eigenvalue "
                f"{check.min_eigenvalue:.3e})"
            )
    return sigma


@dataclass(frozen=True, eq=False)
class TrajectoryRecord:
    """One quantum trajectory sampled on a regular grid.

    ``means[k]`` is ``r'(times[k])``. ``current[k]`` (k >= 1) is the
    measurement current averaged over ``(times[k-1], times[k]]``;
    ``current[0]`` is NaN. ``cov_snapshots[j]`` is ``σ(cov_times[j])`` and
    is shared by all trajectories of an ensemble.
    """

    times: np.ndarray
    means: np.ndarray
    current: np.ndarray
    cov_times: np.ndarray
    cov_snapshots: np.ndarray
    seed: int
    index: int = 0

    def __post_init__(self):
        N = len(self.times)
        if self.means.shape[0] != N or self.current.shape[0] != N:
            raise DimensionError("trajectory arrays do not match the time grid")
        if self.cov_snapshots.shape[0] != len(self.cov_times):
            raise DimensionError("covariance snapshots do not match their times")


def trajectory_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream for trajectory ``index`` of an ensemble seeded by ``seed``."""
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(int(index),)))


def _rowwise_matvec(M: np.ndarray, R: np.ndarray) -> np.ndarray:
    """``R @ Mᵀ`` computed row by row, independent of how many rows there are."""
    return (R[:, None, :] * M[None, :, :]).sum(axis=-1)


def simulate_ensemble(
    mm: MonitoredModel,
    state0: GaussianState,
    T: float,
    dt: float,
    trajectories: int,
    seed: int,
    record_every: int = 1,
    cov_every: Optional[int] = None,
    batch: int = 500,
    first_index: int = 0,
) -> List[TrajectoryRecord]:
    """Euler–Maruyama trajectories for the first moments.

    The covariance path is deterministic, so it is integrated once with RK4
    and shared. Trajectory ``i`` draws its increments from
    :func:`trajectory_rng` ``(seed, first_index + i)``, hence records do
    not depend on ``batch`` or on how an ensemble is split into calls.

    Parameters
    ----------
    record_every : int
        Store means and stride-averaged currents every this many steps.
    cov_every : int, optional
        Store covariance snapshots every this many steps (default: same as
        ``record_every``).
    """
    if state0.n != mm.n:
        raise DimensionError(f"{state0.n}-mode state for a {mm.n}-mode model")
    if trajectories < 1:
        raise ValueError("at least one trajectory is required")
    fm = filter_matrices(mm)
    nsteps, h = step_grid(T, dt)
    record_every = max(1, int(record_every))
    cov_every = record_every if cov_every is None else max(1, int(cov_every))
    full = integrate_rk4(lambda s: _riccati_from(fm, s), state0.cov, T, h)
    covs = full.covs
    gains = np.array([fm.gain(s) for s in covs[:-1]])
    rec_steps = np.unique(np.r_[np.arange(0, nsteps + 1, record_every), nsteps])
    cov_steps = np.unique(np.r_[np.arange(0, nsteps + 1, cov_every), nsteps])
    times = rec_steps * h
    cov_times, cov_snapshots = cov_steps * h, covs[cov_steps]
    two_n, two_m = 2 * mm.n, 2 * mm.m
    A, Bt = fm.A, fm.B.T
    scale = np.sqrt(h / 2.0)

    records = []
    for start in range(0, trajectories, batch):
        idx = range(first_index + start, first_index + min(trajectories, start + batch))
        b = len(idx)
        noise = np.empty((b, nsteps, two_m))
        for j, i in enumerate(idx):
            noise[j] = trajectory_rng(seed, i).standard_normal((nsteps, two_m))
        noise *= scale
        r = np.tile(state0.mean, (b, 1))
        means = np.empty((b, len(rec_steps), two_n))
        current = np.full((b, len(rec_steps), two_m), np.nan)
        means[:, 0] = r
        acc = np.zeros((b, two_m))
        since, slot = 0, 1
        for k in range(nsteps):
            dw = noise[:, k]
            acc += -_rowwise_matvec(Bt, r) + dw / h
            since += 1
            r = r + h * _rowwise_matvec(A, r) + _rowwise_matvec(gains[k], dw)
            if slot < len(rec_steps) and k + 1 == rec_steps[slot]:
                means[:, slot] = r
                current[:, slot] = acc / since
                acc[:] = 0.0
                since = 0
                slot += 1
        for j, i in enumerate(idx):
            records.append(
                TrajectoryRecord(
                    times, means[j], current[j], cov_times, cov_snapshots, int(seed), i
                )
            )
    return records


def simulate_trajectory(
    mm: MonitoredModel,
    state0: GaussianState,
    T: float,
    dt: float,
    seed: int,
    record_every: int = 1,
    cov_every: Optional[int] = None,
    index: int = 0,
) -> TrajectoryRecord:
    """A single trajectory; identical to member ``index`` of :func:`simulate_ensemble`."""
    return simulate_ensemble(
        mm, state0, T, dt, 1, seed, record_every, cov_every, first_index=index
    )[0]


class EnsembleStatistics(NamedTuple):
    times: np.ndarray
    mean: np.ndarray
    cov: np.ndarray


def ensemble_statistics(records: Sequence[TrajectoryRecord]) -> EnsembleStatistics:
    """Pointwise mean and (population, ``ddof=0``) covariance of the first moments."""
    records = list(records)
    if not records:
        raise ValueError("no trajectories given")
    times = records[0].times
    for rec in records[1:]:
        if rec.times.shape != times.shape or not np.array_equal(rec.times, times):
            raise DimensionError("trajectories do not share a time grid")
    means = np.stack([rec.means for rec in records])  # (N, T, 2n)
    mu = means.mean(axis=0)
    dev = means - mu
    cov = np.einsum("kti,ktj->tij", dev, dev) / len(records)
    return EnsembleStatistics(times, mu, (cov + cov.transpose(0, 2, 1)) / 2)
