"""Unconditional diffusive dynamics of Gaussian states.

A system of n modes coupled linearly to m white-noise bath modes evolves as

    dσ/dt = A σ + σ Aᵀ + D,        dr'/dt = A r',

with drift ``A`` and diffusion ``D`` built from the system Hamiltonian
``H_s``, the coupling matrix ``C`` and the bath covariance ``σ_B``.
"""

from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

import numpy as np
from scipy.linalg import expm

from .diagnostics import Validation
from .errors import (
    CertificationError,
    DimensionError,
    InstabilityError,
    SingularMatrixError,
    StepSizeError,
    UnphysicalError,
)
from .states import GaussianState, validate_state
from .symplectic import check_symmetric, min_eig_plus_i_omega, mode_count, omega

#: spectral abscissa required of a drift matrix with a steady state
HURWITZ_MARGIN = 1e-10
DYNAMICS_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class DiffusiveModel:
    """System Hamiltonian matrix, system-bath coupling and bath covariance.

    Parameters
    ----------
    H_s : (2n, 2n) array
        Symmetric system Hamiltonian matrix.
    C : (2n, 2m) array
        Coupling matrix of ``H_c = r̂ᵀ C r̂_in``.
    sigma_B : (2m, 2m) array
        Covariance of the white-noise input modes; must be physical.
    """

    H_s: np.ndarray
    C: np.ndarray
    sigma_B: np.ndarray

    def __post_init__(self):
        H_s = check_symmetric(self.H_s, 1e-9, "system Hamiltonian")
        n = mode_count(H_s)
        sigma_B = check_symmetric(self.sigma_B, 1e-9, "bath covariance")
        m = mode_count(sigma_B)
        C = np.asarray(self.C, dtype=float)
        if C.shape != (2 * n, 2 * m):
            raise DimensionError(f"coupling has shape {C.shape}, expected {(2 * n, 2 * m)}")
        lam = min_eig_plus_i_omega(sigma_B, omega(m))
        if lam < -DYNAMICS_TOL * max(1.0, float(np.max(np.abs(sigma_B)))):
            raise UnphysicalError(
                f"bath covariance violates σ_B + iΩ >= 0 (min eigenvalue {lam:.3e})"
            )
        object.__setattr__(self, "H_s", (H_s + H_s.T) / 2)
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "sigma_B", (sigma_B + sigma_B.T) / 2)

    @property
    def n(self) -> int:
        return self.H_s.shape[0] // 2

    @property
    def m(self) -> int:
        return self.sigma_B.shape[0] // 2


@dataclass(frozen=True, eq=False)
class DriftDiffusion:
    """Drift matrix ``A`` and symmetric diffusion matrix ``D``."""

    A: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        D = check_symmetric(self.D, 1e-9, "diffusion matrix")
        mode_count(D)
        A = np.asarray(self.A, dtype=float)
        if A.shape != D.shape:
            raise DimensionError(f"A has shape {A.shape}, D has shape {D.shape}")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "D", (D + D.T) / 2)

    @property
    def n(self) -> int:
        return self.A.shape[0] // 2


def drift_diffusion(model: DiffusiveModel) -> DriftDiffusion:
    """``A = ΩH_s + ΩCΩCᵀ/2`` and ``D = ΩCσ_BCᵀΩᵀ``."""
    Om_n, Om_m = omega(model.n), omega(model.m)
    C = model.C
    A = Om_n @ model.H_s + 0.5 * Om_n @ C @ Om_m @ C.T
    OC = Om_n @ C
    D = OC @ model.sigma_B @ OC.T
    return DriftDiffusion(A, (D + D.T) / 2)


def validate_AD(dd: DriftDiffusion, tol: float = DYNAMICS_TOL) -> Validation:
    """Check that ``(A, D)`` generates a completely positive semigroup.

    The condition is ``D + iΩA_aΩᵀ >= 0`` with ``A_a = ΩᵀA - AᵀΩ``. For a
    single mode the details also report ``det D`` and ``det A_a``, whose
    ordering ``det D >= det A_a`` is the equivalent scalar condition.
    """
    Om = omega(dd.n)
    A_a = Om.T @ dd.A - dd.A.T @ Om
    lam = min_eig_plus_i_omega(dd.D, Om @ A_a @ Om.T)
    scale = max(1.0, float(np.max(np.abs(dd.D))), float(np.max(np.abs(A_a))))
    d_psd = float(np.linalg.eigvalsh(dd.D)[0])
    ok = lam >= -tol * scale and d_psd >= -tol * scale
    details = {"min_eigenvalue_D": d_psd}
    if dd.n == 1:
        details["det_D"] = float(np.linalg.det(dd.D))
        details["det_A_a"] = float(np.linalg.det(A_a))
    return Validation(bool(ok), lam, "D + iΩA_aΩᵀ >= 0", details)


def lyapunov_rhs(dd: DriftDiffusion, sigma: np.ndarray) -> np.ndarray:
    return dd.A @ sigma + sigma @ dd.A.T + dd.D


class CovariancePath(NamedTuple):
    """Covariance matrices ``covs[k]`` at ``times[k]``."""

    times: np.ndarray
    covs: np.ndarray


def step_grid(T: float, dt: float):
    """Number of steps and the step actually used to cover ``[0, T]``.

    ``dt`` is shrunk slightly when ``T`` is not an integer multiple of it,
    so that the grid always ends exactly at ``T``.
    """
    if not dt > 0:
        raise ValueError(f"time step must be positive, got {dt}")
    if T < 0:
        raise ValueError(f"duration must be non-negative, got {T}")
    nsteps = int(np.ceil(T / dt - 1e-9))
    return nsteps, (T / nsteps if nsteps else dt)


def integrate_rk4(
    rhs: Callable[[np.ndarray], np.ndarray],
    sigma0: np.ndarray,
    T: float,
    dt: float,
    record_every: int = 1,
    check_tol: Optional[float] = DYNAMICS_TOL,
) -> CovariancePath:
    """Classical RK4 for an autonomous symmetric-matrix ODE.

    The iterate is symmetrised after every step. With ``check_tol`` set, each
    step is tested against the uncertainty relation and a
    :class:`~gaussdyn.errors.StepSizeError` is raised on violation.
    """
    nsteps, h = step_grid(T, dt)
    record_every = max(1, int(record_every))
    sigma = np.array(sigma0, dtype=float)
    Om = omega(mode_count(sigma))
    times, covs = [0.0], [sigma.copy()]
    for k in range(1, nsteps + 1):
        k1 = rhs(sigma)
        k2 = rhs(sigma + 0.5 * h * k1)
        k3 = rhs(sigma + 0.5 * h * k2)
        k4 = rhs(sigma + h * k3)
        sigma = sigma + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        sigma = (sigma + sigma.T) / 2
        if not np.all(np.isfinite(sigma)):
            raise StepSizeError(f"covariance diverged at step {k} (dt = {h:.3g})")
        if check_tol is not None:
            lam = min_eig_plus_i_omega(sigma, Om)
            if lam < -check_tol * max(1.0, float(np.max(np.abs(sigma)))):
                raise StepSizeError(
                    f"step {k} left the physical set (min eigenvalue of σ + iΩ = "
                    f"{lam:.3e}); reduce dt = {h:.3g}"
                )
        if k % record_every == 0 or k == nsteps:
            times.append(k * h)
            covs.append(sigma.copy())
    return CovariancePath(np.array(times), np.array(covs))


def unconditional_path(
    state: GaussianState,
    dd: DriftDiffusion,
    T: float,
    dt: float,
    record_every: int = 1,
) -> CovariancePath:
    """Covariance path of the Lyapunov equation from ``state``."""
    if state.n != dd.n:
        raise DimensionError(f"{dd.n}-mode dynamics for a {state.n}-mode state")
    return integrate_rk4(lambda s: lyapunov_rhs(dd, s), state.cov, T, dt, record_every)


def evolve_unconditional(
    state: GaussianState, dd: DriftDiffusion, T: float, dt: float
) -> GaussianState:
    """Evolve ``state`` for a time ``T`` with fixed-step RK4.

    First moments follow the linear flow ``dr'/dt = A r'``, integrated with
    the same scheme.
    """
    path = unconditional_path(state, dd, T, dt, record_every=10**12)
    nsteps, h = step_grid(T, dt)
    r = np.array(state.mean)
    A = dd.A
    for _ in range(nsteps):
        k1 = A @ r
        k2 = A @ (r + 0.5 * h * k1)
        k3 = A @ (r + 0.5 * h * k2)
        k4 = A @ (r + h * k3)
        r = r + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return GaussianState(r, path.covs[-1])


def exact_propagator(dd: DriftDiffusion, t: float):
    """``(e^{At}, ∫₀ᵗ e^{As} D e^{Aᵀs} ds)`` via one block matrix exponential.

    Uses ``expm(t [[-A, D], [0, Aᵀ]])``, whose lower-right block is
    ``e^{Aᵀt}`` and whose upper-right block ``F`` gives the integral as
    ``e^{At} F``.
    """
    N = dd.A.shape[0]
    M = np.zeros((2 * N, 2 * N))
    M[:N, :N] = -dd.A
    M[:N, N:] = dd.D
    M[N:, N:] = dd.A.T
    E = expm(M * t)
    Phi = E[N:, N:].T
    Q = Phi @ E[:N, N:]
    return Phi, (Q + Q.T) / 2


def exact_evolution(state: GaussianState, dd: DriftDiffusion, t: float) -> GaussianState:
    """Closed-form solution of the moment equations at time ``t``."""
    Phi, Q = exact_propagator(dd, t)
    return GaussianState(Phi @ state.mean, Phi @ state.cov @ Phi.T + Q)


def check_hurwitz(A: np.ndarray, margin: float = HURWITZ_MARGIN) -> np.ndarray:
    """Return the eigenvalues of ``A``; raise if any has real part ``>= -margin``."""
    eig = np.linalg.eigvals(A)
    worst = float(np.max(eig.real))
    if worst >= -margin:
        raise InstabilityError(
            f"drift matrix is not Hurwitz (largest real part {worst:.3e}, "
            f"eigenvalues {np.round(eig, 12).tolist()}); no steady state exists"
        )
    return eig


def solve_lyapunov(A: np.ndarray, D: np.ndarray) -> np.ndarray:
    """Solve ``A σ + σ Aᵀ + D = 0`` through the Kronecker-sum linear system."""
    N = A.shape[0]
    eye = np.eye(N)
    # row-major vec: vec(Aσ) = (A ⊗ I) vec σ, vec(σAᵀ) = (I ⊗ A) vec σ
    L = np.kron(A, eye) + np.kron(eye, A)
    try:
        x = np.linalg.solve(L, -np.asarray(D, dtype=float).reshape(-1))
    except np.linalg.LinAlgError:
        raise SingularMatrixError("Lyapunov operator is singular") from None
    sigma = x.reshape(N, N)
    return (sigma + sigma.T) / 2


def steady_state_lyapunov(dd: DriftDiffusion, tol: float = DYNAMICS_TOL) -> np.ndarray:
    """Stationary covariance of the unconditional dynamics.

    Raises
    ------
    InstabilityError
        If ``A`` is not Hurwitz.
    CertificationError
        If the solution violates the uncertainty relation (inadmissible
        ``(A, D)``).
    """
    check_hurwitz(dd.A)
    sigma = solve_lyapunov(dd.A, dd.D)
    check = validate_state(GaussianState(np.zeros(2 * dd.n), sigma), tol)
    if not check:
        raise CertificationError(
            "stationary covariance violates σ + iΩ >= 0 "
            f"(min eigenvalue {check.min_eigenvalue:.3e})"
        )
    return sigma
