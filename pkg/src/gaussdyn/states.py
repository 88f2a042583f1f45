"""Gaussian states described by first moments and covariance matrix.

Covariances follow the anticommutator convention
``σ_jk = <{r_j - r'_j, r_k - r'_k}>``, in which the vacuum has ``σ = I``.
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .diagnostics import Validation
from .errors import DimensionError, UnphysicalError
from .symplectic import check_symmetric, min_eig_plus_i_omega, mode_count, omega

#: default tolerance on the smallest eigenvalue of σ + iΩ
STATE_TOL = 1e-9


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class GaussianState:
    """First-moment vector ``mean`` and covariance matrix ``cov`` of n modes.

    Construction checks shapes and symmetry only; use :func:`validate_state`
    for the uncertainty relation. This keeps the class usable for the
    unnormalised Gaussian operators produced by dual maps.
    """

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        cov = check_symmetric(self.cov, 1e-9, "covariance matrix")
        n = mode_count(cov)
        mean = np.asarray(self.mean, dtype=float).reshape(-1)
        if mean.shape != (2 * n,):
            raise DimensionError(
                f"mean has length {mean.size}, expected {2 * n} for {n} mode(s)"
            )
        object.__setattr__(self, "mean", _frozen(mean))
        object.__setattr__(self, "cov", _frozen((cov + cov.T) / 2))

    @property
    def n(self) -> int:
        return self.cov.shape[0] // 2

    def __repr__(self) -> str:
        return f"GaussianState(n={self.n}, mean={self.mean.tolist()}, cov={self.cov.tolist()})"

    def allclose(self, other: "GaussianState", atol: float = 1e-10) -> bool:
        return (
            self.n == other.n
            and np.allclose(self.mean, other.mean, rtol=0, atol=atol)
            and np.allclose(self.cov, other.cov, rtol=0, atol=atol)
        )


def vacuum(n: int = 1) -> GaussianState:
    return GaussianState(np.zeros(2 * n), np.eye(2 * n))


def thermal(n: int = 1, n_th: float = 0.0) -> GaussianState:
    """Thermal state with mean photon number ``n_th`` in every mode."""
    if n_th < 0:
        raise ValueError(f"n_th must be non-negative, got {n_th}")
    return GaussianState(np.zeros(2 * n), (2 * n_th + 1) * np.eye(2 * n))


def coherent(n: int, mean: Sequence[float]) -> GaussianState:
    return GaussianState(mean, np.eye(2 * n))


def squeezed_vacuum(z: float) -> GaussianState:
    """Single-mode squeezed vacuum with covariance ``diag(z, 1/z)``."""
    if not z > 0:
        raise ValueError(f"squeezing parameter must be positive, got {z}")
    return GaussianState(np.zeros(2), np.diag([z, 1.0 / z]))


def two_mode_squeezed_vacuum(cosh2r: float) -> GaussianState:
    """Two-mode squeezed vacuum; ``cosh2r`` is cosh of twice the squeezing."""
    if cosh2r < 1:
        raise ValueError("cosh(2r) must be at least 1")
    a = cosh2r
    c = np.sqrt(a * a - 1.0)
    Z = np.diag([1.0, -1.0])
    cov = np.block([[a * np.eye(2), c * Z], [c * Z, a * np.eye(2)]])
    return GaussianState(np.zeros(4), cov)


def validate_state(state: GaussianState, tol: float = STATE_TOL) -> Validation:
    """Check the uncertainty relation ``σ + iΩ >= 0``.

    ``tol`` is relative to ``max(1, max|σ|)`` so that strongly squeezed
    states are not rejected because of round-off in the eigensolver.
    """
    cov = state.cov
    lam = min_eig_plus_i_omega(cov, omega(state.n))
    scale = max(1.0, float(np.max(np.abs(cov))))
    ok = bool(np.all(np.isfinite(cov))) and lam >= -tol * scale
    return Validation(ok, lam, "uncertainty relation σ + iΩ >= 0")


def require_valid(state: GaussianState, tol: float = STATE_TOL) -> GaussianState:
    check = validate_state(state, tol)
    if not check:
        raise UnphysicalError(
            "state violates the uncertainty relation σ + iΩ >= 0 "
            f"(min eigenvalue {check.min_eigenvalue:.3e})"
        )
    return state


def purity(state: GaussianState, tol: float = STATE_TOL) -> float:
    """``Tr ρ² = 1 / sqrt(det σ)``."""
    det = float(np.linalg.det(state.cov))
    if det < 1 - tol:
        raise UnphysicalError(f"det σ = {det:.6g} < 1: not a physical state")
    return 1.0 / np.sqrt(det)


def characteristic_function(state: GaussianState, r: Sequence[float]) -> complex:
    """Symmetrically ordered characteristic function at phase-space point ``r``."""
    r = np.asarray(r, dtype=float).reshape(-1)
    if r.shape != state.mean.shape:
        raise DimensionError(f"point has length {r.size}, expected {state.mean.size}")
    w = omega(state.n) @ r
    return complex(np.exp(-0.25 * w @ state.cov @ w + 1j * w @ state.mean))


def overlap(s1: GaussianState, s2: GaussianState) -> float:
    """Hilbert-Schmidt overlap ``Tr[ρ1 ρ2]`` of two Gaussian operators.

    ``2ⁿ exp(-δᵀ (σ1+σ2)⁻¹ δ) / sqrt(det(σ1+σ2))`` with ``δ`` the difference
    of first moments.
    """
    if s1.n != s2.n:
        raise DimensionError(f"mode counts differ: {s1.n} vs {s2.n}")
    total = s1.cov + s2.cov
    delta = s1.mean - s2.mean
    try:
        L = np.linalg.cholesky(total)
    except np.linalg.LinAlgError:
        raise np.linalg.LinAlgError("σ1 + σ2 is not positive definite") from None
    z = np.linalg.solve(L, delta)
    log_det = 2.0 * np.sum(np.log(np.diag(L)))
    return float(np.exp(s1.n * np.log(2.0) - z @ z - 0.5 * log_det))


def _mode_indices(modes: Sequence[int], n: int) -> np.ndarray:
    modes = [int(k) for k in modes]
    if not modes:
        raise DimensionError("mode subset is empty")
    if len(set(modes)) != len(modes):
        raise DimensionError(f"duplicate modes in {modes}")
    bad = [k for k in modes if not 0 <= k < n]
    if bad:
        raise DimensionError(f"mode indices {bad} out of range for {n} mode(s)")
    return np.ravel([[2 * k, 2 * k + 1] for k in modes])


def partial_trace(state: GaussianState, keep: Sequence[int]) -> GaussianState:
    """Reduced state on the modes ``keep`` (0-based, in the order given)."""
    idx = _mode_indices(keep, state.n)
    return GaussianState(state.mean[idx], state.cov[np.ix_(idx, idx)])


def tensor(s1: GaussianState, s2: GaussianState) -> GaussianState:
    n1, n2 = 2 * s1.n, 2 * s2.n
    cov = np.zeros((n1 + n2, n1 + n2))
    cov[:n1, :n1] = s1.cov
    cov[n1:, n1:] = s2.cov
    return GaussianState(np.concatenate([s1.mean, s2.mean]), cov)
