"""Gaussian unitaries: symplectic evolutions and Weyl displacements."""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.linalg import expm

from .errors import DimensionError, NotSymplecticError
from .states import GaussianState
from .symplectic import check_symmetric, is_symplectic, mode_count, omega


@dataclass(frozen=True, eq=False)
class QuadraticHamiltonian:
    """``H = ½ r̂ᵀ H r̂ + r̂ᵀ r_H``."""

    H: np.ndarray
    r_H: Optional[np.ndarray] = None

    def __post_init__(self):
        H = check_symmetric(self.H, 1e-9, "Hamiltonian matrix")
        n = mode_count(H)
        r_H = np.zeros(2 * n) if self.r_H is None else np.asarray(self.r_H, float)
        if r_H.shape != (2 * n,):
            raise DimensionError("linear term has the wrong length")
        object.__setattr__(self, "H", H)
        object.__setattr__(self, "r_H", r_H)


def symplectic_from_hamiltonian(H: np.ndarray, t: float = 1.0) -> np.ndarray:
    """Heisenberg propagator ``exp(Ω H t)`` of a quadratic Hamiltonian matrix."""
    if isinstance(H, QuadraticHamiltonian):
        H = H.H
    H = check_symmetric(H, 1e-9, "Hamiltonian matrix")
    n = mode_count(H)
    return expm(omega(n) @ H * t)


def apply_symplectic(state: GaussianState, S: np.ndarray, tol: float = 1e-9) -> GaussianState:
    S = np.asarray(S, dtype=float)
    if S.shape != state.cov.shape:
        raise DimensionError(f"symplectic matrix of shape {S.shape} on {state.n} mode(s)")
    scale = max(1.0, float(np.max(np.abs(S))) ** 2)
    if not is_symplectic(S, tol * scale):
        raise NotSymplecticError("matrix does not preserve the symplectic form")
    return GaussianState(S @ state.mean, S @ state.cov @ S.T)


def displace(state: GaussianState, r_t: Sequence[float]) -> GaussianState:
    r_t = np.asarray(r_t, dtype=float).reshape(-1)
    if r_t.shape != state.mean.shape:
        raise DimensionError(f"displacement of length {r_t.size} on {state.n} mode(s)")
    return GaussianState(state.mean + r_t, state.cov)


def apply_unitary(state: GaussianState, S: np.ndarray, r_t: Sequence[float]) -> GaussianState:
    """Generic Gaussian unitary: the symplectic ``S`` followed by displacement ``r_t``."""
    return displace(apply_symplectic(state, S), r_t)
