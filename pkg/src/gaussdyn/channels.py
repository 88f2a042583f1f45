"""Deterministic Gaussian CP-maps acting on moments as ``σ -> XσXᵀ + Y``."""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .diagnostics import Validation
from .errors import (
    DimensionError,
    InvalidChannelError,
    SingularMatrixError,
)
from .states import GaussianState, partial_trace, tensor, vacuum
from .symplectic import (
    antisymmetric_canonical_form,
    check_symmetric,
    min_eig_plus_i_omega,
    mode_count,
    omega,
    symplectic_complete,
)

CHANNEL_TOL = 1e-9
#: canonical values d_j in (1, 1 + ARCSIN_SLACK] are treated as round-off
ARCSIN_SLACK = 1e-8


@dataclass(frozen=True, eq=False)
class GaussianChannel:
    X: np.ndarray
    Y: np.ndarray

    def __post_init__(self):
        Y = check_symmetric(self.Y, 1e-9, "Y")
        mode_count(Y)
        X = np.asarray(self.X, dtype=float)
        if X.shape != Y.shape:
            raise DimensionError(f"X has shape {X.shape}, Y has shape {Y.shape}")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", (Y + Y.T) / 2)

    @property
    def n(self) -> int:
        return self.X.shape[0] // 2

    @classmethod
    def identity(cls, n: int = 1) -> "GaussianChannel":
        return cls(np.eye(2 * n), np.zeros((2 * n, 2 * n)))

    @classmethod
    def loss(cls, eta: float, n: int = 1) -> "GaussianChannel":
        """Pure loss with transmissivity ``eta``."""
        if not 0 <= eta <= 1:
            raise ValueError(f"transmissivity must lie in [0, 1], got {eta}")
        return cls(np.sqrt(eta) * np.eye(2 * n), (1 - eta) * np.eye(2 * n))

    @classmethod
    def additive_noise(cls, delta: float, n: int = 1) -> "GaussianChannel":
        if delta < 0:
            raise ValueError(f"added noise must be non-negative, got {delta}")
        return cls(np.eye(2 * n), delta * np.eye(2 * n))


def validate_channel(ch: GaussianChannel, tol: float = CHANNEL_TOL) -> Validation:
    """Check ``Y + iΩ - iXΩXᵀ >= 0`` (relative to the size of the entries)."""
    Om = omega(ch.n)
    lam = min_eig_plus_i_omega(ch.Y, Om - ch.X @ Om @ ch.X.T)
    scale = max(1.0, float(np.max(np.abs(ch.Y))), float(np.max(np.abs(ch.X))) ** 2)
    return Validation(lam >= -tol * scale, lam, "Y + iΩ - iXΩXᵀ >= 0")


def _require_valid(ch: GaussianChannel, tol: float = CHANNEL_TOL):
    check = validate_channel(ch, tol)
    if not check:
        raise InvalidChannelError(
            f"channel violates Y + iΩ >= iXΩXᵀ (min eigenvalue {check.min_eigenvalue:.3e})"
        )


def apply_channel(ch: GaussianChannel, state: GaussianState, check: bool = True) -> GaussianState:
    """Map ``(r', σ) -> (X r', X σ Xᵀ + Y)``.

    ``check=False`` skips the CP test, e.g. to push moments through a dual map.
    """
    if ch.n != state.n:
        raise DimensionError(f"{ch.n}-mode channel applied to {state.n}-mode state")
    if check:
        _require_valid(ch)
    return GaussianState(ch.X @ state.mean, ch.X @ state.cov @ ch.X.T + ch.Y)


def compose(ch2: GaussianChannel, ch1: GaussianChannel) -> GaussianChannel:
    """The channel ``ch2 ∘ ch1`` (``ch1`` acts first)."""
    if ch1.n != ch2.n:
        raise DimensionError("channels act on different numbers of modes")
    return GaussianChannel(ch2.X @ ch1.X, ch2.X @ ch1.Y @ ch2.X.T + ch2.Y)


def dual_channel(ch: GaussianChannel, max_cond: float = 1e12) -> Tuple[GaussianChannel, float]:
    """Moment action of the dual map and its trace factor.

    Returns ``(GaussianChannel(X⁻¹, X⁻¹ Y X⁻ᵀ), 1 / |det X|)``. The dual sends
    a normalised Gaussian state to ``trace_factor`` times the Gaussian with
    the returned moments.

    Raises
    ------
    SingularMatrixError
        If ``X`` is singular or too badly conditioned; the dual has no
        ``(X*, Y*)`` parametrisation then.
    """
    cond = np.linalg.cond(ch.X)
    if not np.isfinite(cond) or cond > max_cond:
        raise SingularMatrixError(
            f"X is singular (condition number {cond:.3e}); dual map undefined"
        )
    X_inv = np.linalg.inv(ch.X)
    dual = GaussianChannel(X_inv, X_inv @ ch.Y @ X_inv.T)
    return dual, 1.0 / abs(np.linalg.det(ch.X))


@dataclass(frozen=True, eq=False)
class Dilation:
    """Symplectic ``S`` on system (n modes) plus a 2n-mode vacuum environment.

    Rows of ``S`` are ordered system first; ``S[:2n, :2n]`` is the channel's
    ``X`` and ``B = S[:2n, 2n:]`` satisfies ``B Bᵀ = Y`` (up to the
    regularisation ``epsilon`` when ``Y`` was singular).
    """

    S: np.ndarray
    n: int
    epsilon: float = 0.0

    @property
    def env_cov(self) -> np.ndarray:
        return np.eye(4 * self.n)

    @property
    def X(self) -> np.ndarray:
        return self.S[: 2 * self.n, : 2 * self.n]

    @property
    def B(self) -> np.ndarray:
        return self.S[: 2 * self.n, 2 * self.n :]

    def symplectic_residual(self) -> float:
        Om = omega(3 * self.n)
        return float(np.max(np.abs(self.S @ Om @ self.S.T - Om)))


def _inverse_sqrt_pair(Y: np.ndarray):
    w, V = np.linalg.eigh(Y)
    root = (V * np.sqrt(w)) @ V.T
    inv_root = (V / np.sqrt(w)) @ V.T
    return (root + root.T) / 2, (inv_root + inv_root.T) / 2


def _canonical_block_rows(d: np.ndarray) -> np.ndarray:
    """Rows realising ``[[0, D], [-D, 0]]`` from ``Ω`` on 2n environment modes.

    Row ``j`` and row ``n + j`` live on environment modes ``2j, 2j+1`` and
    have symplectic product ``sin 2θ_j = d_j``.
    """
    n = len(d)
    theta = 0.5 * np.arcsin(d)
    c, s = np.cos(theta), np.sin(theta)
    O = np.zeros((2 * n, 4 * n))
    for j in range(n):
        # (x_a, p_a, x_b, p_b) of the two environment modes
        xa, pa, xb, pb = 4 * j, 4 * j + 1, 4 * j + 2, 4 * j + 3
        O[j, xa], O[j, pb] = c[j], -s[j]
        O[n + j, xb], O[n + j, pa] = c[j], s[j]
    return O


def dilate(ch: GaussianChannel, epsilon: float = 1e-10, tol: float = CHANNEL_TOL) -> Dilation:
    """Build a symplectic dilation of ``ch`` with a vacuum environment of 2n modes.

    Steps: regularise ``Y`` to ``Y + εI`` if it is not safely positive
    definite; bring ``M = Y^{-1/2}(Ω - XΩXᵀ)Y^{-1/2}`` to canonical form
    ``R M Rᵀ = [[0, D], [-D, 0]]``; pick ``O = Rᵀ O_c`` with orthonormal rows
    such that ``O Ω Oᵀ = M``; set ``B = Y^{1/2} O``; and complete the rows
    ``(X  B)`` to a symplectic matrix.

    Raises
    ------
    InvalidChannelError
        If some ``d_j`` exceeds one by more than round-off, i.e. the channel
        is not completely positive.
    """
    _require_valid(ch, tol)
    n = ch.n
    Om = omega(n)
    Y = ch.Y
    eps_used = 0.0
    lowest = np.linalg.eigvalsh(Y)[0]
    if lowest < epsilon:
        # a tolerated negative eigenvalue must not survive the shift
        eps_used = epsilon + max(0.0, -lowest)
        Y = Y + eps_used * np.eye(2 * n)
    root, inv_root = _inverse_sqrt_pair(Y)
    M = inv_root @ (Om - ch.X @ Om @ ch.X.T) @ inv_root
    form = antisymmetric_canonical_form((M - M.T) / 2, tol=1e-6)
    if form.d[0] > 1 + ARCSIN_SLACK:
        raise InvalidChannelError(
            f"canonical value {form.d[0]:.12g} exceeds 1: channel is not CP"
        )
    d = np.clip(form.d, 0.0, 1.0)
    O = form.R.T @ _canonical_block_rows(d)
    B = root @ O
    S = symplectic_complete(np.hstack([ch.X, B]), tol=1e-6)
    return Dilation(S, n, eps_used)


def apply_via_dilation(dil: Dilation, state: GaussianState) -> GaussianState:
    """Evolve ``state ⊗ vacuum`` by ``S`` and trace out the environment."""
    if state.n != dil.n:
        raise DimensionError(f"{dil.n}-mode dilation applied to {state.n}-mode state")
    joint = tensor(state, vacuum(2 * dil.n))
    S = dil.S
    evolved = GaussianState(S @ joint.mean, S @ joint.cov @ S.T)
    return partial_trace(evolved, range(dil.n))


def environment_output(dil: Dilation, state: GaussianState) -> GaussianState:
    """Reduced state of the 2n environment modes after the interaction."""
    joint = tensor(state, vacuum(2 * dil.n))
    S = dil.S
    evolved = GaussianState(S @ joint.mean, S @ joint.cov @ S.T)
    return partial_trace(evolved, range(dil.n, 3 * dil.n))
