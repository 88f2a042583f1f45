"""Random physical objects shared by the test modules."""

import numpy as np
from scipy.linalg import expm

from gaussdyn.channels import GaussianChannel
from gaussdyn.states import GaussianState
from gaussdyn.symplectic import omega


def random_symplectic(n, rng, scale=0.6):
    H = rng.normal(scale=scale, size=(2 * n, 2 * n))
    return expm(omega(n) @ (H + H.T) / 2)


def random_state(n, rng, mean_scale=1.0, thermal=2.0):
    """``S diag(ν) Sᵀ`` with symplectic eigenvalues ν in [1, 1 + thermal]."""
    S = random_symplectic(n, rng)
    nu = 1.0 + thermal * rng.random(n)
    cov = S @ np.diag(np.repeat(nu, 2)) @ S.T
    return GaussianState(rng.normal(scale=mean_scale, size=2 * n), cov)


def abs_hermitian(K):
    """``|iK|`` for real antisymmetric ``K``: a real symmetric PSD matrix."""
    w, V = np.linalg.eigh(1j * K)
    out = (V * np.abs(w)) @ V.conj().T
    return np.real(out + out.conj().T) / 2


def random_channel(n, rng, extra_noise=0.5, x_scale=0.8):
    """Random CP channel: ``Y = |i(Ω - XΩXᵀ)| + extra PSD noise``."""
    X = rng.normal(scale=x_scale, size=(2 * n, 2 * n))
    Om = omega(n)
    Y = abs_hermitian(Om - X @ Om @ X.T)
    if extra_noise:
        G = rng.normal(scale=extra_noise, size=(2 * n, 2 * n))
        Y = Y + G @ G.T
    return GaussianChannel(X, (Y + Y.T) / 2)


def min_eig(sigma, antisym):
    herm = np.asarray(sigma, dtype=complex) + 1j * np.asarray(antisym)
    return float(np.linalg.eigvalsh((herm + herm.conj().T) / 2)[0])
