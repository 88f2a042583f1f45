"""Named physical models and their closed-form steady states.

Two presets are provided:

* a degenerate parametric oscillator, ``H_s = -χ(xp + px)/2``, damped at
  rate ``γ`` into a thermal bath with ``n_th`` photons through a
  beam-splitter coupling ``C = √γ I``;
* scattering-induced diffusion of a harmonic oscillator of frequency ``ω``
  coupled to a vacuum bath through ``√(2Γ) x x_in``.

Measurement naming: :func:`gaussdyn.measurements.homodyne` names the *bath*
quadrature that is measured. For both presets the bath quadrature ``p_in``
carries the information on the system quadrature ``x``, so monitoring of
the system's ``x`` is ``homodyne(quadrature="p")``; :func:`monitor_system`
encodes this.
"""

from typing import Dict, Optional

import numpy as np

from .dynamics import DiffusiveModel, drift_diffusion, steady_state_lyapunov
from .errors import PreconditionError
from .filtering import MonitoredModel, steady_state_riccati
from .measurements import (
    DEFAULT_HOMODYNE_S,
    DarkNoise,
    Efficiency,
    GeneralDyneMeasurement,
    homodyne,
)


def build_opo(chi: float, gamma: float, n_th: float = 0.0) -> DiffusiveModel:
    """Parametric oscillator with drift ``diag(-χ-γ/2, χ-γ/2)`` and diffusion ``γ(2n_th+1) I``."""
    if not gamma > 0:
        raise ValueError(f"damping rate must be positive, got {gamma}")
    if n_th < 0:
        raise ValueError(f"thermal occupation must be non-negative, got {n_th}")
    H_s = -chi * np.array([[0.0, 1.0], [1.0, 0.0]])
    C = np.sqrt(gamma) * np.eye(2)
    return DiffusiveModel(H_s, C, (2 * n_th + 1) * np.eye(2))


def opo_stable(chi: float, gamma: float) -> bool:
    """Whether the unmonitored oscillator has a steady state (``|χ| < γ/2``)."""
    return abs(chi) < gamma / 2


def build_scattering(omega: float, Gamma: float) -> DiffusiveModel:
    """Oscillator ``ω(x² + p²)/2`` heated through ``√(2Γ) x x_in`` by a vacuum bath."""
    if Gamma < 0:
        raise ValueError(f"scattering rate must be non-negative, got {Gamma}")
    C = np.array([[np.sqrt(2 * Gamma), 0.0], [0.0, 0.0]])
    return DiffusiveModel(omega * np.eye(2), C, np.eye(2))


def monitor_system(
    quadrature: str = "x", s: float = DEFAULT_HOMODYNE_S, noise=None
) -> GeneralDyneMeasurement:
    """Bath homodyne that monitors the system ``quadrature`` of either preset."""
    bath = {"x": "p", "p": "x"}.get(quadrature)
    if bath is None:
        raise ValueError(f"quadrature must be 'x' or 'p', got {quadrature!r}")
    return homodyne(1, bath, s, noise)


def _scalar_riccati_root(a: float, d: float, b2: float) -> float:
    """Positive root of ``2a x + d - b² x² = 0`` (``-d / 2a`` when ``b = 0``)."""
    if b2 == 0:
        return -d / (2 * a)
    return (a + np.sqrt(a * a + b2 * d)) / b2


def opo_unconditional(chi: float, gamma: float, n_th: float = 0.0) -> np.ndarray:
    """``(2n_th+1) diag(1/(1+2χ/γ), 1/(1-2χ/γ))``."""
    _require_stable(chi, gamma)
    k = 2 * chi / gamma
    return (2 * n_th + 1) * np.diag([1 / (1 + k), 1 / (1 - k)])


def opo_homodyne(chi: float, gamma: float, n_th: float = 0.0) -> np.ndarray:
    """Ideal homodyne monitoring of ``x``: ``diag((γ-2χ)(2n+1)/γ, γ(2n+1)/(γ-2χ))``."""
    _require_stable(chi, gamma)
    f = 2 * n_th + 1
    return np.diag([(gamma - 2 * chi) * f / gamma, gamma * f / (gamma - 2 * chi)])


def opo_lossy(chi: float, gamma: float, eta: float, n_th: float = 0.0) -> np.ndarray:
    """Homodyne monitoring of ``x`` with efficiency ``eta``.

    At zero temperature this is the textbook closed form; otherwise the
    ``xx`` entry is the root of the scalar Riccati equation built from the
    diagonal filter coefficients for lossy detection.
    """
    _require_stable(chi, gamma)
    if not 0 <= eta <= 1:
        raise ValueError(f"efficiency must lie in [0, 1], got {eta}")
    p = gamma * (2 * n_th + 1) / (gamma - 2 * chi)
    if n_th == 0 and eta > 0:
        x = (
            gamma * (2 * eta - 1)
            - 2 * chi
            + np.sqrt((gamma + 2 * chi) ** 2 - 8 * eta * gamma * chi)
        ) / (2 * eta * gamma)
        return np.diag([x, p])
    f = 2 * n_th + 1
    g = eta * 2 * n_th + 1
    a = -chi - gamma / 2 + eta * gamma * f / g
    d = gamma * f - eta * gamma * f * f / g
    return np.diag([_scalar_riccati_root(a, d, eta * gamma / g), p])


def opo_dark_noise(chi: float, gamma: float, delta: float, n_th: float = 0.0) -> np.ndarray:
    """Homodyne monitoring of ``x`` with additive detector noise ``delta``.

    The zero-temperature closed form is evaluated with denominator ``2γ``;
    ``n_th > 0`` goes through the scalar Riccati root like :func:`opo_lossy`.
    """
    _require_stable(chi, gamma)
    if delta < 0:
        raise ValueError(f"added noise must be non-negative, got {delta}")
    p = gamma * (2 * n_th + 1) / (gamma - 2 * chi)
    if n_th == 0:
        x = (
            gamma * (1 - delta)
            - 2 * chi * (1 + delta)
            + np.sqrt(4 * gamma**2 * delta + (gamma * (delta - 1) + 2 * chi * (1 + delta)) ** 2)
        ) / (2 * gamma)
        return np.diag([x, p])
    f = 2 * n_th + 1
    a = -chi - gamma / 2 + gamma * f / (f + delta)
    d = gamma * f - gamma * f * f / (f + delta)
    return np.diag([_scalar_riccati_root(a, d, gamma / (f + delta)), p])


def _require_stable(chi: float, gamma: float):
    if not gamma > 0:
        raise ValueError(f"damping rate must be positive, got {gamma}")
    if not opo_stable(chi, gamma):
        raise PreconditionError(
            f"χ = {chi} is outside the stable region |χ| < γ/2 = {gamma / 2}"
        )


def reference_steady_states(
    chi: float,
    gamma: float,
    n_th: float = 0.0,
    eta: Optional[float] = None,
    delta: Optional[float] = None,
) -> Dict[str, np.ndarray]:
    """Closed-form oscillator steady states keyed by monitoring scheme.

    Always contains ``"unconditional"`` and ``"homodyne"``; ``"lossy"`` and
    ``"dark_noise"`` are added when ``eta`` or ``delta`` is given.
    """
    out = {
        "unconditional": opo_unconditional(chi, gamma, n_th),
        "homodyne": opo_homodyne(chi, gamma, n_th),
    }
    if eta is not None:
        out["lossy"] = opo_lossy(chi, gamma, eta, n_th)
    if delta is not None:
        out["dark_noise"] = opo_dark_noise(chi, gamma, delta, n_th)
    return out


def numerical_steady_states(
    chi: float,
    gamma: float,
    n_th: float = 0.0,
    eta: Optional[float] = None,
    delta: Optional[float] = None,
    s: float = 1e-14,
) -> Dict[str, np.ndarray]:
    """The quantities of :func:`reference_steady_states` from the generic solvers.

    ``s`` is the squeezing of the finite homodyne; the default is far below
    the library default so that the finite-squeezing bias stays at round-off
    level.
    """
    model = build_opo(chi, gamma, n_th)
    out = {
        "unconditional": steady_state_lyapunov(drift_diffusion(model)),
        "homodyne": steady_state_riccati(MonitoredModel(model, monitor_system("x", s))),
    }
    if eta is not None:
        mm = MonitoredModel(model, monitor_system("x", s, Efficiency(eta)) if eta > 0 else None)
        out["lossy"] = steady_state_riccati(mm)
    if delta is not None:
        out["dark_noise"] = steady_state_riccati(
            MonitoredModel(model, monitor_system("x", s, DarkNoise(delta)))
        )
    return out


def cross_validate(
    chi: float,
    gamma: float,
    n_th: float = 0.0,
    eta: Optional[float] = None,
    delta: Optional[float] = None,
) -> Dict[str, float]:
    """Max-norm gap between each closed form and its numerical counterpart."""
    ref = reference_steady_states(chi, gamma, n_th, eta, delta)
    num = numerical_steady_states(chi, gamma, n_th, eta, delta)
    return {key: float(np.max(np.abs(ref[key] - num[key]))) for key in ref}
