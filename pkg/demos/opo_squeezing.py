"""Squeezing of a degenerate parametric oscillator, with and without monitoring.

Run with ``python demos/opo_squeezing.py``. Prints the stationary ``x``
variance for unmonitored, ideally monitored and imperfectly monitored
oscillators as the pump approaches threshold.
"""

import numpy as np

from gaussdyn import MonitoredModel, build_opo, drift_diffusion, monitor_system, steady_state_riccati
from gaussdyn.dynamics import steady_state_lyapunov
from gaussdyn.measurements import DarkNoise, Efficiency
from gaussdyn.scenarios import opo_homodyne, opo_lossy, opo_unconditional


def main():
    gamma = 1.0
    print("χ/γ    unmonitored   ideal homodyne   η = 0.5      Δ = 1        (σ_xx)")
    for ratio in (0.0, 0.1, 0.25, 0.4, 0.45, 0.49):
        chi = ratio * gamma
        model = build_opo(chi, gamma)
        free = steady_state_lyapunov(drift_diffusion(model))[0, 0]
        ideal = steady_state_riccati(MonitoredModel(model, monitor_system("x", 1e-14)))[0, 0]
        lossy = steady_state_riccati(MonitoredModel(model, monitor_system("x", noise=Efficiency(0.5))))[0, 0]
        dark = steady_state_riccati(MonitoredModel(model, monitor_system("x", noise=DarkNoise(1.0))))[0, 0]
        print(f"{ratio:4.2f}   {free:11.6f}   {ideal:14.6f}   {lossy:10.6f}   {dark:10.6f}")

    chi = 0.25
    print("\nclosed forms at χ = 0.25γ:")
    print("  unconditional", np.diag(opo_unconditional(chi, gamma)))
    print("  homodyne     ", np.diag(opo_homodyne(chi, gamma)))
    print("  η = 0.5      ", np.diag(opo_lossy(chi, gamma, 0.5)))
    print("Monitoring pushes σ_xx to 1 − 2χ/γ, far below the unmonitored 1/(1 + 2χ/γ) limit of 1/2.")


if __name__ == "__main__":
    main()
