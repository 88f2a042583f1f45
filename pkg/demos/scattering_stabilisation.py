"""Continuous monitoring halts the heating of an oscillator.

Position-coupled scattering makes the energy of a free oscillator grow
linearly in time; there is no unconditional steady state. Watching the
scattered light keeps the conditional state bounded and pure.
"""

import numpy as np

from gaussdyn import MonitoredModel, build_scattering, drift_diffusion, monitor_system, steady_state_riccati
from gaussdyn.dynamics import exact_evolution, steady_state_lyapunov
from gaussdyn.errors import InstabilityError
from gaussdyn.filtering import evolve_conditional_cov
from gaussdyn.states import vacuum


def main():
    model = build_scattering(omega=1.0, Gamma=0.1)
    dd = drift_diffusion(model)
    try:
        steady_state_lyapunov(dd)
    except InstabilityError as exc:
        print("unmonitored:", exc)

    mm = MonitoredModel(model, monitor_system("x"))
    path = evolve_conditional_cov(mm, np.eye(2), 40.0, 1e-2, record_every=1000)
    print("\n  t     Tr σ (unmonitored)   Tr σ (monitored)   det σ (monitored)")
    for t, cov in zip(path.times, path.covs):
        free = exact_evolution(vacuum(), dd, t).cov
        print(f"{t:5.1f}   {np.trace(free):18.4f}   {np.trace(cov):16.6f}   {np.linalg.det(cov):17.12f}")

    sigma = steady_state_riccati(mm)
    print("\nconditional steady state:\n", sigma)
    print("det σ =", np.linalg.det(sigma), "(pure)")


if __name__ == "__main__":
    main()
