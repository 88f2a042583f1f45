"""Quantum trajectories of a homodyne-monitored parametric oscillator.

Simulates an ensemble of conditional first moments and shows that the
conditional covariance plus the spread of the conditional means rebuilds
the unmonitored covariance.
"""

import numpy as np

from gaussdyn import (
    MonitoredModel,
    build_opo,
    drift_diffusion,
    ensemble_statistics,
    exact_evolution,
    monitor_system,
    simulate_ensemble,
    vacuum,
)


def main():
    model = build_opo(chi=0.25, gamma=1.0)
    mm = MonitoredModel(model, monitor_system("x"))
    records = simulate_ensemble(mm, vacuum(), 5.0, 1e-3, 2000, seed=7, record_every=1000)
    stats = ensemble_statistics(records)
    dd = drift_diffusion(model)

    print("one trajectory (t, x, p, current y_x):")
    for t, r, y in zip(records[0].times, records[0].means, records[0].current):
        print(f"  {t:4.1f}  {r[0]: .4f}  {r[1]: .4f}  {y[0]: .4f}")

    print("\n  t    σ_c,xx   2Var(x)   sum      σ_unc,xx")
    for k, t in enumerate(stats.times):
        sc = records[0].cov_snapshots[k][0, 0]
        spread = 2 * stats.cov[k][0, 0]
        unc = exact_evolution(vacuum(), dd, t).cov[0, 0]
        print(f"{t:4.1f}   {sc:.4f}   {spread:.4f}   {sc + spread:.4f}   {unc:.4f}")


if __name__ == "__main__":
    main()
