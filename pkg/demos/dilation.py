"""Every Gaussian channel is a symplectic transformation on a larger system.

Builds the dilation of a random channel, checks that it is symplectic and
that tracing out the vacuum environment reproduces the channel.
"""

import numpy as np

from gaussdyn import GaussianChannel, apply_channel, apply_via_dilation, dilate, thermal
from gaussdyn.channels import environment_output
from gaussdyn.symplectic import omega


def main():
    rng = np.random.default_rng(1)
    for name, ch in (
        ("pure loss η = 0.3", GaussianChannel.loss(0.3)),
        ("additive noise Δ = 0.5", GaussianChannel.additive_noise(0.5)),
    ):
        dil = dilate(ch)
        print(f"{name}: {dil.S.shape[0] // 2} modes in total, "
              f"symplectic residual {dil.symplectic_residual():.1e}")

    X = rng.normal(scale=0.7, size=(2, 2))
    Om = omega(1)
    K = 1j * (Om - X @ Om @ X.T)
    Y = np.abs(np.linalg.eigvalsh(K)).max() * np.eye(2) + 0.2 * np.eye(2)
    ch = GaussianChannel(X, Y)
    dil = dilate(ch)
    state = thermal(1, 0.4)
    print("\nrandom channel, X =\n", X)
    print("direct output σ:\n", apply_channel(ch, state).cov)
    print("via dilation σ:\n", apply_via_dilation(dil, state).cov)
    print("environment output σ:\n", environment_output(dil, state).cov)


if __name__ == "__main__":
    main()
