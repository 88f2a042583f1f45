import numpy as np
import pytest
from hypothesis import given, strategies as st

from gaussdyn.errors import DimensionError, NotPositiveError, PreconditionError
from gaussdyn.symplectic import (
    antisymmetric_canonical_form,
    is_symplectic,
    omega,
    psd_sqrt,
    symplectic_complete,
    symplectic_eigenvalues,
    xxpp_permutation,
)
from helpers import random_state, random_symplectic


def williamson_oracle(sigma):
    """Moduli of the eigenvalues of iΩσ from a general dense eigensolver."""
    n = sigma.shape[0] // 2
    ev = np.sort(np.abs(np.linalg.eigvals(1j * omega(n) @ sigma)))[::-1]
    return ev[::2]


def test_omega_one_mode():
    assert np.array_equal(omega(1), [[0, 1], [-1, 0]])


def test_omega_direct_sum_and_square():
    w = omega(1)
    assert np.array_equal(omega(2), np.block([[w, np.zeros((2, 2))], [np.zeros((2, 2)), w]]))
    assert np.array_equal(omega(3) @ omega(3), -np.eye(6))


def test_omega_is_read_only_and_rejects_bad_counts():
    with pytest.raises(ValueError):
        omega(2)[0, 0] = 1.0
    with pytest.raises(DimensionError):
        omega(0)


def test_xxpp_permutation_maps_to_block_form():
    P = xxpp_permutation(3)
    J = P @ omega(3) @ P.T
    I = np.eye(3)
    assert np.array_equal(J, np.block([[0 * I, I], [-I, 0 * I]]))


@pytest.mark.parametrize(
    "S, expected",
    [(np.eye(2), True), (np.diag([2.0, 0.5]), True), (2 * np.eye(2), False)],
)
def test_is_symplectic_examples(S, expected):
    assert is_symplectic(S) is expected


def test_symplectic_eigenvalues_examples():
    assert np.allclose(symplectic_eigenvalues(np.eye(4)), [1, 1])
    assert np.allclose(symplectic_eigenvalues(3 * np.eye(2)), [3])
    a, c = 5 / 3, 4 / 3
    Z = np.diag([1, -1])
    tmsv = np.block([[a * np.eye(2), c * Z], [c * Z, a * np.eye(2)]])
    nu = symplectic_eigenvalues(tmsv)
    assert np.allclose(nu, williamson_oracle(tmsv), atol=1e-12)
    assert np.allclose(nu, [1, 1], atol=1e-12)


def test_symplectic_eigenvalues_reject_non_positive():
    with pytest.raises(NotPositiveError):
        symplectic_eigenvalues(np.diag([1.0, -1.0]))


@given(st.integers(1, 3), st.integers(0, 2**31 - 1))
def test_symplectic_eigenvalues_match_oracle_and_congruence(n, seed):
    rng = np.random.default_rng(seed)
    sigma = random_state(n, rng).cov
    nu = symplectic_eigenvalues(sigma)
    assert np.allclose(nu, williamson_oracle(sigma), rtol=1e-8)
    S = random_symplectic(n, rng)
    assert np.allclose(symplectic_eigenvalues(S @ sigma @ S.T), nu, rtol=1e-7)
    assert np.all(nu >= 1 - 1e-9)


def test_canonical_form_of_omega_and_zero():
    form = antisymmetric_canonical_form(omega(1))
    assert np.allclose(form.d, [1.0])
    assert np.allclose(form.R @ omega(1) @ form.R.T, form.block())
    zero = antisymmetric_canonical_form(np.zeros((4, 4)))
    assert np.allclose(zero.d, [0, 0])
    assert np.allclose(zero.R @ zero.R.T, np.eye(4))


def test_canonical_form_against_svd_oracle():
    M = np.zeros((4, 4))
    M[:2, :2] = 0.7 * omega(1)
    form = antisymmetric_canonical_form(M)
    sv = np.linalg.svd(M, compute_uv=False)
    assert np.allclose(form.d, sv[::2], atol=1e-12)
    assert np.allclose(form.d, [0.7, 0.0], atol=1e-12)


@given(st.integers(1, 4), st.integers(0, 2**31 - 1))
def test_canonical_form_reconstructs(k, seed):
    rng = np.random.default_rng(seed)
    G = rng.normal(size=(2 * k, 2 * k))
    M = G - G.T
    form = antisymmetric_canonical_form(M)
    assert np.allclose(form.R @ form.R.T, np.eye(2 * k), atol=1e-10)
    assert np.allclose(form.R @ M @ form.R.T, form.block(), atol=1e-9)
    assert np.all(np.diff(form.d) <= 1e-12)
    assert np.allclose(form.d, np.linalg.svd(M, compute_uv=False)[::2], atol=1e-9)


def test_psd_sqrt_examples():
    assert np.allclose(psd_sqrt(4 * np.eye(2)), 2 * np.eye(2))
    assert np.allclose(psd_sqrt(np.zeros((2, 2))), 0)
    root = psd_sqrt(0.64 * np.eye(2))
    assert np.allclose(root, 0.8 * np.eye(2))
    assert np.allclose(root @ root, 0.64 * np.eye(2))
    with pytest.raises(NotPositiveError):
        psd_sqrt(np.diag([1.0, -0.1]))


def test_symplectic_complete_examples():
    V = np.eye(4)[:2]
    assert np.allclose(symplectic_complete(V), np.eye(4))
    assert np.array_equal(symplectic_complete(np.zeros((0, 6))), np.eye(6))
    with pytest.raises(PreconditionError):
        symplectic_complete(2 * np.eye(4)[:2])


@given(st.integers(2, 4), st.integers(1, 3), st.integers(0, 2**31 - 1))
def test_symplectic_complete_keeps_rows(N, s, seed):
    s = min(s, N - 1)
    rng = np.random.default_rng(seed)
    S = random_symplectic(N, rng)
    V = S[: 2 * s]
    out = symplectic_complete(V)
    assert np.array_equal(out[: 2 * s], V)
    assert is_symplectic(out, 1e-10 * max(1.0, np.max(np.abs(out)) ** 2))
