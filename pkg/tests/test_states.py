import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import dblquad

from gaussdyn.errors import DimensionError, NotSymmetricError, UnphysicalError
from gaussdyn.states import (
    GaussianState,
    characteristic_function,
    coherent,
    overlap,
    partial_trace,
    purity,
    require_valid,
    squeezed_vacuum,
    tensor,
    thermal,
    two_mode_squeezed_vacuum,
    vacuum,
    validate_state,
)
from helpers import random_state


def overlap_oracle(s1, s2):
    """Tr[ρ1ρ2] = (2π)⁻¹ ∫ χ1(r) χ2(-r) d²r for one mode, by quadrature."""
    f = lambda y, x: np.real(  # noqa: E731
        characteristic_function(s1, [x, y]) * characteristic_function(s2, [-x, -y])
    )
    val, _ = dblquad(f, -12, 12, -12, 12, epsabs=1e-12)
    return val / (2 * np.pi)


def test_validate_state_examples():
    assert validate_state(vacuum())
    bad = validate_state(GaussianState([0, 0], np.diag([0.5, 0.5])))
    assert not bad
    assert bad.min_eigenvalue == pytest.approx(-0.5, abs=1e-12)
    assert "uncertainty" in bad.constraint
    assert validate_state(squeezed_vacuum(0.25))


def test_validation_is_relative_for_strong_squeezing():
    assert validate_state(squeezed_vacuum(1e-12))


def test_require_valid_raises_with_category():
    with pytest.raises(UnphysicalError) as info:
        require_valid(GaussianState([0, 0], np.diag([0.5, 0.5])))
    assert info.value.category == "uncertainty-relation"


def test_construction_checks_shape_and_symmetry():
    with pytest.raises(DimensionError):
        GaussianState([0, 0, 0], np.eye(2))
    with pytest.raises(NotSymmetricError):
        GaussianState([0, 0], [[1, 0.5], [0, 1]])
    with pytest.raises(DimensionError):
        GaussianState([0], [[1.0]])


def test_state_arrays_are_read_only():
    s = vacuum()
    with pytest.raises(ValueError):
        s.cov[0, 0] = 2.0


def test_purity_examples():
    assert purity(vacuum()) == pytest.approx(1.0)
    assert purity(thermal(1, 1.0)) == pytest.approx(1 / 3)
    assert purity(GaussianState([0, 0], np.diag([0.2, 5.0]))) == pytest.approx(1.0)
    with pytest.raises(UnphysicalError):
        purity(GaussianState([0, 0], np.diag([0.5, 0.5])))


def test_characteristic_function_examples():
    rng = np.random.default_rng(1)
    s = random_state(2, rng)
    assert characteristic_function(s, np.zeros(4)) == pytest.approx(1.0)
    assert characteristic_function(vacuum(), [2, 0]) == pytest.approx(np.exp(-1))
    # exp(-rᵀΩᵀσΩr/4) exp(i rᵀΩᵀ r'): with r' = (1, 0), r = (0, 1) the phase is +1
    value = characteristic_function(coherent(1, [1, 0]), [0, 1])
    assert value == pytest.approx(np.exp(-0.25 + 1j))


def test_overlap_examples():
    assert overlap(vacuum(), vacuum()) == pytest.approx(1.0)
    assert overlap(thermal(1, 1.0), thermal(1, 1.0)) == pytest.approx(1 / 3)
    displaced = coherent(1, [2, 0])
    assert overlap(vacuum(), displaced) == pytest.approx(np.exp(-2))
    assert overlap_oracle(vacuum(), displaced) == pytest.approx(np.exp(-2), rel=1e-8)


def test_overlap_matches_quadrature_oracle():
    rng = np.random.default_rng(7)
    s1, s2 = random_state(1, rng, thermal=0.5), random_state(1, rng, thermal=0.5)
    assert overlap(s1, s2) == pytest.approx(overlap_oracle(s1, s2), rel=1e-7)


@given(st.integers(1, 3), st.integers(0, 2**31 - 1))
def test_purity_equals_self_overlap(n, seed):
    s = random_state(n, np.random.default_rng(seed))
    assert overlap(s, s) == pytest.approx(purity(s), rel=1e-9)


def test_partial_trace_examples():
    joint = tensor(vacuum(), thermal(1, 2.0))
    assert partial_trace(joint, [0]).allclose(vacuum())
    tm = two_mode_squeezed_vacuum(5 / 3)
    assert np.allclose(partial_trace(tm, [0]).cov, (5 / 3) * np.eye(2))
    assert partial_trace(tm, [0, 1]).allclose(tm)
    swapped = partial_trace(tm, [1, 0])
    assert np.allclose(swapped.cov[:2, 2:], tm.cov[2:, :2])
    with pytest.raises(DimensionError):
        partial_trace(tm, [2])
    with pytest.raises(DimensionError):
        partial_trace(tm, [0, 0])


def test_tensor_examples():
    assert tensor(vacuum(), vacuum()).allclose(vacuum(2))
    rng = np.random.default_rng(3)
    a, b = random_state(1, rng), random_state(2, rng)
    assert purity(tensor(a, b)) == pytest.approx(purity(a) * purity(b))
    assert partial_trace(tensor(a, b), [0]).allclose(a)


def test_constructors():
    assert thermal(1, 0).allclose(vacuum(1))
    assert squeezed_vacuum(1).allclose(vacuum(1))
    assert purity(thermal(1, 1)) == pytest.approx(1 / 3)
    assert np.allclose(coherent(1, [1, 2]).mean, [1, 2])
    with pytest.raises(ValueError):
        thermal(1, -1)
    with pytest.raises(ValueError):
        squeezed_vacuum(0)
    assert validate_state(two_mode_squeezed_vacuum(5 / 3))
    assert purity(two_mode_squeezed_vacuum(5 / 3)) == pytest.approx(1.0)
