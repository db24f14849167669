"""Eigensystem pairing, matrix exponential, and principal-logarithm contracts."""

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from mpembasim.exceptions import (
    BranchCutError,
    DefectiveMatrixError,
    SingularInputError,
)
from mpembasim.numerics import eig_general, expm, logm_principal

PAIRING_TOL = 1e-10
RECONSTRUCTION_TOL = 1e-9


def random_matrix(rng, n=4, scale=1.0):
    return scale * (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))


def test_eig_identity():
    system = eig_general(np.eye(2))
    assert_allclose(system.eigenvalues, [1.0, 1.0])
    assert_allclose(system.left @ system.right, np.eye(2), atol=PAIRING_TOL)


def test_eig_diagonal_case():
    system = eig_general(np.diag([2.0, 3.0j]))
    assert_allclose(sorted(system.eigenvalues, key=lambda z: z.real), [3.0j, 2.0])


def test_left_right_pairing_is_biorthonormal():
    rng = np.random.default_rng(11)
    for _ in range(20):
        system = eig_general(random_matrix(rng))
        assert np.abs(system.left @ system.right - np.eye(4)).max() <= PAIRING_TOL


def test_eigensystem_rebuilds_the_matrix():
    rng = np.random.default_rng(12)
    for _ in range(20):
        a = random_matrix(rng)
        system = eig_general(a)
        rebuilt = system.right @ np.diag(system.eigenvalues) @ system.left
        assert np.abs(rebuilt - a).max() <= RECONSTRUCTION_TOL * np.abs(a).max()


def test_each_column_is_a_right_eigenvector():
    rng = np.random.default_rng(13)
    a = random_matrix(rng)
    system = eig_general(a)
    for k in range(4):
        v = system.right[:, k]
        assert np.abs(a @ v - system.eigenvalues[k] * v).max() <= 1e-9


def test_eigenvalues_match_reference_solver():
    rng = np.random.default_rng(14)
    a = random_matrix(rng)
    ours = np.sort_complex(eig_general(a).eigenvalues)
    reference = np.sort_complex(np.linalg.eigvals(a))
    assert_allclose(ours, reference, atol=1e-10)


def test_jordan_block_is_rejected():
    with pytest.raises(DefectiveMatrixError):
        eig_general(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_nonsquare_input_is_rejected():
    with pytest.raises(ValueError):
        eig_general(np.ones((2, 3)))


def test_nonfinite_input_is_rejected():
    with pytest.raises(ValueError):
        eig_general(np.array([[np.nan, 0.0], [0.0, 1.0]]))


def test_condition_estimate_is_reported():
    system = eig_general(np.diag([1.0, 2.0]))
    assert system.condition_estimate == pytest.approx(1.0, abs=1e-12)


def test_expm_zero_matrix():
    assert_allclose(expm(np.zeros((3, 3))), np.eye(3), atol=1e-14)


def test_expm_diagonal():
    assert_allclose(
        expm(np.diag([np.log(2.0), np.log(3.0)])), np.diag([2.0, 3.0]), atol=1e-12
    )


def test_expm_pauli_rotation():
    # exp(-i pi/2 sigma_x) = -i sigma_x
    sx = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    assert_allclose(expm(-0.5j * np.pi * sx), -1j * sx, atol=1e-12)


def test_logm_identity_is_zero():
    assert_allclose(logm_principal(np.eye(3)), np.zeros((3, 3)), atol=1e-13)


def test_logm_diagonal():
    assert_allclose(
        logm_principal(np.diag([np.e, np.e**2])), np.diag([1.0, 2.0]), atol=1e-12
    )


def test_logm_inverts_expm():
    rng = np.random.default_rng(15)
    for _ in range(10):
        b = random_matrix(rng, n=3, scale=0.4)
        assert np.abs(logm_principal(expm(b)) - b).max() <= 1e-10


def test_logm_rejects_singular_input():
    with pytest.raises(SingularInputError):
        logm_principal(np.diag([1.0, 1e-13]))


def test_logm_rejects_negative_real_eigenvalue():
    with pytest.raises(BranchCutError):
        logm_principal(np.diag([-1.0, 2.0]))
    with pytest.raises(BranchCutError):
        logm_principal(-np.eye(2))


finite_entries = st.floats(min_value=-0.5, max_value=0.5, allow_nan=False)


@settings(max_examples=50, deadline=None)
@given(st.lists(finite_entries, min_size=18, max_size=18))
def test_exp_log_round_trip(entries):
    """expm and logm_principal invert each other inside the principal strip."""
    flat = np.array(entries)
    b = (flat[:9] + 1j * flat[9:]).reshape(3, 3)
    m = expm(b)
    assert np.abs(expm(logm_principal(m)) - m).max() <= 1e-9
