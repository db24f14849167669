"""Qubit operators, Bloch helpers, and the unit conventions shared by all modules.

Conventions
-----------
* Frequencies in kHz, times in ms (so ``1 kHz * 1 ms = 1``), temperatures as
  ``k_B T / h`` in kHz.
* Hamiltonian matrices are kept in angular units (rad/ms): a qubit with gap
  frequency ``nu`` along ``sigma_z`` is ``H = -2 pi nu sigma_z``.  Dynamics use
  these matrices directly; thermodynamic energies divide the 2 pi back out and
  are reported in h*kHz, i.e. ``mean_energy = Tr(H rho) / (2 pi)``.
* Basis ordering: index 0 is the ground state of ``-2 pi nu sigma_z`` (the
  ``sigma_z = +1`` eigenstate).
"""

from __future__ import annotations

import numpy as np

TWO_PI = 2.0 * np.pi

IDENTITY = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

PAULIS = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}

# Columns are the sigma_x eigenstates |x+>, |x->; maps z-basis coordinates to
# the x eigenbasis and back (the matrix is its own inverse).
X_EIGENBASIS = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / np.sqrt(2.0)


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def hermitize(a: np.ndarray) -> np.ndarray:
    """Project onto the Hermitian part, (a + a^dag)/2."""
    return 0.5 * (a + a.conj().T)


def qubit_hamiltonian(nu_khz: float, axis: str = "z") -> np.ndarray:
    """Angular-units qubit Hamiltonian ``-2 pi nu sigma_axis``.

    Parameters
    ----------
    nu_khz:
        Gap frequency in kHz.  The level splitting is ``2 nu`` in h*kHz.
    axis:
        One of ``"x"``, ``"y"``, ``"z"``.
    """
    try:
        pauli = PAULIS[axis]
    except KeyError:
        raise ValueError(f"unknown axis {axis!r}, expected one of 'x', 'y', 'z'") from None
    return -TWO_PI * float(nu_khz) * pauli


def rotation_y(theta: float) -> np.ndarray:
    """``exp(-i theta sigma_y / 2)``, a real rotation of the Bloch sphere about y."""
    half = 0.5 * float(theta)
    return np.array(
        [[np.cos(half), -np.sin(half)], [np.sin(half), np.cos(half)]], dtype=complex
    )


def mean_energy(rho: np.ndarray, hamiltonian: np.ndarray) -> float:
    """Mean energy ``Tr(H rho)`` converted from angular units to h*kHz."""
    return float(np.trace(hamiltonian @ rho).real / TWO_PI)


def bloch_vector(rho: np.ndarray) -> np.ndarray:
    """Cartesian Bloch components ``(Tr(sigma_x rho), Tr(sigma_y rho), Tr(sigma_z rho))``."""
    return np.array(
        [float(np.trace(p @ rho).real) for p in (SIGMA_X, SIGMA_Y, SIGMA_Z)]
    )


def density_from_bloch(r: np.ndarray) -> np.ndarray:
    """Qubit state from a Bloch vector with ``|r| <= 1``."""
    r = np.asarray(r, dtype=float)
    if r.shape != (3,):
        raise ValueError("Bloch vector must have exactly three components")
    norm = float(np.linalg.norm(r))
    if norm > 1.0 + 1e-12:
        raise ValueError(f"Bloch vector norm {norm} exceeds 1")
    return 0.5 * (IDENTITY + r[0] * SIGMA_X + r[1] * SIGMA_Y + r[2] * SIGMA_Z)


def validate_density_matrix(
    rho: np.ndarray,
    *,
    herm_tol: float = 1e-12,
    trace_tol: float = 1e-12,
    psd_tol: float = 1e-10,
) -> np.ndarray:
    """Check Hermiticity, unit trace, and positivity; return ``rho`` unchanged.

    Raises ``ValueError`` naming the violated constraint.  ``psd_tol`` bounds
    how negative an eigenvalue may drift before the state is rejected.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {rho.shape}")
    herm_dev = float(np.max(np.abs(rho - rho.conj().T)))
    if herm_dev > herm_tol:
        raise ValueError(f"state is not Hermitian: max deviation {herm_dev:.3e}")
    trace_dev = abs(np.trace(rho) - 1.0)
    if trace_dev > trace_tol:
        raise ValueError(f"state trace deviates from 1 by {trace_dev:.3e}")
    smallest = float(np.linalg.eigvalsh(hermitize(rho)).min())
    if smallest < -psd_tol:
        raise ValueError(f"state has negative eigenvalue {smallest:.3e}")
    return rho
