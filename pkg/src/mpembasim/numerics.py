"""Dense complex linear algebra for non-Hermitian spectral work.

The routines here wrap LAPACK (via scipy) behind a small contract tailored to
Liouville-space work: eigensystems always come back with a biorthonormal
left/right pairing, and matrix logarithms always take the principal branch or
refuse loudly.  Matrices are plain ``numpy.ndarray`` of ``complex128`` in
row-major order; everything is a pure function of its inputs.

The scipy ``eig(..., left=True)`` output is deliberately not used: LAPACK does
not guarantee that the left and right vectors it returns are paired mode by
mode when eigenvalues repeat.  Inverting the right eigenvector matrix gives a
left system that is biorthonormal by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .exceptions import (
    BranchCutError,
    DefectiveMatrixError,
    NonConvergenceError,
    SingularInputError,
)

#: max |L R - I| accepted before a matrix is declared numerically defective
BIORTHONORMALITY_TOL = 1e-10

#: max scaled |R diag(lambda) L - A| before the eigensystem is rejected
RECONSTRUCTION_TOL = 1e-9

#: eigenvalue magnitude below which a principal log is refused
SINGULARITY_TOL = 1e-12

#: relative distance from the negative real axis that trips the branch-cut guard
BRANCH_TOL = 1e-13


def _as_square(a: np.ndarray, name: str) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite entries")
    return a


@dataclass(frozen=True)
class EigenSystem:
    """Spectral data of a general (possibly non-Hermitian) matrix.

    Attributes
    ----------
    eigenvalues:
        Shape ``(n,)``, in the order returned by the QR iteration.
    right:
        Shape ``(n, n)``; column ``k`` is the right eigenvector of
        ``eigenvalues[k]``.
    left:
        Shape ``(n, n)``; row ``k`` is the matching left eigenvector, scaled so
        ``left @ right == I``.
    condition_estimate:
        2-norm condition number of the right eigenvector matrix.
    """

    eigenvalues: np.ndarray
    right: np.ndarray
    left: np.ndarray
    condition_estimate: float


def eig_general(a: np.ndarray) -> EigenSystem:
    """Full eigensystem of a general complex matrix with paired left vectors.

    Raises
    ------
    NonConvergenceError
        If the QR iteration fails.
    DefectiveMatrixError
        If the right eigenvector matrix is too ill conditioned to produce a
        biorthonormal left system (Jordan-block inputs land here).
    """
    a = _as_square(a, "a")
    try:
        values, right = scipy.linalg.eig(a)
    except (scipy.linalg.LinAlgError, np.linalg.LinAlgError) as exc:
        raise NonConvergenceError(f"eigenvalue iteration failed: {exc}") from exc

    try:
        left = np.linalg.inv(right)
    except np.linalg.LinAlgError as exc:
        raise DefectiveMatrixError(
            "right eigenvectors are linearly dependent; matrix appears defective"
        ) from exc

    residual = float(np.max(np.abs(left @ right - np.eye(a.shape[0]))))
    if residual > BIORTHONORMALITY_TOL:
        raise DefectiveMatrixError(
            f"biorthonormality residual {residual:.3e} exceeds {BIORTHONORMALITY_TOL}"
        )
    # A defective matrix can sneak past the pairing check (inv of a nearly
    # singular eigenvector matrix may still invert cleanly in floating point)
    # but its eigenvectors cannot rebuild the input.
    scale = max(1.0, float(np.max(np.abs(a))))
    rebuilt = float(np.max(np.abs(right @ (values[:, None] * left) - a)))
    if rebuilt > RECONSTRUCTION_TOL * scale:
        raise DefectiveMatrixError(
            f"eigensystem rebuilds the input only to {rebuilt:.3e}; "
            "matrix appears defective"
        )
    condition = float(np.linalg.cond(right))
    return EigenSystem(values, right, left, condition)


def expm(a: np.ndarray) -> np.ndarray:
    """Matrix exponential via scaling-and-squaring with Pade approximants."""
    return scipy.linalg.expm(_as_square(a, "a"))


def logm_principal(a: np.ndarray) -> np.ndarray:
    """Principal matrix logarithm through the eigendecomposition.

    Every eigenvalue must stay clear of zero and of the negative real axis;
    otherwise the principal branch is ill defined for the intended use
    (extracting a relaxation generator from a channel transfer matrix) and the
    caller should shrink the channel delay instead.

    Raises
    ------
    SingularInputError
        If any ``|eigenvalue| < 1e-12``.
    BranchCutError
        If any eigenvalue sits on the closed negative real axis.
    DefectiveMatrixError, NonConvergenceError
        Propagated from :func:`eig_general`.
    """
    a = _as_square(a, "a")
    system = eig_general(a)
    values = system.eigenvalues
    magnitudes = np.abs(values)
    if np.any(magnitudes < SINGULARITY_TOL):
        worst = float(magnitudes.min())
        raise SingularInputError(
            f"eigenvalue magnitude {worst:.3e} below {SINGULARITY_TOL}; "
            "matrix logarithm is singular"
        )
    on_cut = (values.real < 0.0) & (
        np.abs(values.imag) <= BRANCH_TOL * np.maximum(1.0, magnitudes)
    )
    if np.any(on_cut):
        raise BranchCutError(
            "eigenvalue on the negative real axis; principal logarithm is ambiguous"
        )
    log_values = np.log(values)
    return system.right @ np.diag(log_values) @ system.left
