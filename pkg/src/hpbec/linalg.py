"""Dense Hermitian matrix calculus: hermiticity checks, exponentials, Gibbs states.

All exponentials go through the Hermitian eigendecomposition; spectra are
needed for Gibbs weights anyway and the resulting unitaries are exactly
unitary up to roundoff.
"""

import numpy as np

from .errors import ContractViolation

HERMITICITY_TOL = 1e-12


def as_matrix(A):
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ContractViolation(f"expected a square matrix, got shape {A.shape}")
    return A


def hermiticity_defect(A):
    """Max-norm of A - A^dagger relative to the max-norm of A."""
    A = as_matrix(A)
    scale = np.abs(A).max()
    if scale == 0.0:
        return 0.0
    return np.abs(A - A.conj().T).max() / scale


def require_hermitian(A, tol=HERMITICITY_TOL):
    A = as_matrix(A)
    defect = hermiticity_defect(A)
    if defect > tol:
        raise ContractViolation(f"matrix is not Hermitian: relative defect {defect:.3e} > {tol:.1e}")
    return A


def expm_hermitian(A, prefactor=1.0):
    """exp(prefactor * A) for Hermitian A via eigendecomposition.

    `prefactor` may be complex (e.g. 1j*t for a unitary propagator).
    """
    A = require_hermitian(A)
    w, V = np.linalg.eigh(A)
    return (V * np.exp(prefactor * w)) @ V.conj().T


def unitary_defect(U):
    """Frobenius norm of U^dagger U - 1."""
    U = as_matrix(U)
    return np.linalg.norm(U.conj().T @ U - np.eye(U.shape[0]))


def gibbs(H, beta):
    """Gibbs density matrix and partition function for Hermitian H.

    Returns (rho, Z) with rho = exp(-beta H)/Z and Z = Tr exp(-beta H).
    Weights are computed with the spectrum shifted by its minimum, so the
    normalized rho is overflow-safe; Z is reported unshifted.
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    H = require_hermitian(H)
    w, V = np.linalg.eigh(H)
    shifted = np.exp(-beta * (w - w.min()))
    with np.errstate(over="ignore"):
        # Z itself may overflow to inf for deeply negative spectra; rho stays finite
        Z = shifted.sum() * np.exp(-beta * w.min())
    rho = (V * (shifted / shifted.sum())) @ V.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return rho, Z


def gibbs_expectation(H, A, beta):
    """Tr[A exp(-beta H)] / Tr[exp(-beta H)] for Hermitian H."""
    rho, _ = gibbs(H, beta)
    A = as_matrix(A)
    if A.shape != rho.shape:
        raise ContractViolation("operator dimension does not match the Hamiltonian")
    val = np.trace(A @ rho)
    return complex(val)
