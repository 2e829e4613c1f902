"""Truncated multimode bosonic Fock spaces with ladder, field and Weyl operators.

The truncation caps the occupation of each mode at `level_cap` (per-mode, not
total), so the space is a tensor product of (level_cap + 1)-dimensional
oscillators.  The annihilation functional is antilinear in its argument,
a(f) = sum_j conj(f_j) a_j, and the Segal field is
phi(f) = (a(f) + a^dagger(f)) / sqrt(2).
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ContractViolation
from .linalg import expm_hermitian


@dataclass(frozen=True)
class TruncatedBosonSpace:
    """Tensor product of `num_modes` oscillators truncated at `level_cap` quanta."""

    frequencies: np.ndarray = field(repr=False)
    level_cap: int

    def __post_init__(self):
        freqs = np.atleast_1d(np.asarray(self.frequencies, dtype=float))
        if np.any(freqs < 0):
            raise ValueError("mode frequencies must be nonnegative")
        if self.level_cap < 1:
            raise ValueError("level_cap must be >= 1")
        object.__setattr__(self, "frequencies", freqs)

    @property
    def num_modes(self):
        return len(self.frequencies)

    @property
    def dim(self):
        return (self.level_cap + 1) ** self.num_modes

    def lowering(self, j):
        """Annihilation matrix a_j on the full truncated space."""
        n1 = self.level_cap + 1
        a1 = np.diag(np.sqrt(np.arange(1.0, n1)), 1)
        M = np.eye(1)
        for m in range(self.num_modes):
            M = np.kron(M, a1 if m == j else np.eye(n1))
        return M

    def raising(self, j):
        return self.lowering(j).conj().T

    def occupations(self):
        """(dim, num_modes) integer array of per-mode occupation numbers."""
        n1 = self.level_cap + 1
        idx = np.arange(self.dim)
        occ = np.empty((self.dim, self.num_modes), dtype=int)
        for m in range(self.num_modes - 1, -1, -1):
            occ[:, m] = idx % n1
            idx = idx // n1
        return occ

    def number_operator(self):
        return np.diag(self.occupations().sum(axis=1).astype(float))

    def free_hamiltonian(self, chemical_potential=0.0):
        """dGamma(omega - mu) = sum_j (omega_j - mu) a_j^dagger a_j (diagonal)."""
        occ = self.occupations()
        return np.diag(occ @ (self.frequencies - chemical_potential))

    def annihilator(self, f):
        f = self._check_vector(f)
        return sum(np.conj(fj) * self.lowering(j) for j, fj in enumerate(f))

    def segal_field(self, f):
        """phi(f) = (a(f) + a^dagger(f)) / sqrt(2), Hermitian."""
        a = self.annihilator(f)
        return (a + a.conj().T) / np.sqrt(2.0)

    def weyl(self, f):
        """W(f) = exp(i phi(f))."""
        return expm_hermitian(self.segal_field(f), prefactor=1j)

    def vacuum(self):
        v = np.zeros(self.dim)
        v[0] = 1.0
        return v

    def _check_vector(self, f):
        f = np.atleast_1d(np.asarray(f, dtype=complex))
        if f.shape != (self.num_modes,):
            raise ContractViolation(
                f"mode vector has shape {f.shape}, expected ({self.num_modes},)"
            )
        return f


def build_truncated_boson_space(frequencies, level_cap):
    return TruncatedBosonSpace(np.asarray(frequencies, dtype=float), int(level_cap))
