"""Fixed-particle-number fermion sectors on a finite lattice with spin 1/2.

Modes are ordered Jordan-Wigner style: sites ascending, spin ``+`` before
``-``, so mode(x, sigma) = 2x + (0 if sigma == "+" else 1).  A basis state
is an integer whose bit m is the occupation of mode m; the sector basis is
the ascending list of all integers with the required popcount.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

import numpy as np

SPINS = ("+", "-")


def mode_index(site, spin):
    if spin not in SPINS:
        raise ValueError(f"spin must be one of {SPINS}, got {spin!r}")
    return 2 * site + SPINS.index(spin)


@dataclass(frozen=True)
class FermionSector:
    """Antisymmetric N-electron sector over `num_sites` sites x 2 spins."""

    num_sites: int
    num_electrons: int
    basis: tuple = field(repr=False)

    @property
    def num_modes(self):
        return 2 * self.num_sites

    @property
    def dim(self):
        return len(self.basis)

    def index_of(self, state):
        return self._lookup()[state]

    @lru_cache(maxsize=None)
    def _lookup(self):
        return {s: i for i, s in enumerate(self.basis)}


def build_fermion_sector(num_sites, num_electrons):
    if num_sites < 1:
        raise ValueError("num_sites must be >= 1")
    if not 0 <= num_electrons <= 2 * num_sites:
        raise ValueError(
            f"num_electrons must lie in [0, {2 * num_sites}], got {num_electrons}"
        )
    nm = 2 * num_sites
    basis = tuple(s for s in range(1 << nm) if bin(s).count("1") == num_electrons)
    sector = FermionSector(num_sites, num_electrons, basis)
    assert sector.dim == comb(nm, num_electrons)
    return sector


def _jw_sign(state, mode):
    # parity of occupied modes strictly below `mode`
    mask = (1 << mode) - 1
    return -1.0 if bin(state & mask).count("1") % 2 else 1.0


def number_operator(sector, site, spin=None):
    """Diagonal matrix of n_{x,sigma}, or n_x = n_{x,+} + n_{x,-} if spin is None."""
    if not 0 <= site < sector.num_sites:
        raise ValueError(f"site {site} outside lattice of {sector.num_sites} sites")
    modes = [mode_index(site, s) for s in (SPINS if spin is None else (spin,))]
    diag = np.array(
        [sum((s >> m) & 1 for m in modes) for s in sector.basis], dtype=float
    )
    return np.diag(diag)


def hopping_operator(sector, x, y, spin):
    """Matrix of c^dagger_{x,spin} c_{y,spin} on the sector, with JW signs."""
    for site in (x, y):
        if not 0 <= site < sector.num_sites:
            raise ValueError(f"site {site} outside lattice of {sector.num_sites} sites")
    mx, my = mode_index(x, spin), mode_index(y, spin)
    A = np.zeros((sector.dim, sector.dim))
    for j, s in enumerate(sector.basis):
        if not (s >> my) & 1:
            continue
        sgn = _jw_sign(s, my)
        s1 = s & ~(1 << my)
        if (s1 >> mx) & 1:
            continue
        sgn *= _jw_sign(s1, mx)
        A[sector.index_of(s1 | (1 << mx)), j] = sgn
    return A


def full_space_creation_operators(num_sites):
    """Dense creation matrices on the full 4^num_sites Fock space (JW form).

    Internal scaffolding for CAR checks; sector physics never needs these.
    """
    nm = 2 * num_sites
    I2 = np.eye(2)
    Z = np.diag([1.0, -1.0])
    up = np.array([[0.0, 0.0], [1.0, 0.0]])
    ops = []
    for m in range(nm):
        # bit m of the state integer is factor m counted from the right
        factors = [I2] * (nm - m - 1) + [up] + [Z] * m
        M = np.eye(1)
        for f in factors:
            M = np.kron(M, f)
        ops.append(M)
    return ops
