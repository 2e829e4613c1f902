"""Electron-phonon dressing transform on truncated tensor-product spaces.

Builds S = sum_x n_x (x) phi(i lambda_x / omega), the unitary V = e^{i alpha S},
and the coupled Hamiltonian H = H_e (x) 1 + 1 (x) H_b + alpha H_I, then
certifies numerically that conjugating the free boson part by V reproduces the
interaction plus the density-density shift, that the coupled spectrum matches
the decoupled one, and that Gibbs expectations of A (x) W(f) factorize.

Every inner product in this module is the discrete sum over the sampled mode
set; mixing in continuum quadrature would inject spurious residuals into
identities that hold exactly per mode.
"""

from dataclasses import dataclass, field

import numpy as np

from .bosons import TruncatedBosonSpace
from .errors import ContractViolation
from .hubbard import build_hubbard_hamiltonian, site_number_operators
from .linalg import expm_hermitian, gibbs

DIMENSION_CAP = 20000


@dataclass(frozen=True)
class CoupledSystem:
    """Hubbard cluster coupled to a finite set of sampled phonon modes."""

    hubbard: object  # HubbardSystem
    frequencies: np.ndarray = field(repr=False)  # (M,) omega(k_j) > 0
    site_mode_couplings: np.ndarray = field(repr=False)  # (|sites|, M), weights included
    mu_b: float = 0.0

    def __post_init__(self):
        freqs = np.atleast_1d(np.asarray(self.frequencies, dtype=float))
        lam = np.asarray(self.site_mode_couplings, dtype=complex)
        if np.any(freqs <= 0):
            raise ValueError("sampled mode frequencies must be positive")
        if lam.shape != (self.hubbard.sector.num_sites, len(freqs)):
            raise ContractViolation(
                f"coupling array shape {lam.shape} does not match "
                f"({self.hubbard.sector.num_sites}, {len(freqs)})"
            )
        if not np.all(np.isfinite(lam)):
            raise ContractViolation("non-finite mode coupling")
        object.__setattr__(self, "frequencies", freqs)
        object.__setattr__(self, "site_mode_couplings", lam)

    @property
    def num_modes(self):
        return len(self.frequencies)

    def discrete_overlap(self, m):
        """Site matrix R_xy = Re <omega^m lambda_x, omega^m lambda_y> (discrete)."""
        w = self.frequencies ** (2.0 * m)
        lam = self.site_mode_couplings
        return np.real(np.conj(lam) * w @ lam.T)


def sample_modes(family, disp, box_size, coords):
    """Mode data (frequencies, weighted couplings) at lattice points (2pi/L)*coords.

    The weight is the square root of the cell volume, so discrete overlap sums
    are Riemann sums of the continuum inner products.
    """
    coords = np.atleast_2d(np.asarray(coords, dtype=float))
    spacing = 2.0 * np.pi / box_size
    momenta = coords * spacing
    norms = np.linalg.norm(momenta, axis=1)
    freqs = np.asarray(disp.omega(norms), dtype=float)
    weight = spacing ** (family.dimension / 2.0)
    lam = np.stack(
        [family.values(x, momenta) * weight for x in range(family.num_sites)], axis=0
    )
    return freqs, lam


def build_coupled_system(hubbard_sys, family, disp, box_size, coords, mu_b=0.0):
    freqs, lam = sample_modes(family, disp, box_size, coords)
    return CoupledSystem(hubbard_sys, freqs, lam, float(mu_b))


@dataclass(frozen=True)
class CoupledOperators:
    boson_space: TruncatedBosonSpace
    h_full: np.ndarray = field(repr=False)
    h_free: np.ndarray = field(repr=False)
    h_interaction: np.ndarray = field(repr=False)
    s_generator: np.ndarray = field(repr=False)
    v_dressing: np.ndarray = field(repr=False)
    h_electron: np.ndarray = field(repr=False)
    h_electron_dressed: np.ndarray = field(repr=False)
    h_boson: np.ndarray = field(repr=False)


def build_coupled_operators(sys, level_cap):
    """All dense operators on the fermion (x) boson space at the given cap."""
    sector = sys.hubbard.sector
    space = TruncatedBosonSpace(sys.frequencies, int(level_cap))
    if sector.dim * space.dim > DIMENSION_CAP:
        raise ContractViolation(
            f"tensor dimension {sector.dim * space.dim} exceeds cap {DIMENSION_CAP}"
        )
    ide = np.eye(sector.dim)
    idb = np.eye(space.dim)
    ns = site_number_operators(sector)
    h_e = build_hubbard_hamiltonian(sys.hubbard)
    h_b = space.free_hamiltonian(sys.mu_b)

    h_int = np.zeros((sector.dim * space.dim,) * 2, dtype=complex)
    s_gen = np.zeros_like(h_int)
    for x in range(sector.num_sites):
        lam = sys.site_mode_couplings[x]
        h_int += np.kron(ns[x], space.segal_field(lam))
        s_gen += np.kron(ns[x], space.segal_field(1j * lam / sys.frequencies))

    alpha = sys.hubbard.coupling
    h_free = np.kron(h_e, idb) + np.kron(ide, h_b)
    h_full = h_free + alpha * h_int
    v = expm_hermitian(s_gen, prefactor=1j * alpha)
    # density-density shift: the conjugation identity closes with alpha^2/2
    # times the m = -1/2 overlap form under this field convention
    shift = density_shift_operator(sys)
    h_e_dressed = h_e - 0.5 * alpha**2 * shift
    return CoupledOperators(space, h_full, h_free, h_int, s_gen, v, h_e, h_e_dressed, h_b)


def density_shift_operator(sys):
    """sum_{x,y} Re<omega^{-1/2} lambda_x, omega^{-1/2} lambda_y> n_x n_y."""
    R = sys.discrete_overlap(-0.5)
    ns = site_number_operators(sys.hubbard.sector)
    diag = sum(
        R[x, y] * np.diag(ns[x]) * np.diag(ns[y])
        for x in range(len(ns))
        for y in range(len(ns))
    )
    return np.diag(diag)


def _interior_projector(space, level_cap):
    """Boolean mask of tensor basis states with every occupation <= cap/2."""
    occ = space.occupations()
    return np.all(occ <= level_cap // 2, axis=1)


def _restricted_residual(lhs, rhs, fermion_dim, space, level_cap):
    mask_b = _interior_projector(space, level_cap)
    mask = np.repeat(np.ones(fermion_dim, dtype=bool), space.dim) & np.tile(mask_b, fermion_dim)
    diff = (lhs - rhs)[np.ix_(mask, mask)]
    ref = rhs[np.ix_(mask, mask)]
    return float(np.linalg.norm(diff) / max(np.linalg.norm(ref), 1e-300))


@dataclass(frozen=True)
class DressingReport:
    level_caps: tuple
    residuals: tuple
    monotone: bool

    @property
    def final_residual(self):
        return self.residuals[-1]


def verify_dressing_identity(sys, level_caps):
    """Residual of V (1 (x) H_b) V^{-1} = 1 (x) H_b + alpha H_I + (alpha^2/2) R (x) 1.

    The residual is the relative Frobenius norm restricted to boson occupations
    at most cap/2 (the truncation edge of a displaced ladder is always wrong),
    and must be monotone nonincreasing along the cap ladder.
    """
    residuals = []
    for cap in level_caps:
        ops = build_coupled_operators(sys, cap)
        sector_dim = sys.hubbard.sector.dim
        idb = np.eye(ops.boson_space.dim)
        alpha = sys.hubbard.coupling
        lhs = ops.v_dressing @ np.kron(np.eye(sector_dim), ops.h_boson) @ ops.v_dressing.conj().T
        rhs = (
            np.kron(np.eye(sector_dim), ops.h_boson)
            + alpha * ops.h_interaction
            + 0.5 * alpha**2 * np.kron(density_shift_operator(sys), idb)
        )
        residuals.append(_restricted_residual(lhs, rhs, sector_dim, ops.boson_space, cap))
    monotone = all(b <= a * (1.0 + 1e-12) + 1e-15 for a, b in zip(residuals, residuals[1:]))
    return DressingReport(tuple(level_caps), tuple(residuals), monotone)


@dataclass(frozen=True)
class SpectralReport:
    coupled: np.ndarray = field(repr=False)
    decoupled: np.ndarray = field(repr=False)
    gaps: np.ndarray = field(repr=False)

    @property
    def max_gap(self):
        return float(np.abs(self.gaps).max())


def verify_spectral_equivalence(sys, level_cap, num_levels=5):
    """Compare low-lying spectra of H_full and H_e_dressed (x) 1 + 1 (x) H_b."""
    ops = build_coupled_operators(sys, level_cap)
    sector_dim = sys.hubbard.sector.dim
    h_dec = np.kron(ops.h_electron_dressed, np.eye(ops.boson_space.dim)) + np.kron(
        np.eye(sector_dim), ops.h_boson
    )
    ev_full = np.linalg.eigvalsh(ops.h_full)[:num_levels]
    ev_dec = np.linalg.eigvalsh(h_dec)[:num_levels]
    return SpectralReport(ev_full, ev_dec, ev_full - ev_dec)


def discrete_phase_weights(sys, f_modes):
    """w_x = Re <omega^{-1/2} f, omega^{-1/2} lambda_x> over the sampled modes."""
    f_modes = np.asarray(f_modes, dtype=complex)
    if f_modes.shape != (sys.num_modes,):
        raise ContractViolation(
            f"test vector has shape {f_modes.shape}, expected ({sys.num_modes},)"
        )
    return np.real(sys.site_mode_couplings @ (np.conj(f_modes) / sys.frequencies))


def density_phase_matrix(sys, f_modes, sign=-1.0):
    """Diagonal sector matrix exp(i sign alpha n_tilde(f)) with discrete weights.

    The conjugation convention fixed by the dressing identity pairs the Weyl
    factor with the minus sign; the plus sign is exposed for comparison runs.
    """
    w = discrete_phase_weights(sys, f_modes)
    ns = site_number_operators(sys.hubbard.sector)
    n_tilde = sum(wx * np.diag(nx) for wx, nx in zip(w, ns))
    return np.diag(np.exp(1j * sign * sys.hubbard.coupling * n_tilde))


@dataclass(frozen=True)
class FactorizationResult:
    lhs: complex
    rhs: complex

    @property
    def gap(self):
        return abs(self.lhs - self.rhs)


def verify_factorization(sys, level_cap, electron_op, f_modes):
    """Gibbs expectation of A (x) W(f) against its dressed product form.

    lhs = Tr[(A (x) W(f)) e^{-beta H}]/Z; rhs pairs the electron factor with
    the density phase and the free boson Weyl value.
    """
    ops = build_coupled_operators(sys, level_cap)
    beta = sys.hubbard.inverse_temperature
    A = np.asarray(electron_op, dtype=complex)
    W = ops.boson_space.weyl(np.asarray(f_modes, dtype=complex))

    rho_full, _ = gibbs(ops.h_full, beta)
    lhs = complex(np.trace(np.kron(A, W) @ rho_full))

    rho_e, _ = gibbs(ops.h_electron_dressed, beta)
    rho_b, _ = gibbs(ops.h_boson, beta)
    phase = density_phase_matrix(sys, f_modes)
    rhs = complex(np.trace(phase @ A @ rho_e)) * complex(np.trace(W @ rho_b))
    return FactorizationResult(lhs, rhs)


@dataclass(frozen=True)
class FactorizationLadder:
    level_caps: tuple
    gaps: tuple
    monotone: bool

    @property
    def final_gap(self):
        return self.gaps[-1]


def factorization_ladder(sys, level_caps, electron_op, f_modes):
    gaps = [verify_factorization(sys, cap, electron_op, f_modes).gap for cap in level_caps]
    monotone = all(b <= a * (1.0 + 1e-12) + 1e-15 for a, b in zip(gaps, gaps[1:]))
    return FactorizationLadder(tuple(level_caps), tuple(gaps), monotone)


def time_invariance_gap(sys, level_cap, observable, t):
    """|Tr[e^{itH} X e^{-itH} rho] - Tr[X rho]| for the coupled Gibbs state.

    Exact by trace cyclicity at any truncation; the finite-volume counterpart
    of stationarity of the factorized state.
    """
    ops = build_coupled_operators(sys, level_cap)
    beta = sys.hubbard.inverse_temperature
    rho, _ = gibbs(ops.h_full, beta)
    u = expm_hermitian(ops.h_full, prefactor=1j * t)
    X = np.asarray(observable, dtype=complex)
    moved = complex(np.trace(u @ X @ u.conj().T @ rho))
    still = complex(np.trace(X @ rho))
    return abs(moved - still)
