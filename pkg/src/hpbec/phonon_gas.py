"""Bose gas mode sums and continuum densities for a radial dispersion.

Finite-volume quantities are sums over the truncated lattice mode set; the
continuum density rho_fr and the critical density are radial integrals of the
Bose factor 1/(y e^{beta F(k)} - 1).
"""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .dispersion import sphere_area
from .errors import InfraredDivergence


@dataclass(frozen=True)
class BosonNumberRecord:
    """Decomposition of the finite-volume expected boson number."""

    total: float          # N_b_L
    condensate: float     # N_b_0 = N_i / (y - 1)
    infrared: float       # N_ir (dressing-induced, supplied externally)
    excited: float        # N_b_L_1 = r_bL + R_bL
    interior: float       # r_bL: modes with every coordinate nonzero
    boundary: float       # R_bL: nonzero modes with some coordinate zero


def boson_number_finite(modes, disp, beta, y, n_ir=0.0):
    """Exact finite-volume number decomposition at fugacity parameter y > 1."""
    if y <= 1.0:
        raise ValueError("y must exceed 1 (the k = 0 Bose factor has a pole at y = 1)")
    if n_ir < 0:
        raise ValueError("infrared number must be nonnegative")
    n_i = modes.num_internal
    norms = modes.norms()
    gaps = np.asarray(disp.gap(norms), dtype=float)
    # written with e^{-beta F} so deeply gapped modes underflow instead of overflowing
    w = np.exp(-beta * gaps) / y
    bose = n_i * w / (1.0 - w)
    interior = float(bose[modes.all_nonzero_mask()].sum())
    boundary = float(bose[modes.boundary_mask()].sum())
    condensate = n_i / (y - 1.0)
    excited = interior + boundary
    return BosonNumberRecord(
        total=condensate + n_ir + excited,
        condensate=condensate,
        infrared=float(n_ir),
        excited=excited,
        interior=interior,
        boundary=boundary,
    )


def lattice_density(modes, disp, beta, y, n_ir=0.0):
    """f_L(y): the finite-volume density entering the fugacity equation."""
    rec = boson_number_finite(modes, disp, beta, y, n_ir)
    return rec.total / modes.box_size**modes.dimension


def lattice_density_derivative(modes, disp, beta, y):
    """d f_L / dy, analytic (the n_ir term is y-independent)."""
    n_i = modes.num_internal
    gaps = np.asarray(disp.gap(modes.norms()[~modes.zero_mask()]), dtype=float)
    e = np.exp(beta * gaps)
    deriv = -n_i / (y - 1.0) ** 2 - n_i * float((e / np.square(y * e - 1.0)).sum())
    return deriv / modes.box_size**modes.dimension


def _check_critical_integrable(disp):
    if disp.dimension - disp.infrared_exponent() <= 0:
        raise InfraredDivergence(
            "Bose integral diverges at y = 1: the inverse gap is not integrable "
            f"near k = 0 in dimension {disp.dimension}"
        )


def rho_fr(disp, beta, y, num_internal=1):
    """Continuum free-gas density N_i (2pi)^{-d} integral of the Bose factor."""
    if y < 1.0:
        raise ValueError("y must be >= 1")
    if y == 1.0:
        _check_critical_integrable(disp)
    d = disp.dimension
    integrand = lambda k: k ** (d - 1) / (y * np.exp(beta * disp.gap(k)) - 1.0)
    split = disp.gap_inverse(1.0 / beta)
    hi = disp.gap_inverse(60.0 / beta)
    low, _ = quad(integrand, 0.0, split, limit=300, epsabs=1e-12)
    high, _ = quad(integrand, split, hi, limit=300, epsabs=1e-12)
    return num_internal * sphere_area(d) / (2.0 * np.pi) ** d * (low + high)


def rho_crit(disp, beta, num_internal=1):
    """Critical density: the free-gas density at y = 1."""
    return rho_fr(disp, beta, 1.0, num_internal)


@dataclass(frozen=True)
class CharacteristicRecord:
    i1: float
    i2: float
    i_total: float
    weyl_value: float


def finite_volume_characteristic(modes, f, y, beta, disp):
    """Finite-volume Weyl quadratic form I_L(f) = I1 + I2 and exp(-I_L/4).

    I1 carries the zero mode with the condensate factor (y+1)/(y-1); I2 sums
    the remaining modes with cell volume (2pi/L)^d.
    """
    if y <= 1.0:
        raise ValueError("y must exceed 1")
    cell = modes.cell_volume()
    i1 = cell * abs(f.zero_mode) ** 2 * (y + 1.0) / (y - 1.0)
    off = ~modes.zero_mask()
    momenta = modes.momenta[off]
    gaps = np.asarray(disp.gap(np.linalg.norm(momenta, axis=1)), dtype=float)
    e = np.exp(beta * gaps)
    vals = np.abs(f.values(momenta)) ** 2
    i2 = cell * float((vals * (y * e + 1.0) / (y * e - 1.0)).sum())
    total = i1 + i2
    return CharacteristicRecord(float(i1), float(i2), float(total), float(np.exp(-total / 4.0)))
