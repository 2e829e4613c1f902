"""Fugacity equation, phase classification, condensate sequences, and the
critical temperature for the finite/continuum Bose gas.

The fugacity equation rho_target = f_L(y) has a unique root on (1, infinity)
because f_L is a strictly decreasing continuous bijection onto
(rho_ir, infinity); the solver brackets it with the proof bound on y - 1 and
polishes with Newton steps using the analytic derivative.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import phonon_gas
from .errors import BracketError, UnsolvableDensity
from .lattice import build_lattice_modes

RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class FugacitySolution:
    box_size: float
    y: float
    residual: float
    bracket_bound: float
    target_density: float
    infrared_density: float


def fugacity_bracket_bound(modes, target_density, infrared_density):
    """Upper bound on y_L - 1: [N_i/(rho - rho_ir)] L^{-d} (1 + sum e^{-beta F})."""
    vol = modes.box_size**modes.dimension
    return (
        modes.num_internal
        / (target_density - infrared_density)
        / vol
        * (1.0 + modes.included_weight)
    )


def solve_fugacity(box_size, target_density, beta, disp, n_ir=0.0, num_internal=1, modes=None):
    """Unique y > 1 with f_L(y) = target_density, residual below 1e-10."""
    if modes is None:
        modes = build_lattice_modes(box_size, disp, beta, num_internal)
    vol = box_size**modes.dimension
    rho_ir = n_ir / vol
    if target_density <= rho_ir:
        raise UnsolvableDensity(
            f"target density {target_density:g} does not exceed the infrared floor {rho_ir:g}"
        )
    bound = fugacity_bracket_bound(modes, target_density, rho_ir)

    def g(y):
        return phonon_gas.lattice_density(modes, disp, beta, y, n_ir) - target_density

    lo, hi = 1.0 + 1e-14, 1.0 + bound + 1.0
    if g(lo) <= 0 or g(hi) >= 0:
        raise BracketError(
            f"no sign change of the fugacity equation on ({lo:g}, {hi:g})"
        )
    y = brentq(g, lo, hi, xtol=1e-14, rtol=8.9e-16, maxiter=200)
    # Newton polish with the analytic derivative
    for _ in range(4):
        res = g(y)
        if abs(res) <= 1e-14 * max(target_density, 1.0):
            break
        step = res / phonon_gas.lattice_density_derivative(modes, disp, beta, y)
        y_new = y - step
        if y_new <= 1.0:
            break
        y = y_new
    residual = abs(g(y))
    if residual > RESIDUAL_TOL:
        raise BracketError(f"fugacity residual {residual:.3e} above tolerance {RESIDUAL_TOL:g}")
    return FugacitySolution(float(box_size), float(y), float(residual), float(bound), float(target_density), float(rho_ir))


@dataclass(frozen=True)
class PhaseReport:
    phase: str  # condensed | normal | critical
    y_infinity: float
    normal_fugacity: float  # b solving rho_fr(beta, b) = rho_target (1.0 if condensed/critical)
    condensate_density: float
    critical_density: float


def classify_phase(target_density, beta, disp, num_internal=1, critical_tol=1e-9):
    """Condensed/normal/critical trichotomy against the critical density."""
    rc = phonon_gas.rho_crit(disp, beta, num_internal)
    if abs(target_density - rc) <= critical_tol:
        return PhaseReport("critical", 1.0, 1.0, 0.0, rc)
    if target_density > rc:
        return PhaseReport("condensed", 1.0, 1.0, target_density - rc, rc)

    def g(y):
        return phonon_gas.rho_fr(disp, beta, y, num_internal) - target_density

    hi = 2.0
    while g(hi) > 0:
        hi *= 4.0
        if hi > 1e18:
            raise BracketError("normal-phase fugacity bracket not found")
    b = brentq(g, 1.0 + 1e-13, hi, xtol=1e-13, rtol=8.9e-16, maxiter=300)
    return PhaseReport("normal", float(b), float(b), 0.0, rc)


@dataclass(frozen=True)
class CondensateSequence:
    box_sizes: tuple
    fugacities: tuple
    residuals: tuple
    condensate_densities: tuple  # [N_i/(y_L - 1) + N_ir] / L^d
    extrapolated: float


def condensate_sequence(box_sizes, target_density, beta, disp, n_ir=0.0, num_internal=1):
    """Condensate density per volume along an increasing ladder of box sizes.

    The limit estimate fits a + b / L through the last three points (the
    leading finite-size correction of the boundary-mode sum is 1/L).
    """
    box_sizes = [float(L) for L in box_sizes]
    if not box_sizes or any(b >= a for b, a in zip(box_sizes, box_sizes[1:])):
        raise ValueError("box sizes must be strictly increasing and nonempty")
    ys, residuals, densities = [], [], []
    for L in box_sizes:
        sol = solve_fugacity(L, target_density, beta, disp, n_ir, num_internal)
        ys.append(sol.y)
        residuals.append(sol.residual)
        densities.append((num_internal / (sol.y - 1.0) + n_ir) / L**disp.dimension)
    tail = min(3, len(box_sizes))
    Ls = np.asarray(box_sizes[-tail:])
    vals = np.asarray(densities[-tail:])
    if tail == 1:
        limit = float(vals[0])
    else:
        design = np.stack([np.ones_like(Ls), 1.0 / Ls], axis=1)
        coef, *_ = np.linalg.lstsq(design, vals, rcond=None)
        limit = float(coef[0])
    return CondensateSequence(
        tuple(box_sizes), tuple(ys), tuple(residuals), tuple(densities), limit
    )


def critical_temperature(target_density, disp, beta_lo=1e-3, beta_hi=1e3, num_internal=1):
    """beta_c with rho_crit(beta_c) = target_density, and T_c = 1/beta_c.

    Monotonicity of rho_crit in beta is verified on a coarse sample before the
    bracketed solve.
    """
    samples = np.geomspace(beta_lo, beta_hi, 9)
    vals = [phonon_gas.rho_crit(disp, b, num_internal) for b in samples]
    diffs = np.diff(vals)
    if not (np.all(diffs > 0) or np.all(diffs < 0)):
        raise BracketError("rho_crit(beta) is not monotone on the search interval")

    def g(b):
        return phonon_gas.rho_crit(disp, b, num_internal) - target_density

    glo, ghi = g(beta_lo), g(beta_hi)
    if glo * ghi > 0:
        raise BracketError(
            f"rho_crit spans [{min(vals):g}, {max(vals):g}] on the interval; "
            f"target {target_density:g} is outside"
        )
    beta_c = brentq(g, beta_lo, beta_hi, xtol=1e-13, rtol=8.9e-16, maxiter=300)
    return float(beta_c), 1.0 / float(beta_c)
