"""Finite boxes of lattice momenta (2 pi / L) Z^d with thermal truncation.

Modes are kept while exp(-beta F(k)) is at least eps_trunc times its value at
the smallest nonzero mode; the discarded tail is bounded by a radial integral
and recorded on the object.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .dispersion import sphere_area


@dataclass(frozen=True)
class LatticeModes:
    box_size: float
    dimension: int
    num_internal: int
    coords: np.ndarray = field(repr=False)  # (n_modes, d) integer multi-indices
    tail_bound: float
    included_weight: float  # sum over kept modes of exp(-beta F(k))

    @property
    def spacing(self):
        return 2.0 * np.pi / self.box_size

    @property
    def num_modes(self):
        return self.coords.shape[0]

    @property
    def momenta(self):
        return self.coords.astype(float) * self.spacing

    def norms(self):
        return np.linalg.norm(self.momenta, axis=1)

    def zero_mask(self):
        return np.all(self.coords == 0, axis=1)

    def all_nonzero_mask(self):
        """Modes with every coordinate nonzero (interior modes)."""
        return np.all(self.coords != 0, axis=1)

    def boundary_mask(self):
        """Nonzero modes with at least one vanishing coordinate."""
        return ~self.zero_mask() & ~self.all_nonzero_mask()

    def cell_volume(self):
        return self.spacing**self.dimension


def _enumerate(box_size, disp, beta, k_cut):
    d = disp.dimension
    spacing = 2.0 * np.pi / box_size
    n_axis = int(np.ceil(k_cut / spacing))
    axes = [np.arange(-n_axis, n_axis + 1, dtype=np.int32)] * d
    grids = np.meshgrid(*axes, indexing="ij")
    coords = np.stack([g.ravel() for g in grids], axis=1)
    norms = np.linalg.norm(coords.astype(float), axis=1) * spacing
    keep = norms <= k_cut
    coords = np.ascontiguousarray(coords[keep])
    included = float(np.exp(-beta * np.asarray(disp.gap(norms[keep]), dtype=float)).sum())
    return coords, included


def _tail_bound(box_size, disp, beta, k_cut):
    """Bound Sum over modes |k| > k_cut of exp(-beta F(k)) by a shell integral.

    Each excluded mode owns a lattice cell contained in |k| > k_cut - sqrt(d)/2
    * spacing, and exp(-beta F) is radially decreasing, so the mode sum is
    below the cell-density integral over that region.
    """
    d = disp.dimension
    spacing = 2.0 * np.pi / box_size
    r0 = max(k_cut - 0.5 * np.sqrt(d) * spacing, 0.0)
    hi = disp.gap_inverse(disp.gap(k_cut) + 200.0 / beta)
    integrand = lambda k: k ** (d - 1) * np.exp(-beta * disp.gap(k))
    val, _ = quad(integrand, r0, hi, limit=200)
    return (box_size / (2.0 * np.pi)) ** d * sphere_area(d) * val


def build_lattice_modes(box_size, disp, beta, num_internal=1, eps_trunc=1e-16):
    """Enumerate Gamma_L^d modes with exp(-beta F(k)) above the truncation floor.

    The cut radius is widened until the certified tail bound drops below
    1e-12 of the included thermal weight.
    """
    if box_size <= 0:
        raise ValueError("box_size must be positive")
    if num_internal < 1:
        raise ValueError("num_internal must be >= 1")
    spacing = 2.0 * np.pi / box_size
    # floor = eps_trunc * exp(-beta F(spacing)), kept in log form
    gap_cut = -np.log(eps_trunc) / beta + float(disp.gap(spacing))
    for _ in range(12):
        k_cut = disp.gap_inverse(gap_cut)
        coords, included = _enumerate(box_size, disp, beta, k_cut)
        tail = _tail_bound(box_size, disp, beta, k_cut)
        if tail <= 1e-12 * included:
            break
        gap_cut += 5.0 / beta
    return LatticeModes(
        float(box_size), disp.dimension, int(num_internal), coords, float(tail), included
    )
