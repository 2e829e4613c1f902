"""Infrared-cutoff coupling functions and Gaussian-weighted momentum integrals.

The coupling family attached to lattice sites a_x is
    lambda_x(k) = exp(-i k . a_x) exp(-|k|^2 / (2 uv_width^2)) 1[|k| >= kappa],
and every integral this module computes has the shape

    integral over |k| >= kappa of  w(|k|) exp(-gamma |k|^2) exp(k . c) dk

for a radial weight w and a complex drift vector c.  Rotation invariance of
the Gaussian reduces the angular integral to a closed form in the complex
scalar z = sqrt(c . c) (non-conjugated dot product): 2 cosh(kz) in d = 1,
2 pi I0(kz) in d = 2 (evaluated by a periodic trapezoid rule), and
4 pi sinh(kz)/(kz) in d = 3.  The radial factor is handled by adaptive
quadrature on a finite interval chosen from the Gaussian decay.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .errors import ContractViolation, InfraredDivergence

_LOG_CUTOFF = 46.0  # exp(-46) ~ 1e-20 relative tail


def _angular_factor(dimension, k, z):
    """Integral of exp(k . c) over the sphere |k| fixed, as a function of kz.

    `k` may be an array of radii; `z` is the complex scalar sqrt(c . c).
    """
    kz = np.multiply.outer(np.asarray(k, dtype=float), z) if np.ndim(k) else k * z
    if dimension == 1:
        return 2.0 * np.cosh(kz)
    if dimension == 2:
        theta = np.linspace(0.0, 2.0 * np.pi, 257)[:-1]
        vals = np.exp(np.multiply.outer(kz, np.cos(theta)))
        return 2.0 * np.pi * vals.mean(axis=-1)
    if dimension == 3:
        small = np.abs(kz) < 1e-8
        safe = np.where(small, 1.0, kz)
        out = 4.0 * np.pi * np.sinh(safe) / safe
        return np.where(small, 4.0 * np.pi * (1.0 + kz * kz / 6.0), out)
    raise ValueError(f"dimension {dimension} not supported (1, 2 or 3)")


def radial_reduced_integral(dimension, kappa, gamma, drift, weight=None, prefactor=1.0):
    """integral over |k| >= kappa of w(|k|) e^{-gamma|k|^2} e^{k.c} dk.

    `drift` is the complex vector c; `weight` maps an array of radii to
    complex values (default 1).  Returns a complex number.
    """
    if gamma <= 0:
        raise ValueError("gamma must be positive (Gaussian decay required)")
    c = np.asarray(drift, dtype=complex).reshape(dimension)
    z = complex(np.sqrt(np.sum(c * c) + 0j))
    zmod = abs(z)
    # beyond k_max the integrand is below exp(-_LOG_CUTOFF) of its peak
    k_max = (zmod + np.sqrt(zmod * zmod + 4.0 * gamma * _LOG_CUTOFF)) / (2.0 * gamma)
    k_max = max(k_max, kappa + 1.0)

    def integrand(k):
        base = k ** (dimension - 1) * np.exp(-gamma * k * k) * _angular_factor(dimension, k, z)
        if weight is not None:
            base = base * weight(k)
        return base

    re, _ = quad(lambda k: np.real(integrand(k)), kappa, k_max, limit=300, epsabs=1e-13, epsrel=1e-12)
    im, _ = quad(lambda k: np.imag(integrand(k)), kappa, k_max, limit=300, epsabs=1e-13, epsrel=1e-12)
    return complex(prefactor) * complex(re, im)


@dataclass(frozen=True)
class CouplingFamily:
    """Site-indexed Gaussian couplings on a unit-spacing chain along axis 0."""

    num_sites: int
    dimension: int = 3
    uv_width: float = 2.0
    kappa: float = 0.0

    def __post_init__(self):
        if self.num_sites < 1:
            raise ValueError("num_sites must be >= 1")
        if self.uv_width <= 0:
            raise ValueError("uv_width must be positive")
        if self.kappa < 0:
            raise ValueError("kappa must be nonnegative")

    def site_position(self, x):
        if not 0 <= x < self.num_sites:
            raise ValueError(f"site {x} outside 0..{self.num_sites - 1}")
        a = np.zeros(self.dimension)
        a[0] = float(x)
        return a

    def values(self, x, k_points, kappa=None):
        """Pointwise lambda_x(k) on k_points of shape (..., d)."""
        kap = self.kappa if kappa is None else kappa
        k = np.asarray(k_points, dtype=float)
        norm = np.linalg.norm(k, axis=-1)
        phase = np.exp(-1j * k @ self.site_position(x))
        envelope = np.exp(-np.square(norm) / (2.0 * self.uv_width**2))
        return phase * envelope * (norm >= kap)


def _check_infrared(disp, m, kappa, what):
    """Raise when k^{d-1} omega^{2m} is non-integrable at the origin."""
    if kappa > 0 or m >= 0 or disp.omega0 > 0:
        return
    p = disp.infrared_exponent()
    if disp.dimension + 2.0 * m * p <= 0:
        raise InfraredDivergence(
            f"{what} diverges at k = 0: omega ~ k^{p:.3g} with weight omega^{2 * m:g} "
            f"in dimension {disp.dimension} and no infrared cutoff"
        )


def coupling_overlap(family, disp, m, x, y, kappa=None):
    """<omega^m lambda_x, omega^m lambda_y> by radial-plus-angular quadrature."""
    kap = family.kappa if kappa is None else kappa
    _check_infrared(disp, m, kap, "coupling overlap")
    delta = family.site_position(x) - family.site_position(y)
    gamma = 1.0 / family.uv_width**2
    weight = None if m == 0 else (lambda k: np.asarray(disp.radial_profile(k), dtype=float) ** (2.0 * m))
    return radial_reduced_integral(family.dimension, kap, gamma, 1j * delta, weight)


@dataclass(frozen=True)
class OverlapMatrix:
    power: float
    kappa: float
    entries: np.ndarray = field(repr=False)

    @property
    def num_sites(self):
        return self.entries.shape[0]

    def min_eigenvalue(self):
        return float(np.linalg.eigvalsh(self.entries).min())


def overlap_matrix(family, disp, m, kappa=None):
    """Gram matrix G_xy = <omega^m lambda_x, omega^m lambda_y>, Hermitian."""
    kap = family.kappa if kappa is None else kappa
    n = family.num_sites
    G = np.zeros((n, n), dtype=complex)
    for x in range(n):
        for y in range(x, n):
            G[x, y] = coupling_overlap(family, disp, m, x, y, kap)
            G[y, x] = np.conj(G[x, y])
    defect = np.abs(G - G.conj().T).max()
    if defect > 1e-10 * max(np.abs(G).max(), 1e-300):
        raise ContractViolation(f"overlap matrix lost hermiticity: defect {defect:.3e}")
    return OverlapMatrix(float(m), kap, G)


def cross_overlap(family, disp, m, f, x, kappa=None):
    """<omega^m f, omega^m lambda_x> for a Gaussian test function f."""
    kap = family.kappa if kappa is None else kappa
    _check_infrared(disp, m, kap, "test-function/coupling overlap")
    sigma2 = f.width**2
    gamma = 0.5 / sigma2 + 0.5 / family.uv_width**2
    drift = f.center / sigma2 - 1j * family.site_position(x)
    pref = np.conj(f.amplitude) * np.exp(-np.sum(np.square(f.center)) / (2.0 * sigma2))
    weight = None if m == 0 else (lambda k: np.asarray(disp.radial_profile(k), dtype=float) ** (2.0 * m))
    return radial_reduced_integral(family.dimension, kap, gamma, drift, weight, pref)


def gaussian_density_integral(f, kernel=None, kappa=0.0):
    """integral over |k| >= kappa of |f(k)|^2 kernel(|k|) dk for Gaussian f."""
    sigma2 = f.width**2
    pref = abs(f.amplitude) ** 2 * np.exp(-np.sum(np.square(f.center)) / sigma2)
    val = radial_reduced_integral(f.dimension, kappa, 1.0 / sigma2, 2.0 * f.center / sigma2, kernel, pref)
    return float(np.real(val))


def gaussian_pair_integral(f, g, kernel=None, kappa=0.0):
    """integral of conj(g)(k) f(k) kernel(|k|) dk for two Gaussians (sesquilinear)."""
    if f.dimension != g.dimension:
        raise ContractViolation("test functions live in different dimensions")
    gamma = 0.5 / f.width**2 + 0.5 / g.width**2
    drift = f.center / f.width**2 + g.center / g.width**2
    pref = np.conj(g.amplitude) * f.amplitude * np.exp(
        -np.sum(np.square(f.center)) / (2.0 * f.width**2)
        - np.sum(np.square(g.center)) / (2.0 * g.width**2)
    )
    return radial_reduced_integral(f.dimension, kappa, gamma, drift, kernel, pref)


def gaussian_weighted_zero_mode(f, weight):
    """(2pi)^{-d/2} integral of weight(|k|) f(k) dk (e.g. a phase e^{i t omega})."""
    sigma2 = f.width**2
    pref = f.amplitude * np.exp(-np.sum(np.square(f.center)) / (2.0 * sigma2))
    val = radial_reduced_integral(f.dimension, 0.0, 0.5 / sigma2, f.center / sigma2, weight, pref)
    return val * (2.0 * np.pi) ** (-f.dimension / 2.0)
