"""Momentum-space Gaussian test functions for characteristic functionals.

A test function is defined directly in momentum space,
f(k) = A exp(-|k - k0|^2 / (2 sigma^2)), so pointwise values enter mode sums
and kernel integrals, while the zero mode (2pi)^{-d/2} * integral of f equals
A sigma^d in closed form.
"""

from dataclasses import dataclass, field, replace

import numpy as np


@dataclass(frozen=True)
class GaussianTestFunction:
    dimension: int
    center: np.ndarray = field(repr=False)
    width: float
    amplitude: complex
    component: int = 0
    num_components: int = 1

    def __post_init__(self):
        center = np.zeros(self.dimension) if self.center is None else np.asarray(
            self.center, dtype=float
        ).reshape(self.dimension)
        if self.width <= 0:
            raise ValueError("width must be positive")
        if not 0 <= self.component < self.num_components:
            raise ValueError("component index out of range")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "amplitude", complex(self.amplitude))

    def values(self, k_points):
        """Pointwise f(k) for k_points of shape (..., d)."""
        k = np.asarray(k_points, dtype=float)
        if k.shape[-1] != self.dimension:
            raise ValueError(
                f"k points have dimension {k.shape[-1]}, expected {self.dimension}"
            )
        d2 = np.sum(np.square(k - self.center), axis=-1)
        return self.amplitude * np.exp(-d2 / (2.0 * self.width**2))

    @property
    def zero_mode(self):
        """(2pi)^{-d/2} * integral f(k) dk = A sigma^d, exact."""
        return self.amplitude * self.width**self.dimension

    @property
    def norm_sq(self):
        """L^2 norm squared, |A|^2 (sqrt(pi) sigma)^d, exact."""
        return abs(self.amplitude) ** 2 * (np.sqrt(np.pi) * self.width) ** self.dimension

    @property
    def l1_norm(self):
        return abs(self.amplitude) * (2.0 * np.pi * self.width**2) ** (self.dimension / 2.0)

    def scaled(self, factor):
        """Same Gaussian with the amplitude multiplied by a complex factor."""
        return replace(self, amplitude=self.amplitude * complex(factor))

    def domain_flags(self, disp, beta):
        """Membership in L^1, dom omega^{-1/2}, dom (1 - e^{-beta omega})^{-1/2}.

        A Gaussian is always L^1.  The weighted memberships can only fail when
        the dispersion is gapless at k = 0; then the infrared exponent decides.
        """
        flags = {"L1": True}
        if disp.omega0 > 0:
            flags["omega_inv_half"] = True
            flags["thermal_inv_half"] = True
        else:
            p = disp.infrared_exponent()
            at_origin = abs(self.values(np.zeros(self.dimension)))
            ok = disp.dimension > p or at_origin == 0
            flags["omega_inv_half"] = bool(ok)
            flags["thermal_inv_half"] = bool(ok)
        return flags


def gaussian_test_function(dimension, center=None, width=1.0, amplitude=1.0, component=0, num_components=1):
    center = np.zeros(dimension) if center is None else np.asarray(center, dtype=float)
    return GaussianTestFunction(dimension, center, float(width), complex(amplitude), component, num_components)
