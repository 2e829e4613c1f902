"""Self-contained Bessel function J0 with a certified error budget.

Two regimes: the alternating power series for |x| <= 8 (terms fall below
1e-18 of the leading one well before n = 40), and the integral
J0(x) = (1/pi) * integral_0^pi cos(x sin t) dt evaluated by the trapezoid
rule above.  The integrand is smooth and pi-periodic, so the trapezoid rule
converges geometrically; the node count grows linearly with |x| to keep the
quadrature error below 1e-13.
"""

import numpy as np

_SERIES_CUT = 8.0


def _j0_series(x):
    x = np.asarray(x, dtype=float)
    q = 0.25 * np.square(x)
    term = np.ones_like(q)
    total = np.ones_like(q)
    for n in range(1, 45):
        term = term * (-q) / (n * n)
        total = total + term
    return total


def _j0_integral(x):
    x = np.asarray(x, dtype=float)
    n_nodes = int(64 + np.ceil(0.7 * np.abs(x).max()))
    t = np.linspace(0.0, np.pi, n_nodes + 1)
    vals = np.cos(np.multiply.outer(x, np.sin(t)))
    # trapezoid on [0, pi]; endpoints carry half weight
    return (vals.sum(axis=-1) - 0.5 * (vals[..., 0] + vals[..., -1])) / n_nodes


def j0(x):
    """Bessel function of the first kind, order zero, real argument."""
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    out = np.empty_like(x)
    small = np.abs(x) <= _SERIES_CUT
    if small.any():
        out[small] = _j0_series(x[small])
    if (~small).any():
        out[~small] = _j0_integral(x[~small])
    return float(out[0]) if scalar else out
