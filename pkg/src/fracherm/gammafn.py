"""Gamma function via a Lanczos approximation.

All the fractional-power normalizations used in this package
(c_sigma = 2^(2s-1) Gamma(s)/Gamma(1-s), a_sigma = 1/(4^s Gamma(s)),
Gamma(-s) = Gamma(1-s)/(-s)) only need Gamma on (0, 2) plus the
recurrence Gamma(x) = Gamma(x+1)/x, which is how negative and large
arguments are handled here.
"""

from __future__ import annotations

import math

# Lanczos coefficients for g = 7, n = 9; relative accuracy ~ 1e-15 on the
# positive axis, comfortably below the 1e-13 target on (0, 2).
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def _lanczos(x: float) -> float:
    # valid for x >= 0.5
    z = x - 1.0
    acc = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * math.exp(-t) * acc


def gamma(x: float) -> float:
    """Gamma(x) for real non-pole x (x not in {0, -1, -2, ...})."""
    if x != x:
        raise ValueError("gamma: nan argument")
    if x <= 0.0 and x == math.floor(x):
        raise ValueError(f"gamma: pole at {x}")
    if x >= 0.5:
        return _lanczos(x)
    # shift into the Lanczos range with Gamma(x) = Gamma(x + n) / (x (x+1) ... )
    denom = 1.0
    y = x
    while y < 0.5:
        denom *= y
        y += 1.0
    return _lanczos(y) / denom


def gamma_minus(sigma: float) -> float:
    """Gamma(-sigma) for sigma in (0, 1), via Gamma(1-sigma)/(-sigma)."""
    if not 0.0 < sigma < 1.0:
        raise ValueError("gamma_minus: sigma must lie in (0, 1)")
    return gamma(1.0 - sigma) / (-sigma)
