"""Numpy fallback for the hot kernel evaluations.

Same signatures as the compiled twin in ``_core_cy.pyx``: every array
argument is a contiguous float64 ndarray, all of one common length, and a
float64 ndarray of that length is returned.
"""

import numpy as np

_SQRT_4PI_POW = {}  # d -> (4*pi)**(d/2), tiny memo


def _four_pi_pow(d):
    try:
        return _SQRT_4PI_POW[d]
    except KeyError:
        v = (4.0 * np.pi) ** (0.5 * d)
        _SQRT_4PI_POW[d] = v
        return v


def hermite_heat(s, qm, qp, d, m):
    """Heat kernel of -Delta + |x|^2 + m at times ``s``.

    qm = |x-y|^2 and qp = |x+y|^2.  Evaluated through the tanh
    parametrization, which stays stable for s from 1e-300 up to overflow.
    """
    tau = np.tanh(s)
    omt = 2.0 / (np.expm1(2.0 * s) + 2.0)  # 1 - tanh(s), no cancellation
    out = omt ** (0.5 * (m + d))
    out *= (1.0 + tau) ** (-0.5 * (m - d))
    out *= np.exp(-0.25 * (qm / tau + tau * qp))
    out /= (4.0 * np.pi * tau) ** (0.5 * d)
    return out


def hermite_heat_tanh(u, qm, qp, d, m):
    """Same kernel with the time already mapped to u = tanh(t), u in (0,1)."""
    out = (1.0 - u) ** (0.5 * (m + d))
    out *= (1.0 + u) ** (-0.5 * (m - d))
    out *= np.exp(-0.25 * (qm / u + u * qp))
    out /= (4.0 * np.pi * u) ** (0.5 * d)
    return out


def gauss_heat(s, q, d, R):
    """Heat kernel of -Delta + R: e^{-sR} (4 pi s)^{-d/2} e^{-q/(4s)}, q = |x-y|^2."""
    return np.exp(-s * R - 0.25 * q / s) / (4.0 * np.pi * s) ** (0.5 * d)


def kernel_time_integrand(u, qm, qp, d, m, sigma):
    """Integrand of int_0^A h_t dt/t^{1+sigma} after the u = tanh(t) substitution.

    Includes the Jacobian dt = du/(1-u^2) and the t(u)^{-(1+sigma)} weight.
    """
    t = np.arctanh(u)
    out = (1.0 - u) ** (0.5 * (m + d) - 1.0)
    out *= (1.0 + u) ** (-0.5 * (m - d) - 1.0)
    out *= np.exp(-0.25 * (qm / u + u * qp))
    out /= (4.0 * np.pi * u) ** (0.5 * d)
    out /= t ** (1.0 + sigma)
    return out


def kernel_diff_time_integrand(u, qy, qpp, qpm, d, m, sigma):
    """|h_t(x, x+y) - h_t(x, x-y)| weighted by dt/t^{1+sigma}, u = tanh(t).

    qy = |y|^2, qpp = |2x+y|^2, qpm = |2x-y|^2.  The two kernels share the
    e^{-qy/(4u)} factor, so the difference is taken on the small exponentials
    before any weighting (preserves the cancellation).
    """
    t = np.arctanh(u)
    pre = (1.0 - u) ** (0.5 * (m + d) - 1.0)
    pre *= (1.0 + u) ** (-0.5 * (m - d) - 1.0)
    pre *= np.exp(-0.25 * qy / u)
    pre /= (4.0 * np.pi * u) ** (0.5 * d)
    pre /= t ** (1.0 + sigma)
    diff = np.abs(np.exp(-0.25 * u * qpp) - np.exp(-0.25 * u * qpm))
    return pre * diff


def gk_panel_sums(vals, half):
    """Kronrod/Gauss panel sums for stacked 15-point panels.

    vals has shape (n, 15), half the panel half-widths (n,).  Returns the
    Kronrod estimates and |K15 - G7| error estimates.
    """
    ik = half * (vals @ _WGK)
    ig = half * (vals[:, 1::2] @ _WG)
    return ik, np.abs(ik - ig)


# Gauss-Kronrod (7, 15) constants, ascending node order.
_XGK_HALF = np.array(
    [
        0.9914553711208126,
        0.9491079123427585,
        0.8648644233597691,
        0.7415311855993944,
        0.5860872354676911,
        0.4058451513773972,
        0.2077849550078985,
    ]
)
GK_NODES = np.concatenate([-_XGK_HALF, [0.0], _XGK_HALF[::-1]])
_WGK_HALF = np.array(
    [
        0.0229353220105292,
        0.0630920926299786,
        0.1047900103222502,
        0.1406532597155259,
        0.1690047266392679,
        0.1903505780647854,
        0.2044329400752989,
    ]
)
_WGK = np.concatenate([_WGK_HALF, [0.2094821410847278], _WGK_HALF[::-1]])
_WG_HALF = np.array([0.1294849661688697, 0.2797053914892767, 0.3818300505051189])
_WG = np.concatenate([_WG_HALF, [0.4179591836734694], _WG_HALF[::-1]])
