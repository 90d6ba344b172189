"""Kernel-core dispatch: compiled extension when available, numpy otherwise.

``FRACHERM_PURE_PYTHON=1`` in the environment forces the numpy fallback.
``gk_panel_sums`` and the GK nodes always come from the numpy module (they
are BLAS-bound already); only the exp-heavy kernel loops are swapped.
"""

import os

import numpy as np

from . import _core_py

if os.environ.get("FRACHERM_PURE_PYTHON", "") not in ("", "0"):
    _impl = _core_py
    COMPILED = False
else:
    try:
        from . import _core_cy as _impl  # type: ignore[attr-defined]

        COMPILED = True
    except ImportError:
        _impl = _core_py
        COMPILED = False

GK_NODES = _core_py.GK_NODES
gk_panel_sums = _core_py.gk_panel_sums

# raw entry points: caller guarantees contiguous float64 arrays of one length
hermite_heat_raw = _impl.hermite_heat
gauss_heat_raw = _impl.gauss_heat


def _prep(*arrays):
    """Broadcast to a common 1-d float64 contiguous layout."""
    bc = np.broadcast_arrays(*[np.asarray(a, dtype=np.float64) for a in arrays])
    return [np.ascontiguousarray(b.ravel()) for b in bc]


def hermite_heat(s, qm, qp, d, m):
    a, b, c = _prep(s, qm, qp)
    return _impl.hermite_heat(a, b, c, float(d), float(m))


def hermite_heat_tanh(u, qm, qp, d, m):
    a, b, c = _prep(u, qm, qp)
    return _impl.hermite_heat_tanh(a, b, c, float(d), float(m))


def gauss_heat(s, q, d, R):
    a, b = _prep(s, q)
    return _impl.gauss_heat(a, b, float(d), float(R))


def kernel_time_integrand(u, qm, qp, d, m, sigma):
    a, b, c = _prep(u, qm, qp)
    return _impl.kernel_time_integrand(a, b, c, float(d), float(m), float(sigma))


def kernel_diff_time_integrand(u, qy, qpp, qpm, d, m, sigma):
    a, b, c, e = _prep(u, qy, qpp, qpm)
    return _impl.kernel_diff_time_integrand(a, b, c, e, float(d), float(m), float(sigma))
