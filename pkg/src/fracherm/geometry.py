"""Sphere quadrature used by the radial-shell reductions in d >= 2.

Rules integrate over the unit sphere: sum(weights) equals the surface
measure |S^{d-1}|.  Directions avoid the hyperplane orthogonal to e1, and in
d = 2/3 they split into e1-hemispheres, so sign(omega . e1) factors are
integrated exactly.  The d = 3 rule lives in the e1-e2 plane with azimuthal
weight 2*pi: it is exact for fields that are axially symmetric about the e1
axis (all built-in example fields are).
"""

from __future__ import annotations

import numpy as np


def sphere_rule(d: int, n_phi: int = 64, n_theta: int = 24):
    """Directions (k, d) and weights (k,) with sum(weights) = |S^{d-1}|."""
    if d == 1:
        dirs = np.array([[1.0], [-1.0]])
        w = np.array([1.0, 1.0])
    elif d == 2:
        ang = (np.arange(n_phi) + 0.5) * (2.0 * np.pi / n_phi)
        dirs = np.stack([np.cos(ang), np.sin(ang)], axis=1)
        w = np.full(n_phi, 2.0 * np.pi / n_phi)
    elif d == 3:
        # Gauss-Legendre in u = cos(theta) per hemisphere, azimuth integrated
        # analytically (axial symmetry about e1 assumed)
        x, gw = np.polynomial.legendre.leggauss(n_theta)
        u = np.concatenate([0.5 * (x + 1.0), 0.5 * (x - 1.0)])  # (0,1) and (-1,0)
        gw = np.concatenate([0.5 * gw, 0.5 * gw])
        s = np.sqrt(np.maximum(1.0 - u * u, 0.0))
        dirs = np.stack([u, s, np.zeros_like(u)], axis=1)
        w = 2.0 * np.pi * gw
    else:
        raise NotImplementedError(f"no sphere rule for d = {d}")
    return dirs, w


def on_e1_axis(x: np.ndarray) -> bool:
    return x.shape[0] == 1 or not np.any(x[1:])
