"""Hermite eigenfunctions, the Mehler heat kernel, and semigroup application.

The heat kernel of -Delta + |x|^2 + m is the Mehler kernel

    h_t(x, y) = e^{-tm} exp(-|x-y|^2/(2 tanh 2t) - tanh(t) x.y) / (2 pi sinh 2t)^{d/2}

and, after the substitution u = tanh(t),

    h(x, y; u) = (1-u)^{(m+d)/2} (1+u)^{-(m-d)/2}
                 exp(-(|x-y|^2/u + u |x+y|^2)/4) / (4 pi u)^{d/2}.

The second form is how kernels are evaluated internally: it is stable down
to arbitrarily small times and degrades gracefully as u -> 1, where the
kernel tends to its ground-state rank-one limit.  For -Delta + R the kernel
is e^{-tR} W_t(x-y) with the Gauss-Weierstrass kernel W.
"""

from __future__ import annotations

import math
from dataclasses import replace
from typing import Callable, Sequence

import numpy as np

from . import _core
from .geometry import on_e1_axis, sphere_rule
from .operators import Eigenvector, Kind, OperatorSpec, ScalarField, as_point, field_from_callable
from .quad import IntegralOutcome, QuadratureSpec, Status, integrate_adaptive

MAX_HERMITE_ORDER = 200
_MAX_ABS_X = 300.0


class EigenvectorValidationError(ArithmeticError):
    """Raised when the closed-form eigenvector fails its semigroup check."""

    def __init__(self, worst_residual: float):
        self.worst_residual = worst_residual
        super().__init__(f"eigenvector validation failed, worst residual {worst_residual:.3e}")


class InconclusiveIntegral(ArithmeticError):
    """A quadrature inside a plain-number operation failed to converge."""


def hermite_function_1d(k: int, x) -> np.ndarray:
    """L2-normalized 1-d Hermite function via the stable normalized recurrence."""
    if not 0 <= k <= MAX_HERMITE_ORDER:
        raise ValueError(f"hermite order outside stable range: {k}")
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if np.any(np.abs(x) > _MAX_ABS_X):
        raise ValueError("argument outside stable range for hermite recurrence")
    h_prev = np.pi ** (-0.25) * np.exp(-0.5 * x * x)
    if k == 0:
        return h_prev
    h = math.sqrt(2.0) * x * h_prev
    for j in range(1, k):
        h, h_prev = x * math.sqrt(2.0 / (j + 1)) * h - math.sqrt(j / (j + 1.0)) * h_prev, h
    return h


def hermite_function(k: Sequence[int], x) -> float:
    """Product Hermite function for a multi-index k at a point x in R^d."""
    k = tuple(int(v) for v in np.atleast_1d(k))
    if any(v < 0 for v in k) or sum(k) > MAX_HERMITE_ORDER:
        raise ValueError(f"multi-index outside allowed range: {k}")
    x = as_point(x, len(k))
    out = 1.0
    for ki, xi in zip(k, x):
        out *= float(hermite_function_1d(ki, xi)[0])
    return out


def hermite_field(k: int, d: int = 1) -> ScalarField:
    """The 1-d eigenfunction h_k as a field (d = 1 only)."""
    if d != 1:
        raise NotImplementedError("hermite_field is 1-d")
    return ScalarField(
        d=1,
        eval=lambda pts: hermite_function_1d(k, pts[:, 0]),
        label=f"h{k}",
        smooth=True,
    )


def eigenvalue(op: OperatorSpec, k: Sequence[int]) -> float:
    """Spectral value 2|k| + d + m of the hermite operator."""
    if op.kind is not Kind.HERMITE:
        raise ValueError(f"eigenvalue formula only applies to the hermite operator, got {op.kind.value}")
    k = np.atleast_1d(k)
    if len(k) != op.d or np.any(np.asarray(k) < 0):
        raise ValueError("multi-index must have d non-negative entries")
    return 2.0 * float(np.sum(k)) + op.d + op.m


def mehler_kernel(op: OperatorSpec, t: float, x, y) -> float:
    """Mehler kernel, direct formula (e^{-tm} ... / (2 pi sinh 2t)^{d/2})."""
    if op.kind is not Kind.HERMITE:
        raise ValueError("mehler_kernel is for the hermite operator")
    if t <= 0:
        raise ValueError("mehler_kernel: t must be positive")
    x = as_point(x, op.d)
    y = as_point(y, op.d)
    qm = float(np.sum((x - y) ** 2))
    return (
        math.exp(-t * op.m)
        * math.exp(-qm / (2.0 * math.tanh(2.0 * t)) - math.tanh(t) * float(x @ y))
        / (2.0 * math.pi * math.sinh(2.0 * t)) ** (0.5 * op.d)
    )


def mehler_kernel_s(op: OperatorSpec, s: float, x, y) -> float:
    """Mehler kernel in the tanh parametrization; s = tanh(t) in (0, 1)."""
    if op.kind is not Kind.HERMITE:
        raise ValueError("mehler_kernel_s is for the hermite operator")
    if not 0.0 < s < 1.0:
        raise ValueError("mehler_kernel_s: s must lie in (0, 1)")
    x = as_point(x, op.d)
    y = as_point(y, op.d)
    qm = float(np.sum((x - y) ** 2))
    qp = float(np.sum((x + y) ** 2))
    return float(_core.hermite_heat_tanh(np.array([s]), qm, qp, op.d, op.m)[0])


def heat_kernel_row(op: OperatorSpec, t: float, x: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """h_t(x, y_i) for a batch of points ys with shape (n, d)."""
    if op.kind is Kind.HERMITE:
        qm = np.ascontiguousarray(np.sum((ys - x[None, :]) ** 2, axis=1))
        qp = np.ascontiguousarray(np.sum((ys + x[None, :]) ** 2, axis=1))
        return _core.hermite_heat_raw(np.full(len(ys), t), qm, qp, float(op.d), float(op.m))
    if op.kind is Kind.SHIFTED_LAPLACIAN:
        q = np.ascontiguousarray(np.sum((ys - x[None, :]) ** 2, axis=1))
        return _core.gauss_heat_raw(np.full(len(ys), t), q, float(op.d), float(op.R))
    raise ValueError("no closed heat kernel for the OU operator; transfer first")


def heat_kernel_mass(op: OperatorSpec, t: float, x) -> float:
    """Closed form of int h_t(x, y) dy.

    Hermite: e^{-tm} cosh(2t)^{-d/2} e^{-tanh(2t) |x|^2 / 2}; shifted
    Laplacian: e^{-tR} (the Weierstrass kernel has unit mass).
    """
    x = as_point(x, op.d)
    return math.exp(_log_mass(op, t, x))


def _log_mass(op: OperatorSpec, t: float, x: np.ndarray) -> float:
    if op.kind is Kind.SHIFTED_LAPLACIAN:
        return -t * op.R
    if op.kind is Kind.HERMITE:
        z = 2.0 * t
        logcosh = abs(z) + math.log1p(math.exp(-2.0 * abs(z))) - math.log(2.0)
        return -t * op.m - 0.5 * op.d * logcosh - 0.5 * math.tanh(z) * float(x @ x)
    raise ValueError("no closed heat kernel for the OU operator; transfer first")


def _kernel_width(op: OperatorSpec, t: float) -> float:
    if op.kind is Kind.HERMITE:
        return math.sqrt(4.0 * math.tanh(min(t, 20.0)))
    return math.sqrt(4.0 * t)


def _breaks_1d(x: float, w: float, lo: float, hi: float):
    pts = {x}
    for c in (0.5, 1.0, 2.0, 5.0, 10.0):
        pts.add(x - c * w)
        pts.add(x + c * w)
    for c in (1.0, 3.0, 8.0):
        pts.add(x - c)
        pts.add(x + c)
    pts.update((0.0,))
    return [p for p in pts if lo < p < hi]


def heat_integral(
    op: OperatorSpec,
    t: float,
    g: Callable[[np.ndarray], np.ndarray],
    x: np.ndarray,
    spec: QuadratureSpec,
    *,
    radius: float | None = None,
) -> float:
    """int h_t(x, y) g(y) dy, optionally restricted to the ball |y - x| < radius.

    d = 1 integrates directly; d = 2 reduces to radial shells with 64 equal
    angles; d = 3 uses the axially symmetric product rule of
    :mod:`fracherm.geometry` (x must then lie on the e1 axis).
    """
    if t <= 0:
        raise ValueError("heat_integral: t must be positive")
    d = op.d
    w = _kernel_width(op, t)
    if d == 1:
        x1 = float(x[0])
        half = max(16.0, abs(x1) + 12.0, 12.0 * w)
        lo, hi = x1 - half, x1 + half
        if radius is not None:
            lo, hi = x1 - radius, x1 + radius

        def integrand(ys: np.ndarray) -> np.ndarray:
            pts = ys.reshape(-1, 1)
            kern = heat_kernel_row(op, t, x, pts)
            vals = g(pts)
            return np.where(kern == 0.0, 0.0, kern * vals)

        res = integrate_adaptive(integrand, lo, hi, spec, breakpoints=_breaks_1d(x1, w, lo, hi))
    else:
        if d == 3 and not on_e1_axis(x):
            raise NotImplementedError("d = 3 heat integrals require x on the e1 axis")
        dirs, ang_w = sphere_rule(d)
        r_max = max(16.0, float(np.linalg.norm(x)) + 12.0, 12.0 * w)
        if radius is not None:
            r_max = radius

        def radial(r: np.ndarray) -> np.ndarray:
            r = np.atleast_1d(r)
            pts = x[None, None, :] + r[:, None, None] * dirs[None, :, :]
            flat = pts.reshape(-1, d)
            kern = heat_kernel_row(op, t, x, flat)
            vals = g(flat)
            prod = np.where(kern == 0.0, 0.0, kern * vals).reshape(len(r), -1)
            return (prod @ ang_w) * r ** (d - 1)

        bps = [c * w for c in (0.5, 1.0, 2.0, 5.0, 10.0)] + [1.0, 3.0, 8.0]
        res = integrate_adaptive(radial, 0.0, r_max, spec, breakpoints=[b for b in bps if 0 < b < r_max])
    if res.status is not Status.CONVERGED:
        # cancellation-heavy integrands bottom out at the rounding floor of
        # the panel sums before reaching a tiny abs_tol; such results are as
        # good as float64 gets and are accepted here
        if res.error_estimate <= 1e-12 + 1e-9 * abs(res.value):
            return res.value
        raise InconclusiveIntegral(f"heat integral at t={t} did not converge (err {res.error_estimate:.2e})")
    return res.value


def heat_apply(op: OperatorSpec, t: float, f: ScalarField, x, spec: QuadratureSpec) -> float:
    """e^{-tL} f (x) by quadrature against the heat kernel."""
    if op.kind is Kind.OU:
        raise ValueError("heat_apply does not act on the OU operator directly; use ou_transfer")
    x = as_point(x, op.d)
    return heat_integral(op, t, f, x, spec)


def heat_diff(
    op: OperatorSpec,
    t: float,
    f: ScalarField,
    x,
    spec: QuadratureSpec,
    *,
    fx: float | None = None,
) -> float:
    """e^{-tL} f (x) - f(x), evaluated without cancellation.

    Splits into int h_t(x,y) [f(y) - f(x)] dy plus f(x) (mass - 1), the mass
    defect coming from the closed form (expm1, so it is accurate down to
    arbitrarily small t).  This is what the fractional-power integrals feed
    on: the direct subtraction would drown in rounding for t << 1.
    """
    x = as_point(x, op.d)
    if fx is None:
        fx = f.value_at(x)
    if not math.isfinite(fx):
        raise ValueError(f"heat_diff needs a finite f(x), got {fx}")

    def centered(pts: np.ndarray) -> np.ndarray:
        return f(pts) - fx

    part = heat_integral(op, t, centered, x, spec)
    return part + fx * math.expm1(_log_mass(op, t, x))


def ou_transfer(f: ScalarField) -> ScalarField:
    """Gaussian conjugation x -> e^{-|x|^2/2} f(x) linking OU to hermite m = -d."""

    def ev(pts: np.ndarray) -> np.ndarray:
        return np.exp(-0.5 * np.sum(pts * pts, axis=1)) * f(pts)

    known = tuple((p, v * math.exp(-0.5 * float(np.sum(np.square(np.asarray(p)))))) for p, v in f.known_value_at)
    return ScalarField(d=f.d, eval=ev, label=f"transfer({f.label})", known_value_at=known, smooth=f.smooth)


def psi_field(op: OperatorSpec) -> ScalarField:
    """The regular positive eigenvector: e^{-|x|^2/2} (hermite) or 1 (shifted)."""
    if op.kind is Kind.HERMITE:
        return field_from_callable(
            op.d,
            lambda *cols: np.exp(-0.5 * sum(c * c for c in cols)),
            label="psi",
            smooth=True,
        )
    if op.kind is Kind.SHIFTED_LAPLACIAN:
        return field_from_callable(op.d, lambda *cols: np.ones_like(cols[0]), label="one", smooth=True)
    raise ValueError("no closed-form eigenvector for the OU operator; transfer first")


def eigenvector_check(op: OperatorSpec, spec: QuadratureSpec) -> Eigenvector:
    """Return the closed-form positive eigenvector after validating the
    semigroup relation e^{-tL} psi = e^{-t lambda} psi numerically."""
    psi = psi_field(op)
    lam = op.ground_eigenvalue
    check_spec = replace(spec, abs_tol=min(spec.abs_tol, 1e-10), rel_tol=min(spec.rel_tol, 1e-9))
    worst = 0.0
    base = np.zeros(op.d)
    samples = [base.copy()]
    for c in (0.7, -1.2):
        p = base.copy()
        p[0] = c
        samples.append(p)
    for t in (0.25, 0.7, 1.5):
        for x in samples:
            got = heat_apply(op, t, psi, x, check_spec)
            want = math.exp(-t * lam) * psi.value_at(x)
            worst = max(worst, abs(got - want) / max(abs(want), 1e-300))
    if worst > 1e-6:
        raise EigenvectorValidationError(worst)
    return Eigenvector(field=psi, eigenvalue=lam)
