"""Operator and field descriptions shared by every module.

An :class:`OperatorSpec` names one of the three operator families

* ``hermite``:            -Delta + |x|^2 + m  on L2(R^d),  m >= -d,
* ``ou``:                 -Delta + 2 x.grad   on L2(R^d, e^{-|x|^2} dx),
* ``shifted_laplacian``:  -Delta + R,  R > 0,

and a :class:`ScalarField` wraps a real-valued function on R^d together with
the conventions needed at exceptional points (e.g. a value assigned at a
singularity).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np


class Kind(enum.Enum):
    HERMITE = "hermite"
    OU = "ou"
    SHIFTED_LAPLACIAN = "shifted_laplacian"


@dataclass(frozen=True)
class OperatorSpec:
    kind: Kind
    d: int
    m: Optional[float] = None
    R: Optional[float] = None

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("dimension must be >= 1")
        if self.kind is Kind.HERMITE:
            if self.m is None:
                raise ValueError("hermite operator needs the shift m")
            if self.m < -self.d:
                raise ValueError(f"need m >= -d for positivity, got m={self.m}, d={self.d}")
        elif self.kind is Kind.SHIFTED_LAPLACIAN:
            if self.R is None or self.R <= 0:
                raise ValueError("shifted laplacian needs R > 0")

    @classmethod
    def hermite(cls, d: int, m: float = 0.0) -> "OperatorSpec":
        return cls(Kind.HERMITE, d, m=float(m))

    @classmethod
    def ou(cls, d: int) -> "OperatorSpec":
        return cls(Kind.OU, d)

    @classmethod
    def shifted_laplacian(cls, d: int, R: float) -> "OperatorSpec":
        return cls(Kind.SHIFTED_LAPLACIAN, d, R=float(R))

    @property
    def ground_eigenvalue(self) -> float:
        """Smallest spectral value: d + m for hermite, R for -Delta + R, 0 for OU."""
        if self.kind is Kind.HERMITE:
            return self.d + self.m
        if self.kind is Kind.SHIFTED_LAPLACIAN:
            return self.R
        return 0.0

    def describe(self) -> dict:
        out = {"kind": self.kind.value, "d": self.d}
        if self.m is not None:
            out["m"] = self.m
        if self.R is not None:
            out["R"] = self.R
        return out


def as_point(x, d: int) -> np.ndarray:
    p = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if p.shape != (d,):
        raise ValueError(f"expected a point in R^{d}, got shape {p.shape}")
    return p


@dataclass(frozen=True)
class ScalarField:
    """A real function on R^d with a batch evaluation contract.

    ``eval`` receives an (n, d) float64 array and returns an (n,) array.
    ``known_value_at`` pins values at points where the formula itself is
    undefined (a convention like f(0) = 0 at a singularity).  ``smooth``
    is a quadrature hint: order-swapped nested integration is allowed.
    """

    d: int
    eval: Callable[[np.ndarray], np.ndarray]
    label: str = ""
    known_value_at: tuple = ()
    smooth: bool = False
    gradient: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __call__(self, pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts, dtype=np.float64)
        if pts.ndim == 1:
            pts = pts.reshape(-1, self.d) if self.d > 1 else pts.reshape(-1, 1)
        vals = np.asarray(self.eval(pts), dtype=np.float64)
        if self.known_value_at:
            for point, v in self.known_value_at:
                hit = np.all(pts == np.asarray(point, dtype=np.float64), axis=1)
                if hit.any():
                    vals = np.where(hit, v, vals)
        return vals

    def value_at(self, x) -> float:
        x = as_point(x, self.d)
        return float(self(x.reshape(1, self.d))[0])

    def on_line(self, x0: np.ndarray, direction: np.ndarray) -> Callable:
        """1-d restriction t -> f(x0 + t * direction) as a batch callable."""
        x0 = as_point(x0, self.d)
        direction = as_point(direction, self.d)

        def g(t: np.ndarray) -> np.ndarray:
            t = np.atleast_1d(np.asarray(t, dtype=np.float64))
            return self(x0[None, :] + t[:, None] * direction[None, :])

        return g


def field_from_callable(d: int, fn: Callable, label: str = "", **kw) -> ScalarField:
    """Build a field from a function of the coordinate columns x1...xd."""

    def ev(pts: np.ndarray) -> np.ndarray:
        cols = [pts[:, i] for i in range(d)]
        return np.asarray(fn(*cols), dtype=np.float64) * np.ones(len(pts))

    return ScalarField(d=d, eval=ev, label=label, **kw)


def constant_field(d: int, c: float = 1.0) -> ScalarField:
    return field_from_callable(d, lambda *cols: np.full_like(cols[0], c), label=f"const({c})", smooth=True)


@dataclass(frozen=True)
class Eigenvector:
    """A regular positive eigenvector: smooth, strictly positive, L psi = lambda psi."""

    field: ScalarField
    eigenvalue: float

    def __post_init__(self):
        if self.eigenvalue < 0:
            raise ValueError("eigenvalue must be non-negative")
