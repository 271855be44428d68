"""Weyl tensor, constant-curvature test, sectional-curvature theorem checks and
the infinitesimal spatial isotropy fit relative to a timelike vector field."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import MetricStructure, curvature, orthonormal_frame, sectional_curvature
from .tensor import Tensor4

_SPATIAL_PAIRS = ((1, 2), (1, 3), (2, 3))


def _gg(g):
    """P[x, y, z, t] = g(Y,Z) g(X,T) - g(X,Z) g(Y,T)."""
    return np.einsum("yz,xt->xyzt", g, g) - np.einsum("xz,yt->xyzt", g, g)


def _ricci_part(S, g):
    return (np.einsum("yz,xt->xyzt", S, g) - np.einsum("xz,yt->xyzt", S, g)
            + np.einsum("xt,yz->xyzt", S, g) - np.einsum("yt,xz->xyzt", S, g))


def weyl_decomposition(m: MetricStructure, point):
    """(R, Ricci part, scalar part) with R = C + ricci_part - scalar_part in dimension 4."""
    b = curvature(m, point)
    ricci_part = 0.5 * _ricci_part(b._ricci, b.g)
    scalar_part = b.scalar_r / 6.0 * _gg(b.g)
    return b._riemann_0_4, ricci_part, scalar_part


def weyl_tensor(m: MetricStructure, point) -> Tensor4:
    R, ricci_part, scalar_part = weyl_decomposition(m, point)
    return Tensor4.lower(R - ricci_part + scalar_part)


def constant_curvature_residual(m: MetricStructure, point) -> float:
    """max |R - (r/12) [g(Y,Z) g(X,T) - g(X,Z) g(Y,T)]|."""
    b = curvature(m, point)
    return float(np.max(np.abs(b._riemann_0_4 - b.scalar_r / 12.0 * _gg(b.g))))


@dataclass(frozen=True)
class SectionalCheck:
    K_spatial: tuple
    K_timelike: tuple
    target: float

    @property
    def max_deviation(self) -> float:
        return max(abs(k - self.target) for k in self.K_spatial + self.K_timelike)

    def as_dict(self) -> dict:
        return {"K_spatial": list(self.K_spatial), "K_timelike": list(self.K_timelike),
                "target": self.target, "max_deviation": self.max_deviation}


def sectional_theorem_check(m: MetricStructure, point, rho) -> SectionalCheck:
    """K(e_a, e_b) on the three spatial planes and K(e_a, rho), against r/12."""
    b = curvature(m, point)
    frame = orthonormal_frame(m, point, rho)
    rho = np.asarray(rho, dtype=float)
    spatial = tuple(sectional_curvature(m, point, frame[i], frame[j]) for i, j in _SPATIAL_PAIRS)
    timelike = tuple(sectional_curvature(m, point, frame[a], rho) for a in (1, 2, 3))
    return SectionalCheck(spatial, timelike, b.scalar_r / 12.0)


@dataclass(frozen=True)
class IsotropyFit:
    a: float
    b: float
    res_a: float
    res_b: float

    def as_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "res_a": self.res_a, "res_b": self.res_b}


def isotropy_fit(m: MetricStructure, point, rho) -> IsotropyFit:
    """Least-squares scalars a, b with R|rho-perp = a (g g - g g) and R(X,rho,rho,Y) = b g(X,Y).

    Both fits are one-parameter linear least squares over frame components
    X, Y, Z, T in {e1, e2, e3}; residuals are max-abs after the fit.
    """
    bnd = curvature(m, point)
    frame = orthonormal_frame(m, point, rho)
    E = frame[1:]
    e0 = frame[0]
    R = np.einsum("ijkl,ai,bj,ck,dl->abcd", bnd._riemann_0_4, E, E, E, E)
    h = E @ bnd.g @ E.T
    P = _gg(h)
    a = float(np.sum(R * P) / np.sum(P * P))
    res_a = float(np.max(np.abs(R - a * P)))
    Q = np.einsum("ijkl,ai,j,k,bl->ab", bnd._riemann_0_4, E, e0, e0, E)
    b = float(np.sum(Q * h) / np.sum(h * h))
    res_b = float(np.max(np.abs(Q - b * h)))
    return IsotropyFit(a, b, res_a, res_b)
