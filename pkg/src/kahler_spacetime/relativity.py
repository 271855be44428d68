"""Perfect-fluid Einstein equation with cosmological constant.

The field equation checked here is

    S - (r/2) g + lambda g = k [(sigma + p) omega (x) omega + p g]

with ``omega`` the velocity ``rho`` lowered by the metric.  Besides its
residual, :func:`fluid_audit` reports the derived quantities a perfect fluid
Kähler space-time is forced into: sigma + p = 0, lambda - k p = r/4,
S = (r/4) g, the energy equation, and vanishing expansion and acceleration.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NormalizationError
from .expr import Expr
from .geometry import MetricStructure, curvature, nabla
from .jets import eval_jet3, eval_jet_array
from .kahler import DEFAULT_TOL, kahler_audit
from .tensor import DIM, UPPER, Tensor4

NORMALIZATION_TOL = 1e-6


@dataclass(frozen=True)
class FluidState:
    sigma: Expr
    pressure: Expr
    rho: tuple
    lam: float = 0.0
    k: float = 1.0

    def __post_init__(self):
        if len(self.rho) != DIM:
            raise ValueError("rho needs four component expressions")
        if self.k == 0.0:
            raise ValueError("gravitational constant k must be non-zero")
        object.__setattr__(self, "rho", tuple(self.rho))
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "k", float(self.k))


@dataclass(frozen=True)
class FluidReport:
    res_einstein: float
    res_inflation: float
    res_pressure_relation: float
    res_einstein_manifold: float
    res_energy_eq: float
    expansion: float
    acceleration_norm: float
    res_T: float
    kahler_passed: bool | None
    tol: float

    @property
    def verdicts(self) -> dict:
        return {
            "einstein": self.res_einstein < self.tol,
            "inflation": self.res_inflation < self.tol,
            "pressure_relation": self.res_pressure_relation < self.tol,
            "einstein_manifold": self.res_einstein_manifold < self.tol,
            "energy_eq": self.res_energy_eq < self.tol,
            "expansion_zero": abs(self.expansion) < self.tol,
            "acceleration_zero": self.acceleration_norm < self.tol,
            "vacuum": self.res_T < self.tol,
        }

    def as_dict(self) -> dict:
        return {
            "res_einstein": self.res_einstein,
            "res_inflation": self.res_inflation,
            "res_pressure_relation": self.res_pressure_relation,
            "res_einstein_manifold": self.res_einstein_manifold,
            "res_energy_eq": self.res_energy_eq,
            "expansion": self.expansion,
            "acceleration_norm": self.acceleration_norm,
            "res_T": self.res_T,
            "kahler_passed": self.kahler_passed,
            "verdicts": self.verdicts,
        }


def _fluid_fields(bundle, fluid: FluidState):
    sigma = eval_jet3(fluid.sigma, bundle.point)
    pressure = eval_jet3(fluid.pressure, bundle.point)
    rho, drho, _, _ = eval_jet_array(np.array(fluid.rho, dtype=object), bundle.point)
    return sigma, pressure, rho, drho


def velocity_norm(m: MetricStructure, fluid: FluidState, point) -> float:
    """g(rho, rho) at ``point``; -1 for a correctly normalised velocity."""
    bundle = curvature(m, point)
    _, _, rho, _ = _fluid_fields(bundle, fluid)
    return bundle.inner(rho, rho)


def _checked_omega(bundle, rho):
    norm = bundle.inner(rho, rho)
    if abs(norm + 1.0) > NORMALIZATION_TOL:
        raise NormalizationError(f"g(rho, rho) = {norm!r}, expected -1")
    return bundle.g @ rho


def energy_momentum(m: MetricStructure, fluid: FluidState, point) -> Tensor4:
    """T_ij = (sigma + p) omega_i omega_j + p g_ij."""
    bundle = curvature(m, point)
    sigma, pressure, rho, _ = _fluid_fields(bundle, fluid)
    omega = _checked_omega(bundle, rho)
    s, p = sigma.value, pressure.value
    T = (s + p) * np.outer(omega, omega) + p * bundle.g
    return Tensor4.lower(0.5 * (T + T.T))


def einstein_residual(m: MetricStructure, fluid: FluidState, point) -> float:
    bundle = curvature(m, point)
    T = energy_momentum(m, fluid, point).components
    r = bundle.scalar_r
    lhs = bundle._ricci - 0.5 * r * bundle.g + fluid.lam * bundle.g
    return float(np.max(np.abs(lhs - fluid.k * T)))


def fluid_audit(m: MetricStructure, F, fluid: FluidState, point,
                tol: float = DEFAULT_TOL) -> FluidReport:
    """Every fluid residual and kinematic quantity at ``point``.

    ``F`` may be ``None``; when given, the Kähler audit result is recorded in
    ``kahler_passed`` but not enforced.
    """
    bundle = curvature(m, point)
    sigma, pressure, rho, drho = _fluid_fields(bundle, fluid)
    T = energy_momentum(m, fluid, point).components
    r = bundle.scalar_r
    s, p = sigma.value, pressure.value

    # nabla_a rho^k, direction first
    nabla_rho = nabla(rho, drho, bundle.gamma, (UPPER,))
    div_rho = float(np.trace(nabla_rho))
    accel = rho @ nabla_rho
    rho_sigma = float(sigma.grad @ rho)

    kahler_passed = None
    if F is not None:
        kahler_passed = kahler_audit(m, F, point, tol).passed

    return FluidReport(
        res_einstein=einstein_residual(m, fluid, point),
        res_inflation=abs(s + p),
        res_pressure_relation=abs(fluid.lam - fluid.k * p - r / 4.0),
        res_einstein_manifold=float(np.max(np.abs(bundle._ricci - 0.25 * r * bundle.g))),
        res_energy_eq=abs(rho_sigma + (s + p) * div_rho),
        expansion=div_rho,
        acceleration_norm=float(np.max(np.abs(accel))),
        res_T=float(np.max(np.abs(T))),
        kahler_passed=kahler_passed,
        tol=tol,
    )
