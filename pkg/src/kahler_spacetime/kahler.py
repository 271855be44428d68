"""Kähler structure checks for a metric carrying a candidate (1,1)-tensor F.

For a Kähler space-time the tensor F must square to minus the identity, be
g-orthogonal, be parallel, and (as a consequence) leave the Ricci tensor
invariant.  Each property is reported as a max-abs residual at one point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import MetricStructure, covariant_derivative, curvature
from .jets import eval_jet_array
from .tensor import DIM, LOWER, UPPER

DEFAULT_TOL = 1e-8


@dataclass(frozen=True)
class KahlerReport:
    res_almost_complex: float
    res_hermitian: float
    res_parallel: float
    res_ricci_invariance: float
    tol: float

    @property
    def verdicts(self) -> dict:
        return {
            "almost_complex": self.res_almost_complex < self.tol,
            "hermitian": self.res_hermitian < self.tol,
            "parallel": self.res_parallel < self.tol,
            "ricci_invariance": self.res_ricci_invariance < self.tol,
        }

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())

    def as_dict(self) -> dict:
        return {
            "res_almost_complex": self.res_almost_complex,
            "res_hermitian": self.res_hermitian,
            "res_parallel": self.res_parallel,
            "res_ricci_invariance": self.res_ricci_invariance,
            "verdicts": self.verdicts,
        }


def structure_at(F, point) -> np.ndarray:
    """Numeric matrix F[i, j] = F^i_j at ``point``."""
    value, *_ = eval_jet_array(F, np.asarray(point, dtype=float))
    return value


def kahler_audit(m: MetricStructure, F, point, tol: float = DEFAULT_TOL) -> KahlerReport:
    if F is None:
        F = m.complex_structure
    if F is None:
        raise ValueError(f"metric {m.name!r} has no complex structure")
    bundle = curvature(m, point)
    Fv = structure_at(F, bundle.point)
    g = bundle.g
    S = bundle._ricci
    # g(FX, FY) = F^a_i g_ab F^b_j
    res_almost = np.max(np.abs(Fv @ Fv + np.eye(DIM)))
    res_herm = np.max(np.abs(Fv.T @ g @ Fv - g))
    nabla_F = covariant_derivative(m, bundle.point, F, (UPPER, LOWER))
    res_par = np.max(np.abs(nabla_F.components))
    res_ricci = np.max(np.abs(Fv.T @ S @ Fv - S))
    return KahlerReport(float(res_almost), float(res_herm), float(res_par),
                        float(res_ricci), tol)
