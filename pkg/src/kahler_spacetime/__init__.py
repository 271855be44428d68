"""Numerical tensor calculus for 4-dimensional semi-Riemannian metrics, with
audits of Kähler space-time, perfect-fluid, conformal-flatness and weak
symmetry identities at sample points."""

__version__ = "0.1.0"

from .catalog import CatalogEntry, builtin, load_metric_file, resolve  # noqa: E402
from .conformal import (constant_curvature_residual, isotropy_fit,  # noqa: E402
                        sectional_theorem_check, weyl_tensor)
from .expr import parse_expr  # noqa: E402
from .geometry import (MetricStructure, christoffel, covariant_derivative,  # noqa: E402
                       curvature, orthonormal_frame, riemann, sectional_curvature)
from .jets import Jet3, eval_jet3  # noqa: E402
from .kahler import kahler_audit  # noqa: E402
from .relativity import FluidState, einstein_residual, energy_momentum, fluid_audit  # noqa: E402
from .tensor import MetricAtPoint, Tensor4, contract, max_abs, raise_lower  # noqa: E402
from .weak_symmetry import (alpha_rho_relation, ricci_eigen_residual,  # noqa: E402
                            solve_weak_ricci, solve_weak_symmetry, wrs_nonexistence_check)
