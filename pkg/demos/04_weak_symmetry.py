"""
Weakly symmetric and weakly Ricci symmetric structure
=====================================================

At a point the defining conditions are linear in the five one-forms, so they
become a 256 x 8 (or 64 x 8) least-squares system.  The minimum-norm solution
and its residual say whether the point admits such a structure.
"""

import numpy as np

from kahler_spacetime.catalog import builtin
from kahler_spacetime.weak_symmetry import (alpha_rho_relation, solve_weak_ricci, solve_weak_symmetry,
                                            wrs_nonexistence_check)

# locally symmetric spaces have nabla R = 0, so the only solution is zero
for name in ("sphere4", "de_sitter", "minkowski"):
    m = builtin(name).metric
    sol = solve_weak_symmetry(m, m.sample_points(1)[0])
    print(f"{name:<10s} A = {np.round(sol.A, 12)}, residual {sol.residual:.1e}, rank {sol.system_rank}")

# FLRW with a = t is not locally symmetric and has an exact non-trivial solution at t = 1
lin = builtin("flrw", law="linear").metric
ws = solve_weak_symmetry(lin, (1.0, 0, 0, 0))
wr = solve_weak_ricci(lin, (1.0, 0, 0, 0))
print("FLRW a = t at t = 1:")
print("  weak symmetry A =", np.round(ws.A, 12), "omega =", np.round(ws.omega, 12), f"residual {ws.residual:.1e}")
print("  weak Ricci    A =", np.round(wr.A, 12), "omega =", np.round(wr.omega, 12), f"residual {wr.residual:.1e}")
print("  |r (g(alpha, rho) - 4)| =", alpha_rho_relation(lin, (1.0, 0, 0, 0), ws))

# the pure-metric system for weak Ricci symmetry only has the zero solution:
# its smallest singular value stays well away from zero on every metric
for name in ("minkowski", "euclidean", "schwarzschild", "fubini_study"):
    m = builtin(name).metric
    print(f"{name:<14s} sigma_min = {wrs_nonexistence_check(m, m.center()):.6f}")
