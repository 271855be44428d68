"""
Perfect fluids and the Einstein equation
========================================

Residuals of S - (r/2) g + lambda g = k T for a perfect fluid, followed by the
consequences that hold once the fluid is inflationary (sigma + p = 0).
"""

from kahler_spacetime.catalog import builtin
from kahler_spacetime.relativity import fluid_audit

# empty de Sitter with lambda = 3
ds = builtin("de_sitter").metric
for p in ds.sample_points(3):
    rep = fluid_audit(ds, None, ds.fluid, p)
    print(f"de Sitter r = {p[1]:.3f}: field equation {rep.res_einstein:.1e}, "
          f"lambda - kp - r/4 {rep.res_pressure_relation:.1e}, "
          f"expansion {rep.expansion:.1e}, acceleration {rep.acceleration_norm:.4f}")

# FLRW dust: the energy equation holds because sigma ~ t^-2 and a ~ t^(2/3)
flrw = builtin("flrw").metric
for t in (1.0, 2.0, 3.0):
    rep = fluid_audit(flrw, None, flrw.fluid, (t, 0.0, 0.0, 0.0))
    print(f"FLRW t = {t}: field equation {rep.res_einstein:.1e}, energy equation {rep.res_energy_eq:.1e}, "
          f"expansion {rep.expansion:.4f} (2/t = {2 / t:.4f}), sigma + p = {rep.res_inflation:.4f}")
