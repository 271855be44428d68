"""
Curvature of a few textbook metrics
===================================

Christoffel symbols, Riemann and Ricci tensors come straight from exact
third-order jets of the metric components, so no step sizes appear anywhere.
"""

import numpy as np

from kahler_spacetime.catalog import builtin
from kahler_spacetime.conformal import weyl_tensor
from kahler_spacetime.geometry import curvature, sectional_curvature

# the round 4-sphere of radius 1: every plane has K = 1 and r = n(n-1) = 12
sphere = builtin("sphere4").metric
p = sphere.sample_points(1)[0]
b = curvature(sphere, p)
print("S^4 at", np.round(p, 3))
print("  scalar curvature r =", b.scalar_r)

rng = np.random.default_rng(0)
X, Y = rng.normal(size=4), rng.normal(size=4)
print("  K for a random plane =", sectional_curvature(sphere, p, X, Y))

# shrinking the radius to 1/2 quadruples the curvature
print("  r on the sphere of radius 0.5 =", curvature(builtin("sphere4", a=0.5).metric, p).scalar_r)

# de Sitter is the Lorentzian cousin: Ricci = 3 g, so r = 12 again
ds = builtin("de_sitter").metric
q = ds.sample_points(1)[0]
bd = curvature(ds, q)
print("de Sitter: max |Ric - 3g| =", np.max(np.abs(bd._ricci - 3 * bd.g)))

# Schwarzschild is Ricci flat but far from flat; all its curvature is Weyl
schw = builtin("schwarzschild").metric
pt = (0.5, 4.0, 1.2, 1.0)   # r = 4 in units of the mass
bs = curvature(schw, pt)
C = weyl_tensor(schw, pt).components
print("Schwarzschild at r = 4:")
print("  max |Ric| =", np.max(np.abs(bs._ricci)))
print("  max |C|   =", np.max(np.abs(C)))
gi = bs.g_inv
K2 = np.einsum("abcd,ai,bj,ck,dl,ijkl->", C, gi, gi, gi, gi, C)
print("  Kretschmann", K2, "vs 48/4^6 =", 48 / 4**6)
