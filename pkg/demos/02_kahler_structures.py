"""
Complex structures: which ones are Kähler?
==========================================

Four residuals decide it: F^2 = -1, g(FX, FY) = g(X, Y), nabla F = 0, and
Ricci invariance S(FX, FY) = S(X, Y).
"""

from kahler_spacetime.catalog import builtin, rotating_structure
from kahler_spacetime.geometry import curvature
from kahler_spacetime.kahler import kahler_audit


def show(label, rep):
    print(f"{label:<28s} almost complex {rep.res_almost_complex:.1e}  hermitian {rep.res_hermitian:.1e}  "
          f"parallel {rep.res_parallel:.1e}  ricci {rep.res_ricci_invariance:.1e}  -> "
          f"{'Kähler' if rep.passed else 'not Kähler'}")


# a constant structure on flat space of signature (-,-,+,+)
neutral = builtin("neutral_kahler_flat").metric
show("neutral flat", kahler_audit(neutral, None, neutral.center()))

# the Fubini-Study metric is Kähler and Einstein with r = 24
fs = builtin("fubini_study").metric
p = fs.sample_points(1)[0]
show("Fubini-Study", kahler_audit(fs, None, p))
print("  r =", curvature(fs, p).scalar_r)

# a structure that rotates with x0 is pointwise fine but not parallel
euclid = builtin("euclidean").metric
show("rotating F on flat R^4", kahler_audit(euclid, rotating_structure(), (0.3, 0.1, -0.2, 0.5)))

# Lorentzian signature admits no g-compatible F; the audit just reports the numbers
mink = builtin("minkowski").metric
show("neutral F on Minkowski", kahler_audit(mink, neutral.complex_structure, mink.center()))
