"""Run every applicable check on a catalog entry at seeded sample points.

The report is a plain dict ready for ``json.dumps``; it depends only on the
entry, the seed, the tolerance and the number of points, so reruns are
byte-identical.
"""

from __future__ import annotations

import numpy as np

from . import __version__
from .catalog import CatalogEntry
from .conformal import constant_curvature_residual, isotropy_fit, sectional_theorem_check, weyl_tensor
from .errors import KahlerSpacetimeError
from .geometry import DEFAULT_SEED, curvature
from .jets import eval_jet_array
from .kahler import DEFAULT_TOL, kahler_audit
from .relativity import fluid_audit
from .weak_symmetry import (alpha_rho_relation, ricci_eigen_residual, solve_weak_ricci,
                            solve_weak_symmetry, wrs_nonexistence_check)

DEFAULT_POINTS = 5

# identity checks use fixed relative tolerances, independent of the user tol
RIEMANN_SYMMETRY_TOL = 1e-9
METRIC_COMPATIBILITY_TOL = 1e-10
BIANCHI_TOL = 1e-7
WRS_SIGMA_MIN = 0.1


def curvature_identities(m, point) -> dict:
    """Max-abs residuals of the algebraic and differential curvature identities."""
    b = curvature(m, point)
    R = b._riemann_0_4
    scale = max(1.0, float(np.max(np.abs(R))))
    bianchi = R + np.einsum("jkil->ijkl", R) + np.einsum("kijl->ijkl", R)
    nabla_scale = max(1.0, float(np.max(np.abs(b._nabla_riemann))))
    return {
        "antisym_first_pair": float(np.max(np.abs(R + np.swapaxes(R, 0, 1)))) / scale,
        "antisym_second_pair": float(np.max(np.abs(R + np.swapaxes(R, 2, 3)))) / scale,
        "pair_symmetry": float(np.max(np.abs(R - np.einsum("klij->ijkl", R)))) / scale,
        "first_bianchi": float(np.max(np.abs(bianchi))) / scale,
        "ricci_symmetry": float(np.max(np.abs(b._ricci - b._ricci.T))) / scale,
        "nabla_g": float(np.max(np.abs(b.nabla_metric()))),
        "contracted_bianchi": float(np.max(np.abs(b.divergence_ricci() - 0.5 * b.d_scalar_r))) / nabla_scale,
    }


_IDENTITY_TOLS = {
    "antisym_first_pair": RIEMANN_SYMMETRY_TOL,
    "antisym_second_pair": RIEMANN_SYMMETRY_TOL,
    "pair_symmetry": RIEMANN_SYMMETRY_TOL,
    "first_bianchi": RIEMANN_SYMMETRY_TOL,
    "ricci_symmetry": RIEMANN_SYMMETRY_TOL,
    "nabla_g": METRIC_COMPATIBILITY_TOL,
    "contracted_bianchi": BIANCHI_TOL,
}


def _check(name, value, limit, passed, note=None):
    rec = {"check": name, "value": value, "limit": limit, "passed": bool(passed)}
    if note:
        rec["note"] = note
    return rec


def audit_point(entry: CatalogEntry, point, tol: float) -> dict:
    m = entry.metric
    b = curvature(m, point)
    R = b._riemann_0_4
    max_R = float(np.max(np.abs(R)))
    max_C = float(np.max(np.abs(weyl_tensor(m, point).components)))
    r = b.scalar_r
    einstein_res = float(np.max(np.abs(b._ricci - 0.25 * r * b.g)))
    rec = {
        "point": [float(c) for c in b.point],
        "curvature": {
            "r": r,
            "max_abs_gamma": float(np.max(np.abs(b.gamma))),
            "max_abs_R": max_R,
            "max_abs_C": max_C,
            "max_abs_ricci": float(np.max(np.abs(b._ricci))),
            "einstein_manifold_residual": einstein_res,
            "constant_curvature_residual": constant_curvature_residual(m, point),
        },
        "identities": curvature_identities(m, point),
    }
    checks = [_check(f"identity.{k}", v, _IDENTITY_TOLS[k], v < _IDENTITY_TOLS[k])
              for k, v in rec["identities"].items()]
    notes = []

    F = m.complex_structure
    kahler = None
    if F is not None:
        kahler = kahler_audit(m, F, point, tol)
        rec["kahler"] = kahler.as_dict()
    else:
        notes.append("kahler: skipped (no complex structure)")

    ws = solve_weak_symmetry(m, point)
    rec["weak_symmetry"] = ws.as_dict()
    rec["weak_ricci"] = solve_weak_ricci(m, point).as_dict()
    rec["alpha_rho"] = alpha_rho_relation(m, point, ws)
    sigma_min = wrs_nonexistence_check(m, point)
    rec["wrs_sigma_min"] = sigma_min
    checks.append(_check("wrs_nonexistence.sigma_min", sigma_min, WRS_SIGMA_MIN,
                         sigma_min > WRS_SIGMA_MIN))

    fluid = m.fluid
    fluid_report = None
    if fluid is not None:
        rho, *_ = eval_jet_array(np.array(fluid.rho, dtype=object), b.point)
        fluid_report = fluid_audit(m, F, fluid, point, tol)
        rec["fluid"] = fluid_report.as_dict()
        rec["rho"] = [float(c) for c in rho]
        rec["ricci_eigen"] = ricci_eigen_residual(m, point, rho).as_dict()
        try:
            rec["sectional"] = sectional_theorem_check(m, point, rho).as_dict()
            rec["isotropy"] = isotropy_fit(m, point, rho).as_dict()
        except KahlerSpacetimeError as exc:
            notes.append(f"sectional/isotropy: skipped ({type(exc).__name__}: {exc})")
    else:
        notes.append("fluid, ricci_eigen, sectional, isotropy: skipped (no fluid velocity)")

    checks.extend(_expected_checks(entry, tol, max_R, max_C, r, einstein_res, kahler, fluid_report))
    rec["checks"] = checks
    rec["notes"] = notes
    rec["passed"] = all(c["passed"] for c in checks)
    return rec


def _expected_checks(entry, tol, max_R, max_C, r, einstein_res, kahler, fluid_report):
    exp = entry.expected
    out = []
    scale_R = max(1.0, max_R)
    if exp.get("flat") is not None:
        out.append(_check("expected.flat", max_R, tol, (max_R < tol) == exp["flat"]))
    if exp.get("einstein") is not None:
        limit = tol * max(1.0, abs(r))
        out.append(_check("expected.einstein", einstein_res, limit,
                          (einstein_res < limit) == exp["einstein"]))
    if exp.get("conformally_flat") is not None:
        limit = tol * scale_R
        out.append(_check("expected.conformally_flat", max_C, limit,
                          (max_C < limit) == exp["conformally_flat"]))
    if exp.get("kahler") is not None and kahler is not None:
        worst = max(kahler.res_almost_complex, kahler.res_hermitian,
                    kahler.res_parallel, kahler.res_ricci_invariance)
        out.append(_check("expected.kahler", worst, tol, kahler.passed == exp["kahler"]))
    if exp.get("r") is not None:
        limit = tol * max(1.0, abs(exp["r"]))
        dev = abs(r - exp["r"])
        out.append(_check("expected.r", dev, limit, dev < limit))
    if exp.get("lambda") is not None and fluid_report is not None:
        limit = tol * scale_R
        out.append(_check("expected.lambda.einstein_equation", fluid_report.res_einstein, limit,
                          fluid_report.res_einstein < limit))
    return out


def run_audit(entry: CatalogEntry, points: int = DEFAULT_POINTS, seed: int = DEFAULT_SEED,
              tol: float = DEFAULT_TOL) -> dict:
    m = entry.metric
    records = []
    for idx, p in enumerate(m.sample_points(points, seed)):
        try:
            rec = audit_point(entry, p, tol)
        except KahlerSpacetimeError as exc:
            rec = {"point": [float(c) for c in p], "passed": False,
                   "error": f"{type(exc).__name__}: {exc}", "checks": [], "notes": []}
        rec["index"] = idx
        records.append(rec)
    return {
        "tool": "kahler_spacetime",
        "version": __version__,
        "metric": m.name,
        "description": m.description,
        "seed": seed,
        "tolerance": tol,
        "points": points,
        "expected": dict(entry.expected),
        "records": records,
        "passed": all(r["passed"] for r in records),
    }


def format_report(report: dict) -> str:
    lines = [f"audit {report['metric']}: {report['points']} points, seed {report['seed']}, "
             f"tol {report['tolerance']:g}"]
    for rec in report["records"]:
        head = f"point {rec['index']} {_fmt_point(rec['point'])}"
        if "error" in rec:
            lines.append(f"{head}: ERROR {rec['error']}")
            continue
        cv = rec["curvature"]
        lines.append(f"{head}: r = {cv['r']:.12g}, max|R| = {cv['max_abs_R']:.3e}, "
                     f"max|C| = {cv['max_abs_C']:.3e}")
        for c in rec["checks"]:
            rel = "<" if c["value"] < c["limit"] else ">="
            status = "ok" if c["passed"] else "FAIL"
            lines.append(f"  {c['check']:<36s} {c['value']:.3e} {rel} {c['limit']:.1e}  {status}")
        if "kahler" in rec:
            k = rec["kahler"]
            lines.append("  kahler residuals: " + ", ".join(
                f"{key[4:]} {k[key]:.3e}" for key in
                ("res_almost_complex", "res_hermitian", "res_parallel", "res_ricci_invariance")))
        if "fluid" in rec:
            f = rec["fluid"]
            lines.append(f"  fluid: einstein {f['res_einstein']:.3e}, sigma+p {f['res_inflation']:.3e}, "
                         f"lambda-kp-r/4 {f['res_pressure_relation']:.3e}, energy eq {f['res_energy_eq']:.3e}, "
                         f"expansion {f['expansion']:.6g}, acceleration {f['acceleration_norm']:.6g}")
        if "sectional" in rec:
            s = rec["sectional"]
            vals = ", ".join(f"{v:.9g}" for v in s["K_spatial"] + s["K_timelike"])
            lines.append(f"  sectional K (spatial, timelike): {vals}; r/12 = {s['target']:.9g}")
        if "isotropy" in rec:
            iso = rec["isotropy"]
            lines.append(f"  isotropy fit: a = {iso['a']:.9g} (res {iso['res_a']:.2e}), "
                         f"b = {iso['b']:.9g} (res {iso['res_b']:.2e})")
        ws = rec["weak_symmetry"]
        wr = rec["weak_ricci"]
        lines.append(f"  weak symmetry residual {ws['residual']:.3e} (rank {ws['system_rank']}), "
                     f"weak Ricci residual {wr['residual']:.3e}, |r(g(alpha,rho)-4)| = {rec['alpha_rho']:.6g}")
        for note in rec["notes"]:
            lines.append(f"  note: {note}")
    lines.append("PASS" if report["passed"] else "FAIL")
    return "\n".join(lines)


def _fmt_point(p):
    return "(" + ", ".join(f"{c:.6g}" for c in p) + ")"
