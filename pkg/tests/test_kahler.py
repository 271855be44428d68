import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kahler_spacetime.catalog import builtin, rotating_structure
from kahler_spacetime.expr import Const
from kahler_spacetime.geometry import curvature
from kahler_spacetime.kahler import kahler_audit, structure_at

from oracles import fd_christoffel

EUCLIDEAN = builtin("euclidean").metric


def _constant_structure(matrix):
    return np.array([[Const(float(v)) for v in row] for row in matrix], dtype=object)


# F e0 = e1, F e1 = -e0, F e2 = e3, F e3 = -e2, as columns F^i_j
PAIRING = np.array([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]], dtype=float)
CROSS_PAIRING = np.array([[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]], dtype=float)


def test_neutral_flat_structure(catalog):
    m = catalog["neutral_kahler_flat"].metric
    np.testing.assert_array_equal(structure_at(m.complex_structure, (0, 0, 0, 0)), PAIRING)
    for p in m.sample_points(5):
        rep = kahler_audit(m, None, p)
        for value in rep.as_dict().values():
            if isinstance(value, float):
                assert value < 1e-13
        assert rep.passed


def test_explicit_structure_overrides_the_catalog_one(catalog):
    m = catalog["neutral_kahler_flat"].metric
    rep = kahler_audit(m, _constant_structure(CROSS_PAIRING), (0, 0, 0, 0))
    # pairing a timelike with a spacelike axis is not g-orthogonal in neutral signature
    assert rep.res_almost_complex == 0.0
    assert rep.res_hermitian == pytest.approx(2.0)
    assert not rep.passed


def test_fubini_study_is_kahler_einstein(catalog):
    m = catalog["fubini_study"].metric
    for p in m.sample_points(5):
        rep = kahler_audit(m, None, p)
        assert max(rep.res_almost_complex, rep.res_hermitian,
                   rep.res_parallel, rep.res_ricci_invariance) < 1e-8
        b = curvature(m, p)
        assert np.max(np.abs(b._ricci - 0.25 * b.scalar_r * b.g)) < 1e-8
        assert b.scalar_r == pytest.approx(24.0, rel=1e-10)


def test_fubini_study_structure_is_parallel_by_finite_differences(catalog):
    # (nabla_a F)^i_j = d_a F^i_j + Gamma^i_am F^m_j - Gamma^m_aj F^i_m with dF = 0
    # for a constant F; the Gamma terms must cancel with the oracle Christoffels
    m = catalog["fubini_study"].metric
    p = m.sample_points(1, seed=4)[0]
    G = fd_christoffel(m, p)
    F = structure_at(m.complex_structure, p)
    nabla = np.einsum("iam,mj->aij", G, F) - np.einsum("maj,im->aij", G, F)
    assert np.max(np.abs(nabla)) < 1e-7


def _values(F, q):
    return np.array([[e.evaluate(q) for e in row] for row in F])


def test_rotating_structure_is_not_parallel(catalog):
    m = catalog["euclidean"].metric
    F = rotating_structure()
    for p in m.sample_points(5):
        rep = kahler_audit(m, F, p)
        assert rep.res_almost_complex < 1e-13
        assert rep.res_hermitian < 1e-13
        assert rep.res_parallel > 0.1
        assert not rep.passed
        # flat Cartesian chart: nabla F is the coordinate derivative of F
        h = 1e-5
        dF = np.array([(_values(F, p + h * e) - _values(F, p - h * e)) / (2 * h) for e in np.eye(4)])
        assert rep.res_parallel == pytest.approx(np.max(np.abs(dF)), rel=1e-8)
    assert kahler_audit(m, F, (0.0, 0, 0, 0)).res_parallel == pytest.approx(1.0, rel=1e-12)


def test_missing_structure_is_an_error(catalog):
    with pytest.raises(ValueError):
        kahler_audit(catalog["minkowski"].metric, None, (0, 0, 0, 0))


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), noise=st.sampled_from([0.0, 1e-12, 1e-9, 1e-6, 1e-3]))
def test_almost_complex_forces_zero_trace(seed, noise):
    rng = np.random.default_rng(seed)
    P = rng.normal(size=(4, 4)) + 3 * np.eye(4)
    F = P @ PAIRING @ np.linalg.inv(P) + noise * rng.normal(size=(4, 4))
    tol = 1e-8
    rep = kahler_audit(EUCLIDEAN, _constant_structure(F), (0, 0, 0, 0), tol)
    if rep.verdicts["almost_complex"]:
        assert abs(np.trace(F)) <= 4 * tol


def test_parallel_hermitian_structure_preserves_ricci(catalog, flrw_linear):
    candidates = [None, _constant_structure(PAIRING), _constant_structure(CROSS_PAIRING),
                  rotating_structure()]
    hits = 0
    for m in [e.metric for e in catalog.values()] + [flrw_linear.metric]:
        for F in candidates:
            if F is None and m.complex_structure is None:
                continue
            for p in m.sample_points(3):
                rep = kahler_audit(m, F, p)
                if rep.res_parallel < 1e-8 and rep.res_hermitian < 1e-8:
                    assert rep.res_ricci_invariance < 1e-6, m.name
                    hits += 1
    assert hits > 0
