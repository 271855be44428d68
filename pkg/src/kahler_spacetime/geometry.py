"""Levi-Civita curvature pipeline for metrics given by component expressions.

Conventions (fixed, and pinned by tests on the round 4-sphere):

* ``gamma[k, i, j]`` is the Christoffel symbol with upper index ``k``.
* ``R(X, Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z`` and the
  (1,3) array is ``riemann_1_3[i, j, k, l]`` = l-th component of
  ``R(d_i, d_j) d_k``.
* ``riemann_0_4[i, j, k, l] = R(d_i, d_j, d_k, d_l) = g(R(d_i, d_j) d_k, d_l)``,
  so ``R(X, Y, Y, X) / (g(X,X) g(Y,Y) - g(X,Y)^2)`` is the sectional curvature
  (+1 on the unit sphere).
* ``ricci[y, z] = g^{ab} R(d_y, d_a, d_b, d_z)``, ``scalar_r = g^{yz} ricci[y, z]``.
* Covariant derivatives put the direction index first:
  ``nabla_riemann[a, i, j, k, l] = (nabla_a R)(d_i, d_j, d_k, d_l)``.

All partial derivatives of the metric (up to third order) come from
:mod:`~kahler_spacetime.jets`, so curvature and its covariant derivative are
exact up to rounding.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DegenerateMetricError, DegeneratePlaneError, DomainError, FrameError
from .expr import Expr
from .jets import eval_jet_array
from .tensor import DIM, LOWER, UPPER, MetricAtPoint, Tensor4

DEFAULT_SEED = 42
DET_THRESHOLD = 1e-12
PLANE_THRESHOLD = 1e-10
NULL_THRESHOLD = 1e-10

_CACHE_SIZE = 64


@dataclass(eq=False)
class MetricStructure:
    """A metric on a coordinate box, with optional complex structure and fluid.

    ``components`` is a 4x4 object array of expressions; the ``[j, i]`` entry
    is the same object as ``[i, j]``.  ``complex_structure[i, j]`` is the
    expression for ``F^i_j``.
    """

    name: str
    components: np.ndarray
    signature: tuple
    domain: tuple
    coordinates: tuple = ("x0", "x1", "x2", "x3")
    complex_structure: np.ndarray | None = None
    fluid: object = None
    description: str = ""
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        comps = np.asarray(self.components, dtype=object)
        if comps.shape != (DIM, DIM):
            raise ValueError("metric components must be a 4x4 array")
        for i in range(DIM):
            for j in range(i + 1, DIM):
                comps[j, i] = comps[i, j]
        if not all(isinstance(e, Expr) for e in comps.flat):
            raise TypeError("metric components must be expressions")
        self.components = comps
        self.signature = tuple(int(s) for s in self.signature)
        self.domain = tuple((float(lo), float(hi)) for lo, hi in self.domain)
        if len(self.domain) != DIM:
            raise ValueError("domain needs one [lo, hi] interval per coordinate")
        if self.complex_structure is not None:
            self.complex_structure = np.asarray(self.complex_structure, dtype=object)

    def contains(self, point) -> bool:
        return all(lo <= c <= hi for c, (lo, hi) in zip(point, self.domain))

    def center(self) -> np.ndarray:
        return np.array([0.5 * (lo + hi) for lo, hi in self.domain])

    def sample_points(self, n: int, seed: int = DEFAULT_SEED) -> np.ndarray:
        """``n`` points drawn uniformly from the domain box with a seeded generator."""
        rng = np.random.default_rng(seed)
        lo = np.array([d[0] for d in self.domain])
        hi = np.array([d[1] for d in self.domain])
        return lo + (hi - lo) * rng.random((n, DIM))

    def metric_jets(self, point):
        """g and its first three partial derivatives at ``point`` (derivative axes first)."""
        point = _as_point(point)
        if not self.contains(point):
            raise DomainError(f"point {point.tolist()} outside domain box of {self.name!r}")
        g, dg, d2g, d3g = eval_jet_array(self.components, point)
        return g, dg, d2g, d3g

    def at(self, point) -> MetricAtPoint:
        return curvature(self, point).metric

    def curvature(self, point) -> "CurvatureBundle":
        return curvature(self, point)


def _as_point(point):
    p = np.asarray(point, dtype=float)
    if p.shape != (DIM,) or not np.all(np.isfinite(p)):
        raise ValueError(f"point must be 4 finite coordinates, got {point!r}")
    return p


def _inverse_derivatives(g, dg, d2g):
    det = np.linalg.det(g)
    if abs(det) <= DET_THRESHOLD:
        raise DegenerateMetricError(f"|det g| = {abs(det):.3e} <= {DET_THRESHOLD}")
    ginv = np.linalg.inv(g)
    ginv = 0.5 * (ginv + ginv.T)
    dginv = -np.einsum("km,amn,nl->akl", ginv, dg, ginv)
    inner = (np.einsum("amn,np,bpq->abmq", dg, ginv, dg)
             + np.einsum("bmn,np,apq->abmq", dg, ginv, dg) - d2g)
    d2ginv = np.einsum("km,abmq,ql->abkl", ginv, inner, ginv)
    return ginv, dginv, d2ginv


def _first_kind(dg):
    """Gamma_{l i j} = (d_i g_jl + d_j g_il - d_l g_ij) / 2, with leading derivative axes kept."""
    lead = dg.ndim - 3
    d = dg
    # d[..., a, i, j] is d_a g_ij
    t1 = np.moveaxis(d, (lead, lead + 1, lead + 2), (lead + 1, lead + 2, lead))  # [.., l, i, j] <- d_i g_jl
    t2 = np.moveaxis(d, (lead, lead + 1, lead + 2), (lead + 2, lead + 1, lead))  # [.., l, i, j] <- d_j g_il
    return 0.5 * (t1 + t2 - d)


def nabla(value, partial, gamma, variance):
    """Covariant derivative of a tensor from its value and partial derivatives.

    ``partial[a, ...]`` is the coordinate derivative along ``a``; the result
    has the direction index first.
    """
    out = np.array(partial, dtype=float, copy=True)
    for s, var in enumerate(variance):
        if var == LOWER:
            term = np.tensordot(gamma, value, axes=([0], [s]))   # [a, t_s, rest]
            out -= np.moveaxis(term, 1, s + 1)
        else:
            term = np.tensordot(gamma, value, axes=([2], [s]))   # [t_s, a, rest]
            out += np.moveaxis(np.swapaxes(term, 0, 1), 1, s + 1)
    return out


class CurvatureBundle:
    """Curvature data of a metric at one point.  Expensive pieces are lazy."""

    def __init__(self, metric: MetricStructure, point):
        self.metric_structure = metric
        self.point = _as_point(point)
        g, dg, d2g, d3g = metric.metric_jets(self.point)
        self.g, self.dg, self.d2g, self.d3g = g, dg, d2g, d3g
        self.g_inv, self.dg_inv, self.d2g_inv = _inverse_derivatives(g, dg, d2g)
        g1 = _first_kind(dg)
        self._dg1 = _first_kind(d2g)
        self._d2g1 = _first_kind(d3g)
        self._g1 = g1
        self.gamma = np.einsum("kl,lij->kij", self.g_inv, g1)

    @cached_property
    def metric(self) -> MetricAtPoint:
        return MetricAtPoint.from_matrix(self.g)

    @cached_property
    def dgamma(self):
        """dgamma[a, k, i, j] = d_a Gamma^k_ij."""
        return (np.einsum("akl,lij->akij", self.dg_inv, self._g1)
                + np.einsum("kl,alij->akij", self.g_inv, self._dg1))

    @cached_property
    def d2gamma(self):
        return (np.einsum("abkl,lij->abkij", self.d2g_inv, self._g1)
                + np.einsum("akl,blij->abkij", self.dg_inv, self._dg1)
                + np.einsum("bkl,alij->abkij", self.dg_inv, self._dg1)
                + np.einsum("kl,ablij->abkij", self.g_inv, self._d2g1))

    @cached_property
    def _riemann_1_3(self):
        G, dG = self.gamma, self.dgamma
        return (np.einsum("iljk->ijkl", dG) - np.einsum("jlik->ijkl", dG)
                + np.einsum("lim,mjk->ijkl", G, G) - np.einsum("ljm,mik->ijkl", G, G))

    @cached_property
    def _d_riemann_1_3(self):
        G, dG, d2G = self.gamma, self.dgamma, self.d2gamma
        return (np.einsum("ailjk->aijkl", d2G) - np.einsum("ajlik->aijkl", d2G)
                + np.einsum("alim,mjk->aijkl", dG, G) + np.einsum("lim,amjk->aijkl", G, dG)
                - np.einsum("aljm,mik->aijkl", dG, G) - np.einsum("ljm,amik->aijkl", G, dG))

    @cached_property
    def _riemann_0_4(self):
        return np.einsum("lm,ijkm->ijkl", self.g, self._riemann_1_3)

    @cached_property
    def _d_riemann_0_4(self):
        """Partial derivatives d_a R_ijkl (not covariant)."""
        return (np.einsum("alm,ijkm->aijkl", self.dg, self._riemann_1_3)
                + np.einsum("lm,aijkm->aijkl", self.g, self._d_riemann_1_3))

    @property
    def riemann_1_3(self) -> Tensor4:
        return Tensor4(self._riemann_1_3, (LOWER, LOWER, LOWER, UPPER))

    @property
    def riemann_0_4(self) -> Tensor4:
        return Tensor4.lower(self._riemann_0_4)

    @cached_property
    def _ricci(self):
        s = np.einsum("ab,yabz->yz", self.g_inv, self._riemann_0_4)
        return 0.5 * (s + s.T)

    @property
    def ricci(self) -> Tensor4:
        return Tensor4.lower(self._ricci)

    @cached_property
    def scalar_r(self) -> float:
        return float(np.einsum("yz,yz->", self.g_inv, self._ricci))

    @cached_property
    def _nabla_riemann(self):
        return nabla(self._riemann_0_4, self._d_riemann_0_4, self.gamma, (LOWER,) * 4)

    @property
    def nabla_riemann(self) -> Tensor4:
        """(nabla_X R)(Y, Z, U, V) with the direction slot first."""
        return Tensor4.lower(self._nabla_riemann)

    @cached_property
    def _d_ricci(self):
        return (np.einsum("apq,ypqz->ayz", self.dg_inv, self._riemann_0_4)
                + np.einsum("pq,aypqz->ayz", self.g_inv, self._d_riemann_0_4))

    @cached_property
    def _nabla_ricci_direct(self):
        return nabla(self._ricci, self._d_ricci, self.gamma, (LOWER, LOWER))

    @cached_property
    def _nabla_ricci_contracted(self):
        return np.einsum("pq,aypqz->ayz", self.g_inv, self._nabla_riemann)

    def nabla_ricci(self, method: str = "direct") -> Tensor4:
        """(nabla_X S)(Y, Z), either by differentiating S or by contracting nabla R."""
        if method == "direct":
            return Tensor4.lower(self._nabla_ricci_direct)
        if method == "contracted":
            return Tensor4.lower(self._nabla_ricci_contracted)
        raise ValueError(f"unknown method {method!r}")

    @cached_property
    def d_scalar_r(self):
        return (np.einsum("ayz,yz->a", self.dg_inv, self._ricci)
                + np.einsum("yz,ayz->a", self.g_inv, self._d_ricci))

    def divergence_riemann(self) -> np.ndarray:
        """(div R)(Y, Z)U = sum_i (nabla_{e_i} R)(Y, Z, U, e_i), as an array [y, z, u]."""
        return np.einsum("ab,ayzub->yzu", self.g_inv, self._nabla_riemann)

    def divergence_ricci(self) -> np.ndarray:
        """(div S)(Z) = g^{ab} (nabla_a S)(b, Z)."""
        return np.einsum("ab,abz->z", self.g_inv, self._nabla_ricci_direct)

    def nabla_metric(self) -> np.ndarray:
        return nabla(self.g, self.dg, self.gamma, (LOWER, LOWER))

    def inner(self, X, Y) -> float:
        return float(np.asarray(X) @ self.g @ np.asarray(Y))


def curvature(m: MetricStructure, point) -> CurvatureBundle:
    """Curvature bundle of ``m`` at ``point`` (memoised per metric)."""
    key = tuple(_as_point(point).tolist())
    bundle = m._cache.get(key)
    if bundle is None:
        bundle = CurvatureBundle(m, key)
        if len(m._cache) >= _CACHE_SIZE:
            m._cache.pop(next(iter(m._cache)))
        m._cache[key] = bundle
    return bundle


def christoffel(m: MetricStructure, point) -> np.ndarray:
    """Gamma^k_ij as an array [k, i, j]."""
    return curvature(m, point).gamma


def riemann(m: MetricStructure, point) -> CurvatureBundle:
    return curvature(m, point)


def covariant_derivative(m: MetricStructure, point, tensor_field, variance=None) -> Tensor4:
    """Covariant derivative of a tensor field at ``point``.

    ``tensor_field`` may be

    * an array of expressions (components of the field), with ``variance``
      giving ``"u"``/``"l"`` per slot;
    * one of ``"metric"``, ``"ricci"``, ``"riemann"``;
    * a callable ``point -> (value, partial)`` where ``partial[a, ...]`` is the
      coordinate derivative along ``a``.
    """
    bundle = curvature(m, point)
    if isinstance(tensor_field, str):
        if tensor_field == "metric":
            return Tensor4.lower(bundle.nabla_metric())
        if tensor_field == "ricci":
            return bundle.nabla_ricci("direct")
        if tensor_field == "riemann":
            return bundle.nabla_riemann
        raise ValueError(f"unknown named field {tensor_field!r}")
    if callable(tensor_field):
        value, partial = tensor_field(bundle.point)
    else:
        value, partial, _, _ = eval_jet_array(tensor_field, bundle.point)
    value = np.asarray(value, dtype=float)
    if variance is None:
        raise ValueError("variance is required for expression-backed or callable fields")
    variance = tuple(variance)
    if len(variance) != value.ndim:
        raise ValueError(f"variance {variance!r} does not match rank {value.ndim}")
    comps = nabla(value, partial, bundle.gamma, variance)
    return Tensor4(comps, (LOWER,) + variance)


def sectional_curvature(m: MetricStructure, point, X, Y) -> float:
    """K(X, Y) = R(X, Y, Y, X) / (g(X,X) g(Y,Y) - g(X,Y)^2)."""
    bundle = curvature(m, point)
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    den = bundle.inner(X, X) * bundle.inner(Y, Y) - bundle.inner(X, Y) ** 2
    if abs(den) <= PLANE_THRESHOLD:
        raise DegeneratePlaneError(f"plane is (nearly) null: denominator {den:.3e}")
    num = np.einsum("ijkl,i,j,k,l->", bundle._riemann_0_4, X, Y, Y, X)
    return float(num / den)


def orthonormal_frame(m: MetricStructure, point, rho) -> np.ndarray:
    """Rows e0..e3 with e0 = rho/|rho| timelike and e1..e3 spanning rho-perp.

    Signature-aware Gram-Schmidt seeded from the coordinate vectors; seeds
    that are (numerically) in the span of earlier vectors are skipped.
    """
    bundle = curvature(m, point)
    rho = np.asarray(rho, dtype=float)
    norm = bundle.inner(rho, rho)
    if not norm < 0.0:
        raise FrameError(f"rho is not timelike: g(rho, rho) = {norm:.3e}")
    frame = [rho / np.sqrt(-norm)]
    signs = [-1.0]
    for seed in np.eye(DIM):
        v = seed.copy()
        for e, s in zip(frame, signs):
            v = v - s * bundle.inner(v, e) * e
        if np.linalg.norm(v) < 1e-8:
            continue
        vv = bundle.inner(v, v)
        if abs(vv) < NULL_THRESHOLD:
            raise FrameError(f"Gram-Schmidt hit a near-null vector (g(v,v) = {vv:.3e})")
        if vv < 0.0:
            raise FrameError("orthogonal complement of rho is not spacelike")
        frame.append(v / np.sqrt(vv))
        signs.append(1.0)
        if len(frame) == DIM:
            break
    if len(frame) != DIM:
        raise FrameError("could not complete the frame")
    return np.array(frame)
