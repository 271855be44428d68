"""Weak symmetry and weak Ricci symmetry as linear systems in two 1-forms.

A manifold is weakly symmetric when, with 1-forms A and omega,

    (nabla_X R)(Y,Z,U,V) = A(X) R(Y,Z,U,V) + omega(Y) R(X,Z,U,V)
                           + omega(Z) R(Y,X,U,V) + omega(U) R(Y,Z,X,V)
                           + omega(V) R(Y,Z,U,X)

and weakly Ricci symmetric when

    (nabla_X S)(Y,Z) = A(X) S(Y,Z) + omega(Y) S(X,Z) + omega(Z) S(Y,X).

Evaluated on all coordinate-basis tuples these are 1024x8 and 64x8 linear
systems in the unknowns (A_0..A_3, omega_0..omega_3).  They are solved in the
minimum-norm least-squares sense; the residual says how far the point is
from satisfying the condition with any pair of 1-forms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import MetricStructure, curvature

# singular values below RCOND * max(largest singular value, max|R|) are treated as zero;
# measuring against the curvature scale keeps a rounding-level Ricci tensor (vacuum
# solutions) from being inverted as if it carried information
RCOND = 1e-10

_I = np.eye(4)


@dataclass(frozen=True, eq=False)
class WeakSymmetrySolution:
    A: np.ndarray
    omega: np.ndarray
    residual: float
    system_rank: int

    def as_dict(self) -> dict:
        return {"A": self.A.tolist(), "omega": self.omega.tolist(),
                "residual": self.residual, "system_rank": self.system_rank}


@dataclass(frozen=True, eq=False)
class WeakRicciSolution(WeakSymmetrySolution):
    sigma_min: float = 0.0

    def as_dict(self) -> dict:
        d = super().as_dict()
        d["sigma_min"] = self.sigma_min
        return d


def weak_symmetry_system(R, nabla_R):
    """Coefficient matrix (1024x8) and right-hand side for the curvature condition.

    Row order is (x, y, z, u, v) row-major; columns are A_0..A_3 then omega_0..omega_3.
    """
    cols_A = np.einsum("jx,yzuv->xyzuvj", _I, R)
    cols_w = (np.einsum("jy,xzuv->xyzuvj", _I, R)
              + np.einsum("jz,yxuv->xyzuvj", _I, R)
              + np.einsum("ju,yzxv->xyzuvj", _I, R)
              + np.einsum("jv,yzux->xyzuvj", _I, R))
    M = np.concatenate([cols_A.reshape(-1, 4), cols_w.reshape(-1, 4)], axis=1)
    return M, np.asarray(nabla_R).reshape(-1)


def weak_ricci_system(S, nabla_S):
    """Coefficient matrix (64x8) and right-hand side for the Ricci condition; rows (x, y, z)."""
    cols_A = np.einsum("jx,yz->xyzj", _I, S)
    cols_w = np.einsum("jy,xz->xyzj", _I, S) + np.einsum("jz,yx->xyzj", _I, S)
    M = np.concatenate([cols_A.reshape(-1, 4), cols_w.reshape(-1, 4)], axis=1)
    return M, np.asarray(nabla_S).reshape(-1)


def min_norm_solve(M, rhs, scale=0.0):
    """Minimum-norm least-squares solution of ``M x = rhs`` by truncated SVD.

    Returns ``(x, max-abs residual, numerical rank, singular values)``.
    """
    U, s, Vt = np.linalg.svd(M, full_matrices=False)
    cutoff = RCOND * max(s[0] if s.size else 0.0, scale)
    keep = s > cutoff
    coef = (U[:, keep].T @ rhs) / s[keep]
    sol = Vt[keep].T @ coef
    residual = float(np.max(np.abs(M @ sol - rhs))) if rhs.size else 0.0
    return sol, residual, int(np.count_nonzero(keep)), s


def solve_weak_symmetry(m: MetricStructure, point) -> WeakSymmetrySolution:
    b = curvature(m, point)
    R = b._riemann_0_4
    M, rhs = weak_symmetry_system(R, b._nabla_riemann)
    sol, residual, rank, _ = min_norm_solve(M, rhs, float(np.max(np.abs(R))))
    return WeakSymmetrySolution(sol[:4], sol[4:], residual, rank)


def solve_weak_ricci(m: MetricStructure, point, method: str = "direct") -> WeakRicciSolution:
    b = curvature(m, point)
    M, rhs = weak_ricci_system(b._ricci, b.nabla_ricci(method).components)
    sol, residual, rank, s = min_norm_solve(M, rhs, float(np.max(np.abs(b._riemann_0_4))))
    return WeakRicciSolution(sol[:4], sol[4:], residual, rank, float(s[-1]))


@dataclass(frozen=True)
class RicciEigenResidual:
    res_half_r: float
    res_quarter_r: float

    def as_dict(self) -> dict:
        return {"res_half_r": self.res_half_r, "res_quarter_r": self.res_quarter_r}


def ricci_eigen_residual(m: MetricStructure, point, rho) -> RicciEigenResidual:
    """How far rho is from being a Ricci eigenvector with eigenvalue r/2 and r/4."""
    b = curvature(m, point)
    rho = np.asarray(rho, dtype=float)
    S_rho = b._ricci @ rho
    g_rho = b.g @ rho
    r = b.scalar_r
    return RicciEigenResidual(float(np.max(np.abs(S_rho - 0.5 * r * g_rho))),
                              float(np.max(np.abs(S_rho - 0.25 * r * g_rho))))


def alpha_rho_relation(m: MetricStructure, point, solution: WeakSymmetrySolution) -> float:
    """|r (g(alpha, rho) - 4)| with alpha, rho the vectors dual to A and omega."""
    b = curvature(m, point)
    g_alpha_rho = float(solution.A @ b.g_inv @ solution.omega)
    return abs(b.scalar_r * (g_alpha_rho - 4.0))


def wrs_system(g):
    """Homogeneous 64x8 system A(X) g(Y,Z) + omega(Y) g(Z,X) + omega(Z) g(X,Y) = 0."""
    M, _ = weak_ricci_system(g, np.zeros(64))
    return M


def wrs_nonexistence_check(m: MetricStructure, point) -> float:
    """Smallest singular value of the homogeneous system; > 0 means only A = omega = 0 solves it."""
    b = curvature(m, point)
    return float(np.linalg.svd(wrs_system(b.g), compute_uv=False)[-1])
