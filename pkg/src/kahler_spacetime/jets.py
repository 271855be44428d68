"""Order-3 jets: value plus exact partial derivatives up to third order.

A :class:`Jet3` is a truncated multivariate Taylor polynomial in the four
chart coordinates.  Arithmetic on jets follows the Leibniz and Faà di Bruno
rules exactly, so derivatives carry only rounding error.  Hessian and third
derivative arrays are stored in full but canonicalised: every entry is a
copy of the entry with sorted indices, so ``hess[i, j] == hess[j, i]`` and
``third`` is invariant under all index permutations bit for bit.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .expr import Binary, Const, Coord, Expr, Pow, Unary

DIM = 4


def _canonical_index(rank):
    idx = np.empty((DIM,) * rank, dtype=np.intp)
    for multi in itertools.product(range(DIM), repeat=rank):
        idx[multi] = np.ravel_multi_index(tuple(sorted(multi)), (DIM,) * rank)
    return idx.ravel()


_CANON2 = _canonical_index(2)
_CANON3 = _canonical_index(3)


def _canon2(h):
    return h.reshape(-1)[_CANON2].reshape(DIM, DIM)


def _canon3(t):
    return t.reshape(-1)[_CANON3].reshape(DIM, DIM, DIM)


def _sym3(a2, b1):
    """a_ij b_k + a_ik b_j + a_jk b_i (before canonicalisation)."""
    return (
        a2[:, :, None] * b1[None, None, :]
        + a2[:, None, :] * b1[None, :, None]
        + a2[None, :, :] * b1[:, None, None]
    )


def _frozen(a):
    a = np.asarray(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class Jet3:
    value: float
    grad: np.ndarray
    hess: np.ndarray
    third: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "grad", _frozen(self.grad))
        object.__setattr__(self, "hess", _frozen(_canon2(np.asarray(self.hess, dtype=float))))
        object.__setattr__(self, "third", _frozen(_canon3(np.asarray(self.third, dtype=float))))

    @classmethod
    def constant(cls, c):
        return cls(c, np.zeros(DIM), np.zeros((DIM, DIM)), np.zeros((DIM,) * 3))

    @classmethod
    def coordinate(cls, index, point):
        grad = np.zeros(DIM)
        grad[index] = 1.0
        return cls(point[index], grad, np.zeros((DIM, DIM)), np.zeros((DIM,) * 3))

    def __add__(self, other):
        other = _as_jet(other)
        return Jet3(self.value + other.value, self.grad + other.grad,
                    self.hess + other.hess, self.third + other.third)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_jet(other)
        return Jet3(self.value - other.value, self.grad - other.grad,
                    self.hess - other.hess, self.third - other.third)

    def __rsub__(self, other):
        return _as_jet(other) - self

    def __neg__(self):
        return Jet3(-self.value, -self.grad, -self.hess, -self.third)

    def __mul__(self, other):
        if not isinstance(other, Jet3):
            c = float(other)
            return Jet3(c * self.value, c * self.grad, c * self.hess, c * self.third)
        f, g = self, other
        hess = (f.value * g.hess + g.value * f.hess
                + np.outer(f.grad, g.grad) + np.outer(g.grad, f.grad))
        third = (f.value * g.third + g.value * f.third
                 + _sym3(f.hess, g.grad) + _sym3(g.hess, f.grad))
        return Jet3(f.value * g.value, f.value * g.grad + g.value * f.grad, hess, third)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet3):
            return self * (1.0 / float(other))
        return self * reciprocal(other)

    def __rtruediv__(self, other):
        return reciprocal(self) * float(other)

    def compose(self, d0, d1, d2, d3):
        """Apply a scalar function whose derivatives at ``self.value`` are d0..d3."""
        f = self
        hess = d1 * f.hess + d2 * np.outer(f.grad, f.grad)
        third = (d1 * f.third + d2 * _sym3(f.hess, f.grad)
                 + d3 * np.einsum("i,j,k->ijk", f.grad, f.grad, f.grad))
        return Jet3(d0, d1 * f.grad, hess, third)

    def taylor(self, step):
        """Third-order Taylor polynomial evaluated at displacement ``step``."""
        v = np.asarray(step, dtype=float)
        return (self.value + self.grad @ v + 0.5 * v @ self.hess @ v
                + np.einsum("ijk,i,j,k->", self.third, v, v, v) / 6.0)


def _as_jet(other):
    return other if isinstance(other, Jet3) else Jet3.constant(float(other))


def reciprocal(f: Jet3) -> Jet3:
    x = f.value
    if x == 0.0:
        raise DomainError("division by zero")
    r = 1.0 / x
    return f.compose(r, -r * r, 2.0 * r**3, -6.0 * r**4)


def _power_derivs(x, c):
    """Value and first three derivatives of t -> t**c at x."""
    integral = c == int(c)
    if not integral and x < 0.0:
        raise DomainError(f"{x!r} raised to non-integer power {c!r}")
    out = []
    coef = 1.0
    for k in range(4):
        if coef == 0.0:
            out.append(0.0)
        else:
            e = c - k
            if x == 0.0 and e < 0:
                raise DomainError("derivative of power singular at zero")
            out.append(coef * (x ** int(e) if integral else x**e))
        coef *= c - k
    return out


def apply_unary(op: str, f: Jet3) -> Jet3:
    x = f.value
    if op == "neg":
        return -f
    if op == "exp":
        e = math.exp(x)
        return f.compose(e, e, e, e)
    if op == "sin":
        s, c = math.sin(x), math.cos(x)
        return f.compose(s, c, -s, -c)
    if op == "cos":
        s, c = math.sin(x), math.cos(x)
        return f.compose(c, -s, -c, s)
    if op == "sinh":
        s, c = math.sinh(x), math.cosh(x)
        return f.compose(s, c, s, c)
    if op == "cosh":
        s, c = math.sinh(x), math.cosh(x)
        return f.compose(c, s, c, s)
    if op == "sqrt":
        if x <= 0.0:
            raise DomainError(f"sqrt of non-positive argument {x!r}")
        r = math.sqrt(x)
        return f.compose(r, 0.5 / r, -0.25 / (r * x), 0.375 / (r * x * x))
    if op == "ln":
        if x <= 0.0:
            raise DomainError(f"ln of non-positive argument {x!r}")
        r = 1.0 / x
        return f.compose(math.log(x), r, -r * r, 2.0 * r**3)
    raise ValueError(f"unknown unary op {op!r}")


def eval_jet3(expr: Expr, point) -> Jet3:
    """Value and exact partial derivatives to order 3 of ``expr`` at ``point``."""
    point = np.asarray(point, dtype=float)
    if point.shape != (DIM,) or not np.all(np.isfinite(point)):
        raise ValueError(f"point must be 4 finite coordinates, got {point!r}")
    return _eval(expr, point)


def _eval(node, point):
    if isinstance(node, Const):
        return Jet3.constant(node.value)
    if isinstance(node, Coord):
        return Jet3.coordinate(node.index, point)
    if isinstance(node, Unary):
        return apply_unary(node.op, _eval(node.arg, point))
    if isinstance(node, Pow):
        f = _eval(node.base, point)
        return f.compose(*_power_derivs(f.value, node.exponent))
    if isinstance(node, Binary):
        a = _eval(node.left, point)
        b = _eval(node.right, point)
        if node.op == "add":
            return a + b
        if node.op == "sub":
            return a - b
        if node.op == "mul":
            return a * b
        return a / b
    raise TypeError(f"not an expression node: {node!r}")


def eval_jet_array(exprs, point):
    """Evaluate an array of expressions; returns (value, d1, d2, d3).

    Derivative axes come first: ``d1[a, ...]``, ``d2[a, b, ...]``,
    ``d3[a, b, c, ...]`` where ``...`` is the shape of ``exprs``.
    """
    exprs = np.asarray(exprs, dtype=object)
    shape = exprs.shape
    value = np.empty(shape)
    d1 = np.empty((DIM,) + shape)
    d2 = np.empty((DIM, DIM) + shape)
    d3 = np.empty((DIM, DIM, DIM) + shape)
    cache = {}
    for idx in np.ndindex(*shape):
        e = exprs[idx]
        jet = cache.get(id(e))
        if jet is None:
            jet = eval_jet3(e, point)
            cache[id(e)] = jet
        value[idx] = jet.value
        d1[(slice(None),) + idx] = jet.grad
        d2[(slice(None), slice(None)) + idx] = jet.hess
        d3[(slice(None),) * 3 + idx] = jet.third
    return value, d1, d2, d3
