"""Dense tensors over a 4-dimensional fiber.

Components are an ndarray of shape ``(4,) * rank``; flattening is row-major
with slot 0 varying slowest.  Each slot is marked ``"u"`` (contravariant) or
``"l"`` (covariant).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateMetricError, VarianceError

DIM = 4
MAX_RANK = 5
UPPER, LOWER = "u", "l"


@dataclass(frozen=True)
class Tensor4:
    components: np.ndarray
    variance: tuple

    def __post_init__(self):
        comps = np.array(self.components, dtype=float)
        variance = tuple(self.variance)
        if comps.ndim > MAX_RANK:
            raise ValueError(f"rank {comps.ndim} exceeds {MAX_RANK}")
        if comps.shape != (DIM,) * comps.ndim:
            raise ValueError(f"components must have shape (4,)*rank, got {comps.shape}")
        if len(variance) != comps.ndim or any(v not in (UPPER, LOWER) for v in variance):
            raise ValueError(f"variance {variance!r} does not match rank {comps.ndim}")
        if not np.all(np.isfinite(comps)):
            raise ValueError("tensor components must be finite")
        comps.flags.writeable = False
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "variance", variance)

    @property
    def rank(self) -> int:
        return self.components.ndim

    @classmethod
    def lower(cls, components):
        c = np.asarray(components, dtype=float)
        return cls(c, (LOWER,) * c.ndim)

    @classmethod
    def upper(cls, components):
        c = np.asarray(components, dtype=float)
        return cls(c, (UPPER,) * c.ndim)

    def flat(self) -> np.ndarray:
        return self.components.reshape(-1)

    def outer(self, other: "Tensor4") -> "Tensor4":
        return Tensor4(np.multiply.outer(self.components, other.components),
                       self.variance + other.variance)

    def __mul__(self, a):
        return Tensor4(float(a) * self.components, self.variance)

    __rmul__ = __mul__

    def __add__(self, other):
        _check_same_variance(self, other)
        return Tensor4(self.components + other.components, self.variance)

    def __sub__(self, other):
        _check_same_variance(self, other)
        return Tensor4(self.components - other.components, self.variance)


def _check_same_variance(a, b):
    if a.variance != b.variance:
        raise VarianceError(f"variance mismatch: {a.variance} vs {b.variance}")


def contract(t: Tensor4, slot_a: int, slot_b: int) -> Tensor4:
    """Trace over one upper and one lower slot; rank drops by two."""
    rank = t.rank
    for s in (slot_a, slot_b):
        if not 0 <= s < rank:
            raise IndexError(f"slot {s} out of range for rank {rank}")
    if slot_a == slot_b:
        raise ValueError("cannot contract a slot with itself")
    if t.variance[slot_a] == t.variance[slot_b]:
        raise VarianceError(
            f"slots {slot_a} and {slot_b} are both {t.variance[slot_a]!r}; "
            "contraction needs one upper and one lower")
    comps = np.trace(t.components, axis1=slot_a, axis2=slot_b)
    variance = tuple(v for i, v in enumerate(t.variance) if i not in (slot_a, slot_b))
    return Tensor4(comps, variance)


def max_abs(t) -> float:
    comps = t.components if isinstance(t, Tensor4) else np.asarray(t, dtype=float)
    if comps.size == 0:
        return 0.0
    return float(np.max(np.abs(comps)))


@dataclass(frozen=True)
class MetricAtPoint:
    g: Tensor4
    g_inv: Tensor4
    signature: tuple

    @classmethod
    def from_matrix(cls, g):
        g = np.asarray(g, dtype=float)
        if g.shape != (DIM, DIM):
            raise ValueError(f"metric must be 4x4, got {g.shape}")
        if np.max(np.abs(g - g.T)) > 1e-14 * max(1.0, np.max(np.abs(g))):
            raise ValueError("metric is not symmetric")
        det = np.linalg.det(g)
        if abs(det) <= 1e-12:
            raise DegenerateMetricError(f"|det g| = {abs(det):.3e} <= 1e-12")
        g_inv = np.linalg.inv(g)
        g_inv = 0.5 * (g_inv + g_inv.T)
        signature = tuple(int(s) for s in np.sign(np.linalg.eigvalsh(g)))
        return cls(Tensor4.lower(g), Tensor4.upper(g_inv), signature)


def raise_lower(t: Tensor4, slot: int, m: MetricAtPoint) -> Tensor4:
    """Flip the variance of ``slot`` by contracting with g or its inverse."""
    if not 0 <= slot < t.rank:
        raise IndexError(f"slot {slot} out of range for rank {t.rank}")
    mat = m.g.components if t.variance[slot] == UPPER else m.g_inv.components
    comps = np.moveaxis(np.tensordot(mat, t.components, axes=([1], [slot])), 0, slot)
    variance = list(t.variance)
    variance[slot] = LOWER if t.variance[slot] == UPPER else UPPER
    return Tensor4(comps, tuple(variance))
