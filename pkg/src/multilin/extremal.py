"""Worst-case functions that attain the class error bounds.

For the no-derivative classes the attaining function is a tent: the
majorant applied to the per-axis distance to the nearest grid node (its
l_p norm in the metric variant).  On any single block this is exactly the
majorant of the distances to the two enclosing faces; the tent repeats it
over every block, vanishes at all grid nodes -- so its interpolating
spline is identically zero -- and peaks at each block midpoint with the
theorem's closed-form value.

For the derivative classes the attaining function is built the other way
around: its order-r derivative is prescribed as an oscillation

    pi(x) = Omega(wave(x)) - E,

where E is the class error, the wave along a differentiated axis is the
distance to the nearest odd node (period 2/m_i, zero at odd nodes, peak
1/m_i at even nodes), and along a non-differentiated axis it is
``1/(2 m_i) - node_distance`` (period 1/m_i, peak at the nodes).  The
function itself is recovered by integrating pi over ``[0, x_i]`` for each
differentiated axis.  Over every node-to-node cell the wave sweeps its
full range exactly once, so each cell integral of Omega(wave) equals E
times the cell volume and the integral telescopes to zero at every grid
node.  At the reference point with coordinates 1/m_i on differentiated
axes and 1/(2 m_i) elsewhere all waves vanish, pi equals -E, and the
derivative attains the bound in magnitude.

Integration for ``value_at`` is quadrature over the axis cells (pi is
smooth inside each), so the analytic ``deriv_at`` path that the sharpness
check uses is never polluted by quadrature error.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .bounds import (
    ClassErrorResult,
    QuadratureSpec,
    class_error_deriv_lp,
    class_error_deriv_total,
    class_error_lp,
    class_error_total,
    graded_integrate,
)
from .errors import PreconditionError
from .grid import Grid
from .moduli import LpMetric, PowerMajorant, PowerSumMajorant
from .spline import DerivOrder


@dataclass(frozen=True)
class ExtremalFunction:
    """A class member whose spline error attains the class bound."""

    theorem_id: str
    grid: Grid
    bound: float
    r: DerivOrder
    _value: Callable[[Tuple[float, ...]], float]
    _deriv: Callable[[Tuple[float, ...]], float]

    def value_at(self, x: Sequence[float]) -> float:
        return self._value(self.grid.clamp_point(x))

    def deriv_at(self, x: Sequence[float], r: DerivOrder) -> float:
        """Derivative of order r; defined for the construction's own r and 0."""
        if r.n != self.grid.n:
            raise PreconditionError("derivative order dimension mismatch")
        x = self.grid.clamp_point(x)
        if r == self.r:
            return self._deriv(x)
        if r.order == 0:
            return self._value(x)
        raise PreconditionError(
            f"extremal for {self.theorem_id} carries derivatives of order {self.r.r} only"
        )

    def __call__(self, x: Sequence[float]) -> float:
        return self.value_at(x)


def node_distance(x: float, m: int) -> float:
    """Distance from x to the nearest node of the m-cell axis grid."""
    k = min(max(round(x * m), 0), m)
    return abs(x - k / m)


def _odd_node_wave(x: np.ndarray, m: int) -> np.ndarray:
    # Distance to the nearest odd node; 2/m-periodic, peak 1/m at even nodes.
    t = np.asarray(x) * m
    o = 2.0 * np.round((t - 1.0) / 2.0) + 1.0
    return np.abs(np.asarray(x) - o / m)


def _node_peak_wave(x: np.ndarray, m: int) -> np.ndarray:
    # 1/(2m) minus the node distance; 1/m-periodic, peak 1/(2m) at nodes.
    t = np.asarray(x) * m
    k = np.clip(np.round(t), 0.0, float(m))
    d = np.abs(np.asarray(x) - k / m)
    return np.maximum(0.5 / m - d, 0.0)


def extremal_t1(
    omega: PowerSumMajorant, g: Grid, j: Optional[Sequence[int]] = None
) -> ExtremalFunction:
    """Tent attaining the total-modulus class error.

    The support-block argument designates the canonical block (its midpoint
    is the canonical maximizer and the block's faces bound the paper-style
    restriction); the tent itself repeats over all blocks, which is what
    keeps it continuous and inside the class in dimension > 1.
    """
    j = _normalize_block(g, j)
    bound = class_error_total(omega, g).value

    def value(x: Tuple[float, ...]) -> float:
        return float(omega(tuple(node_distance(xi, mi) for xi, mi in zip(x, g.m))))

    return ExtremalFunction("T1", g, bound, DerivOrder.zero(g.n), value, value)


def extremal_t2(
    omega: PowerMajorant,
    g: Grid,
    metric: LpMetric,
    j: Optional[Sequence[int]] = None,
) -> ExtremalFunction:
    """Tent attaining the l_p class error (majorant of the l_p node distance)."""
    j = _normalize_block(g, j)
    bound = class_error_lp(omega, g, metric).value
    p = metric.p

    def value(x: Tuple[float, ...]) -> float:
        s = sum(node_distance(xi, mi) ** p for xi, mi in zip(x, g.m))
        return float(omega(s ** (1.0 / p)))

    return ExtremalFunction("T2", g, bound, DerivOrder.zero(g.n), value, value)


def extremal_t4(
    omega: PowerSumMajorant,
    g: Grid,
    r: DerivOrder,
    q: QuadratureSpec = QuadratureSpec(),
) -> ExtremalFunction:
    """Oscillation-antiderivative attaining the derivative-class error."""
    result = class_error_deriv_total(omega, g, r, q)

    def wave_args(pts: np.ndarray) -> np.ndarray:
        full = np.empty_like(pts)
        for i in range(g.n):
            if i in r.axes:
                full[:, i] = _odd_node_wave(pts[:, i], g.m[i])
            else:
                full[:, i] = _node_peak_wave(pts[:, i], g.m[i])
        return full

    def pi(pts: np.ndarray) -> np.ndarray:
        return np.asarray(omega(wave_args(pts))) - result.value

    return _oscillation_extremal("T4", g, r, result, pi, q)


def extremal_t5(
    omega: PowerMajorant,
    g: Grid,
    metric: LpMetric,
    r: DerivOrder,
    q: QuadratureSpec = QuadratureSpec(),
) -> ExtremalFunction:
    """l_p counterpart of :func:`extremal_t4`; rejects r = 0."""
    if r.n != g.n:
        raise PreconditionError("derivative order dimension mismatch")
    if r.order == 0:
        raise PreconditionError(
            "r = 0 has no integration axes; use the plain l_p tent instead"
        )
    result = class_error_deriv_lp(omega, g, metric, r, q)
    p = metric.p

    def pi(pts: np.ndarray) -> np.ndarray:
        acc = np.zeros(pts.shape[0])
        for i in range(g.n):
            if i in r.axes:
                acc += _odd_node_wave(pts[:, i], g.m[i]) ** p
            else:
                acc += _node_peak_wave(pts[:, i], g.m[i]) ** p
        return np.asarray(omega(acc ** (1.0 / p))) - result.value

    return _oscillation_extremal("T5", g, r, result, pi, q)


def _oscillation_extremal(
    theorem_id: str,
    g: Grid,
    r: DerivOrder,
    bound: ClassErrorResult,
    pi: Callable[[np.ndarray], np.ndarray],
    q: QuadratureSpec,
) -> ExtremalFunction:
    M = r.axes

    def deriv(x: Tuple[float, ...]) -> float:
        return float(pi(np.asarray(x, dtype=float)[None, :])[0])

    if not M:
        # No integration axes: the function is the oscillation itself.
        return ExtremalFunction(theorem_id, g, bound.value, r, deriv, deriv)

    other = [i for i in range(g.n) if i not in M]

    def value(x: Tuple[float, ...]) -> float:
        # Split [0, x_i] at the axis nodes: pi is smooth inside each cell and
        # its majorant singularity sits at the cell's odd end, which the
        # graded rule clusters toward.
        segments = []
        for i in M:
            mi = g.m[i]
            segs = []
            for k in range(int(math.floor(x[i] * mi)) + 1):
                lo = k / mi
                hi = min((k + 1) / mi, x[i])
                if hi > lo:
                    segs.append((lo, hi, k % 2 == 0))
            segments.append(segs)
        if any(not s for s in segments):
            return 0.0

        def integrand(pts: np.ndarray) -> np.ndarray:
            full = np.empty((pts.shape[0], g.n))
            full[:, list(M)] = pts
            for i in other:
                full[:, i] = x[i]
            return pi(full)

        total = 0.0
        for box in itertools.product(*segments):
            lo = [b[0] for b in box]
            hi = [b[1] for b in box]
            singular_hi = [b[2] for b in box]
            piece, _ = graded_integrate(integrand, lo, hi, singular_hi, q)
            total += piece
        return total

    return ExtremalFunction(theorem_id, g, bound.value, r, value, deriv)


def _normalize_block(g: Grid, j: Optional[Sequence[int]]) -> Tuple[int, ...]:
    if j is None:
        return (0,) * g.n
    j = tuple(int(v) for v in j)
    g.block_bounds(j)  # validates range
    return j
