"""Multilinear interpolating splines and their first-order mixed derivatives.

On each block the spline is the unique polynomial of degree at most one in
every variable separately that matches the nodal values at the 2^n block
corners.  With the local coordinate ``u_i = m_i * (x_i - j_i/m_i)`` the
per-axis basis pair is ``(1 - u_i, u_i)``; the corner expansion is

    S(x) = sum over corners l of  values[j + l] * prod_i w_i(l_i),

with ``w_i(0) = 1 - u_i`` and ``w_i(1) = u_i``.  Differentiating once along
axis i replaces the weight pair by the constant slopes ``(-m_i, +m_i)``.
That one uniform rule is the production derivative path; the parity-split
corner formula that alternates signs over the differentiated axes is kept
only as a test oracle.  Derivatives, which jump across grid planes, are
evaluated with the half-open block convention, so an interior face takes
the value of the block on its right and the evaluation is total on the
cube.

Node weights are special-cased to exact 0/1 so that evaluation at a grid
node reproduces the stored nodal value bit for bit.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .errors import PreconditionError, ResourceLimitError
from .grid import BOUNDARY_SLACK, Grid

MAX_DIMENSION = 8
MAX_NODES = 10_000_000


@dataclass(frozen=True)
class DerivOrder:
    """A 0/1 differentiation multi-order; axes lists the differentiated ones."""

    r: Tuple[int, ...]

    def __post_init__(self) -> None:
        r = tuple(int(v) for v in self.r)
        if any(v not in (0, 1) for v in r):
            raise PreconditionError("derivative orders must be 0 or 1 per axis")
        if not r:
            raise PreconditionError("derivative order needs at least one axis")
        object.__setattr__(self, "r", r)

    @classmethod
    def zero(cls, n: int) -> "DerivOrder":
        return cls((0,) * n)

    @property
    def n(self) -> int:
        return len(self.r)

    @property
    def axes(self) -> Tuple[int, ...]:
        return tuple(i for i, v in enumerate(self.r) if v)

    @property
    def order(self) -> int:
        return sum(self.r)

    @property
    def parity(self) -> int:
        return self.order % 2


@dataclass(frozen=True)
class SplineData:
    """Nodal value tensor over a grid; everything else is evaluated from it."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != self.grid.node_shape:
            raise PreconditionError(
                f"values shape {vals.shape} does not match node shape {self.grid.node_shape}"
            )
        object.__setattr__(self, "values", vals)

    def eval(self, x: Sequence[float]) -> float:
        """Value of the blockwise multilinear interpolant at x."""
        return self._corner_sum(x, ())

    def eval_deriv(self, r: DerivOrder, x: Sequence[float]) -> float:
        """Mixed first-order partial derivative of the spline at x.

        For r = 0 this is exactly ``eval``; otherwise the value is the
        derivative of the multilinear piece on the half-open block of x and
        is piecewise constant along each differentiated axis.
        """
        if r.n != self.grid.n:
            raise PreconditionError("derivative order dimension mismatch")
        return self._corner_sum(x, r.axes)

    def _corner_sum(self, x: Sequence[float], deriv_axes: Tuple[int, ...]) -> float:
        g = self.grid
        x = g.clamp_point(x)
        j = g.locate_block(x)
        pairs = []
        for i in range(g.n):
            if i in deriv_axes:
                mi = float(g.m[i])
                pairs.append((-mi, mi))
            else:
                u = _local_coordinate(g.m[i], j[i], x[i])
                pairs.append((1.0 - u, u))
        acc = 0.0
        for corner in itertools.product((0, 1), repeat=g.n):
            w = 1.0
            for i, li in enumerate(corner):
                w *= pairs[i][li]
            if w != 0.0:
                idx = tuple(j[i] + corner[i] for i in range(g.n))
                acc += self.values[idx] * w
        return acc


def _local_coordinate(m: int, j: int, x: float) -> float:
    left = j / m
    right = (j + 1) / m
    if x == left:
        return 0.0
    if x == right:
        return 1.0
    u = m * (x - left)
    return min(max(u, 0.0), 1.0)


def basis_h(g: Grid, axis: int, l: int, j: int, x: float) -> float:
    """Per-axis basis weight H on block interval j of the given axis.

    ``l = 0`` is the weight of the left node, ``m * (right - x)``; ``l = 1``
    the complementary weight.  x must lie inside the interval up to 1e-12.
    """
    if not 0 <= axis < g.n:
        raise PreconditionError(f"axis {axis} out of range")
    if l not in (0, 1):
        raise PreconditionError("l must be 0 or 1")
    m = g.m[axis]
    if not 0 <= j <= m - 1:
        raise PreconditionError(f"interval index {j} out of range 0..{m - 1}")
    left = j / m
    right = (j + 1) / m
    if x < left - BOUNDARY_SLACK or x > right + BOUNDARY_SLACK:
        raise PreconditionError(f"x = {x} outside block interval [{left}, {right}]")
    u = _local_coordinate(m, j, min(max(x, left), right))
    return u if l == 1 else 1.0 - u


def build_spline(
    f: Callable[[Tuple[float, ...]], float],
    g: Grid,
    parallel: bool = False,
    max_workers: Optional[int] = None,
) -> SplineData:
    """Sample f once per grid node and freeze the nodal tensor.

    With ``parallel=True`` nodes are evaluated on a thread pool; f must then
    tolerate concurrent invocation.  Results are placed by node index, so
    the tensor is identical either way.
    """
    if g.n > MAX_DIMENSION:
        raise ResourceLimitError(f"dimension {g.n} exceeds the cap of {MAX_DIMENSION}")
    shape = g.node_shape
    count = math.prod(shape)
    if count > MAX_NODES:
        raise ResourceLimitError(f"{count} nodes exceed the cap of {MAX_NODES}")
    nodes = list(itertools.product(*[range(s) for s in shape]))
    points = [tuple(ji / mi for ji, mi in zip(j, g.m)) for j in nodes]
    if parallel:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            results = list(pool.map(f, points))
    else:
        results = [f(p) for p in points]
    values = np.empty(shape, dtype=float)
    for j, v in zip(nodes, results):
        v = float(v)
        if not math.isfinite(v):
            raise PreconditionError(f"function value at node {j} is not finite: {v}")
        values[j] = v
    return SplineData(g, values)


def divided_difference(
    f: Callable[[Tuple[float, ...]], float],
    x: Sequence[float],
    y: Sequence[float],
) -> float:
    """(f(x) - f(y)) divided by the product of coordinate gaps where x, y differ."""
    x = tuple(float(v) for v in x)
    y = tuple(float(v) for v in y)
    if len(x) != len(y):
        raise PreconditionError("points must have equal dimension")
    denom = 1.0
    differing = False
    for xi, yi in zip(x, y):
        if xi != yi:
            differing = True
            denom *= xi - yi
    if not differing:
        raise PreconditionError("divided difference is undefined for x = y")
    return (f(x) - f(y)) / denom


def pointwise_error(
    f_deriv: Callable[[Tuple[float, ...]], float],
    s: SplineData,
    r: DerivOrder,
    x: Sequence[float],
) -> float:
    """|f^(r)(x) - S^(r)(x)|, the approximation error at a single point."""
    fd = float(f_deriv(tuple(float(v) for v in x)))
    sd = s.eval_deriv(r, x)
    if not (math.isfinite(fd) and math.isfinite(sd)):
        raise PreconditionError(f"non-finite derivative at {tuple(x)}")
    return abs(fd - sd)
