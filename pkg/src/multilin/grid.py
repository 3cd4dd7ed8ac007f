"""Uniform tensor grids on the unit cube.

A grid with per-axis subdivision counts ``m = (m_1, ..., m_n)`` has nodes
``j_i / m_i`` on axis ``i`` and cells ("blocks") ``[j_i/m_i, (j_i+1)/m_i]``.
Block lookup follows the half-open convention: a point sitting exactly on an
interior node belongs to the block on its right, and the last block is closed
at 1.  Node coordinates are always recomputed as the exact binary64 quotient
``j_i / m_i``; no node arrays are stored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence, Tuple

from .errors import PreconditionError

# Coordinates may stray outside [0, 1] by round-off from upstream arithmetic;
# anything worse than this is treated as caller error, not noise.
BOUNDARY_SLACK = 1e-12


@dataclass(frozen=True)
class Grid:
    """Uniform tensor grid over [0, 1]^n with ``m[i] >= 2`` cells per axis."""

    m: Tuple[int, ...]

    def __post_init__(self) -> None:
        m = tuple(int(v) for v in self.m)
        if not m:
            raise PreconditionError("grid needs at least one axis")
        for i, mi in enumerate(m):
            if mi < 2:
                raise PreconditionError(
                    f"m[{i}] = {mi}: every axis needs at least 2 subdivisions"
                )
        object.__setattr__(self, "m", m)

    @property
    def n(self) -> int:
        return len(self.m)

    @property
    def node_shape(self) -> Tuple[int, ...]:
        """Shape of the nodal tensor, (m_1 + 1, ..., m_n + 1)."""
        return tuple(mi + 1 for mi in self.m)

    def node_coords(self, j: Sequence[int]) -> Tuple[float, ...]:
        """Coordinates of node j, computed fresh as j_i / m_i."""
        j = tuple(int(v) for v in j)
        self._check_index(j, upper_inclusive=True)
        return tuple(ji / mi for ji, mi in zip(j, self.m))

    def locate_block(self, x: Sequence[float]) -> Tuple[int, ...]:
        """Index of the block containing x under the half-open convention."""
        x = self.clamp_point(x)
        return tuple(_locate_axis(xi, mi) for xi, mi in zip(x, self.m))

    def block_bounds(
        self, j: Sequence[int]
    ) -> Tuple[Tuple[float, ...], Tuple[float, ...]]:
        """Lower and upper corner points of block j."""
        j = tuple(int(v) for v in j)
        self._check_index(j, upper_inclusive=False)
        lo = tuple(ji / mi for ji, mi in zip(j, self.m))
        hi = tuple((ji + 1) / mi for ji, mi in zip(j, self.m))
        return lo, hi

    def blocks(self) -> Iterator[Tuple[int, ...]]:
        """All block indices in lexicographic order (axis 1 slowest)."""
        n = self.n

        def rec(prefix: Tuple[int, ...], axis: int) -> Iterator[Tuple[int, ...]]:
            if axis == n:
                yield prefix
                return
            for k in range(self.m[axis]):
                yield from rec(prefix + (k,), axis + 1)

        return rec((), 0)

    def clamp_point(self, x: Sequence[float]) -> Tuple[float, ...]:
        """Validate a point of dimension n, absorbing <= 1e-12 overshoot."""
        x = tuple(float(v) for v in x)
        if len(x) != self.n:
            raise PreconditionError(
                f"point has dimension {len(x)}, grid has dimension {self.n}"
            )
        out = []
        for i, xi in enumerate(x):
            if xi < 0.0:
                if xi < -BOUNDARY_SLACK:
                    raise PreconditionError(f"x[{i}] = {xi} is outside [0, 1]")
                xi = 0.0
            elif xi > 1.0:
                if xi > 1.0 + BOUNDARY_SLACK:
                    raise PreconditionError(f"x[{i}] = {xi} is outside [0, 1]")
                xi = 1.0
            out.append(xi)
        return tuple(out)

    def _check_index(self, j: Tuple[int, ...], upper_inclusive: bool) -> None:
        if len(j) != self.n:
            raise PreconditionError(
                f"index has dimension {len(j)}, grid has dimension {self.n}"
            )
        for i, (ji, mi) in enumerate(zip(j, self.m)):
            hi = mi if upper_inclusive else mi - 1
            if not 0 <= ji <= hi:
                raise PreconditionError(f"j[{i}] = {ji} out of range 0..{hi}")


def make_grid(m: Sequence[int]) -> Grid:
    return Grid(tuple(m))


def _locate_axis(x: float, m: int) -> int:
    k = int(math.floor(x * m))
    if k < 0:
        k = 0
    elif k > m - 1:
        k = m - 1
    # Realign against the nodes as actually computed (j/m) so that the
    # half-open rule holds bit-exactly even when x*m rounds across an integer.
    if k < m - 1 and x >= (k + 1) / m:
        k += 1
    elif k > 0 and x < k / m:
        k -= 1
    return k
