"""Sharp worst-case approximation errors on the supported smoothness classes.

Closed forms:

* total-modulus class, no derivative: ``Omega(1/(2 m_1), ..., 1/(2 m_n))``
* l_p class, no derivative:           ``Omega( (sum_i (2 m_i)^-p)^(1/p) )``

Derivative classes integrate the majorant over the box
``R = prod_{i in M} [0, 1/m_i]`` (M = differentiated axes), scaled by
``prod_{i in M} m_i``; the non-differentiated slots of the argument are
pinned at ``1/(2 m_i)``.  The integrals are evaluated with a deterministic
tensor Gauss-Legendre rule over equal panels, doubling the panel count per
axis until two successive refinements agree to the requested relative
tolerance.  The reported ``quadrature_estimate_error`` is the last
refinement step's change (exactly 0 for the closed forms).

Exponents below one give the majorant an unbounded derivative at zero;
panel doubling concentrates resolution there and the returned estimate
error states honestly how far refinement got.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence, Tuple

import numpy as np

from .errors import PreconditionError, QuadratureError
from .grid import Grid
from .moduli import LpMetric, PowerMajorant, PowerSumMajorant
from .spline import DerivOrder

MAX_QUAD_DIM = 6


@dataclass(frozen=True)
class QuadratureSpec:
    panels_per_axis: int = 4
    points_per_panel: int = 12
    rel_tol: float = 1e-10
    max_refinements: int = 12

    def __post_init__(self) -> None:
        if self.panels_per_axis < 1:
            raise PreconditionError("panels_per_axis must be at least 1")
        if not 4 <= self.points_per_panel <= 32:
            raise PreconditionError("points_per_panel must be in 4..32")
        if not self.rel_tol > 0:
            raise PreconditionError("rel_tol must be positive")
        if self.max_refinements < 0:
            raise PreconditionError("max_refinements must be nonnegative")


@dataclass(frozen=True)
class ClassErrorResult:
    value: float
    quadrature_estimate_error: float
    theorem_id: str

    def __post_init__(self) -> None:
        if self.value < 0 or self.quadrature_estimate_error < 0:
            raise PreconditionError("class errors and their estimates are nonnegative")


def integrate_box(
    integrand: Callable[[np.ndarray], np.ndarray],
    lower: Sequence[float],
    upper: Sequence[float],
    q: QuadratureSpec = QuadratureSpec(),
) -> Tuple[float, float]:
    """Tensor Gauss-Legendre integral of a vectorized integrand over a box.

    ``integrand`` maps an (N, d) array of points to N values.  Returns
    (value, refinement_error) where the error is the change produced by the
    final panel doubling; raises QuadratureError if the relative tolerance
    is not met within ``max_refinements`` doublings.
    """
    lo = np.asarray(lower, dtype=float)
    hi = np.asarray(upper, dtype=float)
    if lo.shape != hi.shape or lo.ndim != 1 or lo.size == 0:
        raise PreconditionError("lower and upper must be equal-length vectors")
    d = lo.size
    if d > MAX_QUAD_DIM:
        raise PreconditionError(f"dimension {d} exceeds quadrature cap {MAX_QUAD_DIM}")
    if np.any(hi < lo):
        raise PreconditionError("upper must dominate lower")
    if np.any(hi == lo):
        return 0.0, 0.0

    ref_x, ref_w = np.polynomial.legendre.leggauss(q.points_per_panel)
    panels = q.panels_per_axis
    value, scale = _tensor_rule(integrand, lo, hi, panels, ref_x, ref_w)
    last_change = None
    for _ in range(q.max_refinements):
        panels *= 2
        value_new, scale = _tensor_rule(integrand, lo, hi, panels, ref_x, ref_w)
        last_change = abs(value_new - value)
        value = value_new
        # The |integrand| integral keeps the acceptance test meaningful for
        # cancelling integrands, whose own value may legitimately be ~0.
        if last_change <= q.rel_tol * max(abs(value), scale):
            return value, last_change
    raise QuadratureError(
        f"no convergence to rel_tol={q.rel_tol} after {q.max_refinements} refinements "
        f"(last change {last_change})"
    )


def _tensor_rule(integrand, lo, hi, panels, ref_x, ref_w) -> Tuple[float, float]:
    d = lo.size
    axis_nodes = []
    axis_weights = []
    for i in range(d):
        edges = np.linspace(lo[i], hi[i], panels + 1)
        half = np.diff(edges) / 2.0
        mid = (edges[:-1] + edges[1:]) / 2.0
        nodes = (mid[:, None] + half[:, None] * ref_x[None, :]).ravel()
        weights = (half[:, None] * ref_w[None, :]).ravel()
        axis_nodes.append(nodes)
        axis_weights.append(weights)
    mesh = np.meshgrid(*axis_nodes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=-1)
    w = axis_weights[0]
    for i in range(1, d):
        w = np.multiply.outer(w, axis_weights[i])
    w = w.ravel()
    vals = np.asarray(integrand(pts), dtype=float)
    if vals.shape != (pts.shape[0],):
        raise PreconditionError("integrand must return one value per point")
    if not np.all(np.isfinite(vals)):
        raise QuadratureError("integrand returned a non-finite sample")
    return float(w @ vals), float(w @ np.abs(vals))


def graded_integrate(
    integrand: Callable[[np.ndarray], np.ndarray],
    lower: Sequence[float],
    upper: Sequence[float],
    singular_at_upper: Sequence[bool],
    q: QuadratureSpec = QuadratureSpec(),
) -> Tuple[float, float]:
    """integrate_box after a per-axis quadratic clustering substitution.

    Majorants with exponents below one make the integrands here singular at
    a known box face per axis; substituting ``coord = end +/- width * t**2``
    flattens a power singularity of order a into t**(2a+1), which plain
    panel doubling then resolves quickly.  Smooth integrands lose nothing:
    the transform keeps low polynomial degree low.
    """
    lo = np.asarray(lower, dtype=float)
    hi = np.asarray(upper, dtype=float)
    width = hi - lo
    flip = np.asarray(singular_at_upper, dtype=bool)
    if flip.shape != lo.shape:
        raise PreconditionError("singular_at_upper must match the box dimension")
    if np.any(hi == lo):
        return 0.0, 0.0

    def transformed(ts: np.ndarray) -> np.ndarray:
        u = ts**2 * width
        pts = np.where(flip, hi - u, lo + u)
        jac = np.prod(2.0 * ts * width, axis=1)
        return np.asarray(integrand(pts)) * jac

    return integrate_box(transformed, np.zeros(lo.size), np.ones(lo.size), q)


def class_error_total(omega: PowerSumMajorant, g: Grid) -> ClassErrorResult:
    """Worst-case sup error of the spline itself on the total-modulus class."""
    _check_arity(omega, g)
    if not omega.concave:
        raise PreconditionError("the closed form requires a per-axis concave majorant")
    value = omega(tuple(0.5 / mi for mi in g.m))
    return ClassErrorResult(value, 0.0, "T1")


def class_error_lp(omega: PowerMajorant, g: Grid, metric: LpMetric) -> ClassErrorResult:
    """Worst-case sup error of the spline on the l_p modulus class."""
    if not omega.concave:
        raise PreconditionError("the closed form requires a concave majorant")
    arg = 0.5 * sum(mi ** (-metric.p) for mi in g.m) ** (1.0 / metric.p)
    return ClassErrorResult(omega(arg), 0.0, "T2")


def class_error_deriv_total(
    omega: PowerSumMajorant,
    g: Grid,
    r: DerivOrder,
    q: QuadratureSpec = QuadratureSpec(),
) -> ClassErrorResult:
    """Worst-case error of the order-r spline derivative, total-modulus class.

    Concavity of the majorant is only needed along the non-differentiated
    axes; with every axis differentiated the requirement is vacuous.
    """
    _check_arity(omega, g)
    _check_order(r, g)
    M = r.axes
    for i in range(g.n):
        if i not in M and not omega.concave_axes[i]:
            raise PreconditionError(
                f"majorant must be concave along non-differentiated axis {i}"
            )
    if not M:
        base = class_error_total(omega, g)
        return ClassErrorResult(base.value, 0.0, "T4")
    _check_quad_dim(M)

    fixed = np.asarray([0.5 / g.m[i] for i in range(g.n) if i not in M])
    free_cols = list(M)
    other_cols = [i for i in range(g.n) if i not in M]

    def integrand(pts: np.ndarray) -> np.ndarray:
        full = np.empty((pts.shape[0], g.n))
        full[:, free_cols] = pts
        full[:, other_cols] = fixed
        return np.asarray(omega(full))

    scale = math.prod(g.m[i] for i in M)
    value, err = graded_integrate(
        integrand, [0.0] * len(M), [1.0 / g.m[i] for i in M], [False] * len(M), q
    )
    return ClassErrorResult(scale * value, scale * err, "T4")


def class_error_deriv_lp(
    omega: PowerMajorant,
    g: Grid,
    metric: LpMetric,
    r: DerivOrder,
    q: QuadratureSpec = QuadratureSpec(),
) -> ClassErrorResult:
    """Worst-case error of the order-r spline derivative, l_p class.

    Concavity of the majorant may be dropped when every axis is
    differentiated; otherwise it is required.
    """
    _check_order(r, g)
    M = r.axes
    if not omega.concave and len(M) < g.n:
        raise PreconditionError(
            "a non-concave majorant is only admissible when all axes are differentiated"
        )
    if not M:
        base = class_error_lp(omega, g, metric)
        return ClassErrorResult(base.value, 0.0, "T5")
    _check_quad_dim(M)

    p = metric.p
    const = sum((0.5 / g.m[i]) ** p for i in range(g.n) if i not in M)

    def integrand(pts: np.ndarray) -> np.ndarray:
        arg = ((pts**p).sum(axis=1) + const) ** (1.0 / p)
        return np.asarray(omega(arg))

    scale = math.prod(g.m[i] for i in M)
    value, err = graded_integrate(
        integrand, [0.0] * len(M), [1.0 / g.m[i] for i in M], [False] * len(M), q
    )
    return ClassErrorResult(scale * value, scale * err, "T5")


def _check_arity(omega: PowerSumMajorant, g: Grid) -> None:
    if omega.n != g.n:
        raise PreconditionError(
            f"majorant arity {omega.n} does not match grid dimension {g.n}"
        )


def _check_order(r: DerivOrder, g: Grid) -> None:
    if r.n != g.n:
        raise PreconditionError(
            f"derivative order has {r.n} axes, grid has {g.n}"
        )


def _check_quad_dim(M) -> None:
    if len(M) > MAX_QUAD_DIM:
        raise PreconditionError(
            f"|M| = {len(M)} differentiated axes exceed the quadrature cap {MAX_QUAD_DIM}"
        )
