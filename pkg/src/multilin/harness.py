"""Experiment runner: theorem bound vs. empirically measured sup error.

The sup error of a concrete function is estimated over a deterministic
lattice: every block is scanned with an odd per-axis sample count, so block
endpoints and midpoints are always hit.  All maximizers exhibited by the
attaining functions sit at block midpoints or at the period corner (node on
differentiated axes, midpoint elsewhere), and both kinds of points are in
the lattice, so for the shipped worst-case family the scan is exact rather
than approximate.  Ties resolve to the lowest block index, then the
lexicographically first lattice point, making the argmax reproducible.

Experiment configs are JSON documents (``"schema": 1``); reports serialize
to CSV or JSON with every float printed at 17 significant digits so values
round-trip exactly.  The wall-clock field is the single exception to
byte-stability across runs.
"""

from __future__ import annotations

import itertools
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .bounds import (
    ClassErrorResult,
    QuadratureSpec,
    class_error_deriv_lp,
    class_error_deriv_total,
    class_error_lp,
    class_error_total,
)
from .errors import ConfigError, PreconditionError, ResourceLimitError
from .exprparse import parse_function
from .extremal import extremal_t1, extremal_t2, extremal_t4, extremal_t5
from .grid import Grid
from .moduli import LpMetric, PowerMajorant, PowerSumMajorant
from .presets import build_preset
from .spline import DerivOrder, build_spline, pointwise_error

SCHEMA_VERSION = 1
MAX_TOTAL_SAMPLES = 100_000_000
FD_STEP = 1e-6

REPORT_COLUMNS = (
    "theorem", "n", "m", "p", "r",
    "bound", "quad_err", "empirical", "argmax", "gap", "ms",
)


@dataclass(frozen=True)
class ExperimentConfig:
    theorem: str
    m: Tuple[int, ...]
    omega_weights: Tuple[float, ...]
    omega_exponents: Tuple[float, ...]
    omega_caps: Optional[Tuple[float, ...]] = None
    p: Optional[float] = None
    r: Optional[Tuple[int, ...]] = None
    source: str = "extremal"  # "extremal" | "preset:<name>" | "expr"
    expr: Optional[str] = None
    deriv_expr: Optional[str] = None
    block: Optional[Tuple[int, ...]] = None
    samples_per_axis_per_block: int = 9
    seed: int = 0
    fd_fallback: bool = False
    parallel: bool = False
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)

    def __post_init__(self) -> None:
        if self.theorem not in ("T1", "T2", "T4", "T5"):
            raise ConfigError(f"unknown theorem id {self.theorem!r}")
        s = self.samples_per_axis_per_block
        if s < 3 or s % 2 == 0:
            raise ConfigError("samples_per_axis_per_block must be odd and >= 3")
        if self.theorem in ("T2", "T5") and self.p is None:
            raise ConfigError(f"{self.theorem} needs an l_p exponent 'p'")
        if self.theorem in ("T1", "T4") and self.p is not None:
            raise ConfigError(f"{self.theorem} does not take 'p'")
        if self.source == "expr" and not self.expr:
            raise ConfigError("source 'expr' needs an 'expr' field")


@dataclass(frozen=True)
class ErrorReport:
    theorem: str
    n: int
    m: Tuple[int, ...]
    p: Optional[float]
    r: Tuple[int, ...]
    bound: float
    quad_err: float
    empirical: Optional[float]
    argmax: Optional[Tuple[float, ...]]
    gap: Optional[float]
    ms: float

    def row(self) -> List[str]:
        return [
            self.theorem,
            str(self.n),
            _ints(self.m),
            "" if self.p is None else _fmt(self.p),
            _ints(self.r),
            _fmt(self.bound),
            _fmt(self.quad_err),
            "" if self.empirical is None else _fmt(self.empirical),
            "" if self.argmax is None else ";".join(_fmt(v) for v in self.argmax),
            "" if self.gap is None else _fmt(self.gap),
            _fmt(self.ms),
        ]

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "n": self.n,
            "m": list(self.m),
            "p": self.p,
            "r": list(self.r),
            "bound": self.bound,
            "quad_err": self.quad_err,
            "empirical": self.empirical,
            "argmax": None if self.argmax is None else list(self.argmax),
            "gap": self.gap,
            "ms": self.ms,
        }


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def _ints(vs: Sequence[int]) -> str:
    return ";".join(str(int(v)) for v in vs)


def config_from_dict(doc: dict) -> ExperimentConfig:
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    if doc.get("schema") != SCHEMA_VERSION:
        raise ConfigError(f"config needs \"schema\": {SCHEMA_VERSION}")
    known = {
        "schema", "theorem", "m", "omega", "p", "r", "function",
        "samples_per_axis_per_block", "seed", "quadrature", "block",
    }
    unknown = set(doc) - known
    if unknown:
        raise ConfigError(f"unknown config fields: {', '.join(sorted(unknown))}")
    try:
        theorem = str(doc["theorem"])
        m = tuple(int(v) for v in doc["m"])
        omega = doc["omega"]
        weights = tuple(float(v) for v in omega["weights"])
        exponents = tuple(float(v) for v in omega["exponents"])
        caps = omega.get("caps")
        if caps is not None:
            caps = tuple(float(v) for v in caps)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed config: {exc}") from exc

    fn = doc.get("function", {"source": "extremal"})
    if not isinstance(fn, dict) or "source" not in fn:
        raise ConfigError("'function' must be an object with a 'source' field")
    source = fn["source"]
    if source not in ("extremal", "expr") and not source.startswith("preset:"):
        raise ConfigError(f"unknown function source {source!r}")

    quad = doc.get("quadrature", {})
    if not isinstance(quad, dict):
        raise ConfigError("'quadrature' must be an object")
    try:
        qspec = QuadratureSpec(
            panels_per_axis=int(quad.get("panels_per_axis", 4)),
            points_per_panel=int(quad.get("points_per_panel", 12)),
            rel_tol=float(quad.get("rel_tol", 1e-10)),
            max_refinements=int(quad.get("max_refinements", 12)),
        )
    except PreconditionError as exc:
        raise ConfigError(f"bad quadrature spec: {exc}") from exc

    r = doc.get("r")
    return ExperimentConfig(
        theorem=theorem,
        m=m,
        omega_weights=weights,
        omega_exponents=exponents,
        omega_caps=caps,
        p=None if doc.get("p") is None else float(doc["p"]),
        r=None if r is None else tuple(int(v) for v in r),
        source=source,
        expr=fn.get("expr"),
        deriv_expr=fn.get("deriv_expr"),
        block=None if doc.get("block") is None else tuple(int(v) for v in doc["block"]),
        samples_per_axis_per_block=int(doc.get("samples_per_axis_per_block", 9)),
        seed=int(doc.get("seed", 0)),
        fd_fallback=bool(fn.get("fd_fallback", False)),
        quadrature=qspec,
    )


def load_config(path: str) -> ExperimentConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return config_from_dict(doc)


def estimate_sup_error(
    f: Callable[[Tuple[float, ...]], float],
    f_deriv: Callable[[Tuple[float, ...]], float],
    g: Grid,
    r: DerivOrder,
    samples_per_axis_per_block: int,
    parallel: bool = False,
) -> Tuple[float, Tuple[float, ...]]:
    """Max pointwise error over the per-block lattice, with its argmax."""
    s = samples_per_axis_per_block
    if s < 3 or s % 2 == 0:
        raise PreconditionError("samples_per_axis_per_block must be odd and >= 3")
    block_count = 1
    for mi in g.m:
        block_count *= mi
    if block_count * s**g.n > MAX_TOTAL_SAMPLES:
        raise ResourceLimitError(
            f"{block_count * s ** g.n} samples exceed the cap of {MAX_TOTAL_SAMPLES}"
        )
    data = build_spline(f, g, parallel=parallel)

    def scan_block(j):
        lo, hi = g.block_bounds(j)
        axes = [np.linspace(lo[i], hi[i], s) for i in range(g.n)]
        best = -1.0
        best_x: Tuple[float, ...] = ()
        for x in itertools.product(*axes):
            err = pointwise_error(f_deriv, data, r, x)
            if err > best:
                best = err
                best_x = x
        return best, best_x

    blocks = list(g.blocks())
    if parallel:
        with ThreadPoolExecutor() as pool:
            results = list(pool.map(scan_block, blocks))
    else:
        results = [scan_block(j) for j in blocks]

    best, best_x = -1.0, ()
    for err, x in results:  # fixed block order keeps tie-breaking deterministic
        if err > best:
            best, best_x = err, x
    return best, tuple(float(v) for v in best_x)


def compute_bound(cfg: ExperimentConfig) -> ClassErrorResult:
    g = Grid(cfg.m)
    r = DerivOrder(cfg.r) if cfg.r is not None else DerivOrder.zero(g.n)
    if cfg.theorem == "T1":
        return class_error_total(_multi_omega(cfg, g), g)
    if cfg.theorem == "T2":
        return class_error_lp(_uni_omega(cfg), g, LpMetric(cfg.p))
    if cfg.theorem == "T4":
        return class_error_deriv_total(_multi_omega(cfg, g), g, r, cfg.quadrature)
    return class_error_deriv_lp(_uni_omega(cfg), g, LpMetric(cfg.p), r, cfg.quadrature)


def _multi_omega(cfg: ExperimentConfig, g: Grid) -> PowerSumMajorant:
    if len(cfg.omega_weights) != g.n:
        raise ConfigError(
            f"majorant has {len(cfg.omega_weights)} axes, grid has {g.n}"
        )
    return PowerSumMajorant(cfg.omega_weights, cfg.omega_exponents, cfg.omega_caps)


def _uni_omega(cfg: ExperimentConfig) -> PowerMajorant:
    if len(cfg.omega_weights) != 1:
        raise ConfigError("l_p theorems take a univariate majorant (one weight)")
    cap = None if cfg.omega_caps is None else cfg.omega_caps[0]
    return PowerMajorant(cfg.omega_weights[0], cfg.omega_exponents[0], cap)


def resolve_function(cfg: ExperimentConfig):
    """Build (f, f_deriv, certified) for the configured source."""
    g = Grid(cfg.m)
    r = DerivOrder(cfg.r) if cfg.r is not None else DerivOrder.zero(g.n)
    if cfg.source == "extremal":
        if cfg.theorem == "T1":
            ext = extremal_t1(_multi_omega(cfg, g), g, cfg.block)
        elif cfg.theorem == "T2":
            ext = extremal_t2(_uni_omega(cfg), g, LpMetric(cfg.p), cfg.block)
        elif cfg.theorem == "T4":
            ext = extremal_t4(_multi_omega(cfg, g), g, r, cfg.quadrature)
        else:
            ext = extremal_t5(_uni_omega(cfg), g, LpMetric(cfg.p), r, cfg.quadrature)
        return ext.value_at, (lambda x: ext.deriv_at(x, r)), True
    if cfg.source.startswith("preset:"):
        omega = _multi_omega(cfg, g) if cfg.theorem in ("T1", "T4") else _uni_omega(cfg)
        preset = build_preset(cfg.source.split(":", 1)[1], omega, r)
        return preset.f, preset.f_deriv, preset.certified
    f = parse_function(cfg.expr, g.n)
    if r.order == 0:
        return f, f, False
    if cfg.deriv_expr:
        return f, parse_function(cfg.deriv_expr, g.n), False
    if not cfg.fd_fallback:
        raise ConfigError(
            "expression sources need a 'deriv_expr' when r != 0 "
            "(or enable the finite-difference fallback)"
        )
    return f, finite_difference_derivative(f, r, FD_STEP), False


def finite_difference_derivative(
    f: Callable[[Tuple[float, ...]], float],
    r: DerivOrder,
    step: float = FD_STEP,
) -> Callable[[Tuple[float, ...]], float]:
    """Centered mixed finite difference of f along the differentiated axes.

    The stencil is clamped into the cube; accuracy degrades accordingly and
    near grid planes of the target the one-sided values can be badly off.
    Meant as an explicitly requested fallback, not a default.
    """
    M = r.axes

    def fd(x: Tuple[float, ...]) -> float:
        total = 0.0
        for signs in itertools.product((-1.0, 1.0), repeat=len(M)):
            y = list(x)
            coeff = 1.0
            for axis, sg in zip(M, signs):
                y[axis] = min(max(y[axis] + sg * step, 0.0), 1.0)
                coeff *= sg
            total += coeff * f(tuple(y))
        return total / (2.0 * step) ** len(M)

    return fd


def run_experiment(cfg: ExperimentConfig, with_empirical: bool = True) -> ErrorReport:
    """Compute the theorem bound, optionally scan the sup error, and report."""
    start = time.perf_counter()
    g = Grid(cfg.m)
    r = DerivOrder(cfg.r) if cfg.r is not None else DerivOrder.zero(g.n)
    bound = compute_bound(cfg)
    empirical = argmax = gap = None
    if with_empirical:
        f, f_deriv, _certified = resolve_function(cfg)
        empirical, argmax = estimate_sup_error(
            f, f_deriv, g, r, cfg.samples_per_axis_per_block, parallel=cfg.parallel
        )
        if bound.value > 0:
            gap = empirical / bound.value - 1.0
        else:
            gap = 0.0 if empirical == 0 else float("inf")
    ms = (time.perf_counter() - start) * 1000.0
    return ErrorReport(
        theorem=cfg.theorem,
        n=g.n,
        m=g.m,
        p=cfg.p,
        r=r.r,
        bound=bound.value,
        quad_err=bound.quadrature_estimate_error,
        empirical=empirical,
        argmax=argmax,
        gap=gap,
        ms=ms,
    )


def reports_to_csv(reports: Sequence[ErrorReport]) -> str:
    lines = [",".join(REPORT_COLUMNS)]
    for rep in reports:
        lines.append(",".join(rep.row()))
    return "\n".join(lines) + "\n"


def reports_to_json(reports: Sequence[ErrorReport]) -> str:
    return json.dumps([rep.to_dict() for rep in reports], indent=2, sort_keys=True) + "\n"
