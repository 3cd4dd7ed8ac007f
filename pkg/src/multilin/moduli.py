"""Majorants of modulus-of-continuity type and empirical modulus estimators.

A majorant here is a closed parametric family rather than an arbitrary
callable: power sums ``sum_i K_i * t_i ** a_i`` (optionally saturated at
per-term caps ``C_i``) in the multivariate case, and ``K * g ** a`` (again
optionally capped) in the univariate case.  With ``0 < a_i <= 1`` every
member satisfies the four axioms a genuine modulus of continuity obeys --
zero at zero, non-decreasing, subadditive, continuous -- and is concave in
each variable, which the worst-case error formulas require.  Construction
validates the exponent range, so the concavity metadata is decidable; the
sampling checker below is the safety net, and is also what callers use to
probe majorants built through the unchecked hook.

The empirical estimators return lower bounds for the true moduli of a given
function over deterministic lattices of point pairs, so results are
reproducible and grow monotonically under nested lattice refinement.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import PreconditionError

AXIOM_SLACK = 1e-12


@dataclass(frozen=True)
class PowerSumMajorant:
    """Multivariate majorant  sum_i min(K_i * t_i**a_i, C_i)."""

    weights: Tuple[float, ...]
    exponents: Tuple[float, ...]
    caps: Optional[Tuple[float, ...]] = None
    _validate: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self) -> None:
        w = tuple(float(v) for v in self.weights)
        a = tuple(float(v) for v in self.exponents)
        c = None if self.caps is None else tuple(float(v) for v in self.caps)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "exponents", a)
        object.__setattr__(self, "caps", c)
        if not w:
            raise PreconditionError("majorant needs at least one axis")
        if len(a) != len(w) or (c is not None and len(c) != len(w)):
            raise PreconditionError("weights, exponents and caps must have equal length")
        if any(v < 0 for v in w):
            raise PreconditionError("weights must be nonnegative")
        if any(v <= 0 for v in a):
            raise PreconditionError("exponents must be positive")
        if c is not None and any(v <= 0 for v in c):
            raise PreconditionError("caps must be positive")
        if self._validate and any(v > 1 for v in a):
            raise PreconditionError(
                "exponents above 1 break subadditivity; the family only admits a <= 1"
            )

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def concave_axes(self) -> Tuple[bool, ...]:
        return tuple(a <= 1.0 for a in self.exponents)

    @property
    def concave(self) -> bool:
        return all(self.concave_axes)

    def __call__(self, tau) -> Union[float, np.ndarray]:
        """Evaluate at tau (a length-n vector or an (..., n) array)."""
        arr = np.asarray(tau, dtype=float)
        if arr.shape[-1:] != (self.n,):
            raise PreconditionError(
                f"argument has {arr.shape[-1] if arr.ndim else 0} components, expected {self.n}"
            )
        if np.any(arr < 0):
            raise PreconditionError("majorant arguments must be nonnegative")
        terms = np.asarray(self.weights) * arr ** np.asarray(self.exponents)
        if self.caps is not None:
            terms = np.minimum(terms, np.asarray(self.caps))
        out = terms.sum(axis=-1)
        return float(out) if arr.ndim == 1 else out


@dataclass(frozen=True)
class PowerMajorant:
    """Univariate majorant  min(K * g**a, C)."""

    weight: float
    exponent: float
    cap: Optional[float] = None
    _validate: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "weight", float(self.weight))
        object.__setattr__(self, "exponent", float(self.exponent))
        if self.cap is not None:
            object.__setattr__(self, "cap", float(self.cap))
        if self.weight < 0:
            raise PreconditionError("weight must be nonnegative")
        if self.exponent <= 0:
            raise PreconditionError("exponent must be positive")
        if self.cap is not None and self.cap <= 0:
            raise PreconditionError("cap must be positive")
        if self._validate and self.exponent > 1:
            raise PreconditionError(
                "exponents above 1 break subadditivity; the family only admits a <= 1"
            )

    @property
    def n(self) -> int:
        return 1

    @property
    def concave(self) -> bool:
        return self.exponent <= 1.0

    def __call__(self, gamma) -> Union[float, np.ndarray]:
        arr = np.asarray(gamma, dtype=float)
        if np.any(arr < 0):
            raise PreconditionError("majorant arguments must be nonnegative")
        out = self.weight * arr**self.exponent
        if self.cap is not None:
            out = np.minimum(out, self.cap)
        return float(out) if arr.ndim == 0 else out


Majorant = Union[PowerSumMajorant, PowerMajorant]


def unchecked_power_sum(weights, exponents, caps=None) -> PowerSumMajorant:
    """Test hook: build a power sum without the exponent-range check.

    Exists so the axiom checker can be exercised against deliberately invalid
    members (e.g. a = 2).  Never use for actual bound computations.
    """
    return PowerSumMajorant(tuple(weights), tuple(exponents), caps, _validate=False)


def unchecked_power(weight, exponent, cap=None) -> PowerMajorant:
    """Test hook: univariate counterpart of :func:`unchecked_power_sum`."""
    return PowerMajorant(weight, exponent, cap, _validate=False)


@dataclass(frozen=True)
class LpMetric:
    """l_p distance on [0, 1]^n for the exponent range the bounds cover."""

    p: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", float(self.p))
        if not 1.0 <= self.p <= 3.0:
            raise PreconditionError(f"p = {self.p} outside the supported range [1, 3]")

    def distance(self, x: Sequence[float], y: Sequence[float]) -> float:
        dx = np.abs(np.asarray(x, float) - np.asarray(y, float))
        return float((dx**self.p).sum() ** (1.0 / self.p))

    def diameter(self, n: int) -> float:
        """Largest distance between two points of the unit n-cube."""
        return float(n ** (1.0 / self.p))


@dataclass(frozen=True)
class AxiomViolation:
    axiom: str
    tau: Tuple[float, ...]
    gamma: Tuple[float, ...]
    lhs: float
    rhs: float


def check_mc_axioms(
    omega: Majorant, sample_count: int, seed: int
) -> List[AxiomViolation]:
    """Probe the majorant axioms on pseudo-random pairs from [0, 1]^n.

    Checks zero-at-zero once, then monotonicity and subadditivity on
    ``sample_count`` pairs (tau, gamma), deduplicated.  Deterministic for a
    fixed seed; an empty list means no sampled check failed beyond the
    1e-12 slack.
    """
    if sample_count < 1:
        raise PreconditionError("sample_count must be at least 1")
    n = omega.n
    rng = np.random.default_rng(seed)
    raw = rng.uniform(size=(sample_count, 2, n))
    seen = set()
    pairs = []
    for row in raw:
        key = (tuple(row[0]), tuple(row[1]))
        if key not in seen:
            seen.add(key)
            pairs.append(key)
    return check_axioms_on_pairs(omega, pairs)


def check_axioms_on_pairs(
    omega: Majorant, pairs: Sequence[Tuple[Tuple[float, ...], Tuple[float, ...]]]
) -> List[AxiomViolation]:
    """Axiom checks on an explicit pair list (vacuously clean when empty)."""
    n = omega.n
    violations: List[AxiomViolation] = []

    zero = (0.0,) * n
    z = _eval_vec(omega, np.zeros((1, n)))[0]
    if abs(z) > AXIOM_SLACK:
        violations.append(AxiomViolation("zero_at_zero", zero, zero, float(z), 0.0))
    if not pairs:
        return violations

    tau = np.asarray([p[0] for p in pairs], dtype=float)
    gam = np.asarray([p[1] for p in pairs], dtype=float)
    f_tau = _eval_vec(omega, tau)
    f_gam = _eval_vec(omega, gam)
    f_sum = _eval_vec(omega, tau + gam)

    mono_bad = f_sum < f_tau - AXIOM_SLACK
    sub_bad = f_sum > f_tau + f_gam + AXIOM_SLACK
    for idx in np.flatnonzero(mono_bad):
        violations.append(
            AxiomViolation(
                "monotone", tuple(tau[idx]), tuple(gam[idx]),
                float(f_sum[idx]), float(f_tau[idx]),
            )
        )
    for idx in np.flatnonzero(sub_bad):
        violations.append(
            AxiomViolation(
                "subadditive", tuple(tau[idx]), tuple(gam[idx]),
                float(f_sum[idx]), float(f_tau[idx] + f_gam[idx]),
            )
        )
    return violations


def _eval_vec(omega: Majorant, arr: np.ndarray) -> np.ndarray:
    if isinstance(omega, PowerMajorant):
        return np.asarray(omega(arr[:, 0]))
    return np.asarray(omega(arr))


def empirical_total_modulus(
    f: Callable[[Tuple[float, ...]], float],
    tau: Sequence[float],
    samples_per_axis: int,
) -> float:
    """Lower estimate of the total modulus of f at per-axis gaps tau.

    Maximizes |f(x) - f(y)| over a uniform lattice of base points x paired
    with every signed shift y = clip(x + s * tau), s in {-1, 0, 1}^n.
    Clipping only shrinks per-axis gaps, so every pair stays admissible.
    """
    tau = tuple(float(t) for t in tau)
    if any(t < 0 or t > 1 for t in tau):
        raise PreconditionError("tau components must lie in [0, 1]")
    n = len(tau)
    shifts = [s for s in itertools.product((-1.0, 0.0, 1.0), repeat=n) if any(s)]
    return _max_over_pairs(f, n, samples_per_axis, [tuple(si * ti for si, ti in zip(s, tau)) for s in shifts])


def empirical_lp_modulus(
    f: Callable[[Tuple[float, ...]], float],
    metric: LpMetric,
    gamma: float,
    n: int,
    samples_per_axis: int,
) -> float:
    """Lower estimate of the l_p modulus of an n-variate f at distance gamma.

    Pairs each lattice point with single-axis shifts of length gamma and
    with the diagonal shifts of l_p length exactly gamma; clipping into the
    cube never increases the distance.
    """
    gamma = float(gamma)
    if not 0.0 <= gamma <= metric.diameter(n) + 1e-12:
        raise PreconditionError(f"gamma = {gamma} outside [0, n^(1/p)]")
    shifts = []
    for i in range(n):
        for sign in (-1.0, 1.0):
            d = [0.0] * n
            d[i] = sign * gamma
            shifts.append(tuple(d))
    diag = gamma / n ** (1.0 / metric.p)
    for s in itertools.product((-1.0, 1.0), repeat=n):
        shifts.append(tuple(si * diag for si in s))
    return _max_over_pairs(f, n, samples_per_axis, shifts)


def _max_over_pairs(f, n: int, samples_per_axis: int, shifts) -> float:
    if samples_per_axis < 2:
        raise PreconditionError("samples_per_axis must be at least 2")
    axes = [np.linspace(0.0, 1.0, samples_per_axis) for _ in range(n)]
    best = 0.0
    for x in itertools.product(*axes):
        fx = f(x)
        for d in shifts:
            y = tuple(min(max(xi + di, 0.0), 1.0) for xi, di in zip(x, d))
            if y == x:
                continue
            diff = abs(fx - f(y))
            if diff > best:
                best = diff
    return best
