"""Built-in test functions with known class membership.

Each preset supplies the function together with the exact order-r
derivative, plus a flag saying whether membership in the configured class
is guaranteed by construction.  The certified presets are antiderivatives
of simple in-class profiles:

* ``ridge``      -- derivative ``sum_i min(K_i x_i**a_i, C_i)``, the
                    capped power profile of a multivariate majorant; its
                    total modulus is bounded by that majorant termwise.
* ``axis_power`` -- derivative ``min(K x_1**a, C)``, which depends on one
                    coordinate only and therefore fits any l_p class with
                    majorant ``min(K g**a, C)``.
* ``zero``       -- the zero function, member of every class.
* ``multilinear``-- product of all coordinates; reproduced exactly by the
                    spline (zero empirical error) but not certified, since
                    its modulus need not sit below an arbitrary majorant.

Antiderivatives over the differentiated axes exist in closed form except
for capped profiles, which are rejected when a derivative is requested.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

from .errors import ConfigError
from .moduli import PowerMajorant, PowerSumMajorant
from .spline import DerivOrder

PRESET_NAMES = ("zero", "ridge", "axis_power", "multilinear")


@dataclass(frozen=True)
class PresetFunction:
    name: str
    f: Callable[[Tuple[float, ...]], float]
    f_deriv: Callable[[Tuple[float, ...]], float]
    certified: bool


def build_preset(
    name: str,
    omega,
    r: DerivOrder,
) -> PresetFunction:
    if name == "zero":
        zero = lambda x: 0.0
        return PresetFunction(name, zero, zero, certified=True)
    if name == "multilinear":
        M = r.axes

        def f(x):
            return math.prod(x)

        def f_deriv(x):
            return math.prod(v for i, v in enumerate(x) if i not in M)

        return PresetFunction(name, f, f_deriv, certified=False)
    if name == "ridge":
        if not isinstance(omega, PowerSumMajorant):
            raise ConfigError("preset 'ridge' needs a multivariate majorant")
        return _ridge(omega, r)
    if name == "axis_power":
        if not isinstance(omega, PowerMajorant):
            raise ConfigError("preset 'axis_power' needs a univariate majorant")
        return _axis_power(omega, r)
    raise ConfigError(f"unknown preset '{name}'; available: {', '.join(PRESET_NAMES)}")


def _ridge(omega: PowerSumMajorant, r: DerivOrder) -> PresetFunction:
    M = r.axes
    if M and omega.caps is not None:
        raise ConfigError("preset 'ridge' has no closed antiderivative for capped majorants")
    K = omega.weights
    a = omega.exponents
    caps = omega.caps

    def profile(x):
        total = 0.0
        for i in range(len(K)):
            term = K[i] * x[i] ** a[i]
            if caps is not None:
                term = min(term, caps[i])
            total += term
        return total

    if not M:
        return PresetFunction("ridge", profile, profile, certified=True)

    def f(x):
        total = 0.0
        for i in range(len(K)):
            if i in M:
                term = K[i] * x[i] ** (a[i] + 1.0) / (a[i] + 1.0)
                for k in M:
                    if k != i:
                        term *= x[k]
            else:
                term = K[i] * x[i] ** a[i]
                for k in M:
                    term *= x[k]
            total += term
        return total

    return PresetFunction("ridge", f, profile, certified=True)


def _axis_power(omega: PowerMajorant, r: DerivOrder) -> PresetFunction:
    M = r.axes
    if M and omega.cap is not None:
        raise ConfigError("preset 'axis_power' has no closed antiderivative for capped majorants")
    K = omega.weight
    a = omega.exponent
    cap = omega.cap

    def profile(x):
        term = K * x[0] ** a
        return min(term, cap) if cap is not None else term

    if not M:
        return PresetFunction("axis_power", profile, profile, certified=True)

    def f(x):
        if 0 in M:
            term = K * x[0] ** (a + 1.0) / (a + 1.0)
        else:
            term = K * x[0] ** a
        for k in M:
            if k != 0:
                term *= x[k]
        return term

    return PresetFunction("axis_power", f, profile, certified=True)
