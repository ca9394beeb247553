"""Coefficients (a, b, c) of the bound |int S(t) dt| <= a + b loglog t2 + c log t2.

``pi * a`` splits into a part depending only on ``delta`` (the strip
integral handled by the regional zeta bounds) and a part depending only on
``d`` (the lower bound for log zeta, taken over as given), plus the fixed
constant ``3e-4``.  Keeping the two parts apart is what lets the optimizer
search each knob on its own.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from decimal import ROUND_CEILING, Decimal
from functools import lru_cache

from .errors import DomainError
from .strip_bounds import GrowthParams, a0_factor, a1_factor
from .zeta_engine import (
    integral_log_zeta_finite,
    integral_log_zeta_tail,
    log_deriv_zeta,
    zeta_real,
)

ENGINE_TOL = 1e-9
THEOREM_T0 = 1e5
EXTRA_CONSTANT = 3e-4
DELTA_RANGE = (0.05, 1.0)
D_RANGE = (0.55, 1.2)
LOG4 = math.log(4)


@dataclass(frozen=True)
class Knobs:
    delta: float
    d: float
    t0: float = THEOREM_T0

    def __post_init__(self):
        check_delta(self.delta)
        check_d(self.d)
        if not self.t0 >= 1e3:
            raise DomainError(f"t0 must be at least 1e3, got {self.t0!r}")


def check_delta(delta: float) -> float:
    lo, hi = DELTA_RANGE
    if not lo <= delta <= hi:
        raise DomainError(f"delta = {delta!r} outside [{lo}, {hi}]")
    return float(delta)


def check_d(d: float) -> float:
    lo, hi = D_RANGE
    if not d > 0.5:
        raise DomainError(f"d = {d!r} must exceed 1/2")
    if not lo <= d <= hi:
        raise DomainError(f"d = {d!r} outside [{lo}, {hi}]")
    return float(d)


@dataclass(frozen=True)
class CoefficientTriple:
    a: float
    b: float
    c: float
    knobs: Knobs | None = None
    params: GrowthParams | None = None
    a_error_bound: float = field(default=0.0, compare=False)

    def __iter__(self):
        return iter((self.a, self.b, self.c))


def lemma_A1(params: GrowthParams, delta: float, t0: float, tol: float = ENGINE_TOL) -> float:
    """Constant term of the upper bound for the real part of the log-zeta integral."""
    if not delta > 0:
        raise DomainError(f"delta must be positive, got {delta!r}")
    p = params
    a1 = a1_factor(1 + delta, p.Q0, t0)
    a0 = a0_factor(1 + delta, p.Q0, t0)
    return (
        integral_log_zeta_tail(1 + delta, tol).value
        + (p.k2 / 4 + 0.5 + delta) * math.log1p(a1)
        + math.log(p.k1) / 4
        + (p.k3 / 4 + p.k5 / 4 + p.k5 * delta / 2) * math.log1p(a0)
        + (0.25 + delta / 2) * math.log(p.k4)
        + delta / 2 * math.log(zeta_real(1 + delta, tol).value)
    )


def lemma_B1_C1(params: GrowthParams, delta: float) -> tuple[float, float]:
    p = params
    return (p.k3 + p.k5) / 4 + delta * p.k5 / 2, p.k2 / 4


@lru_cache(maxsize=65536)
def _delta_part(params: GrowthParams, delta: float, t0: float, tol: float) -> float:
    return lemma_A1(params, delta, t0, tol)


@lru_cache(maxsize=65536)
def _d_part(d: float, tol: float) -> tuple[float, float]:
    """d-dependent terms of pi*a, with their accumulated error bound."""
    ld = log_deriv_zeta(0.5 + d, tol)
    tail_half = integral_log_zeta_tail(0.5 + d, tol)
    tail_one = integral_log_zeta_tail(1 + 2 * d, tol)
    fin_one = integral_log_zeta_finite(1 + 2 * d, 1 + 4 * d, tol)
    fin_half = integral_log_zeta_finite(0.5 + d, 0.5 + 2 * d, tol)
    d2 = d * d
    value = (
        d2 * LOG4 * (-ld.value - 0.5 * math.log(2 * math.pi) + 0.25)
        + d2 / 2 * math.log(math.pi)
        - 0.5 * tail_one.value
        + tail_half.value
        - 0.5 * fin_one.value
        + fin_half.value
    )
    err = (
        d2 * LOG4 * ld.error_bound
        + 0.5 * tail_one.error_bound
        + tail_half.error_bound
        + 0.5 * fin_one.error_bound
        + fin_half.error_bound
    )
    return value, err


def pi_a_delta_terms(
    params: GrowthParams, delta: float, t0: float = THEOREM_T0, tol: float = ENGINE_TOL
) -> float:
    """Terms of ``pi * a`` that involve delta (and the growth constants)."""
    check_delta(delta)
    return _delta_part(params, float(delta), float(t0), float(tol))


def pi_a_d_terms(d: float, tol: float = ENGINE_TOL) -> float:
    """Terms of ``pi * a`` that involve d only."""
    check_d(d)
    return _d_part(float(d), float(tol))[0]


def coeff_a(params: GrowthParams, knobs: Knobs, tol: float = ENGINE_TOL) -> float:
    return (
        pi_a_delta_terms(params, knobs.delta, knobs.t0, tol)
        + pi_a_d_terms(knobs.d, tol)
        + EXTRA_CONSTANT
    ) / math.pi


def coeff_b(params: GrowthParams, delta: float) -> float:
    if not delta > 0:
        raise DomainError(f"delta must be positive, got {delta!r}")
    return lemma_B1_C1(params, delta)[0] / math.pi


def coeff_c(params: GrowthParams, d: float) -> float:
    if not d > 0.5:
        raise DomainError(f"d = {d!r} must exceed 1/2")
    return (params.k2 / 4 + d * d / 2 * (LOG4 - 1)) / math.pi


def compute_triple(params: GrowthParams, knobs: Knobs, tol: float = ENGINE_TOL) -> CoefficientTriple:
    # delta side: one tail integral and one log zeta, each within tol
    err = (_d_part(float(knobs.d), float(tol))[1] + 2 * tol) / math.pi
    return CoefficientTriple(
        a=coeff_a(params, knobs, tol),
        b=coeff_b(params, knobs.delta),
        c=coeff_c(params, knobs.d),
        knobs=knobs,
        params=params,
        a_error_bound=err,
    )


def headline_bound(triple, t2: float) -> float:
    """``a + b loglog t2 + c log t2`` for a triple or any ``(a, b, c)``."""
    if not t2 > math.e:
        raise DomainError(f"t2 must exceed e, got {t2!r}")
    a, b, c = triple
    L = math.log(t2)
    return a + b * math.log(L) + c * L


def round_up(x: float, decimals: int = 3) -> float:
    """Round towards +infinity, so a rounded upper bound stays an upper bound."""
    q = Decimal(1).scaleb(-decimals)
    return float(Decimal(x).quantize(q, rounding=ROUND_CEILING))


def rounded_triple(triple: CoefficientTriple, decimals: int = 3) -> CoefficientTriple:
    return replace(
        triple,
        a=round_up(triple.a + triple.a_error_bound, decimals),
        b=round_up(triple.b, decimals),
        c=round_up(triple.c, decimals),
    )
