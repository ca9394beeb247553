"""Explicit upper bounds for |zeta(sigma + it)| on 1/2 <= sigma <= 1 + delta.

The bounds interpolate, Phragmen--Lindelof style, between a line bound on
sigma = 1/2 (``k1 t^k2 (log t)^k3``), one on sigma = 1 (``k4 (log t)^k5``)
and the trivial bound ``zeta(1 + delta)`` on sigma = 1 + delta.  The
multiplicative factors ``1 + a0`` and ``1 + a1`` convert bounds stated in
``|Q0 + s|`` into bounds in ``t``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError
from .zeta_engine import zeta_real

SIGMA_SLACK = 1e-12
T_MIN = 1e3
ZETA_TOL = 1e-10


@dataclass(frozen=True)
class GrowthParams:
    """Line bounds on zeta: ``k1 t^k2 (log t)^k3`` at 1/2, ``k4 (log t)^k5`` at 1."""

    k1: float
    k2: float
    k3: float
    k4: float
    k5: float
    Q0: float
    name: str = "custom"

    def __post_init__(self):
        if not (self.k1 > 0 and self.k4 > 0):
            raise DomainError("k1 and k4 must be positive")
        if min(self.k2, self.k3, self.k5, self.Q0) < 0:
            raise DomainError("k2, k3, k5 and Q0 must be non-negative")

    def as_tuple(self) -> tuple[float, ...]:
        return (self.k1, self.k2, self.k3, self.k4, self.k5, self.Q0)


SUBCONVEXITY = GrowthParams(0.732, 1 / 6, 1.0, 0.75, 1.0, 5.0, name="subconvexity")
# Q0 is not pinned down for this set; 5 keeps it comparable with SUBCONVEXITY.
CONVEXITY = GrowthParams(4 / (2 * math.pi) ** 0.25, 0.25, 0.0, 0.75, 1.0, 5.0, name="convexity")
PRESETS = {p.name: p for p in (SUBCONVEXITY, CONVEXITY)}


@dataclass(frozen=True)
class StripConfig:
    delta: float
    t0: float

    def __post_init__(self):
        if not 0 < self.delta <= 2:
            raise DomainError(f"delta must lie in (0, 2], got {self.delta!r}")
        if not self.t0 >= T_MIN:
            raise DomainError(f"t0 must be at least {T_MIN:g}, got {self.t0!r}")


@dataclass(frozen=True)
class InflationFactors:
    a0: float
    a1: float
    alpha1: float
    alpha2: float


@dataclass(frozen=True)
class ConditionViolation:
    """Returned in place of a bound whose validity conditions fail."""

    condition: str  # "first", "second" or "threshold"
    detail: str


def a0_factor(sigma: float, Q0: float, t: float) -> float:
    if not t >= T_MIN:
        raise DomainError(f"t must be at least {T_MIN:g}, got {t!r}")
    x = sigma + Q0
    if x < 0:
        raise DomainError("sigma + Q0 must be non-negative")
    L = math.log(t)
    return x / (2 * t * t * L) + math.pi / (2 * L) + math.pi * x * x / (4 * t * L * L)


def a1_factor(sigma: float, Q0: float, t: float) -> float:
    if not t > 0:
        raise DomainError(f"t must be positive, got {t!r}")
    return (sigma + Q0) / t


@lru_cache(maxsize=1024)
def zeta_one_plus(delta: float) -> float:
    """zeta(1 + delta), certified to ``ZETA_TOL``."""
    return zeta_real(1.0 + delta, ZETA_TOL).value


def inflation_factors(params: GrowthParams, cfg: StripConfig) -> InflationFactors:
    a0 = a0_factor(1 + cfg.delta, params.Q0, cfg.t0)
    a1 = a1_factor(1 + cfg.delta, params.Q0, cfg.t0)
    alpha1 = (1 + a1) ** (params.k2 + 1) * (1 + a0) ** (params.k3 + params.k5)
    alpha2 = (1 + a1) * (1 + a0) ** params.k5
    return InflationFactors(a0, a1, alpha1, alpha2)


def _clamp(sigma: float, lo: float, hi: float) -> float:
    if not lo - SIGMA_SLACK <= sigma <= hi + SIGMA_SLACK:
        raise DomainError(f"sigma = {sigma!r} outside [{lo}, {hi}]")
    return min(max(sigma, lo), hi)


def _check_t(cfg: StripConfig, t: float) -> float:
    if not t >= cfg.t0:
        raise DomainError(f"t = {t!r} is below t0 = {cfg.t0!r}")
    return float(t)


def bound_left(params: GrowthParams, cfg: StripConfig, sigma: float, t: float) -> float:
    """Bound on |zeta(sigma + it)| for 1/2 <= sigma <= 1."""
    sigma = _clamp(sigma, 0.5, 1.0)
    t = _check_t(cfg, t)
    p = params
    alpha1 = inflation_factors(p, cfg).alpha1
    L = math.log(t)
    return (
        alpha1
        * p.k1 ** (2 * (1 - sigma))
        * p.k4 ** (2 * (sigma - 0.5))
        * t ** (2 * p.k2 * (1 - sigma))
        * L ** (2 * (p.k3 * (1 - sigma) + p.k5 * (sigma - 0.5)))
    )


def bound_right(params: GrowthParams, cfg: StripConfig, sigma: float, t: float) -> float:
    """Bound on |zeta(sigma + it)| for 1 <= sigma <= 1 + delta."""
    delta = cfg.delta
    sigma = _clamp(sigma, 1.0, 1.0 + delta)
    t = _check_t(cfg, t)
    p = params
    alpha2 = inflation_factors(p, cfg).alpha2
    w = (1 + delta - sigma) / delta
    return (
        alpha2
        * p.k4**w
        * zeta_one_plus(delta) ** ((sigma - 1) / delta)
        * math.log(t) ** (p.k5 * w)
    )


def regional_bound(params: GrowthParams, cfg: StripConfig, sigma: float, t: float) -> float:
    """bound_left below sigma = 1, bound_right above it."""
    if sigma <= 1.0:
        return bound_left(params, cfg, sigma, t)
    return bound_right(params, cfg, sigma, t)


def check_conditions(params: GrowthParams, delta: float, t: float) -> ConditionViolation | None:
    """Conditions under which both regional bounds decrease in sigma."""
    p = params
    L = math.log(t)
    lhs = t**p.k2 * L ** (p.k3 - p.k5)
    if lhs < p.k4 / p.k1:
        return ConditionViolation(
            "first", f"t^k2 (log t)^(k3-k5) = {lhs:.6g} < k4/k1 = {p.k4 / p.k1:.6g}"
        )
    z = zeta_one_plus(delta)
    if p.k5 == 0:
        ok = z <= p.k4
        threshold = 0.0 if ok else math.inf
    else:
        threshold = math.exp((z / p.k4) ** (1 / p.k5))
        ok = t >= threshold
    if not ok:
        return ConditionViolation("second", f"t = {t:.6g} < exp((zeta(1+delta)/k4)^(1/k5)) = {threshold:.6g}")
    return None


def uniform_bound(params: GrowthParams, cfg: StripConfig, sigma: float, t: float):
    """Single bound valid on the whole of 1/2 <= sigma <= 1 + delta.

    Returns a :class:`ConditionViolation` when ``t`` fails either
    monotonicity condition.
    """
    _clamp(sigma, 0.5, 1.0 + cfg.delta)
    t = _check_t(cfg, t)
    violation = check_conditions(params, cfg.delta, t)
    if violation is not None:
        return violation
    p = params
    return inflation_factors(p, cfg).alpha1 * p.k1 * t**p.k2 * math.log(t) ** p.k3


def corollary_threshold(delta: float) -> float:
    return max(1.16, math.exp(4 * zeta_one_plus(delta) / 3))


def corollary_bound(delta: float, t0: float, t: float):
    """Sub-convexity specialisation of :func:`uniform_bound`."""
    cfg = StripConfig(delta, t0)
    threshold = corollary_threshold(delta)
    if t < threshold:
        return ConditionViolation("threshold", f"t = {t:.6g} < {threshold:.6g}")
    t = _check_t(cfg, t)
    a1 = a1_factor(1 + delta, 5, t0)
    a0 = a0_factor(1 + delta, 5, t0)
    return 0.732 * (1 + a1) ** (7 / 6) * (1 + a0) ** 2 * t ** (1 / 6) * math.log(t)
