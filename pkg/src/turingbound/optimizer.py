"""Minimise a + b loglog T + c log T over the two knobs delta and d.

No term of the objective couples delta with d, so the two searches run
separately.  Each one scans a fixed coarse grid first (no unimodality is
assumed), then refines the grid bracket by golden-section search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, OptimizationFailure
from .strip_bounds import GrowthParams
from .turing_coeffs import (
    D_RANGE,
    DELTA_RANGE,
    ENGINE_TOL,
    CoefficientTriple,
    Knobs,
    coeff_b,
    coeff_c,
    compute_triple,
    headline_bound,
    pi_a_d_terms,
    pi_a_delta_terms,
)

GRID_POINTS = 200
BRACKET_WIDTH = 1e-4
INV_PHI = (math.sqrt(5) - 1) / 2
T_MIN = 1e5


@dataclass(frozen=True)
class SearchResult:
    x: float
    value: float
    evaluations: int
    bracket_width: float


@dataclass(frozen=True)
class OptimizationResult:
    best_delta: float
    best_d: float
    triple: CoefficientTriple
    objective: float
    evaluations: int
    bracket_width: float


def _check_height(T: float) -> float:
    if not T >= T_MIN:
        raise DomainError(f"T must be at least {T_MIN:g}, got {T!r}")
    return float(T)


def grid_then_golden(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    n_grid: int = GRID_POINTS,
    width: float = BRACKET_WIDTH,
) -> SearchResult:
    """Coarse grid to locate the bracket, golden section to shrink it.

    Ties on the grid go to the smaller abscissa.  A grid minimum at either end
    of ``[lo, hi]`` raises :class:`OptimizationFailure`.
    """
    xs = np.linspace(lo, hi, n_grid)
    fs = [f(float(x)) for x in xs]
    i = min(range(n_grid), key=lambda j: (fs[j], xs[j]))
    if i == 0 or i == n_grid - 1:
        raise OptimizationFailure(f"grid minimum at boundary x = {xs[i]:.6g} of [{lo}, {hi}]")
    best_x, best_f = float(xs[i]), fs[i]
    a, b = float(xs[i - 1]), float(xs[i + 1])
    evals = n_grid

    x1 = b - INV_PHI * (b - a)
    x2 = a + INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    evals += 2
    while b - a > width:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - INV_PHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + INV_PHI * (b - a)
            f2 = f(x2)
        evals += 1
    for x, fx in ((x1, f1), (x2, f2)):
        if (fx, x) < (best_f, best_x):
            best_x, best_f = x, fx
    return SearchResult(best_x, best_f, evals, b - a)


def delta_objective(
    params: GrowthParams, T: float, t0: float, tol: float = ENGINE_TOL
) -> Callable[[float], float]:
    loglog = math.log(math.log(T))
    return lambda delta: (
        pi_a_delta_terms(params, delta, t0, tol) / math.pi + coeff_b(params, delta) * loglog
    )


def d_objective(params: GrowthParams, T: float, tol: float = ENGINE_TOL) -> Callable[[float], float]:
    log_t = math.log(T)
    return lambda d: pi_a_d_terms(d, tol) / math.pi + coeff_c(params, d) * log_t


def _resolve_t0(T: float, t0: float | None) -> float:
    return T if t0 is None else float(t0)


def _search_delta(params, T, t0, tol) -> SearchResult:
    T = _check_height(T)
    return grid_then_golden(delta_objective(params, T, _resolve_t0(T, t0), tol), *DELTA_RANGE)


def _search_d(params, T, tol) -> SearchResult:
    T = _check_height(T)
    return grid_then_golden(d_objective(params, T, tol), *D_RANGE)


def optimize_delta(
    params: GrowthParams, T: float, t0: float | None = None, tol: float = ENGINE_TOL
) -> tuple[float, float]:
    """Best delta and the delta-dependent part of the objective at height T.

    ``t0`` sets where the inflation factors are evaluated; by default it is
    the height ``T`` itself.
    """
    r = _search_delta(params, T, t0, tol)
    return r.x, r.value


def optimize_d(params: GrowthParams, T: float, tol: float = ENGINE_TOL) -> tuple[float, float]:
    r = _search_d(params, T, tol)
    return r.x, r.value


def optimize_full(
    params: GrowthParams, T: float, t0: float | None = None, tol: float = ENGINE_TOL
) -> OptimizationResult:
    T = _check_height(T)
    t0 = _resolve_t0(T, t0)
    rd = _search_delta(params, T, t0, tol)
    rdd = _search_d(params, T, tol)
    triple = compute_triple(params, Knobs(rd.x, rdd.x, t0), tol)
    return OptimizationResult(
        best_delta=rd.x,
        best_d=rdd.x,
        triple=triple,
        objective=headline_bound(triple, T),
        evaluations=rd.evaluations + rdd.evaluations,
        bracket_width=max(rd.bracket_width, rdd.bracket_width),
    )
