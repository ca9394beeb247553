"""Error-bounded evaluation of zeta(s), zeta'/zeta and integrals of log zeta.

Every public operation returns an :class:`EvalResult` whose ``error_bound``
covers the truncation error of the underlying expansion plus a small
rounding cushion.  Real-argument values come from Euler--Maclaurin summation
of ``(log n)^j n^(-sigma)`` with a remainder bounded by the first omitted
correction; complex values use the classical Euler--Maclaurin tail with the
Backlund-style remainder ``|s+2m+1|/(sigma+2m+1) |T_(m+1)|``.

Integrals of ``log zeta`` over ``[X, oo)`` use the identity

    int_X^oo log zeta(sigma) dsigma = sum_{n>=2} Lambda(n) / (n^X log^2 n),

directly when the series tail is cheap, and composite Gauss--Legendre
quadrature with an a-priori derivative bound near the pole otherwise.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import bernoulli

from .errors import DomainError, ToleranceUnreachable

DEFAULT_TOL = 1e-12
MAX_TOL = 1e-3
CUSHION = 1e-13
SIGMA_MIN = 1.0 + 1e-6
EM_TERMS = 12
MAX_TERMS = 10**7

# Below this abscissa the log-zeta series converges too slowly to use alone.
SERIES_SPLIT = 3.0
SERIES_BUDGET = 2**22
GL_ORDER = 8

_EPS = float(np.finfo(np.float64).eps)
_EPS_LD = float(np.finfo(np.longdouble).eps)


@dataclass(frozen=True)
class EvalResult:
    """A value together with a bound on its absolute error."""

    value: float | complex
    error_bound: float

    def __post_init__(self):
        object.__setattr__(self, "error_bound", float(self.error_bound))
        if not (self.error_bound >= 0.0 and math.isfinite(self.error_bound)):
            raise ValueError(f"invalid error bound {self.error_bound!r}")

    def __iter__(self):
        yield self.value
        yield self.error_bound


def check_tol(tol: float) -> float:
    if not (0.0 < tol <= MAX_TOL):
        raise DomainError(f"tolerance must lie in (0, {MAX_TOL}], got {tol!r}")
    return float(tol)


def _check_sigma(sigma: float, name: str = "sigma") -> float:
    sigma = float(sigma)
    if not sigma > SIGMA_MIN:
        raise DomainError(f"{name} must exceed 1 + 1e-6, got {sigma!r}")
    return sigma


# B_2k / (2k)! for k = 0 .. EM_TERMS + 1
_BERN = np.array(
    [b / math.factorial(i) for i, b in enumerate(bernoulli(2 * EM_TERMS + 2))]
)[0::2]


def _cushion(value: float) -> float:
    return CUSHION * max(1.0, abs(value))


# ---------------------------------------------------------------------------
# Real Euler--Maclaurin
# ---------------------------------------------------------------------------

def euler_maclaurin_real(sigma, n_terms: int, log_power: int = 0, em_terms: int = EM_TERMS):
    """Return ``(value, bound)`` for ``sum_{n>=1} (log n)^j n^-sigma``.

    ``sigma`` may be a scalar or an array; ``log_power`` is 0 (zeta) or 1
    (minus zeta').  The bound is twice the magnitude of the first omitted
    correction, valid once the next derivative has fixed sign on
    ``[n_terms, oo)``; where that fails the bound is ``inf``.
    """
    if log_power not in (0, 1):
        raise ValueError("log_power must be 0 or 1")
    s = np.atleast_1d(np.asarray(sigma, dtype=float))
    N = int(n_terms)
    m = int(em_terms)
    logN = math.log(N)

    n = np.arange(1, N, dtype=float)
    logn = np.log(n)
    powers = np.exp(-np.outer(s, logn))
    if log_power:
        powers = powers * logn
    head = powers.sum(axis=1)

    NmS = np.exp(-s * logN)
    sm1 = s - 1.0
    if log_power:
        integral = N * NmS * (logN / sm1 + 1.0 / sm1**2)
        fN = NmS * logN
    else:
        integral = N * NmS / sm1
        fN = NmS

    # f^(k)(x) = x^(-sigma-k) (p_k log x + q_k)
    p = np.full_like(s, float(log_power))
    q = np.full_like(s, float(1 - log_power))
    corr = np.zeros_like(s)
    bound = np.zeros_like(s)
    for k in range(2 * m + 2):
        dk = N ** (-float(k)) * NmS * (p * logN + q)  # f^(k)(N)
        if k % 2 == 1:
            j = (k + 1) // 2
            if j <= m:
                corr -= _BERN[j] * dk
            else:
                bound = 2.0 * abs(_BERN[j]) * np.abs(dk)
        p, q = -(s + k) * p, -(s + k) * q + p
    # p, q now describe f^(2m+2); it must keep one sign beyond N.
    bad = (p * logN + q) < 0
    bound = np.where(bad, np.inf, bound)

    value = head + integral + 0.5 * fN + corr
    if np.ndim(sigma) == 0:
        return float(value[0]), float(bound[0])
    return value, bound


def _ladder(start: int = 64):
    N = start
    while N <= MAX_TERMS:
        yield N
        N *= 4


def zeta_real(sigma: float, tol: float = DEFAULT_TOL) -> EvalResult:
    """zeta(sigma) for real sigma > 1."""
    sigma = _check_sigma(sigma)
    tol = check_tol(tol)
    for N in _ladder():
        value, bound = euler_maclaurin_real(sigma, N)
        err = bound + _cushion(value)
        if err <= tol:
            return EvalResult(value, err)
    raise ToleranceUnreachable(f"zeta({sigma}) to {tol} exceeds the truncation budget")


def log_deriv_zeta(sigma: float, tol: float = DEFAULT_TOL) -> EvalResult:
    """zeta'(sigma)/zeta(sigma) for real sigma > 1."""
    sigma = _check_sigma(sigma)
    tol = check_tol(tol)
    for N in _ladder():
        z, ez = euler_maclaurin_real(sigma, N, 0)
        d, ed = euler_maclaurin_real(sigma, N, 1)  # d = -zeta'
        if not ez < z:
            continue
        value = -d / z
        err = (ed + abs(value) * ez) / (z - ez)
        err += _cushion(value)
        if err <= tol:
            return EvalResult(value, err)
    raise ToleranceUnreachable(f"zeta'/zeta({sigma}) to {tol} exceeds the truncation budget")


# ---------------------------------------------------------------------------
# Complex Euler--Maclaurin
# ---------------------------------------------------------------------------

def _expi_ld(phase: np.ndarray) -> np.ndarray:
    """exp(-i*phase) with the phase reduced in extended precision."""
    return (np.cos(phase) - 1j * np.sin(phase)).astype(np.complex128)


def _check_strip_point(sigma: float, t: float) -> None:
    if not 0.4 <= sigma <= 2.2:
        raise DomainError(f"sigma must lie in [0.4, 2.2], got {sigma!r}")
    if not 3.0 <= abs(t) <= 1e6:
        raise DomainError(f"|t| must lie in [3, 1e6], got {t!r}")


def zeta_complex_line(sigmas, t: float, tol: float = DEFAULT_TOL) -> list[EvalResult]:
    """zeta(sigma + it) for several sigma at one height, sharing the phases."""
    t = float(t)
    sigmas = [float(x) for x in sigmas]
    for sigma in sigmas:
        _check_strip_point(sigma, t)
    tol = check_tol(tol)
    m = EM_TERMS
    N = math.ceil(10 + 2 * abs(t))
    if N > MAX_TERMS:
        raise ToleranceUnreachable(f"N = {N} exceeds the truncation budget")
    t_ld = np.longdouble(t)
    logn_ld = np.log(np.arange(1, N, dtype=np.longdouble))
    logn = logn_ld.astype(float)
    phases = _expi_ld(t_ld * logn_ld)
    logN_ld = np.log(np.longdouble(N))
    NmIt = complex(_expi_ld(np.array([t_ld * logN_ld]))[0])  # N^(-it)
    phase_err = 8.0 * _EPS_LD * abs(t) * float(logN_ld)

    out = []
    for sigma in sigmas:
        s = complex(sigma, t)
        mags = np.exp(-sigma * logn)
        head = np.sum(mags * phases)
        NmS = N ** (-sigma) * NmIt
        tail = N * NmS / (s - 1.0) + 0.5 * NmS
        poch = s  # s (s+1) ... (s+2k-2)
        Npow = NmS / N  # N^(-s-2k+1) for k = 1
        for k in range(1, m + 1):
            tail += _BERN[k] * poch * Npow
            poch *= (s + 2 * k - 1) * (s + 2 * k)
            Npow /= N * N
        t_next = abs(_BERN[m + 1] * poch * Npow)
        trunc = abs(s + 2 * m + 1) / (sigma + 2 * m + 1) * t_next

        value = complex(head + tail)
        # Random-walk model of phase and summation rounding.
        rounding = (
            phase_err * math.sqrt(float(np.sum(mags * mags)))
            + 8.0 * _EPS * float(np.sum(mags))
            + _cushion(abs(value))
        )
        err = trunc + rounding
        if err > tol:
            raise ToleranceUnreachable(
                f"zeta({sigma}+{t}i): error {err:.3g} exceeds tolerance {tol:.3g}"
            )
        out.append(EvalResult(value, err))
    return out


def zeta_complex(sigma: float, t: float, tol: float = DEFAULT_TOL) -> EvalResult:
    """zeta(sigma + it) for 0.4 <= sigma <= 2.2 and 3 <= |t| <= 1e6."""
    return zeta_complex_line([sigma], t, tol)[0]


# ---------------------------------------------------------------------------
# von Mangoldt table
# ---------------------------------------------------------------------------

_lambda_lock = threading.Lock()
_lambda_table = np.zeros(2)


def von_mangoldt_table(limit: int) -> np.ndarray:
    """Array ``L`` with ``L[n] = Lambda(n)`` for ``0 <= n <= limit``.

    Built once by sieving and grown on demand; safe to call from several
    threads.
    """
    global _lambda_table
    limit = int(limit)
    if limit > MAX_TERMS:
        raise ToleranceUnreachable(f"von Mangoldt table beyond {MAX_TERMS} requested")
    table = _lambda_table
    if len(table) > limit:
        return table[: limit + 1]
    with _lambda_lock:
        if len(_lambda_table) <= limit:
            size = max(limit + 1, 2 * len(_lambda_table))
            size = min(size, MAX_TERMS + 1)
            sieve = np.ones(size, dtype=bool)
            sieve[:2] = False
            for p in range(2, math.isqrt(size - 1) + 1):
                if sieve[p]:
                    sieve[p * p :: p] = False
            lam = np.zeros(size)
            for p in np.flatnonzero(sieve):
                p = int(p)
                lp = math.log(p)
                pk = p
                while pk < size:
                    lam[pk] = lp
                    pk *= p
            _lambda_table = lam
        return _lambda_table[: limit + 1]


# ---------------------------------------------------------------------------
# Integrals of log zeta
# ---------------------------------------------------------------------------

def _series_tail_bound(X: float, N: int) -> float:
    return N ** (1.0 - X) / ((X - 1.0) * math.log(N))


def log_zeta_integral_series(X: float, n_terms: int) -> EvalResult:
    """``int_X^oo log zeta`` from the von Mangoldt series cut at ``n_terms``.

    The tail uses ``Lambda(n)/log^2 n <= 1/log N`` and
    ``sum_{n>N} n^-X <= N^(1-X)/(X-1)``.
    """
    X = _check_sigma(X, "X")
    N = max(int(n_terms), 2)
    lam = von_mangoldt_table(N)
    n = np.arange(2, N + 1, dtype=float)
    logn = np.log(n)
    lam = lam[2:]
    mask = lam > 0
    terms = lam[mask] * np.exp(-X * logn[mask]) / logn[mask] ** 2
    value = float(np.sum(terms[::-1]))
    return EvalResult(value, _series_tail_bound(X, N) + _cushion(value))


def _series_terms_needed(X: float, tol: float) -> int | None:
    """Smallest power of two N whose series tail bound is within ``tol``."""
    N = 2
    while N <= SERIES_BUDGET:
        if _series_tail_bound(X, N) <= tol:
            return N
        N *= 2
    return None


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(GL_ORDER)
# (n!)^4 / ((2n+1) ((2n)!)^3): Gauss--Legendre error constant on unit-width panels.
_GL_CONST = math.factorial(GL_ORDER) ** 4 / (
    (2 * GL_ORDER + 1) * math.factorial(2 * GL_ORDER) ** 3
)


def _log_zeta_derivative_bound(sigma: float, k: int) -> float:
    """Upper bound for |d^k/dsigma^k log zeta(sigma)|, k >= 1.

    The derivative is +-sum Lambda(n) (log n)^(k-1) n^-sigma, which is at most
    sum_{n>=2} (log n)^k n^-sigma <= k!/(sigma-1)^(k+1) + (k/(e sigma))^k.
    """
    return math.factorial(k) / (sigma - 1.0) ** (k + 1) + (k / (math.e * sigma)) ** k


def _panels(a: float, b: float, ratio: float, max_width: float):
    edges = [a]
    u = a
    while u < b:
        h = min(ratio * (u - 1.0), max_width, b - u)
        if b - (u + h) < 1e-3 * h:
            h = b - u
        u = u + h
        edges.append(u)
    edges[-1] = b
    return np.array(edges)


def quadrature_log_zeta(a: float, b: float, tol: float = DEFAULT_TOL) -> EvalResult:
    """``int_a^b log zeta`` by composite Gauss--Legendre on geometric panels.

    Panel widths grow in proportion to the distance from the pole, so the
    a-priori derivative bound keeps the quadrature error per panel uniform.
    """
    a = _check_sigma(a, "a")
    b = float(b)
    tol = check_tol(tol)
    if b < a:
        raise DomainError(f"upper limit {b} below lower limit {a}")
    if b == a:
        return EvalResult(0.0, 0.0)
    two_n = 2 * GL_ORDER
    ratio = 0.5
    while True:
        edges = _panels(a, b, ratio, max_width=0.5)
        widths = np.diff(edges)
        quad_err = sum(
            _GL_CONST * h ** (two_n + 1) * _log_zeta_derivative_bound(left, two_n)
            for left, h in zip(edges[:-1], widths)
        )
        if quad_err <= 0.25 * tol:
            break
        ratio *= 0.5
        if ratio < 1e-3:
            raise ToleranceUnreachable(f"quadrature on [{a}, {b}] cannot reach {tol}")

    mids = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * widths
    sig = (mids[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    wts = (half[:, None] * _GL_WEIGHTS[None, :]).ravel()

    for N in _ladder():
        z, ez = euler_maclaurin_real(sig, N)
        if np.all(ez < z):
            ferr = ez / (z - ez)
            eval_err = float(np.sum(wts * ferr))
            if eval_err <= 0.25 * tol:
                break
    else:
        raise ToleranceUnreachable(f"zeta evaluations on [{a}, {b}] cannot reach {tol}")

    value = float(np.sum(wts * np.log(z)))
    err = quad_err + eval_err + _cushion(value) * (b - a + 1.0)
    return EvalResult(value, err)


@lru_cache(maxsize=8192)
def _tail_cached(X: float, tol: float) -> EvalResult:
    N = _series_terms_needed(X, 0.5 * tol)
    if N is not None and (X >= SERIES_SPLIT or N <= 2**14):
        return log_zeta_integral_series(X, N)
    head = quadrature_log_zeta(X, SERIES_SPLIT, 0.5 * tol)
    Ns = _series_terms_needed(SERIES_SPLIT, 0.25 * tol)
    rest = log_zeta_integral_series(SERIES_SPLIT, Ns)
    return EvalResult(head.value + rest.value, head.error_bound + rest.error_bound)


def integral_log_zeta_tail(sigma0: float, tol: float = DEFAULT_TOL) -> EvalResult:
    """``int_sigma0^oo log zeta(sigma) dsigma`` for sigma0 > 1."""
    X = _check_sigma(sigma0, "sigma0")
    tol = check_tol(tol)
    result = _tail_cached(X, tol)
    if result.error_bound > tol:
        raise ToleranceUnreachable(f"tail integral from {X} cannot reach {tol}")
    return result


def integral_log_zeta_finite(sigma0: float, sigma1: float, tol: float = DEFAULT_TOL) -> EvalResult:
    """``int_sigma0^sigma1 log zeta(sigma) dsigma`` as a difference of tails."""
    a = _check_sigma(sigma0, "sigma0")
    b = float(sigma1)
    tol = check_tol(tol)
    if b < a:
        raise DomainError(f"sigma1 = {b} is below sigma0 = {a}")
    if b == a:
        return EvalResult(0.0, 0.0)
    lo = integral_log_zeta_tail(a, 0.5 * tol)
    hi = integral_log_zeta_tail(b, 0.5 * tol)
    return EvalResult(lo.value - hi.value, lo.error_bound + hi.error_bound)
