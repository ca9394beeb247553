import math
import threading

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import log_zeta_quad, log_zeta_series, minus_log_deriv_series, von_mangoldt
from turingbound.errors import DomainError, ToleranceUnreachable
from turingbound.zeta_engine import (
    EvalResult,
    euler_maclaurin_real,
    integral_log_zeta_finite,
    integral_log_zeta_tail,
    log_deriv_zeta,
    log_zeta_integral_series,
    quadrature_log_zeta,
    von_mangoldt_table,
    zeta_complex,
    zeta_complex_line,
    zeta_real,
)

# mpmath at 30 digits
ZETA_1148 = 7.34464197426201544818457912247
LOG_DERIV_1262 = -3.28541285772505640339607669581
TAIL_2 = 0.536526945921177100961719019549
TAIL_1148 = 1.36058724309508832640565432685
FINITE_2524_4048 = 0.237010330760719208434368311467


def test_eval_result_rejects_bad_bounds():
    with pytest.raises(ValueError):
        EvalResult(1.0, -1e-3)
    with pytest.raises(ValueError):
        EvalResult(1.0, math.inf)
    v, e = EvalResult(2.0, 0.5)
    assert (v, e) == (2.0, 0.5)


class TestZetaReal:
    def test_basel(self):
        r = zeta_real(2, 1e-12)
        assert abs(r.value - math.pi**2 / 6) <= 1e-12
        assert r.error_bound <= 1e-12

    def test_zeta3_against_direct_sum(self):
        N = 10**7
        n = np.arange(1, N + 1, dtype=float)
        direct = float(np.sum(n[::-1] ** -3.0))
        tail = 1 / (2 * N**2)  # int_N^oo u^-3 du
        r = zeta_real(3, 1e-12)
        assert direct <= r.value + r.error_bound + 1e-13
        assert r.value <= direct + tail + r.error_bound + 1e-13
        assert r.value == pytest.approx(1.2020569031595942, abs=1e-12)

    def test_near_pole(self):
        r = zeta_real(1.148, 1e-10)
        assert abs(r.value - ZETA_1148) <= r.error_bound <= 1e-10
        # two truncation lengths agree
        v1, _ = euler_maclaurin_real(1.148, 100)
        v2, _ = euler_maclaurin_real(1.148, 1000)
        assert abs(v1 - v2) < 1e-12
        # Laurent expansion through the first Stieltjes constant
        laurent = 1 / 0.148 + 0.5772156649 + 0.0728158455 * 0.148
        assert r.value == pytest.approx(laurent, abs=0.148**2)

    @pytest.mark.parametrize("sigma", [1.0, 0.5, 1 + 5e-7])
    def test_domain(self, sigma):
        with pytest.raises(DomainError):
            zeta_real(sigma)

    @pytest.mark.parametrize("tol", [0.0, -1e-9, 1e-2])
    def test_bad_tolerance(self, tol):
        with pytest.raises(DomainError):
            zeta_real(2, tol)

    def test_unreachable(self):
        with pytest.raises(ToleranceUnreachable):
            zeta_real(1.05, 1e-14)

    def test_decreasing_and_above_one(self):
        grid = np.linspace(1.01, 12, 150)
        vals = [zeta_real(s, 1e-10).value for s in grid]
        assert all(v > 1 for v in vals)
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_array_evaluation_matches_scalar(self):
        sig = np.array([1.1, 1.5, 2.0, 7.0])
        vals, bounds = euler_maclaurin_real(sig, 64)
        for s, v, b in zip(sig, vals, bounds):
            assert v == pytest.approx(float(mpmath.zeta(s)), abs=b + 1e-13)


class TestZetaComplex:
    def test_dirichlet_series_bound(self):
        r = zeta_complex(2, 3)
        assert abs(r.value) <= math.pi**2 / 6

    def test_first_zero(self):
        r = zeta_complex(0.5, 14.134725141734693, 1e-8)
        assert abs(r.value) < 1e-4

    def test_one_line_bound(self):
        r = zeta_complex(1, 100, 1e-8)
        assert abs(r.value) + r.error_bound <= 0.75 * math.log(100)

    @pytest.mark.parametrize(
        "sigma, t, expected",
        [
            (0.5, 1000, 0.356334367194396055 + 0.931997831232993665j),
            (0.7, 2500.5, 0.629372717129394690 + 0.127193528729427839j),
            (1.0, 100, 1.63283350668671187 - 0.0681312038418124901j),
            (1.1, 5000, 0.647240817534881547 - 0.0487785206755270005j),
            (0.6, 20, 0.497335656495416459 - 0.968895481399285806j),
        ],
    )
    def test_against_mpmath(self, sigma, t, expected):
        r = zeta_complex(sigma, t, 1e-10)
        assert abs(r.value - expected) <= r.error_bound

    def test_large_height(self):
        r = zeta_complex(0.7, 1e6, 1e-6)
        mpmath.mp.dps = 30
        ref = complex(mpmath.zeta(mpmath.mpc(0.7, 1e6)))
        assert abs(r.value - ref) <= r.error_bound

    @pytest.mark.parametrize("sigma, t", [(0.3, 10), (2.5, 10), (1.0, 1.0), (1.0, 2e6)])
    def test_domain(self, sigma, t):
        with pytest.raises(DomainError):
            zeta_complex(sigma, t)

    def test_line_matches_single(self):
        sig = [0.5, 0.8, 1.2]
        line = zeta_complex_line(sig, 1234.5, 1e-9)
        for s, r in zip(sig, line):
            assert r == zeta_complex(s, 1234.5, 1e-9)

    @settings(max_examples=25, deadline=None)
    @given(st.floats(1.01, 2.2), st.floats(3, 2000))
    def test_bounded_by_real_zeta(self, sigma, t):
        r = zeta_complex(sigma, t, 1e-9)
        z = zeta_real(sigma, 1e-9)
        assert abs(r.value) <= z.value + z.error_bound + r.error_bound


class TestLogDeriv:
    def test_sigma_two_against_series(self):
        r = log_deriv_zeta(2, 1e-10)
        s, tail = minus_log_deriv_series(2, 10**6)
        # -zeta'/zeta(2) lies in [s, s + tail]
        assert -r.value >= s - r.error_bound
        assert -r.value <= s + tail + r.error_bound
        assert r.value == pytest.approx(-0.569961, abs=1e-6)

    def test_large_sigma(self):
        r = log_deriv_zeta(30, 1e-12)
        assert abs(r.value + math.log(2) * 2.0**-30) < 2 * math.log(3) * 3.0**-30

    def test_knob_value(self):
        r = log_deriv_zeta(1.262, 1e-10)
        assert abs(r.value - LOG_DERIV_1262) <= r.error_bound
        s, tail = minus_log_deriv_series(1.262, 10**5)
        assert s - r.error_bound <= -r.value <= s + tail + r.error_bound

    @settings(max_examples=30, deadline=None)
    @given(st.floats(1.01, 40))
    def test_negative(self, sigma):
        assert log_deriv_zeta(sigma, 1e-9).value < 0

    def test_domain(self):
        with pytest.raises(DomainError):
            log_deriv_zeta(0.9)


class TestLogZetaIntegrals:
    def test_tail_at_two(self):
        r = integral_log_zeta_tail(2, 1e-9)
        assert abs(r.value - TAIL_2) <= r.error_bound <= 1e-9
        s, tail = log_zeta_series(2.0, 10**6)
        assert s - r.error_bound <= r.value <= s + tail + r.error_bound
        q, qerr = log_zeta_quad(2.0, 40.0)
        beyond = 2.0 ** -40 / math.log(2)  # dominant first term of the series at 40
        assert abs(r.value - q) <= r.error_bound + qerr + 2 * beyond

    def test_tail_vanishes(self):
        r = integral_log_zeta_tail(50)
        assert 0 < r.value < 2.0**-49

    def test_tail_near_pole(self):
        r = integral_log_zeta_tail(1.148, 1e-9)
        assert abs(r.value - TAIL_1148) <= r.error_bound
        q, qerr = log_zeta_quad(1.148, 40.0)
        assert abs(r.value - q) < 1e-8

    @pytest.mark.parametrize("X", [1.2, 1.5, 2.0, 3.0])
    def test_series_identity_matches_quadrature(self, X):
        series = log_zeta_integral_series(X, 2**20)
        quad = quadrature_log_zeta(X, 3.0, 1e-10)
        rest = log_zeta_integral_series(3.0, 2**18)
        assert abs(series.value - (quad.value + rest.value)) <= (
            series.error_bound + quad.error_bound + rest.error_bound
        )

    def test_finite_empty(self):
        assert integral_log_zeta_finite(2, 2, 1e-9) == EvalResult(0.0, 0.0)

    def test_finite_reversed(self):
        with pytest.raises(DomainError):
            integral_log_zeta_finite(3, 2)

    def test_finite_knob_row(self):
        r = integral_log_zeta_finite(2.524, 4.048, 1e-9)
        assert abs(r.value - FINITE_2524_4048) <= r.error_bound
        diff = integral_log_zeta_tail(2.524, 1e-10).value - integral_log_zeta_tail(4.048, 1e-10).value
        quad = quadrature_log_zeta(2.524, 4.048, 1e-10)
        assert r.value == pytest.approx(diff, abs=1e-8)
        assert r.value == pytest.approx(quad.value, abs=1e-8)

    def test_finite_contained_in_tail(self):
        fin = integral_log_zeta_finite(1.262, 2.024, 1e-9)
        tail = integral_log_zeta_tail(1.262, 1e-9)
        assert 0 < fin.value < tail.value

    @pytest.mark.parametrize("X", [1.05, 1.3, 2.5])
    def test_tolerance_refinement(self, X):
        tau = 1e-8
        a = integral_log_zeta_tail(X, tau)
        b = integral_log_zeta_tail(X, tau / 10)
        assert abs(a.value - b.value) <= tau + tau / 10


@settings(max_examples=20, deadline=None)
@given(st.floats(1.02, 20), st.sampled_from([1e-6, 1e-8, 1e-10]))
def test_zeta_real_tolerance_refinement(sigma, tau):
    a = zeta_real(sigma, tau)
    b = zeta_real(sigma, tau / 10)
    assert abs(a.value - b.value) <= tau + tau / 10
    assert b.error_bound <= tau / 10


def test_von_mangoldt_table_matches_sieve():
    ref = von_mangoldt(5000)
    assert np.allclose(von_mangoldt_table(5000), ref, atol=0, rtol=1e-15)


def test_von_mangoldt_table_threadsafe():
    results = []

    def work(n):
        results.append(von_mangoldt_table(n)[: 1000].copy())

    threads = [threading.Thread(target=work, args=(10**5 + 7 * i,)) for i in range(8)]
    for th in threads:
        th.start()
    for th in threads:
        th.join()
    assert all(np.array_equal(results[0], r) for r in results)
