"""Special functions against mpmath's independent implementations."""

import threading
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from ejasym.errors import InvalidInput, PoleError
from ejasym.precision import (
    PrecisionCtx,
    as_exact,
    bernoulli,
    digamma,
    euler_const,
    gamma_fn,
    riemann_zeta,
    stirling_coefficients,
)


def rel(x, y):
    return abs(x - y) / abs(y)


def test_ctx_validation():
    with pytest.raises(InvalidInput):
        PrecisionCtx(10)
    with pytest.raises(InvalidInput):
        PrecisionCtx(30, guard_digits=5)
    ctx = PrecisionCtx(100)
    assert ctx.guard_digits == 10 and ctx.dps == 110
    assert PrecisionCtx(300).guard_digits == 30


def test_as_exact():
    assert as_exact(0.1) == Fraction(1, 10)
    assert as_exact("2.50") == Fraction(5, 2)
    assert as_exact(3) == 3
    assert as_exact(mpmath.mpf(2)) is None
    with pytest.raises(InvalidInput):
        as_exact(True)
    with pytest.raises(InvalidInput):
        as_exact("x1")


def test_bernoulli_matches_mpmath():
    for n in range(0, 61):
        ref = mpmath.bernfrac(n)
        assert bernoulli(n) == Fraction(int(ref[0]), int(ref[1])), n


def test_stirling_coefficients_known_values():
    assert stirling_coefficients(5) == [
        Fraction(1),
        Fraction(-1, 12),
        Fraction(1, 288),
        Fraction(139, 51840),
        Fraction(-571, 2488320),
    ]


@given(st.integers(1, 40), st.integers(1, 40))
def test_stirling_prefix_stable(m, n):
    a, b = stirling_coefficients(m), stirling_coefficients(n)
    k = min(m, n)
    assert a[:k] == b[:k]


def test_stirling_series_approximates_scaled_gamma():
    ctx = PrecisionCtx(40)
    mp = ctx.mp
    z = mp.mpf(60)
    series = mp.fsum((-1) ** k * ctx.mpf(g) / z**k for k, g in enumerate(stirling_coefficients(25)))
    gstar = mp.gamma(z) / (mp.sqrt(2 * mp.pi) * z ** (z - 0.5) * mp.exp(-z))
    assert rel(series, gstar) < mp.mpf(10) ** -38


@given(st.fractions(min_value=Fraction(1, 10), max_value=50, max_denominator=1000))
def test_gamma_recurrence(x):
    ctx = PrecisionCtx(40)
    lhs = gamma_fn(x + 1, ctx)
    rhs = ctx.mpf(x) * gamma_fn(x, ctx)
    assert rel(lhs, rhs) <= ctx.mpf(10) ** -(40 - 2)


@pytest.mark.parametrize("x", ["0.3", "-2.5", "7.25", "31.7", "-0.75", "120.5"])
def test_gamma_vs_mpmath(x):
    ctx = PrecisionCtx(60)
    with mpmath.workdps(80):
        ref = mpmath.gamma(mpmath.mpf(x))
    assert rel(gamma_fn(x, ctx), ref) < mpmath.mpf(10) ** -58


def test_gamma_poles():
    ctx = PrecisionCtx(30)
    for x in (0, -1, -7):
        with pytest.raises(PoleError):
            gamma_fn(x, ctx)


@pytest.mark.parametrize("x", ["0.5", "1", "3", "12.75", "-2.5"])
def test_digamma_vs_mpmath(x):
    ctx = PrecisionCtx(50)
    with mpmath.workdps(70):
        ref = mpmath.digamma(mpmath.mpf(x))
    assert abs(digamma(x, ctx) - ref) < mpmath.mpf(10) ** -48 * max(1, abs(ref))


def test_euler_constant():
    for digits in (30, 120):
        ctx = PrecisionCtx(digits)
        with mpmath.workdps(digits + 20):
            assert abs(euler_const(ctx) - mpmath.euler) < mpmath.mpf(10) ** -digits


@pytest.mark.parametrize("s", ["0.5", "1.5", "2", "3.3", "-1.5", "-7.25", "0.25", "-20.5"])
def test_zeta_vs_mpmath(s):
    ctx = PrecisionCtx(50)
    with mpmath.workdps(80):
        ref = mpmath.zeta(mpmath.mpf(s))
    assert rel(riemann_zeta(s, ctx), ref) < mpmath.mpf(10) ** -47


def test_zeta_special_values(ctx30):
    assert riemann_zeta(0, ctx30) == -0.5
    for k in range(1, 15):
        assert riemann_zeta(-2 * k, ctx30) == 0
    with pytest.raises(PoleError):
        riemann_zeta(1, ctx30)


def test_zeta_odd_negative_integers():
    ctx = PrecisionCtx(40)
    for k in range(1, 21):
        exact = -bernoulli(2 * k) / (2 * k)
        assert rel(riemann_zeta(1 - 2 * k, ctx), ctx.mpf(exact)) < ctx.mpf(10) ** -38


@given(st.fractions(min_value=Fraction(11, 10), max_value=12, max_denominator=97))
def test_zeta_functional_equation(s):
    ctx = PrecisionCtx(40)
    mp = ctx.mp
    if (s.denominator == 1) or ((1 - s) % 2 == 0):
        return
    sv = ctx.mpf(s)
    reflected = 2**sv * mp.pi ** (sv - 1) * mp.sinpi(sv / 2) * gamma_fn(1 - s, ctx) * riemann_zeta(1 - s, ctx)
    assert rel(riemann_zeta(s, ctx), reflected) < ctx.mpf(10) ** -(40 - 2)


def test_caches_thread_safe():
    results = []

    def work():
        results.append((bernoulli(80), tuple(stirling_coefficients(60))))

    threads = [threading.Thread(target=work) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(set(results)) == 1
