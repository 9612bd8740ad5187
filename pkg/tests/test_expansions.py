from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ejasym.errors import ConvergenceError, InvalidInput, NoMinimumError, RegimeError, SectorError
from ejasym.expansions import (
    algebraic_part,
    default_cutoff,
    evaluate,
    j_term,
    least_term_index,
    negative_w_expansion,
    optimal_truncation,
    s_q_hat,
    theorem1_exponential,
    theorem2_exponential,
)
from ejasym.oracle import direct_sum
from ejasym.precision import PrecisionCtx, riemann_zeta


def close(x, y, tol):
    return abs(x - y) <= tol * max(1, abs(y))


# -- J term and algebraic part ----------------------------------------------------


def test_j_term_examples(ctx30):
    mp = ctx30.mp
    a = mp.mpf("0.37")
    assert close(j_term(2, 2, "0.37", ctx30), -mp.sqrt(mp.pi * a), 1e-29)
    # p = 1, w = 1: double pole with M = 0, psi(1) = -gamma
    assert close(j_term(1, 1, "0.37", ctx30), -mp.log(a), 1e-29)
    assert close(j_term(4, 2, 1, ctx30), mp.gamma(mp.mpf(-0.25)) / 4, 1e-29)


def test_j_term_double_pole_complex(ctx30):
    mp = ctx30.mp
    a = mp.mpc("0.2", "0.1")
    # p = 2, w = 3: M = 1, (-a)(gamma - log a / 2 + psi(2) / 2)
    ref = -a * (mp.euler - mp.log(a) / 2 + (1 - mp.euler) / 2)
    assert close(j_term(2, 3, a, ctx30), ref, 1e-29)


def test_p1_w0_closed_form():
    ctx = PrecisionCtx(40)
    mp = ctx.mp
    res = algebraic_part(1, 0, "0.5", ctx)
    assert abs(res.algebraic_total - 1 / (mp.exp(mp.mpf("0.5")) - 1)) < mp.mpf(10) ** -38


def test_p1_needs_small_a(ctx30):
    with pytest.raises(ConvergenceError):
        algebraic_part(1, 0, 7, ctx30)


def test_p2_w2_algebraic(ctx30):
    mp = ctx30.mp
    a = mp.mpf("0.3")
    res = algebraic_part(2, 2, "0.3", ctx30)
    ref = -mp.sqrt(mp.pi * a) + mp.zeta(2) + a / 2
    assert close(res.algebraic_total, ref, 1e-29)
    assert [t.index for t in res.algebraic] == [-1, 0, 1]


def test_p4_w2_algebraic(ctx30):
    mp = ctx30.mp
    a = mp.mpf("0.01")
    res = algebraic_part(4, 2, "0.01", ctx30)
    assert len(res.algebraic) == 2
    ref = mp.gamma(mp.mpf(-0.25)) / 4 * a**0.25 + mp.zeta(2)
    assert close(res.algebraic_total, ref, 1e-29)


def test_default_cutoff_strict():
    # N > s0 + 3/2 strictly: s0 = 1/2 gives N = 3, not 2
    assert default_cutoff(Fraction(2), Fraction(2)) == 3
    assert default_cutoff(Fraction(3), Fraction(2)) == 2
    assert default_cutoff(Fraction(3), Fraction(2), offset=2) == 4


def test_double_pole_sum_skips_index(ctx30):
    res = algebraic_part(3, 7, "0.01", ctx30)
    assert res.regime.double_pole == 2
    assert 2 not in [t.index for t in res.algebraic]


def test_remainder_estimate_skips_trivial_zeros(ctx30):
    # p = 3, w = 2: N = 2, the k = 2 term carries zeta(-4) = 0
    res = algebraic_part(3, 2, "0.01", ctx30)
    mp = ctx30.mp
    assert close(res.remainder_estimate, mp.mpf("0.01") ** 3 / 1440, 1e-25)


def test_terms_carry_magnitudes(ctx30):
    res = evaluate(6, 2, "0.01", ctx30)
    for t in res.algebraic + [t for e in res.exponential for t in e.terms]:
        assert t.magnitude == abs(t.value)


@pytest.mark.parametrize("w, a", [(3, "0.1"), (0, "0.7"), ("2.2", "0.3"), (-1, "1.5")])
def test_convergent_regime_exact(w, a):
    ctx = PrecisionCtx(35)
    res = algebraic_part("0.5", w, a, ctx, tol=ctx.mpf(10) ** -33)
    ref = direct_sum("0.5", w, a, ctx, tol=ctx.mpf(10) ** -33)
    assert abs(res.algebraic_total - ref.value) < ctx.mpf(10) ** -30


def test_algebraic_remainder_order():
    ctx = PrecisionCtx(40)
    ratios = []
    prev = None
    for i in range(4):
        a = Fraction(1, 100) / 2**i
        err = abs(direct_sum(3, 2, a, ctx).value - algebraic_part(3, 2, a, ctx).algebraic_total)
        if prev is not None:
            ratios.append(prev / err)
        prev = err
    assert all(abs(r - 8) < 0.5 for r in ratios)


# -- negative w ------------------------------------------------------------------


def test_negative_w_p2_is_poisson_leading(ctx30):
    mp = ctx30.mp
    res = negative_w_expansion(2, 0, "0.1", 5, ctx30)
    vals = [t.value for t in res.algebraic]
    assert close(vals[0], mp.sqrt(mp.pi / mp.mpf("0.1")) / 2, 1e-29)
    assert vals[1] == -0.5
    assert all(v == 0 for v in vals[2:])


@pytest.mark.parametrize("a", ["0.01", "0.003"])
def test_berndt_ramanujan_case(a):
    ctx = PrecisionCtx(40)
    res = negative_w_expansion(3, 1, a, None, ctx)
    ref = direct_sum(3, -1, a, ctx).value
    assert abs(res.algebraic_total - ref) <= 10 * res.remainder_estimate


def test_negative_w_rejects(ctx30):
    with pytest.raises(InvalidInput):
        negative_w_expansion(2, -1, "0.1", None, ctx30)
    with pytest.raises(InvalidInput):
        negative_w_expansion(1, 1, "0.1", None, ctx30)


# -- S_hat ------------------------------------------------------------------------


def test_s_q_hat_example():
    ctx = PrecisionCtx(50)
    mp = ctx.mp
    got = s_q_hat(2, 10, 2, ctx)
    ref = mp.fsum(mp.exp(-10 * (n * n - 1)) / n**2 for n in range(1, 12))
    assert abs(got - ref) < mp.mpf(10) ** -50
    assert abs(got - 1 - mp.exp(-30) / 4) < mp.exp(-79)


def test_s_q_hat_large_z(ctx30):
    assert abs(s_q_hat(Fraction(6, 5), 400, 3, ctx30) - 1) < 1e-20


@given(st.floats(-1.4, 1.4), st.floats(0.5, 20), st.floats(-2, 6))
def test_s_q_hat_conjugate(theta, r, lam):
    ctx = PrecisionCtx(20)
    mp = ctx.mp
    z = mp.mpf(r) * mp.expj(theta)
    assert abs(s_q_hat(Fraction(4, 3), mp.conj(z), lam, ctx) - mp.conj(s_q_hat(Fraction(4, 3), z, lam, ctx))) < 1e-18


def test_s_q_hat_sector(ctx30):
    with pytest.raises(SectorError):
        s_q_hat(2, -1, 2, ctx30)


# -- exponential expansions ------------------------------------------------------------


@pytest.mark.parametrize("m", [1, 2])
def test_p2_single_expansion_closed_form(m):
    ctx = PrecisionCtx(40)
    mp = ctx.mp
    a = mp.mpf("0.25")
    M = 7
    parts = theorem1_exponential(2, 2 * m, "0.25", M, ctx)
    assert len(parts) == 1 and not parts[0].paired
    X = mp.pi**2 / a
    ref = (-1) ** m * (a / mp.pi) ** (2 * m - 0.5) * mp.exp(-X) * mp.fsum(
        (-1) ** j * mp.rf(2 * m, 2 * j) / mp.factorial(j) * (a / (4 * mp.pi**2)) ** j
        * s_q_hat(2, X, 2 * m + 2 * j, ctx)
        for j in range(M)
    )
    assert abs(parts[0].total - ref) < mp.mpf(10) ** -38 * abs(ref)


@pytest.mark.parametrize("a", ["0.3", "1.0", "3.0", "1+0.8i"])
def test_poisson_jacobi_from_w0(a):
    ctx = PrecisionCtx(40)
    mp = ctx.mp
    alg = negative_w_expansion(2, 0, a, 1, ctx).algebraic_total
    exp_part = theorem1_exponential(2, 0, a, 1, ctx)[0].total
    ref = direct_sum(2, 0, a, ctx).value
    assert abs(alg + exp_part - ref) <= mp.mpf(10) ** -35


def test_p6_has_two_expansions(ctx30):
    parts = theorem1_exponential(6, 2, "0.01", 3, ctx30)
    assert [(e.r, e.paired, e.psi) for e in parts] == [(0, True, Fraction(2, 5)), (1, False, 0)]


def test_regime_errors(ctx30):
    with pytest.raises(RegimeError):
        theorem1_exponential(3, 2, "0.1", 3, ctx30)
    with pytest.raises(RegimeError):
        theorem1_exponential(4, 3, "0.1", 3, ctx30)
    with pytest.raises(InvalidInput):
        theorem2_exponential(4, 2, "0.1+0.1i", 3, None, ctx30)
    with pytest.raises(InvalidInput):
        theorem1_exponential(4, 2, "0.1", 0, ctx30)


@pytest.mark.parametrize("p, w", [(2, 2), (4, 2), (4, 4), (6, 2), (6, 4), (10, 2)])
@pytest.mark.parametrize("a", ["0.1", "0.02"])
def test_complex_and_cosine_forms_agree(p, w, a):
    ctx = PrecisionCtx(50)
    M = 5
    t1 = theorem1_exponential(p, w, a, M, ctx)
    t2 = theorem2_exponential(p, w, a, M, None, ctx)
    for e1, e2 in zip(t1, t2):
        assert abs(e1.total - e2.total) <= ctx.mpf(10) ** -45 * abs(e1.total)
        assert abs(e2.total.imag) == 0


def test_cosine_form_p2_real(ctx30):
    part = theorem2_exponential(2, 2, "0.5", 4, 3, ctx30)[0]
    assert len(part.terms) == 3
    assert all(t.value.imag == 0 for t in part.terms)


def test_cosine_form_n_decay():
    # each n-term (without the Upsilon factor) scales like n^{-(2w+p-2)/(2 kappa)} e^{-X_n}
    ctx = PrecisionCtx(40)
    mp = ctx.mp
    part = theorem2_exponential(2, 4, "2.0", 1, 3, ctx)[0]
    X = mp.pi**2 / 2
    for n in (2, 3):
        ratio = part.terms[n - 1].value / part.terms[0].value
        ref = mp.mpf(n) ** -(mp.mpf(2 * 4 + 2 - 2) / 2) * mp.exp(-X * (n**2 - 1))
        assert close(ratio, ref, 1e-35)


@pytest.mark.parametrize(
    "p, w, a, j0",
    [(2, 2, "1.0", 8), (4, 2, "0.01", 23), (6, 2, "0.001", 19)],
)
def test_optimal_truncation_examples(p, w, a, j0, ctx30):
    assert optimal_truncation(p, w, a, 0, ctx30) == j0


def test_optimal_truncation_same_for_all_r(ctx30):
    assert optimal_truncation(6, 2, "0.001", 0, ctx30) == optimal_truncation(6, 2, "0.001", 1, ctx30)


def test_no_minimum(ctx30):
    with pytest.raises(NoMinimumError) as info:
        least_term_index(4, 2, "0.001", 0, ctx30, M_max=10)
    assert info.value.limit == 10


def test_invalid_r(ctx30):
    with pytest.raises(InvalidInput):
        optimal_truncation(4, 2, "0.01", 1, ctx30)


def test_evaluate_p2_w2():
    ctx = PrecisionCtx(40)
    res = evaluate(2, 2, "1.0", ctx)
    ref = direct_sum(2, 2, "1.0", ctx).value
    assert res.j0 == {0: 8}
    assert f"{float(abs(ref - res.algebraic_total)):.3e}" == "8.146e-06"
    assert f"{float(abs(ref - res.total)):.3e}" == "6.637e-09"


def test_evaluate_p4_w4_neighbour_truncation():
    # printed |S - E_0| = 1.420e-9 is reached with one term more than our j0 = 11
    ctx = PrecisionCtx(40)
    res = evaluate(4, 4, "0.05", ctx)
    ref = direct_sum(4, 4, "0.05", ctx).value
    assert res.j0 == {0: 11}
    assert f"{float(abs(ref - res.algebraic_total)):.3e}" == "8.456e-06"
    longer = theorem1_exponential(4, 4, "0.05", 13, ctx)[0].total
    # three significant figures: 1.4194e-9
    assert abs(float(abs(ref - res.algebraic_total - longer)) / 1.420e-9 - 1) <= 5e-3


def test_evaluate_p6_both_expansions():
    ctx = PrecisionCtx(80)
    res = evaluate(6, 2, "0.00001", ctx)
    ref = direct_sum(6, 2, "0.00001", ctx).value
    assert [e.dropped for e in res.exponential] == [False, False]
    assert f"{float(abs(ref - res.total)):.3e}" == "1.963e-30"


def test_evaluate_drops_subdominant():
    res = evaluate(6, 2, "0.1", PrecisionCtx(30))
    assert [e.dropped for e in res.exponential] == [False, True]
    kept = evaluate(6, 2, "0.1", PrecisionCtx(30), drop_subdominant=False)
    assert not any(e.dropped for e in kept.exponential)


@pytest.mark.parametrize("p, w, a", [(2, 2, "0.5"), (4, 2, "0.05"), (6, 2, "0.005"), (6, 4, "0.001"), (8, 2, "0.01")])
def test_oracle_consistency(p, w, a):
    ctx = PrecisionCtx(50)
    res = evaluate(p, w, a, ctx)
    ref = direct_sum(p, w, a, ctx).value
    assert abs(ref - res.total) <= 10 * res.exponential[0].min_term


def test_evaluate_total_is_sum(ctx30):
    res = evaluate(6, 2, "0.001", ctx30)
    parts = [t.value for t in res.algebraic] + [t.value for e in res.exponential for t in e.terms]
    assert abs(res.total - ctx30.mp.fsum(parts)) < 1e-28
    assert res.remainder_estimate >= 0


@given(st.floats(-1.3, 1.3), st.floats(0.02, 0.3))
def test_conjugate_symmetry(theta, r):
    ctx = PrecisionCtx(25)
    mp = ctx.mp
    a = mp.mpf(r) * mp.expj(theta)
    x = evaluate(4, 2, a, ctx, M=4).total
    y = evaluate(4, 2, mp.conj(a), ctx, M=4).total
    assert abs(y - mp.conj(x)) < 1e-22 * abs(x)


def test_complex_a_against_oracle():
    ctx = PrecisionCtx(40)
    a = "0.05+0.03i"
    res = evaluate(4, 2, a, ctx)
    ref = direct_sum(4, 2, a, ctx).value
    assert abs(ref - res.total) <= 10 * res.exponential[0].min_term
    assert abs(ref - res.total) < abs(ref - res.algebraic_total)


def test_zeta_terms_use_exact_zeros(ctx30):
    assert riemann_zeta(Fraction(-4), ctx30) == 0
