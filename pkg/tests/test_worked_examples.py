"""Small worked examples for each operation, checked exactly."""

import math
from fractions import Fraction

import numpy as np
import pytest

from selfconj.correlation import npoint, sigma
from selfconj.limitshape import (
    GibbsConfig,
    asymptotic_coefficients,
    convergence_experiment,
    expected_frobenius_length,
    expected_size,
    limit_g,
    sample_partition,
    sample_partitions,
    typical_partition,
)
from selfconj.partitions import (
    FrobeniusCoords,
    Partition,
    conjugate,
    count_self_conjugate,
    enumerate_self_conjugate,
    frobenius,
    from_frobenius,
    is_self_conjugate,
    profile,
)
from selfconj.quasimod import (
    bernoulli,
    beta_coefficients,
    bracket_bruteforce,
    bracket_closed,
    decompose_quasimodular,
    eisenstein,
    extract_brackets_from_npoint,
    first_difference,
    q_function,
    tau_derivative,
    verify_eisenstein_identities,
)
from selfconj.series import (
    LaurentPoly,
    ProductFactor,
    QSeries,
    binomial_factor,
    expand_u_in_X,
    laurent_substitute_monomial,
    product_expand,
    qs_inverse,
)
from selfconj.theta import (
    prefactor_series,
    theta_log_derivative,
    theta_series,
    twopoint_sides,
    verify_onepoint,
    verify_theta_identities,
)

u = LaurentPoly.var(1, 0)


def P(*parts):
    return Partition(tuple(parts))


# --- partitions


@pytest.mark.parametrize(
    "lam, conj",
    [(P(8, 4, 4, 2, 1), P(5, 4, 3, 3, 1, 1, 1, 1)), (P(), P()), (P(5, 3, 2, 1, 1), P(5, 3, 2, 1, 1))],
)
def test_conjugate(lam, conj):
    assert conjugate(lam) == conj


@pytest.mark.parametrize("lam, expected", [(P(5, 3, 2, 1, 1), True), (P(2, 1), True), (P(), True), (P(2,), False)])
def test_is_self_conjugate(lam, expected):
    assert is_self_conjugate(lam) is expected
    assert is_self_conjugate(lam) == (frobenius(lam).arms == frobenius(lam).legs)


@pytest.mark.parametrize(
    "lam, arms, legs",
    [(P(5, 3, 2, 1, 1), (4, 1), (4, 1)), (P(), (), ()), (P(8, 4, 4, 2, 1), (7, 2, 1), (4, 2, 0))],
)
def test_frobenius(lam, arms, legs):
    assert frobenius(lam) == FrobeniusCoords(arms, legs)


@pytest.mark.parametrize(
    "arms, legs, lam",
    [((4,), (4,), P(5, 1, 1, 1, 1)), ((), (), P()), ((4, 1), (4, 1), P(5, 3, 2, 1, 1))],
)
def test_from_frobenius(arms, legs, lam):
    assert from_frobenius(FrobeniusCoords(arms, legs)) == lam


def test_enumerate_small():
    assert [c.arms for c in enumerate_self_conjugate(1)] == [(), (0,)]
    by_size = {}
    for c in enumerate_self_conjugate(9):
        by_size.setdefault(c.size, []).append(sorted(2 * m + 1 for m in c.arms))
    assert sorted(by_size[8]) == [[1, 7], [3, 5]]
    assert sorted(by_size[9]) == [[1, 3, 5], [9]]


def test_profile_examples():
    prof = profile(P(5, 3, 2, 1, 1))
    assert set(prof.alpha) == {4, 1}
    assert [prof.f(x) for x in (1, 2, 3, 4, 5, 6)] == [-5, -3, -2, -1, -1, 0]
    empty = profile(P())
    assert empty.mult == {} and empty.alpha == {} and empty.f(1) == 0
    one = profile(P(1))
    assert one.mult == {1: 1} and set(one.alpha) == {0}


# --- series


def test_small_products():
    N = 12
    one_plus = QSeries.from_q_units({0: 1, 1: 1}, 3)
    one_minus = QSeries.from_q_units({0: 1, 1: -1}, 3)
    assert one_plus * one_minus == QSeries.from_q_units({0: 1, 2: -1}, 3)
    assert qs_inverse(one_minus) == QSeries.from_q_units({k: 1 for k in range(4)}, 3)
    zs = product_expand([ProductFactor(2, -1, 1)], 4 * N)
    assert zs * qs_inverse(zs) == QSeries.constant(1, 4 * N)
    with pytest.raises(ValueError):
        qs_inverse(QSeries.from_q_units({1: 1}, 3))


def test_self_conjugate_generating_product():
    five = product_expand([ProductFactor(2, -1, 1)], 36)
    assert five.q_coefficients() == [1, 1, 0, 1, 1, 1, 1, 1, 2, 2]
    assert five.q_coefficients() == count_self_conjugate(9)
    euler2 = product_expand([ProductFactor(2, 0, -1)], 8)
    assert euler2.q_coefficients() == [1, 0, -1]
    cube = product_expand([ProductFactor(2, 0, -1, power=3)], 40)
    base = product_expand([ProductFactor(2, 0, -1)], 40)
    assert cube == base * base * base


def test_substitution_examples():
    s = QSeries({0: binomial_factor(1, 0)}, 8)
    shifted = laurent_substitute_monomial(s, 0, (1,), 4)
    assert shifted.coefficient(4) == u and shifted.coefficient(-4) == -u.inverse()
    two = QSeries({0: LaurentPoly.monomial(2, (2, 0))}, 8)
    assert laurent_substitute_monomial(two, 0, (1, -1), 0).coefficient(0) == LaurentPoly.monomial(2, (2, -2))
    ident = QSeries({0: u + 3, 4: u * u}, 8)
    assert laurent_substitute_monomial(ident, 0, (1,), 0) == ident


def test_evaluation_examples():
    assert binomial_factor(1, 0).evaluate((2,)) == Fraction(3, 2)
    assert (u * u - 1 + u.inverse() ** 2).evaluate((1,)) == 1
    assert sigma(FrobeniusCoords((0,), (0,))).evaluate((3,)) == Fraction(8, 3)


def _xcoeffs(xs, lo, hi):
    out = []
    for k in range(lo, hi + 1):
        c = xs.coefficient((k,))
        out.append(c.coefficient(0) if c is not None else 0)
    return out


def test_expand_u_in_X_examples():
    xs = expand_u_in_X(QSeries({0: binomial_factor(1, 0)}, 0), 5)
    assert _xcoeffs(xs, 0, 5) == [0, 1, 0, Fraction(1, 24), 0, Fraction(1, 1920)]
    inv = expand_u_in_X(QSeries({0: LaurentPoly.constant(1, 1)}, 0), 3, prefactor=True)
    assert _xcoeffs(inv, -1, 3) == [1, 0, Fraction(-1, 24), 0, Fraction(7, 5760)]
    one = expand_u_in_X(QSeries({0: LaurentPoly.constant(1, 1)}, 0), 3)
    assert _xcoeffs(one, 0, 3) == [1, 0, 0, 0]


# --- correlation


@pytest.mark.parametrize(
    "arms, expected",
    [((), {}), ((0,), {(1,): 1, (-1,): -1}), ((4, 1), {(9,): 1, (3,): 1, (-3,): -1, (-9,): -1})],
)
def test_sigma_examples(arms, expected):
    assert sigma(FrobeniusCoords(arms, arms)) == LaurentPoly(1, expected)


def test_npoint_first_order():
    reg = npoint(1, 1).reg
    assert reg == QSeries({0: LaurentPoly.constant(1, 1), 4: binomial_factor(1, 0) ** 2}, 4)


def test_npoint_q9_coefficient(one_point_9):
    # (t - 1)(t^8 + t^7 + t^6 + 2t^5 + 3t^4 + 2t^3 + t^2 + t + 1) / t^(9/2), times (u - 1/u)
    inner = LaurentPoly(1, {(2 * k,): c for k, c in enumerate([1, 1, 1, 2, 3, 2, 1, 1, 1])})
    t_minus_1 = LaurentPoly(1, {(2,): 1, (0,): -1})
    expected = t_minus_1 * inner * LaurentPoly.monomial(1, (-9,)) * binomial_factor(1, 0)
    assert one_point_9.coefficient(9) == expected


def test_npoint_two_point_constant(two_point_3):
    # sqrt(t1 t2) / ((t1 - 1)(t2 - 1)) regularizes to 1
    assert two_point_3.coefficient(0) == LaurentPoly.constant(2, 1)


# --- theta


def test_theta_leading_terms():
    th1 = theta_series(1, 9).data
    assert th1 == QSeries({1: u - u.inverse(), 9: -(u**3) + u.inverse() ** 3}, 9)
    th3 = theta_series(3, 16).data
    assert th3 == QSeries({0: LaurentPoly.constant(1, 1), 4: u**2 + u.inverse() ** 2, 16: u**4 + u.inverse() ** 4}, 16)
    red = theta_series(1, 40, reduced=True).data
    prod = (red * QSeries({1: binomial_factor(1, 0)}, 41)).truncate(40)
    assert prod == theta_series(1, 40).data


def test_theta3_log_derivative_examples():
    l3 = theta_log_derivative(3, 8)
    assert l3.coefficient(0) == 0
    assert l3.coefficient(4) == u**2 - u.inverse() ** 2


def test_prefactor_examples():
    p = prefactor_series(8)
    assert p.coefficient(0) == 0
    assert p.coefficient(1) == 1 and p.coefficient(5) == -2


def test_theta_identities_at_50():
    assert verify_theta_identities(50).passed


def test_onepoint_through_q9():
    assert verify_onepoint(36).passed


def test_twopoint_sides_symmetric_and_pointwise():
    lhs, rhs = twopoint_sides(12)
    # the underlying two-point function is symmetric; clearing by Theta1(u1/u2) makes both sides odd
    swap = lambda s: s.map_coefficients(lambda c: c.reindex(2, [1, 0]))
    assert first_difference(lhs, -swap(lhs)) is None
    assert first_difference(rhs, -swap(rhs)) is None
    for pt in [(Fraction(3, 2), Fraction(5, 3)), (Fraction(7, 4), Fraction(6, 5)), (2, Fraction(9, 7)),
               (Fraction(5, 2), Fraction(4, 3)), (Fraction(11, 8), Fraction(13, 5))]:
        for e in range(0, 13):
            a, b = lhs.coefficient(e), rhs.coefficient(e)
            va = a.evaluate(pt) if isinstance(a, LaurentPoly) else a
            vb = b.evaluate(pt) if isinstance(b, LaurentPoly) else b
            assert va == vb


# --- quasimod


@pytest.mark.parametrize("ell, value", [(2, Fraction(1, 6)), (0, 1), (12, Fraction(-691, 2730))])
def test_bernoulli_values(ell, value):
    assert bernoulli(ell) == value


def test_beta_values():
    b = beta_coefficients(4)
    assert (b[0], b[2], b[4]) == (1, Fraction(-1, 24), Fraction(7, 5760))


def test_eisenstein_examples():
    assert eisenstein("G11", 2, 3).data.q_coefficients() == [0, -1, 2, -4]
    assert eisenstein("bbG", 2, 3).data.coefficient(0) == Fraction(1, 24)
    assert verify_eisenstein_identities(30, 4).passed


def test_eisenstein_constant_terms_balance():
    for ell in (2, 4, 6, 8):
        c = {k: eisenstein(k, ell, 0).data.coefficient(0) for k in ("G", "G10", "G01", "G11", "bbG")}
        assert c["G"] == (c["G10"] + c["G01"] + c["G11"]) / (2**ell - 1)
        assert c["bbG"] == (1 - 2 ** (ell - 1)) * c["G"] + c["G11"]


@pytest.mark.parametrize("lam", [P(5, 3, 2, 1, 1), P(1), P(3, 1, 1), P()])
def test_q_function_examples(lam):
    assert q_function(2, lam) == lam.size - Fraction(1, 24)
    assert q_function(1, lam) == 0
    assert q_function(0, lam) == 1


def test_bracket_examples():
    N = 16
    assert bracket_bruteforce((0,), N).series == QSeries.constant(1, 4 * N)
    assert bracket_bruteforce((3,), N).series.is_zero()
    expected = {}
    for k in range(N):
        h = 2 * k + 1
        for j in range(1, N // h + 1):
            expected[h * j] = expected.get(h * j, 0) + h * (-1) ** (j - 1)
    size = QSeries.from_q_units(expected, N)
    # <Q_2> + 1/24 is the expected size sum (2k+1) q^(2k+1) / (1 + q^(2k+1))
    assert bracket_bruteforce((2,), N).series + QSeries.constant(Fraction(1, 24), 4 * N) == size


@pytest.mark.parametrize("mu, ells", [((1,), (2,)), ((1, 1), (2, 2)), ((2,), (4,))])
def test_closed_form_examples(mu, ells):
    assert bracket_closed(mu, 16).series == bracket_bruteforce(ells, 16).series


def test_tau_derivative_examples():
    assert tau_derivative(QSeries.constant(5, 8)).is_zero()
    assert tau_derivative(QSeries.from_q_units({1: 1, 2: 3}, 2)) == QSeries.from_q_units({1: 1, 2: 6}, 2)


def test_decompose_examples():
    bb = eisenstein("bbG", 2, 20).data
    dec = decompose_quasimodular(bb, 2, 20)
    assert dec.success and dec.coeffs == [-1, 0, 1]
    for w in (0, 2, 4):
        zero = decompose_quasimodular(QSeries({}, 80), w, 20)
        assert zero.success and all(c == 0 for c in zero.coeffs)
    assert decompose_quasimodular(bracket_bruteforce((2, 2), 40).series, 4, 40).success


def test_extraction_examples():
    N = 10
    one = extract_brackets_from_npoint(1, 2, N)
    assert one[(0,)].series == QSeries.constant(1, 4 * N)
    assert one[(2,)].series == bracket_bruteforce((2,), N).series
    two = extract_brackets_from_npoint(2, 2, N)
    assert two[(2, 2)].series == bracket_bruteforce((2, 2), N).series


# --- limit shape


def test_huge_r_gives_empty_partitions():
    cfg = GibbsConfig(3.0, seed=0, samples=100)
    assert cfg.q < 1e-6
    assert all(p == P() for p in sample_partitions(cfg))
    assert expected_size(5.0) < 1e-12 and expected_frobenius_length(5.0) < 1e-12


def test_sampling_reproducible():
    cfg = GibbsConfig(0.05, seed=123)
    assert sample_partition(cfg, 0) == sample_partition(GibbsConfig(0.05, seed=123), 0)


def test_empirical_size_within_three_standard_errors():
    r = 0.02
    cfg = GibbsConfig(r, seed=2024, samples=10_000)
    sizes = np.array([p.size for p in sample_partitions(cfg)], dtype=float)
    k = np.arange(cfg.cutoff + 1)
    x = cfg.q ** (2 * k + 1)
    p = x / (1 + x)
    var = float(np.sum((2 * k + 1) ** 2 * p * (1 - p)))
    assert abs(sizes.mean() - expected_size(r)) < 3 * math.sqrt(var / len(sizes))


def test_size_and_length_limits():
    assert abs(0.01**2 * expected_size(0.01) * 96 - 1) < 0.02
    r = 0.005
    assert abs(4 * math.sqrt(6) * r * expected_frobenius_length(r) / (math.sqrt(6) * math.log(2) / math.pi) - 1) < 0.01


def test_g_at_zero():
    assert limit_g(0) == pytest.approx(-math.sqrt(6) / math.pi * math.log(2))


def test_empty_grid():
    assert convergence_experiment(GibbsConfig(0.1, samples=3), []) == []


@pytest.mark.xfail(strict=True, reason="measured |Lambda| r^2 * 96 = 0.828 at r = 0.005; convergence is slower than 10%")
def test_typical_size_within_ten_percent_at_r_0005():
    assert abs(typical_partition(0.005).size * 0.005**2 * 96 - 1) < 0.1


def test_asymptotic_examples():
    coeffs = dict(asymptotic_coefficients(7))
    assert coeffs[1] == Fraction(-1, 12)
    assert coeffs[7] == Fraction(-127, 1209600)
