from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from selfconj.partitions import FrobeniusCoords, Partition
from selfconj.quasimod import (
    GENERATORS,
    bernoulli,
    beta_coefficients,
    bracket_bruteforce,
    bracket_closed,
    bracket_closed_indices,
    bracket_extracted,
    decompose_quasimodular,
    eisenstein,
    extract_brackets_from_npoint,
    first_difference,
    monomial_label,
    p_function,
    q_function,
    tau_derivative,
    verify_bernoulli_identity,
    verify_eisenstein_form_of_G,
    verify_eisenstein_identities,
    weight_monomials,
    zeta_negative,
)
from selfconj.series import QSeries
from strategies import arm_sets


@pytest.mark.parametrize("n", range(0, 21))
def test_bernoulli_matches_sympy(n):
    b = bernoulli(n)
    # sympy >= 1.12 uses B_1 = +1/2; compare away from n = 1
    if n != 1:
        assert sp.Rational(b.numerator, b.denominator) == sp.bernoulli(n)


@pytest.mark.parametrize("k", [2, 4, 6, 8])
def test_zeta_negative(k):
    z = zeta_negative(k)
    assert sp.Rational(z.numerator, z.denominator) == sp.zeta(1 - k)


def test_beta_generating_function():
    beta = beta_coefficients(8)
    assert beta[0] == 1 and beta[1] == 0
    z = sp.Symbol("z")
    ref = sp.series((z / 2) / sp.sinh(z / 2), z, 0, 9).removeO()
    for ell, b in enumerate(beta):
        assert sp.Rational(b.numerator, b.denominator) == ref.coeff(z, ell)


@pytest.mark.parametrize("kind", ["G", "G10", "G01", "G11", "bbG"])
def test_eisenstein_validation(kind):
    with pytest.raises(ValueError):
        eisenstein(kind, 3, 5)
    assert eisenstein(kind, 2, 5).data.order == 20


def test_eisenstein_G2_known_coefficients():
    # G_2(q^2) in our normalisation: -1/24 + q^2 + 3 q^4 + 4 q^6 + 7 q^8
    g = eisenstein("G", 2, 8).data.q_coefficients()
    assert g == [Fraction(-1, 24), 0, 1, 0, 3, 0, 4, 0, 7]


@pytest.mark.parametrize("N", [10, 30])
def test_eisenstein_identities(N):
    assert verify_eisenstein_identities(N, 8).passed


def test_tau_derivative():
    s = QSeries({0: 5, 4: 1, 12: 2}, 12)
    assert tau_derivative(s).q_coefficients() == [0, 1, 0, 6]
    with pytest.raises(ValueError):
        tau_derivative(QSeries({1: 1}, 4))


@given(arm_sets())
def test_odd_p_functions_vanish_on_self_conjugate(arms):
    c = FrobeniusCoords(arms, arms)
    for ell in (0, 2, 4):
        assert p_function(ell, c) == 0
    assert q_function(1, c) == 0 and q_function(3, c) == beta_coefficients(3)[3]


def test_q_function_examples():
    lam = Partition((2, 1))  # Frobenius (1 | 1)
    assert q_function(0, lam) == 1
    assert q_function(2, lam) == Fraction(3, 2) ** 1 * 2 + beta_coefficients(2)[2]


@pytest.mark.parametrize("ells", [(2,), (4,), (2, 2), (2, 4), (6,)])
def test_bracket_methods_agree(ells):
    N = 12
    b = bracket_bruteforce(ells, N).series
    assert first_difference(b, bracket_closed_indices(ells, N).series) is None
    assert first_difference(b, bracket_extracted(ells, N).series) is None


@pytest.mark.parametrize("ells", [(1,), (3,), (2, 3), (0, 2)])
def test_odd_and_trivial_indices(ells):
    N = 8
    b = bracket_bruteforce(ells, N).series
    assert first_difference(b, bracket_closed_indices(ells, N).series) is None
    if 0 not in ells:
        assert first_difference(b, bracket_extracted(ells, N).series) is None


def test_bracket_closed_validation():
    with pytest.raises(ValueError):
        bracket_closed([0], 4)


def test_extraction_methods_agree():
    full = extract_brackets_from_npoint(2, 3, 5, method="full")
    fact = extract_brackets_from_npoint(2, 3, 5, method="factorized")
    assert set(full) == set(fact)
    for k in full:
        assert first_difference(full[k].series, fact[k].series) is None
    with pytest.raises(ValueError):
        extract_brackets_from_npoint(1, 2, 3, method="other")


def test_bernoulli_identity():
    assert verify_bernoulli_identity(12).passed


def test_eisenstein_form_of_one_point():
    assert verify_eisenstein_form_of_G(4, 8).passed


@pytest.mark.parametrize("w, count", [(0, 1), (2, 3), (4, 6), (6, 10), (3, 0)])
def test_weight_monomials(w, count):
    assert len(weight_monomials(w)) == count


def test_monomial_labels():
    assert monomial_label((2, 0, 1)) == "G2^2*G11_2"
    assert monomial_label((0, 0, 0)) == "1"
    assert GENERATORS[0] == "G2"


def test_decompose_single_Q2():
    dec = decompose_quasimodular(bracket_bruteforce((2,), 20).series, 2, 20)
    assert dec.success
    assert dec.coeffs == [1, 0, -1]  # G2 - G11_2


@pytest.mark.parametrize("w", [0, 6])
def test_decompose_rejects_wrong_weight(w):
    dec = decompose_quasimodular(bracket_bruteforce((2, 2), 20).series, w, 20)
    assert not dec.success
    assert dec.first_residual is not None


def test_decompose_needs_enough_terms():
    with pytest.raises(ValueError):
        decompose_quasimodular(bracket_bruteforce((2,), 4).series, 2, 10)
