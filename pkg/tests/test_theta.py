import pytest

from selfconj.correlation import npoint
from selfconj.series import LaurentPoly, QSeries, first_difference
from selfconj.theta import (
    prefactor_series,
    theta_log_derivative,
    theta_prime,
    theta_series,
    verify_onepoint,
    verify_theta_identities,
    verify_theta_log_derivatives,
    verify_twopoint,
)


def test_theta1_leading_terms():
    th = theta_series(1, 12).data
    assert th.coefficient(1) == LaurentPoly(1, {(1,): 1, (-1,): -1})
    assert th.coefficient(9) == LaurentPoly(1, {(3,): -1, (-3,): 1})
    assert set(th.terms) == {1, 9}


def test_theta3_leading_terms():
    th = theta_series(3, 16).data
    assert th.coefficient(0) == 1 or th.coefficient(0) == LaurentPoly.constant(1, 1)
    assert th.coefficient(4) == LaurentPoly(1, {(2,): 1, (-2,): 1})
    assert set(th.terms) == {0, 4, 16}


@pytest.mark.parametrize("kind, reduced", [(3, True), (2, False)])
def test_theta_series_validation(kind, reduced):
    with pytest.raises(ValueError):
        theta_series(kind, 8, reduced)


def test_theta_prime_halves_exponents():
    s = QSeries({0: LaurentPoly(1, {(4,): 1, (-2,): 3})}, 0)
    assert theta_prime(s).coefficient(0) == LaurentPoly(1, {(4,): 2, (-2,): -3})


@pytest.mark.parametrize("N", [8, 24, 60])
def test_theta_identities(N):
    rep = verify_theta_identities(N)
    assert rep.passed, rep.first_failure
    names = {c.identity for c in rep.children}
    assert {"triple product Theta1", "q-shift Theta3'", "inversion Theta1"} <= names


def test_theta_log_derivatives():
    assert verify_theta_log_derivatives(48).passed


def test_log_derivative_kind_validation():
    with pytest.raises(ValueError):
        theta_log_derivative(2, 8)


def test_prefactor_leading_terms():
    p = prefactor_series(12)
    # q^(1/4) (1 - 2q + ...)
    assert p.coefficient(1) == 1 and p.coefficient(5) == -2


@pytest.mark.parametrize("N", [4, 20, 40])
def test_onepoint_formula(N):
    assert verify_onepoint(N).passed


@pytest.mark.parametrize("N", [4, 12])
def test_twopoint_formula(N):
    assert verify_twopoint(N).passed


def _corrupt(reg, e):
    c = reg.coefficient(e)
    nv = c.nvars if isinstance(c, LaurentPoly) else 1
    bump = LaurentPoly.monomial(nv, (1,) * nv)
    terms = dict(reg.terms)
    terms[e] = c + bump
    return QSeries(terms, reg.order)


def test_onepoint_detects_corruption():
    reg = _corrupt(npoint(1, 4).reg, 8)
    rep = verify_onepoint(16, reg)
    assert not rep.passed
    assert rep.first_failure["q_exponent"] >= 8


def test_twopoint_detects_corruption():
    reg = _corrupt(npoint(2, 2).reg, 4)
    assert not verify_twopoint(8, reg).passed


def test_reports_serialize():
    data = verify_theta_identities(8).to_json_dict()
    assert data["status"] == "pass" and len(data["checks"]) == 8
    assert first_difference(theta_series(1, 8).data, theta_series(1, 8).data) is None
