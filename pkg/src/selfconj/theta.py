"""Jacobi theta series and the closed one- and two-point formulas.

Conventions, with ``u = t^(1/2)`` and quarter-unit q-exponents:

    Theta1(t) = sum_n (-1)^n q^((2n+1)^2/4) u^(2n+1)
    Theta3(t) = sum_n q^(n^2) u^(2n)

``Theta'`` means ``t d/dt``, which sends ``u^a`` to ``(a/2) u^a``.
All identities are checked with denominators cleared.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .correlation import npoint
from .report import Report, combine
from .series import (
    LaurentPoly,
    ProductFactor,
    QSeries,
    binomial_factor,
    first_difference,
    laurent_substitute_monomial,
    product_expand,
    qs_inverse,
)


@dataclass(frozen=True)
class ThetaSeries:
    kind: int
    reduced: bool
    data: QSeries


def _theta1_sum(order: int) -> QSeries:
    terms: dict[int, LaurentPoly] = {}
    n = 0
    while (2 * n + 1) ** 2 <= order:
        a = 2 * n + 1
        # n and -n-1 give u^a and u^-a with opposite signs
        terms[a * a] = LaurentPoly(1, {(a,): (-1) ** n, (-a,): -((-1) ** n)})
        n += 1
    return QSeries(terms, order)


def _theta3_sum(order: int) -> QSeries:
    terms: dict[int, LaurentPoly] = {0: LaurentPoly.constant(1, 1)}
    n = 1
    while 4 * n * n <= order:
        terms[4 * n * n] = LaurentPoly(1, {(2 * n,): 1, (-2 * n,): 1})
        n += 1
    return QSeries(terms, order)


def _theta1_reduced_product(order: int) -> QSeries:
    # prod (1 - q^2m)(1 - q^2m u^2)(1 - q^2m u^-2)
    return product_expand(
        [
            ProductFactor(2, 0, -1, mono=(0,)),
            ProductFactor(2, 0, -1, mono=(2,)),
            ProductFactor(2, 0, -1, mono=(-2,)),
        ],
        order,
    )


def _theta3_product(order: int) -> QSeries:
    return product_expand(
        [
            ProductFactor(2, 0, -1, mono=(0,)),
            ProductFactor(2, -1, 1, mono=(2,)),
            ProductFactor(2, -1, 1, mono=(-2,)),
        ],
        order,
    )


@lru_cache(maxsize=None)
def theta_series(kind: int, N: int, reduced: bool = False) -> ThetaSeries:
    """Theta series through quarter-order ``N``.

    ``reduced`` (kind 1 only) gives ``Theta1 / (q^(1/4) (u - 1/u))`` from the
    triple product; the plain series come from the sum form.
    """
    if kind not in (1, 3):
        raise ValueError("kind must be 1 or 3")
    if reduced:
        if kind != 1:
            raise ValueError("only Theta1 has a reduced form")
        return ThetaSeries(1, True, _theta1_reduced_product(N))
    return ThetaSeries(kind, False, _theta1_sum(N) if kind == 1 else _theta3_sum(N))


def theta_prime(s: QSeries) -> QSeries:
    """``t d/dt`` on u-coefficients: ``u^a -> (a/2) u^a``."""

    def d(c: LaurentPoly) -> LaurentPoly:
        return LaurentPoly(c.nvars, {a: v * Fraction(a[0], 2) for a, v in c.terms.items()})

    return s.map_coefficients(d)


def _theta_log_derivative_expansion(kind: int, N: int) -> QSeries:
    """Geometric-series form of the logarithmic derivative.

    Kind 1 is returned multiplied by ``(u - 1/u)`` so that it has Laurent
    polynomial coefficients; kind 3 is returned as is.
    """
    terms: dict[int, LaurentPoly] = {}
    if kind == 3:
        # sum_{m>=1} sum_{k>=1} (-1)^(k-1) (t^k - t^-k) q^((2m-1)k)
        for m in range(1, N // 4 + 2):
            k = 1
            while 4 * (2 * m - 1) * k <= N:
                e = 4 * (2 * m - 1) * k
                c = LaurentPoly(1, {(2 * k,): (-1) ** (k - 1), (-2 * k,): -((-1) ** (k - 1))})
                terms[e] = terms[e] + c if e in terms else c
                k += 1
        return QSeries(terms, N)
    # (u - 1/u) * [ (1/2)(u + 1/u)/(u - 1/u) - sum_{M>=1} q^(2M) sum_{k|M} (t^k - t^-k) ]
    terms[0] = LaurentPoly(1, {(1,): Fraction(1, 2), (-1,): Fraction(1, 2)})
    binom = binomial_factor(1, 0)
    M = 1
    while 8 * M <= N:
        c = LaurentPoly(1, {})
        for k in range(1, M + 1):
            if M % k == 0:
                c = c + LaurentPoly(1, {(2 * k,): 1, (-2 * k,): -1})
        terms[8 * M] = -(binom * c)
        M += 1
    return QSeries(terms, N)


def theta_log_derivative(kind: int, N: int) -> QSeries:
    """Logarithmic derivative data through quarter-order ``N``.

    Kind 3: ``Theta3' / Theta3`` itself.  Kind 1: ``(u - 1/u) Theta1' / Theta1``,
    which has Laurent polynomial coefficients.
    """
    if kind not in (1, 3):
        raise ValueError("kind must be 1 or 3")
    return _theta_log_derivative_expansion(kind, N)


def prefactor_series(N: int) -> QSeries:
    """``q^(1/4) prod (1 - q^2m)^2 / (1 + q^(2m-1))^2`` through quarter-order ``N``."""
    num = product_expand([ProductFactor(2, 0, -1, power=2)], N)
    den = product_expand([ProductFactor(2, -1, 1, power=2)], N)
    return (num * qs_inverse(den)).shift_q(1).truncate(N)


# ---------------------------------------------------------------------------
# identity checks


def _compare(name: str, a: QSeries, b: QSeries, order: int) -> Report:
    diff = first_difference(a, b)
    if diff is None:
        return Report(name, order, True)
    e, exps, va, vb = diff
    return Report(
        name,
        order,
        False,
        {"q_exponent": e, "u_exponent": list(exps), "lhs": str(va), "rhs": str(vb)},
    )


def _u_shift_back(s: QSeries) -> QSeries:
    """``u -> q^-1 u`` (that is ``t -> q^-2 t``)."""
    return laurent_substitute_monomial(s, 0, (1,), -4)


def _inverted(s: QSeries) -> QSeries:
    return laurent_substitute_monomial(s, 0, (-1,), 0)


def verify_theta_identities(N: int) -> Report:
    """Triple products, q-shift rules and inversion symmetries through quarter-order ``N``."""
    th1 = theta_series(1, N).data
    th3 = theta_series(3, N).data
    red = theta_series(1, N, reduced=True).data
    q_inv_t = QSeries({-4: LaurentPoly(1, {(2,): 1})}, N - 4)  # q^-1 * t
    checks = []

    prefac = QSeries({1: binomial_factor(1, 0)}, N + 1)
    checks.append(_compare("triple product Theta1", (red * prefac).truncate(N), th1, N))
    checks.append(_compare("triple product Theta3", _theta3_product(N), th3, N))

    # Shift rules in the form Theta(q^-2 t) = -+ q^-1 t Theta(t).  The left
    # side is certified on a tilted half-plane, the right on e <= N - 4;
    # first_difference compares on the intersection.
    for kind, th, sign in ((1, th1, -1), (3, th3, 1)):
        rhs = (th * q_inv_t).scale(sign)
        checks.append(_compare(f"q-shift Theta{kind}", _u_shift_back(th), rhs, N))
        drhs = ((th + theta_prime(th)) * q_inv_t).scale(sign)
        checks.append(_compare(f"q-shift Theta{kind}'", _u_shift_back(theta_prime(th)), drhs, N))

    checks.append(_compare("inversion Theta1", _inverted(th1), -th1, N))
    checks.append(_compare("inversion Theta3", _inverted(th3), th3, N))
    return combine("theta identities", N, checks)


def verify_theta_log_derivatives(N: int) -> Report:
    """The geometric-series expansions agree with ``Theta' / Theta`` (cross-multiplied)."""
    th1 = theta_series(1, N).data
    th3 = theta_series(3, N).data
    l1 = theta_log_derivative(1, N)
    l3 = theta_log_derivative(3, N)
    binom = QSeries({0: binomial_factor(1, 0)}, N)
    c1 = _compare("log derivative Theta1", (l1 * th1).truncate(N), (binom * theta_prime(th1)).truncate(N), N)
    c3 = _compare("log derivative Theta3", (l3 * th3).truncate(N), theta_prime(th3), N)
    return combine("theta log derivatives", N, [c1, c3])


def onepoint_sides(N: int, reg: QSeries | None = None) -> tuple[QSeries, QSeries]:
    """``reg_1 * Theta1_red`` and ``P * q^(-1/4) * Theta3`` through quarter-order ``N``."""
    if reg is None:
        reg = npoint(1, -(-N // 4)).reg
    reg = reg.truncate(N)
    red = theta_series(1, N, reduced=True).data
    th3 = theta_series(3, N).data
    pref = prefactor_series(N + 1).shift_q(-1)
    return (reg * red).truncate(N), (pref * th3).truncate(N)


def verify_onepoint(N: int, reg: QSeries | None = None) -> Report:
    """Cross-multiplied one-point identity through quarter-order ``N``."""
    lhs, rhs = onepoint_sides(N, reg)
    return _compare("one-point closed formula", lhs, rhs, N)


def _as_poly(c, nvars: int = 1) -> LaurentPoly:
    return c if isinstance(c, LaurentPoly) else LaurentPoly.constant(nvars, c)


def _two_var(s: QSeries, image: tuple[int, int]) -> QSeries:
    """Map a one-variable theta series to two variables via ``u -> u1^a u2^b``."""
    return s.map_coefficients(lambda c: _as_poly(c).reindex(2, [0]).substitute_monomial(0, image))


def twopoint_sides(N: int, reg: QSeries | None = None) -> tuple[QSeries, QSeries]:
    """Both sides of the cleared two-point identity through quarter-order ``N``.

    Left:  reg_2 q^(1/2) R(u1) R(u2) Th1(u1 u2) Th1(u1/u2), with R the reduced Theta1.
    Right: P [Th3'(u1u2) Th1(u1) Th1(u2) Th1(u1/u2)
              - (Th1'(u1) Th1(u2) - Th1'(u2) Th1(u1)) Th3(u1/u2) Th1(u1 u2)].
    """
    if reg is None:
        reg = npoint(2, -(-N // 4)).reg
    reg = reg.truncate(N)
    th1 = theta_series(1, N).data
    th3 = theta_series(3, N).data
    red = theta_series(1, N, reduced=True).data
    d1 = theta_prime(th1)
    d3 = theta_prime(th3)

    a1, a2 = _two_var(th1, (1, 0)), _two_var(th1, (0, 1))
    r1, r2 = _two_var(red, (1, 0)), _two_var(red, (0, 1))
    p1, p2 = _two_var(d1, (1, 0)), _two_var(d1, (0, 1))
    a_sum, a_diff = _two_var(th1, (1, 1)), _two_var(th1, (1, -1))
    d3_sum = _two_var(d3, (1, 1))
    th3_diff = _two_var(th3, (1, -1))

    lhs = (reg * r1 * r2 * a_sum * a_diff).shift_q(2).truncate(N)
    pref = prefactor_series(N)
    bracket = d3_sum * a1 * a2 * a_diff - (p1 * a2 - p2 * a1) * th3_diff * a_sum
    rhs = (pref * bracket).truncate(N)
    return lhs, rhs


def verify_twopoint(N: int, reg: QSeries | None = None) -> Report:
    """Cross-multiplied two-point identity through quarter-order ``N``."""
    lhs, rhs = twopoint_sides(N, reg)
    return _compare("two-point closed formula", lhs, rhs, N)
