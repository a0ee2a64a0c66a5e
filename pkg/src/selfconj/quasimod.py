"""Eisenstein series, Q-functions, q-brackets and quasimodular decompositions.

Everything here uses integer powers of ``q = exp(pi i tau)``; series are
stored as quarter-graded ``QSeries`` whose exponents are multiples of 4.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import sympy

from .correlation import npoint, partition_factor, z_inverse
from .partitions import FrobeniusCoords, Partition, enumerate_self_conjugate, frobenius
from .report import Report, combine
from .series import QSeries, XSeries, expand_u_in_X, first_difference

KINDS = ("G", "G10", "G01", "G11", "bbG")


# ---------------------------------------------------------------------------
# Bernoulli and beta numbers


@lru_cache(maxsize=None)
def _bernoulli_table(n: int) -> tuple[Fraction, ...]:
    # sum_{k<m+1} C(m+1, k) B_k = 0, with B_1 = -1/2
    b = [Fraction(1)]
    for m in range(1, n + 1):
        s = sum((math.comb(m + 1, k) * b[k] for k in range(m)), Fraction(0))
        b.append(-s / (m + 1))
    return tuple(b)


def bernoulli(ell: int) -> Fraction:
    """B_ell with B_1 = -1/2; odd indices above 1 give zero."""
    if ell < 0:
        raise ValueError("index must be non-negative")
    if ell % 2 and ell != 1:
        return Fraction(0)
    return _bernoulli_table(ell)[ell]


def zeta_negative(ell: int) -> Fraction:
    """zeta(1 - ell) for even ell >= 2, as -B_ell / ell."""
    return -bernoulli(ell) / ell


def beta_coefficients(L: int) -> list[Fraction]:
    """Taylor coefficients of (x/2)/sinh(x/2) through x^L."""
    out = []
    for ell in range(L + 1):
        if ell % 2:
            out.append(Fraction(0))
        else:
            out.append((Fraction(2) ** (1 - ell) - 1) * bernoulli(ell) / math.factorial(ell))
    return out


# ---------------------------------------------------------------------------
# Eisenstein series


@dataclass(frozen=True)
class EisensteinSeries:
    kind: str
    weight: int
    data: QSeries


def _divisors(n: int) -> list[int]:
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


@lru_cache(maxsize=None)
def eisenstein(kind: str, ell: int, N: int) -> EisensteinSeries:
    """Divisor-sum truncation through q^N."""
    if kind not in KINDS:
        raise ValueError(f"unknown Eisenstein kind {kind!r}")
    if ell < 2 or ell % 2:
        raise ValueError("weight must be even and at least 2")
    B = bernoulli(ell)
    coeffs: dict[int, Fraction] = {}
    if kind == "G":
        coeffs[0] = -B / (2 * ell)
        for n in range(1, N // 2 + 1):
            coeffs[2 * n] = sum(d ** (ell - 1) for d in _divisors(n))
    elif kind == "G10":
        for n in range(1, N + 1):
            coeffs[n] = sum((n // d) ** (ell - 1) for d in _divisors(n) if d % 2)
    elif kind == "G01":
        coeffs[0] = -(2 ** ell - 1) * B / (2 * ell)
        for n in range(1, N + 1):
            coeffs[n] = sum((-1) ** (n // d) * (n // d) ** (ell - 1) for d in _divisors(n) if d % 2 == 0)
    elif kind == "G11":
        for n in range(1, N + 1):
            coeffs[n] = sum((-1) ** (n // d) * (n // d) ** (ell - 1) for d in _divisors(n) if d % 2)
    else:  # bbG
        coeffs[0] = -(1 - 2 ** (ell - 1)) * B / (2 * ell)
        for n in range(1, N + 1):
            coeffs[n] = (-1) ** n * sum(d ** (ell - 1) for d in _divisors(n) if d % 2)
    return EisensteinSeries(kind, ell, QSeries.from_q_units(coeffs, N))


def _q_report(name: str, a: QSeries, b: QSeries, N: int, **extra) -> Report:
    diff = first_difference(a, b)
    if diff is None:
        return Report(name, N, True, details=dict(extra))
    e, _, va, vb = diff
    return Report(name, N, False, {"q_exponent": e // 4, "lhs": str(va), "rhs": str(vb), **extra})


def verify_eisenstein_identities(N: int, ell_max: int) -> Report:
    """The two linear relations among the level-two Eisenstein series."""
    checks = []
    for ell in range(2, ell_max + 1, 2):
        g = eisenstein("G", ell, N).data
        g10, g01, g11 = (eisenstein(k, ell, N).data for k in ("G10", "G01", "G11"))
        bb = eisenstein("bbG", ell, N).data
        checks.append(
            _q_report(f"G split, weight {ell}", g, (g10 + g01 + g11).scale(Fraction(1, 2 ** ell - 1)), N, ell=ell)
        )
        checks.append(_q_report(f"bbG relation, weight {ell}", bb, g.scale(1 - 2 ** (ell - 1)) + g11, N, ell=ell))
    return combine("Eisenstein identities", N, checks)


def tau_derivative(s: QSeries) -> QSeries:
    """``q^n -> n q^n``; the input must live on whole q-powers."""
    if any(e % 4 for e in s.terms):
        raise ValueError("tau_derivative needs integer q-exponents")
    if s.weights is not None:
        raise ValueError("tau_derivative needs a plainly graded series")
    return QSeries({e: c * (e // 4) for e, c in s.terms.items()}, s.order)


# ---------------------------------------------------------------------------
# Q-functions and brackets


def p_function(ell: int, lam: Partition | FrobeniusCoords) -> Fraction:
    """sum_i [(m_i + 1/2)^ell - (-n_i - 1/2)^ell]."""
    c = lam if isinstance(lam, FrobeniusCoords) else frobenius(lam)
    half = Fraction(1, 2)
    return sum(((m + half) ** ell - (-n - half) ** ell for m, n in zip(c.arms, c.legs)), Fraction(0))


def q_function(ell: int, lam: Partition | FrobeniusCoords) -> Fraction:
    if ell < 0:
        raise ValueError("index must be non-negative")
    if ell == 0:
        return Fraction(1)
    return p_function(ell - 1, lam) / math.factorial(ell - 1) + beta_coefficients(ell)[ell]


@dataclass(frozen=True)
class BracketResult:
    indices: tuple[int, ...]
    series: QSeries = field(compare=False)
    method: str = "bruteforce"

    @property
    def weight(self) -> int:
        return sum(self.indices)

    def to_json_dict(self) -> dict:
        return {
            "indices": list(self.indices),
            "weight": self.weight,
            "method": self.method,
            "series": self.series.to_json_dict(),
        }


def _normalize_indices(ells: Sequence[int]) -> tuple[int, ...]:
    if any(x < 0 for x in ells):
        raise ValueError("indices must be non-negative")
    return tuple(sorted(ells, reverse=True))


def bracket_bruteforce(ells: Sequence[int], N: int) -> BracketResult:
    """Average of prod Q_ell over self-conjugate partitions, through q^N."""
    ells = _normalize_indices(ells)
    raw: dict[int, Fraction] = {}
    for c in enumerate_self_conjugate(N):
        v = Fraction(1)
        for ell in ells:
            v *= q_function(ell, c)
            if not v:
                break
        if v:
            raw[4 * c.size] = raw.get(4 * c.size, 0) + v
    series = QSeries(raw, 4 * N) * z_inverse(N)
    return BracketResult(ells, series, "bruteforce")


def _aut(mu: Sequence[int]) -> int:
    return math.prod(math.factorial(k) for k in Counter(mu).values())


def _sub_multisets(mu: tuple[int, ...]) -> list[tuple[int, ...]]:
    counts = Counter(mu)
    keys = sorted(counts, reverse=True)
    out = []
    for choice in itertools.product(*(range(counts[k] + 1) for k in keys)):
        nu = tuple(k for k, c in zip(keys, choice) for _ in range(c))
        if nu:
            out.append(nu)
    return out


def _is_sub(nu: tuple[int, ...], mu_counts: Counter) -> bool:
    return all(mu_counts[k] >= v for k, v in Counter(nu).items())


def log_coefficient(nu: tuple[int, ...], N: int) -> QSeries:
    """Coefficient of prod s_{2 nu_i} in log M(s), through q^N."""
    l = len(nu)
    size = sum(nu)
    ell = 2 * size - 2 * l + 2
    s = eisenstein("bbG", ell, N).data
    for _ in range(l - 1):
        s = tau_derivative(s)
    factor = -Fraction(2) ** (2 * l - 2 * size) / _aut(nu)
    out = s.scale(factor)
    return out


def bracket_closed(mu: Sequence[int], N: int) -> BracketResult:
    """<prod Q_{2 mu_i}> from the exponential generating function of brackets."""
    mu = tuple(sorted((int(x) for x in mu), reverse=True))
    if any(x <= 0 for x in mu):
        raise ValueError("mu must consist of positive integers")
    indices = tuple(2 * x for x in mu)
    if not mu:
        return BracketResult((), QSeries.constant(1, 4 * N), "closed")
    mu_counts = Counter(mu)
    logs = {nu: log_coefficient(nu, N) for nu in _sub_multisets(mu)}
    # exp(F) restricted to sub-multisets of mu: sum_k F^k / k!
    power: dict[tuple[int, ...], QSeries] = {(): QSeries.constant(1, 4 * N)}
    total = QSeries({}, 4 * N)
    for k in range(1, len(mu) + 1):
        nxt: dict[tuple[int, ...], QSeries] = {}
        for key, val in power.items():
            for nu, lg in logs.items():
                merged = tuple(sorted(key + nu, reverse=True))
                if not _is_sub(merged, mu_counts):
                    continue
                prod = val * lg
                nxt[merged] = nxt[merged] + prod if merged in nxt else prod
        power = nxt
        if mu in power:
            total = total + power[mu].scale(Fraction(1, math.factorial(k)))
    scale = Fraction(_aut(mu), math.prod(math.factorial(2 * x - 1) for x in mu))
    return BracketResult(indices, total.scale(scale).truncate(4 * N), "closed")


# ---------------------------------------------------------------------------
# brackets read off from the n-point function


def _partition_x_expansion(c: FrobeniusCoords, L: int) -> XSeries:
    """Single-variable X-expansion of ((u - 1/u) sigma + 1) / (u - 1/u)."""
    f = partition_factor(c)
    return expand_u_in_X(QSeries({0: f}, 0), L, prefactor=True)


def extract_brackets_from_npoint(n: int, L: int, N: int, method: str = "factorized") -> dict[tuple[int, ...], BracketResult]:
    """Brackets <Q_l1 ... Q_ln> for 0 <= l_j <= L from the X-expansion of G.

    ``method="full"`` expands the regularized n-point series directly.
    ``"factorized"`` expands each partition's one-variable factor and
    multiplies, which is the same computation because ``u -> exp(X/2)`` is a
    ring map; it is far cheaper for larger ``n``.
    """
    if L < 1:
        raise ValueError("L must be at least 1")
    if method == "full":
        xs = expand_u_in_X(npoint(n, N).reg, L - 1, prefactor=True)
    elif method == "factorized":
        acc: dict[tuple[int, ...], dict[int, Fraction]] = {}
        for c in enumerate_self_conjugate(N):
            one = _partition_x_expansion(c, L - 1)
            vec = {k[0]: v.coefficient(0) for k, v in one.terms.items()}
            for combo in itertools.product(sorted(vec.items()), repeat=n):
                key = tuple(k for k, _ in combo)
                val = math.prod((v for _, v in combo), start=Fraction(1))
                if val:
                    bucket = acc.setdefault(key, {})
                    bucket[4 * c.size] = bucket.get(4 * c.size, 0) + val
        zi = z_inverse(N)
        xs = XSeries(n, L - 1, {k: QSeries(d, 4 * N) * zi for k, d in acc.items()})
    else:
        raise ValueError("method must be 'full' or 'factorized'")
    out = {}
    for ells in itertools.product(range(L + 1), repeat=n):
        key = tuple(x - 1 for x in ells)
        series = xs.coefficient(key) or QSeries({}, 4 * N)
        out[ells] = BracketResult(tuple(ells), series, "extracted")
    return out


# ---------------------------------------------------------------------------
# the Eisenstein form of the one-point function


def verify_bernoulli_identity(L: int) -> Report:
    """exp(sum_l (B_l / l) X^l / l!) = 2 sinh(X/2) / X through X^L."""
    one = QSeries.constant(1, 0)
    gen = XSeries(1, L, {(ell,): one.scale(bernoulli(ell) / ell / math.factorial(ell)) for ell in range(2, L + 1, 2)})
    lhs = gen.exp()
    for k in range(L + 1):
        want = Fraction(0) if k % 2 else Fraction(1, 2 ** k * math.factorial(k + 1))
        got = lhs.coefficient((k,))
        got = got.coefficient(0) if got is not None else 0
        if got != want:
            return Report("Bernoulli identity", L, False, {"x_power": k, "lhs": str(got), "rhs": str(want)})
    return Report("Bernoulli identity", L, True)


def eisenstein_form_series(L: int, N: int) -> XSeries:
    """X^-1 exp(sum_{l <= L} 2 (G_l - G11_l) X^l / l!) as an X-series."""
    terms = {}
    for ell in range(2, L + 2, 2):
        s = (eisenstein("G", ell, N).data - eisenstein("G11", ell, N).data).scale(Fraction(2, math.factorial(ell)))
        terms[(ell,)] = s
    inner = XSeries(1, L + 1, terms).exp()
    return XSeries(1, L, {(k[0] - 1,): v for k, v in inner.terms.items()})


def verify_eisenstein_form_of_G(L: int, N: int) -> Report:
    """Compare the Eisenstein form of G(t) with the X-expansion of the n=1 series."""
    checks = [verify_bernoulli_identity(max(L, 10))]
    rhs = eisenstein_form_series(L, N)
    brackets = extract_brackets_from_npoint(1, L, N)
    failure = None
    for ell in range(0, L + 1):
        got = brackets[(ell,)].series
        want = rhs.coefficient((ell - 1,)) or QSeries({}, 4 * N)
        diff = first_difference(got, want)
        if diff is not None:
            failure = {"ell": ell, "q_exponent": diff[0] // 4, "lhs": str(diff[2]), "rhs": str(diff[3])}
            break
    checks.append(Report("Eisenstein form of G", N, failure is None, failure, {"L": L}))
    return combine("Eisenstein form of the one-point function", N, checks)


# ---------------------------------------------------------------------------
# quasimodular decomposition


GENERATORS = ("G2", "G10_2", "G11_2")


def _generator_series(N: int) -> list[QSeries]:
    return [eisenstein("G", 2, N).data, eisenstein("G10", 2, N).data, eisenstein("G11", 2, N).data]


def weight_monomials(w: int) -> list[tuple[int, int, int]]:
    """Exponent triples of G2, G10_2, G11_2 with total weight w."""
    if w < 0 or w % 2:
        return []
    d = w // 2
    return sorted(((a, b, d - a - b) for a in range(d + 1) for b in range(d - a + 1)), reverse=True)


def monomial_label(m: tuple[int, int, int]) -> str:
    parts = [f"{g}^{k}" if k > 1 else g for g, k in zip(GENERATORS, m) if k]
    return "*".join(parts) or "1"


@dataclass
class Decomposition:
    weight: int
    order: int
    basis: list[tuple[int, int, int]]
    coeffs: list[Fraction] | None
    rank: int
    residual_zero: bool
    first_residual: dict | None = None

    @property
    def success(self) -> bool:
        return self.coeffs is not None and self.residual_zero

    def to_json_dict(self) -> dict:
        out = {
            "weight": self.weight,
            "order": self.order,
            "basis": [monomial_label(m) for m in self.basis],
            "rank": self.rank,
            "status": "pass" if self.success else "fail",
        }
        if self.coeffs is not None:
            out["coeffs"] = [str(c) for c in self.coeffs]
        if self.first_residual is not None:
            out["first_residual"] = self.first_residual
        return out


def _monomial_series(m: tuple[int, int, int], gens: list[QSeries], N: int) -> QSeries:
    out = QSeries.constant(1, 4 * N)
    for g, k in zip(gens, m):
        for _ in range(k):
            out = out * g
    return out


def decompose_quasimodular(s: QSeries, w: int, N: int) -> Decomposition:
    """Write ``s`` as a rational combination of weight-``w`` monomials in the generators.

    The fit uses every coefficient through q^N; success means an exact
    solution exists with zero residual on all of them.
    """
    if s.order < 4 * N:
        raise ValueError("series is not known through the requested order")
    basis = weight_monomials(w)
    target = [Fraction(s.coefficient(4 * k)) for k in range(N + 1)]
    if not basis:
        ok = all(x == 0 for x in target)
        first = None if ok else {"q_exponent": next(k for k, x in enumerate(target) if x), "value": str(next(x for x in target if x))}
        return Decomposition(w, N, basis, [] if ok else None, 0, ok, first)
    gens = _generator_series(N)
    columns = [_monomial_series(m, gens, N).q_coefficients() for m in basis]
    A = sympy.Matrix([[sympy.Rational(str(Fraction(col[k]))) for col in columns] for k in range(N + 1)])
    b = sympy.Matrix([sympy.Rational(str(x)) for x in target])
    rank = A.rank()
    try:
        sol, params = A.gauss_jordan_solve(b)
    except ValueError:
        sol = None
    if sol is None:
        # least-defect diagnostics: report the first coefficient no combination can match
        return Decomposition(w, N, basis, None, rank, False, _first_inconsistent(A, b))
    if params.shape[0]:
        sol = sol.subs({p: 0 for p in params})
    coeffs = [Fraction(int(sympy.fraction(x)[0]), int(sympy.fraction(x)[1])) for x in sol]
    residual = [
        target[k] - sum((c * Fraction(col[k]) for c, col in zip(coeffs, columns)), Fraction(0)) for k in range(N + 1)
    ]
    bad = next((k for k, x in enumerate(residual) if x), None)
    first = None if bad is None else {"q_exponent": bad, "value": str(residual[bad])}
    return Decomposition(w, N, basis, coeffs, rank, bad is None, first)


def _first_inconsistent(A: sympy.Matrix, b: sympy.Matrix) -> dict:
    # smallest k such that rows 0..k are already inconsistent
    for k in range(A.rows):
        sub = A[: k + 1, :]
        aug = sub.row_join(b[: k + 1, :])
        if aug.rank() > sub.rank():
            return {"q_exponent": k, "reason": "no combination matches coefficients through this power"}
    return {"q_exponent": None, "reason": "inconsistent system"}


def bracket_closed_indices(ells: Sequence[int], N: int) -> BracketResult:
    """Closed form for an arbitrary index tuple.

    ``Q_0 = 1`` factors drop out and any odd index makes the bracket vanish.
    """
    ells = _normalize_indices(ells)
    if any(x % 2 for x in ells):
        return BracketResult(ells, QSeries({}, 4 * N), "closed")
    res = bracket_closed([x // 2 for x in ells if x], N)
    return BracketResult(ells, res.series, "closed")


def bracket_extracted(ells: Sequence[int], N: int) -> BracketResult:
    """A single bracket read off from the n-point function, n = number of indices."""
    ells = tuple(ells)
    if not ells:
        return BracketResult((), QSeries.constant(1, 4 * N), "extracted")
    table = extract_brackets_from_npoint(len(ells), max(max(ells), 1), N)
    res = table[ells]
    return BracketResult(_normalize_indices(ells), res.series, "extracted")
