"""Exact truncated series.

Three containers live here:

* ``LaurentPoly``: sparse Laurent polynomial in ``n`` variables ``u_1..u_n``
  with int or Fraction coefficients.
* ``QSeries``: q-series graded in quarter units (q^(1/4) is one unit) with
  scalar or ``LaurentPoly`` coefficients and a certified order.
* ``XSeries``: power series in ``X_1..X_n`` whose coefficients are ``QSeries``.

A ``QSeries`` may carry per-variable ``weights`` ``w``.  A coefficient
``q^e u^a`` is then certified when ``e - <w, a> <= order``.  This is the only
consistent way to track truncation after a substitution ``u -> q^s u``: that
substitution moves terms from every q-order to every other, but it preserves
the tilted grading.  With ``w = 0`` the rule is the usual ``e <= order``.
An optional ``cap`` additionally restricts certification to ``e <= cap``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence, Union

Scalar = Union[int, Fraction]


def _scalar_inverse(c: Scalar) -> Scalar:
    if c == 1 or c == -1:
        return int(c)
    return Fraction(1) / c


def as_fraction_str(c: Scalar) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


# ---------------------------------------------------------------------------
# Laurent polynomials


class LaurentPoly:
    """Sparse Laurent polynomial; ``terms`` maps exponent tuples to coefficients."""

    __slots__ = ("nvars", "terms")
    __hash__ = None  # mutable-looking container with value equality

    def __init__(self, nvars: int, terms: Mapping[Sequence[int], Scalar] | None = None):
        self.nvars = nvars
        clean: dict[tuple[int, ...], Scalar] = {}
        if terms:
            for e, c in terms.items():
                e = tuple(int(x) for x in e)
                if len(e) != nvars:
                    raise ValueError(f"exponent {e} does not have {nvars} entries")
                if c:
                    clean[e] = clean.get(e, 0) + c
                    if not clean[e]:
                        del clean[e]
        self.terms = clean

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> "LaurentPoly":
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        return p

    @classmethod
    def constant(cls, nvars: int, c: Scalar) -> "LaurentPoly":
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def monomial(cls, nvars: int, exps: Sequence[int], c: Scalar = 1) -> "LaurentPoly":
        return cls(nvars, {tuple(exps): c})

    @classmethod
    def var(cls, nvars: int, j: int, power: int = 1) -> "LaurentPoly":
        e = [0] * nvars
        e[j] = power
        return cls._raw(nvars, {tuple(e): 1})

    # -- inspection
    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for e in sorted(self.terms):
            mono = "*".join(f"u{j + 1}^{x}" for j, x in enumerate(e) if x)
            bits.append(f"({as_fraction_str(self.terms[e])})" + (f"*{mono}" if mono else ""))
        return " + ".join(bits)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Scalar:
        return self.terms.get((0,) * self.nvars, 0)

    def degree_bounds(self, j: int) -> tuple[int, int]:
        if not self.terms:
            return (0, 0)
        xs = [e[j] for e in self.terms]
        return (min(xs), max(xs))

    def coefficient(self, exps: Sequence[int]) -> Scalar:
        return self.terms.get(tuple(exps), 0)

    # -- arithmetic
    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.nvars != self.nvars:
                if not other.terms:
                    return LaurentPoly._raw(self.nvars, {})
                if not self.terms:
                    return other
                raise ValueError("variable count mismatch")
            return other
        return LaurentPoly.constant(self.nvars, other)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.constant(self.nvars, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.terms == other.terms

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __add__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return LaurentPoly._raw(max(self.nvars, other.nvars), out)

    __radd__ = __add__

    def __sub__(self, other) -> "LaurentPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "LaurentPoly":
        return self._coerce(other) + (-self)

    def __mul__(self, other) -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            if not other:
                return LaurentPoly._raw(self.nvars, {})
            return LaurentPoly._raw(self.nvars, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        out: dict[tuple[int, ...], Scalar] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(map(int.__add__, e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly._raw(self.nvars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other: Scalar) -> "LaurentPoly":
        inv = Fraction(1) / Fraction(other)
        return self * (inv if inv.denominator != 1 else int(inv))

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            return self.inverse() ** (-k)
        out = LaurentPoly.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inverse(self) -> "LaurentPoly":
        """Inverse of a monomial (the only units)."""
        if len(self.terms) != 1:
            raise ValueError("only monomials are invertible")
        (e, c), = self.terms.items()
        return LaurentPoly._raw(self.nvars, {tuple(-x for x in e): _scalar_inverse(c)})

    # -- structural maps
    def substitute_monomial(self, j: int, image: Sequence[int]) -> "LaurentPoly":
        """Replace ``u_j`` by the monomial ``u^image``."""
        out: dict[tuple[int, ...], Scalar] = {}
        for e, c in self.terms.items():
            k = e[j]
            new = list(e)
            new[j] = 0
            for i, x in enumerate(image):
                new[i] += k * x
            t = tuple(new)
            out[t] = out.get(t, 0) + c
        return LaurentPoly._raw(self.nvars, {e: c for e, c in out.items() if c})

    def reindex(self, nvars: int, mapping: Sequence[int]) -> "LaurentPoly":
        """Send variable ``i`` to variable ``mapping[i]`` of an ``nvars``-variable ring."""
        out: dict[tuple[int, ...], Scalar] = {}
        for e, c in self.terms.items():
            new = [0] * nvars
            for i, x in enumerate(e):
                new[mapping[i]] += x
            t = tuple(new)
            out[t] = out.get(t, 0) + c
        return LaurentPoly._raw(nvars, {e: c for e, c in out.items() if c})

    def partial_eval(self, assignment: Mapping[int, Scalar]) -> "LaurentPoly":
        """Evaluate the variables in ``assignment``; the others keep their order."""
        keep = [j for j in range(self.nvars) if j not in assignment]
        powers: dict[tuple[int, int], Scalar] = {}
        out: dict[tuple[int, ...], Scalar] = {}
        for e, c in self.terms.items():
            v = c
            for j, x in assignment.items():
                k = e[j]
                if k:
                    key = (j, k)
                    if key not in powers:
                        powers[key] = Fraction(x) ** k
                    v = v * powers[key]
            t = tuple(e[j] for j in keep)
            out[t] = out.get(t, 0) + v
        return LaurentPoly._raw(len(keep), {e: c for e, c in out.items() if c})

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        p = self.partial_eval({j: x for j, x in enumerate(point)})
        return Fraction(p.constant_term())

    def divide_exact(self, divisor: "LaurentPoly") -> "LaurentPoly | None":
        """Exact quotient by ``divisor``, or ``None`` when it does not divide.

        Long division on the lexicographic leading term.  A true quotient has
        per-variable degrees inside a box fixed by the degrees of the inputs,
        so leaving that box proves non-divisibility.
        """
        if not divisor.terms:
            raise ZeroDivisionError("division by zero polynomial")
        if not self.terms:
            return LaurentPoly._raw(self.nvars, {})
        lo = [self.degree_bounds(j)[0] - divisor.degree_bounds(j)[0] for j in range(self.nvars)]
        hi = [self.degree_bounds(j)[1] - divisor.degree_bounds(j)[1] for j in range(self.nvars)]
        lead_d = max(divisor.terms)
        cd = divisor.terms[lead_d]
        rem = self
        quot: dict[tuple[int, ...], Scalar] = {}
        while rem.terms:
            lead = max(rem.terms)
            e = tuple(a - b for a, b in zip(lead, lead_d))
            if any(x < l or x > h for x, l, h in zip(e, lo, hi)):
                return None
            c = Fraction(rem.terms[lead]) / cd
            c = int(c) if c.denominator == 1 else c
            quot[e] = quot.get(e, 0) + c
            rem = rem - LaurentPoly._raw(self.nvars, {e: c}) * divisor
        return LaurentPoly._raw(self.nvars, {e: c for e, c in quot.items() if c})


def binomial_factor(nvars: int, j: int) -> LaurentPoly:
    """``u_j - u_j^{-1}``."""
    return LaurentPoly.var(nvars, j, 1) - LaurentPoly.var(nvars, j, -1)


# ---------------------------------------------------------------------------
# q-series with quarter grading


def _coeff_is_poly(c) -> bool:
    return isinstance(c, LaurentPoly)


class QSeries:
    """Truncated q-series.  Exponents are integers in units of q^(1/4).

    ``terms`` maps a quarter exponent to a non-zero coefficient.  Only
    certified data is stored; see the module docstring for what certified
    means when ``weights`` or ``cap`` are set.
    """

    __slots__ = ("terms", "order", "weights", "cap")
    __hash__ = None

    def __init__(
        self,
        terms: Mapping[int, object] | None,
        order: int,
        weights: Sequence[int] | None = None,
        cap: int | None = None,
    ):
        self.order = int(order)
        if weights is not None and not any(weights):
            weights = None
        self.weights = tuple(weights) if weights is not None else None
        self.cap = cap
        clean: dict[int, object] = {}
        for e, c in (terms or {}).items():
            e = int(e)
            if cap is not None and e > cap:
                continue
            if self.weights is None:
                if e > self.order or not c:
                    continue
                clean[e] = c
            else:
                c = self._clip(e, c)
                if c:
                    clean[e] = c
        self.terms = clean

    def _clip(self, e: int, c):
        w = self.weights
        if not _coeff_is_poly(c):
            return c if e <= self.order else 0
        keep = {a: v for a, v in c.terms.items() if e - sum(map(int.__mul__, w, a)) <= self.order}
        if len(keep) == len(c.terms):
            return c
        return LaurentPoly._raw(c.nvars, keep)

    # -- constructors
    @classmethod
    def constant(cls, c, order: int) -> "QSeries":
        return cls({0: c}, order)

    @classmethod
    def from_q_units(cls, coeffs: Mapping[int, object], q_order: int) -> "QSeries":
        """Build from integer q-exponents and an integer q-order."""
        return cls({4 * k: c for k, c in coeffs.items()}, 4 * q_order)

    # -- inspection
    def __repr__(self) -> str:
        body = ", ".join(f"q^{Fraction(e, 4)}: {c}" for e, c in sorted(self.terms.items()))
        extra = f", weights={self.weights}" if self.weights else ""
        return f"QSeries({{{body}}}, order={self.order}{extra})"

    def coefficient(self, e: int):
        return self.terms.get(e, 0)

    def q_coefficients(self, zero=0) -> list:
        """Coefficients of q^0, q^1, ..., q^(order/4) (integer q powers)."""
        if self.order % 4:
            raise ValueError("order is not a whole q-power")
        return [self.terms.get(4 * k, zero) for k in range(self.order // 4 + 1)]

    def certified(self, e: int, exps: Sequence[int] | None = None) -> bool:
        if self.cap is not None and e > self.cap:
            return False
        return self.phi(e, exps) <= self.order

    def phi(self, e: int, exps: Sequence[int] | None = None) -> int:
        if self.weights is None or exps is None:
            return e
        return e - sum(map(int.__mul__, self.weights, exps))

    def valuation(self) -> int:
        """Smallest tilted exponent present (``order + 1`` for the zero series)."""
        best = self.order + 1
        for e, c in self.terms.items():
            if _coeff_is_poly(c) and self.weights is not None:
                for a in c.terms:
                    best = min(best, self.phi(e, a))
            else:
                best = min(best, e)
        return best

    def is_zero(self) -> bool:
        return not self.terms

    def nvars(self) -> int | None:
        for c in self.terms.values():
            if _coeff_is_poly(c):
                return c.nvars
        return None

    # -- arithmetic
    def _check_compatible(self, other: "QSeries") -> tuple | None:
        if self.weights == other.weights:
            return self.weights
        # a series with scalar (u-free) coefficients has no tilt to disagree with
        if all(not _coeff_is_poly(c) or c.is_constant() for c in other.terms.values()) and other.weights is None:
            return self.weights
        if all(not _coeff_is_poly(c) or c.is_constant() for c in self.terms.values()) and self.weights is None:
            return other.weights
        raise ValueError("series are certified along different gradings")

    @staticmethod
    def _min_cap(a: int | None, b: int | None) -> int | None:
        if a is None:
            return b
        if b is None:
            return a
        return min(a, b)

    def __neg__(self) -> "QSeries":
        return QSeries({e: -c for e, c in self.terms.items()}, self.order, self.weights, self.cap)

    def __add__(self, other) -> "QSeries":
        if not isinstance(other, QSeries):
            other = QSeries.constant(other, self.order)
        w = self._check_compatible(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return QSeries(out, min(self.order, other.order), w, self._min_cap(self.cap, other.cap))

    __radd__ = __add__

    def __sub__(self, other) -> "QSeries":
        if not isinstance(other, QSeries):
            other = QSeries.constant(other, self.order)
        return self + (-other)

    def __rsub__(self, other) -> "QSeries":
        return (-self) + other

    def scale(self, c) -> "QSeries":
        """Multiply every coefficient by a scalar or a u-free constant."""
        if _coeff_is_poly(c) and not c.is_constant():
            return self.times_laurent(c)
        return QSeries({e: v * c for e, v in self.terms.items()}, self.order, self.weights, self.cap)

    def times_laurent(self, p: LaurentPoly) -> "QSeries":
        """Multiply by a Laurent polynomial in the u's (no q-dependence)."""
        if not p.terms:
            return QSeries({}, self.order, self.weights, self.cap)
        shift = 0
        if self.weights is not None:
            shift = max(sum(map(int.__mul__, self.weights, a)) for a in p.terms)
        return QSeries({e: c * p for e, c in self.terms.items()}, self.order - shift, self.weights, self.cap)

    def shift_q(self, s: int) -> "QSeries":
        """Multiply by q^(s/4)."""
        cap = None if self.cap is None else self.cap + s
        return QSeries({e + s: c for e, c in self.terms.items()}, self.order + s, self.weights, cap)

    def __mul__(self, other) -> "QSeries":
        if not isinstance(other, QSeries):
            return self.scale(other)
        if self.cap is not None or other.cap is not None:
            raise ValueError("products of capped series are not supported")
        w = self._check_compatible(other)
        a, b = self, other
        if w is not None:
            a = QSeries(a.terms, a.order, w)
            b = QSeries(b.terms, b.order, w)
        order = min(a.order + b.valuation(), b.order + a.valuation())
        out: dict[int, object] = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = e1 + e2
                if w is None and e > order:
                    continue
                v = c1 * c2
                out[e] = out[e] + v if e in out else v
        return QSeries(out, order, w)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "QSeries":
        if k < 0:
            return qs_inverse(self) ** (-k)
        out = QSeries.constant(1, self.order)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return first_difference(self, other) is None

    # -- structural maps
    def map_coefficients(self, fn: Callable[[object], object]) -> "QSeries":
        return QSeries({e: fn(c) for e, c in self.terms.items()}, self.order, self.weights, self.cap)

    def truncate(self, order: int) -> "QSeries":
        return QSeries(self.terms, min(order, self.order), self.weights, self.cap)

    def to_json_dict(self) -> dict:
        rows = []
        for e in sorted(self.terms):
            c = self.terms[e]
            if _coeff_is_poly(c):
                for a in sorted(c.terms):
                    rows.append({"q": e, "u": list(a), "coeff": as_fraction_str(c.terms[a])})
            else:
                rows.append({"q": e, "u": [], "coeff": as_fraction_str(c)})
        out = {"q_unit": "1/4", "order": self.order, "terms": rows}
        if self.weights is not None:
            out["weights"] = list(self.weights)
        if self.cap is not None:
            out["cap"] = self.cap
        return out

    def iter_terms(self) -> Iterable[tuple[int, tuple[int, ...], Scalar]]:
        """Yield ``(e, a, c)`` for every q^e u^a term."""
        for e in sorted(self.terms):
            c = self.terms[e]
            if _coeff_is_poly(c):
                for a in sorted(c.terms):
                    yield e, a, c.terms[a]
            else:
                yield e, (), c


def qs_mul(a: QSeries, b: QSeries) -> QSeries:
    return a * b


def qs_inverse(a: QSeries) -> QSeries:
    """Multiplicative inverse; the constant term must be a unit."""
    if a.weights is not None or a.cap is not None:
        raise ValueError("inverse is only defined for plainly graded series")
    if a.valuation() != 0 or 0 not in a.terms:
        raise ValueError("inverse needs a unit at q^0 and no negative exponents")
    c0 = a.terms[0]
    if _coeff_is_poly(c0):
        inv0 = c0.inverse()
    else:
        inv0 = _scalar_inverse(c0)
    rest = [(e, c) for e, c in sorted(a.terms.items()) if e > 0]
    out: dict[int, object] = {0: inv0}
    for n in range(1, a.order + 1):
        acc = 0
        for e, c in rest:
            if e > n:
                break
            prev = out.get(n - e)
            if prev is not None:
                acc = acc + c * prev
        if acc:
            out[n] = -(inv0 * acc)
    return QSeries(out, a.order)


def laurent_substitute_monomial(s: QSeries, j: int, image: Sequence[int], q_shift: int) -> QSeries:
    """Substitute ``u_j -> q^(q_shift/4) * u^image`` throughout ``s``.

    Certification is transported exactly when the substitution is invertible
    (``image[j] = +-1``); otherwise only the trivial case of a plainly graded
    series with ``q_shift = 0`` is accepted.
    """
    image = tuple(image)
    nv = len(image)
    w = list(s.weights) if s.weights is not None else [0] * nv
    cj = image[j]
    if cj in (1, -1):
        new_wj = cj * (q_shift + w[j] - sum(w[i] * image[i] for i in range(nv) if i != j))
        new_w = list(w)
        new_w[j] = new_wj
    elif q_shift == 0 and not any(w):
        new_w = w
    else:
        raise ValueError("cannot certify a non-invertible shifted substitution")
    if s.cap is not None and q_shift != 0:
        raise ValueError("cannot substitute into a capped series with a q-shift")
    out: dict[int, dict] = {}
    for e, c in s.terms.items():
        if not _coeff_is_poly(c):
            out.setdefault(e, {}).setdefault((0,) * nv, 0)
            out[e][(0,) * nv] += c
            continue
        for a, v in c.terms.items():
            k = a[j]
            new = list(a)
            new[j] = 0
            for i, x in enumerate(image):
                new[i] += k * x
            t = tuple(new)
            bucket = out.setdefault(e + k * q_shift, {})
            bucket[t] = bucket.get(t, 0) + v
    terms = {e: LaurentPoly(nv, d) for e, d in out.items()}
    return QSeries(terms, s.order, new_w, s.cap)


def partial_eval(s: QSeries, assignment: Mapping[int, Scalar]) -> QSeries:
    """Evaluate some u-variables at numbers.  Their weights must vanish."""
    w = s.weights
    if w is not None and any(w[j] for j in assignment):
        raise ValueError("cannot evaluate a variable that carries a certification weight")
    new_w = None
    if w is not None:
        new_w = [w[j] for j in range(len(w)) if j not in assignment]
    terms = {}
    for e, c in s.terms.items():
        terms[e] = c.partial_eval(assignment) if _coeff_is_poly(c) else c
    return QSeries(terms, s.order, new_w, s.cap)


def first_difference(a: QSeries, b: QSeries):
    """First jointly certified term where ``a`` and ``b`` differ, else ``None``.

    Returns ``(e, u_exponents, a_coeff, b_coeff)``.
    """
    keys = sorted(set(a.terms) | set(b.terms))
    for e in keys:
        ca, cb = a.terms.get(e, 0), b.terms.get(e, 0)
        if _coeff_is_poly(ca) or _coeff_is_poly(cb):
            nv = (ca if _coeff_is_poly(ca) else cb).nvars
            pa = ca if _coeff_is_poly(ca) else LaurentPoly.constant(nv, ca)
            pb = cb if _coeff_is_poly(cb) else LaurentPoly.constant(nv, cb)
            for exps in sorted(set(pa.terms) | set(pb.terms)):
                if not (a.certified(e, exps) and b.certified(e, exps)):
                    continue
                va, vb = pa.terms.get(exps, 0), pb.terms.get(exps, 0)
                if va != vb:
                    return e, exps, va, vb
        else:
            if not (a.certified(e) and b.certified(e)):
                continue
            if ca != cb:
                return e, (), ca, cb
    return None


@dataclass(frozen=True)
class ProductFactor:
    """``prod_{m >= start} (1 + sign * u^mono * q^(step*m + offset))^power``.

    ``step`` and ``offset`` are in whole q-units; ``mono`` is an optional
    u-exponent tuple.
    """

    step: int
    offset: int
    sign: int = 1
    power: int = 1
    start: int = 1
    mono: tuple[int, ...] | None = None


def _mul_binomial(terms: dict, c, k: int, order: int) -> dict:
    # terms * (1 + c q^k), truncated at order (plain grading)
    out = dict(terms)
    for e, v in terms.items():
        e2 = e + k
        if e2 > order:
            continue
        add = v * c
        if e2 in out:
            s = out[e2] + add
            if s:
                out[e2] = s
            else:
                del out[e2]
        else:
            out[e2] = add
    return out


def product_expand(factors: Sequence[ProductFactor], order: int) -> QSeries:
    """Expand an infinite product to quarter-order ``order``."""
    pos: dict[int, object] = {0: 1}
    neg: dict[int, object] = {0: 1}
    for f in factors:
        if f.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if f.step * f.start + f.offset < 1 or f.step < 1:
            raise ValueError("factor exponents must be positive and increasing")
        target = pos if f.power > 0 else neg
        m = f.start
        while 4 * (f.step * m + f.offset) <= order:
            k = 4 * (f.step * m + f.offset)
            c = f.sign if f.mono is None else LaurentPoly.monomial(len(f.mono), f.mono, f.sign)
            for _ in range(abs(f.power)):
                target = _mul_binomial(target, c, k, order)
            m += 1
        if f.power > 0:
            pos = target
        else:
            neg = target
    result = QSeries(pos, order)
    if len(neg) > 1:
        result = result * qs_inverse(QSeries(neg, order))
    return result


# ---------------------------------------------------------------------------
# X-expansions


def _ps_inverse(c: Sequence[Fraction], n: int) -> list[Fraction]:
    """Inverse of a univariate power series with c[0] != 0, through degree n."""
    out = [Fraction(0)] * (n + 1)
    out[0] = 1 / Fraction(c[0])
    for k in range(1, n + 1):
        acc = sum((Fraction(c[i]) * out[k - i] for i in range(1, min(k, len(c) - 1) + 1)), Fraction(0))
        out[k] = -acc * out[0]
    return out


def inverse_sinh_coefficients(n: int) -> list[Fraction]:
    """Coefficients h_0..h_n with 1/(2 sinh(X/2)) = X^{-1} * sum h_k X^k."""
    # 2 sinh(X/2) / X = sum_k (X/2)^(2k) / (2k+1)!
    base = [Fraction(0)] * (n + 1)
    for k in range(0, n // 2 + 1):
        base[2 * k] = Fraction(1, 4 ** k * math.factorial(2 * k + 1))
    return _ps_inverse(base, n)


class XSeries:
    """Power series in X_1..X_n (exponents >= -1) with ``QSeries`` coefficients.

    Each variable is truncated at degree ``order``.
    """

    __slots__ = ("nvars", "order", "terms")

    def __init__(self, nvars: int, order: int, terms: Mapping[tuple[int, ...], QSeries] | None = None):
        self.nvars = nvars
        self.order = order
        self.terms = {
            tuple(k): v for k, v in (terms or {}).items() if max(k, default=-1) <= order and not v.is_zero()
        }

    def coefficient(self, exps: Sequence[int]) -> QSeries | None:
        return self.terms.get(tuple(exps))

    def __add__(self, other: "XSeries") -> "XSeries":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return XSeries(self.nvars, min(self.order, other.order), out)

    def __mul__(self, other) -> "XSeries":
        if isinstance(other, XSeries):
            order = min(self.order, other.order)
            out: dict[tuple[int, ...], QSeries] = {}
            for k1, v1 in self.terms.items():
                for k2, v2 in other.terms.items():
                    k = tuple(map(int.__add__, k1, k2))
                    if max(k, default=-1) > order:
                        continue
                    prod = v1 * v2
                    out[k] = out[k] + prod if k in out else prod
            return XSeries(self.nvars, order, out)
        if isinstance(other, QSeries):
            return XSeries(self.nvars, self.order, {k: v * other for k, v in self.terms.items()})
        return XSeries(self.nvars, self.order, {k: v.scale(other) for k, v in self.terms.items()})

    __rmul__ = __mul__

    def outer(self, other: "XSeries") -> "XSeries":
        """Product of series in disjoint variable sets (variables concatenated)."""
        out: dict[tuple[int, ...], QSeries] = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                out[k1 + k2] = v1 * v2
        return XSeries(self.nvars + other.nvars, min(self.order, other.order), out)

    def exp(self) -> "XSeries":
        """exp of a series whose terms all have positive total degree."""
        if any(sum(k) <= 0 for k in self.terms):
            raise ValueError("exp needs a series without constant or negative-degree terms")
        zero_key = (0,) * self.nvars
        qorder = min((v.order for v in self.terms.values()), default=0)
        one = XSeries(self.nvars, self.order, {zero_key: QSeries.constant(1, qorder)})
        result = one
        power = one
        max_deg = self.nvars * self.order
        for k in range(1, max_deg + 1):
            power = power * self
            if not power.terms:
                break
            result = result + power * Fraction(1, math.factorial(k))
        return result


def _exp_vector(a: int, degree: int) -> list[Fraction]:
    # coefficients of exp(a X / 2) through X^degree
    half = Fraction(a, 2)
    return [half ** k / math.factorial(k) for k in range(degree + 1)]


def expand_u_in_X(p: QSeries, order: int, prefactor: bool = False, nvars: int | None = None) -> XSeries:
    """Substitute ``u_j = exp(X_j / 2)`` and expand through ``X_j^order``.

    With ``prefactor`` each variable also receives ``1/(u_j - u_j^{-1})``,
    expanded as ``X_j^{-1} * sum h_k X_j^k``.
    """
    nv = p.nvars() if nvars is None else nvars
    if nv is None:
        raise ValueError("cannot infer the number of u-variables")
    if p.weights is not None or p.cap is not None:
        raise ValueError("only plainly graded series can be expanded")
    deg = order + 1 if prefactor else order
    head = inverse_sinh_coefficients(deg) if prefactor else None
    cache: dict[int, list[tuple[int, Fraction]]] = {}

    def vector(a: int) -> list[tuple[int, Fraction]]:
        if a not in cache:
            v = _exp_vector(a, deg)
            if prefactor:
                conv = []
                for k in range(deg + 1):
                    s = sum((head[i] * v[k - i] for i in range(k + 1)), Fraction(0))
                    conv.append(s)
                pairs = [(k - 1, c) for k, c in enumerate(conv) if c and k - 1 <= order]
            else:
                pairs = [(k, c) for k, c in enumerate(v) if c]
            cache[a] = pairs
        return cache[a]

    acc: dict[tuple[int, ...], dict[int, Fraction]] = {}
    for e, c in p.terms.items():
        poly = c if _coeff_is_poly(c) else LaurentPoly.constant(nv, c)
        for a, v in poly.terms.items():
            combos: list[tuple[tuple[int, ...], Fraction]] = [((), Fraction(v))]
            for x in a:
                combos = [(k + (d,), w * cc) for k, w in combos for d, cc in vector(x)]
            for k, w in combos:
                bucket = acc.setdefault(k, {})
                bucket[e] = bucket.get(e, 0) + w
    terms = {k: QSeries(d, p.order) for k, d in acc.items()}
    return XSeries(nv, order, terms)
