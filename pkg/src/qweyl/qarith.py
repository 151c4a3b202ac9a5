"""Exact arithmetic in fractional powers of ``q``.

Scalars are rational functions in ``u = q^(1/D)`` with exact rational
coefficients.  Numerators and denominators are Laurent polynomials stored as
``{exponent: coefficient}`` dicts whose integer keys count powers of ``u``.
Values are immutable once built.
"""
from __future__ import annotations

import cmath
from fractions import Fraction
from math import gcd, lcm
from typing import Dict, Optional, Union

Coeff = Union[int, Fraction]
Poly = Dict[int, Coeff]

__all__ = [
    "ExactScalar",
    "PoleError",
    "NonNilpotentError",
    "ZERO",
    "ONE",
    "Q",
    "q_power",
    "qnumber",
    "qfactorial",
    "qbinomial",
    "qexp_nilpotent",
    "evaluate",
]


class PoleError(ArithmeticError):
    """Raised when a denominator vanishes at the requested evaluation point."""


class NonNilpotentError(ValueError):
    """Raised when a q-exponential series does not terminate."""


def _clean(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def _div(a, b):
    if type(a) is int and type(b) is int:
        if a % b == 0:
            return a // b
        return Fraction(a, b)
    return _clean(Fraction(a) / b)


# ---------------------------------------------------------------------------
# sparse Laurent polynomial helpers (dict exponent -> coefficient)


def _padd(a: Poly, b: Poly, sign: int = 1) -> Poly:
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, 0) + (c if sign == 1 else -c)
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _pmul(a: Poly, b: Poly) -> Poly:
    if len(a) == 1:
        (ea, ca), = a.items()
        if ca == 1:
            return {ea + e: c for e, c in b.items()}
        return {ea + e: ca * c for e, c in b.items()}
    if len(b) == 1:
        (eb, cb), = b.items()
        return {e + eb: c * cb for e, c in a.items()}
    out: Poly = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            out[e] = out.get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


def _prescale(a: Poly, f: int) -> Poly:
    if f == 1:
        return a
    return {e * f: c for e, c in a.items()}


def _pshift(a: Poly, s: int) -> Poly:
    if s == 0:
        return a
    return {e + s: c for e, c in a.items()}


# dense helpers: lists of coefficients, lowest degree first


def _dense(p: Poly):
    lo = min(p)
    arr = [0] * (max(p) - lo + 1)
    for e, c in p.items():
        arr[e - lo] = c
    return lo, arr


def _sparse(lo: int, arr) -> Poly:
    return {lo + i: _clean(c) for i, c in enumerate(arr) if c}


def _trim(arr):
    while arr and not arr[-1]:
        arr.pop()
    return arr


def _divmod_dense(a, b):
    a = list(a)
    db = len(b) - 1
    lead = b[-1]
    if len(a) - 1 < db:
        return [0], a
    quot = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if not c:
            continue
        f = _div(c, lead)
        quot[i - db] = f
        for j in range(db + 1):
            a[i - db + j] -= f * b[j]
    return quot, _trim(a[:db]) or []


def _gcd_dense(a, b):
    a = _trim(list(a))
    b = _trim(list(b))
    while b:
        _, r = _divmod_dense(a, b)
        a, b = b, r
    lead = a[-1]
    return [_div(c, lead) for c in a]


# ---------------------------------------------------------------------------


class ExactScalar:
    """Rational function ``num(u) / den(u)`` with ``u = q^(1/D)``.

    ``den is None`` encodes the Laurent-polynomial case.  Construction always
    prunes zero terms, folds monomial denominators into the numerator and
    cancels the polynomial gcd of numerator and denominator; equality is
    nevertheless decided by cross-multiplication.
    """

    __slots__ = ("num", "den", "D")

    def __init__(self, num: Optional[Poly] = None, den: Optional[Poly] = None, D: int = 1):
        if D < 1:
            raise ValueError("exponent denominator must be positive")
        num = {e: _clean(c) for e, c in (num or {}).items() if c}
        if den is not None:
            den = {e: _clean(c) for e, c in den.items() if c}
        norm = self._build(num, den, D)
        self.num, self.den, self.D = norm.num, norm.den, norm.D

    @classmethod
    def _raw(cls, num: Poly, den: Optional[Poly], D: int) -> "ExactScalar":
        out = object.__new__(cls)
        out.num, out.den, out.D = num, den, D
        return out

    # -- construction -----------------------------------------------------

    @classmethod
    def _build(cls, num: Poly, den: Optional[Poly], D: int) -> "ExactScalar":
        if not num:
            return cls._raw({}, None, 1)
        if den is not None:
            if not den:
                raise ZeroDivisionError("zero denominator")
            if len(den) == 1:
                (e, c), = den.items()
                num = {k - e: _div(v, c) for k, v in num.items()}
                den = None
            else:
                num, den = cls._reduce(num, den)
        return cls._min_D(num, den, D)

    @staticmethod
    def _reduce(num: Poly, den: Poly):
        sd = min(den)
        num = _pshift(num, -sd)
        den = _pshift(den, -sd)
        lo, N = _dense(num)
        _, Dn = _dense(den)
        g = _gcd_dense(N, Dn)
        if len(g) > 1:
            N, r = _divmod_dense(N, g)
            assert not r
            Dn, r = _divmod_dense(Dn, g)
            assert not r
        lead = Dn[-1]
        if len(_trim(list(Dn))) == 1:
            return {lo + i: _clean(_div(c, lead)) for i, c in enumerate(N) if c}, None
        N = [_div(c, lead) for c in N]
        Dn = [_div(c, lead) for c in Dn]
        return _sparse(lo, N), _sparse(0, Dn)

    @classmethod
    def _min_D(cls, num: Poly, den: Optional[Poly], D: int) -> "ExactScalar":
        if D > 1:
            g = D
            for e in num:
                g = gcd(g, e)
                if g == 1:
                    break
            if g > 1 and den is not None:
                for e in den:
                    g = gcd(g, e)
                    if g == 1:
                        break
            if g > 1:
                num = {e // g: c for e, c in num.items()}
                if den is not None:
                    den = {e // g: c for e, c in den.items()}
                D //= g
        return cls._raw(num, den, D)

    @classmethod
    def coerce(cls, x) -> "ExactScalar":
        if isinstance(x, ExactScalar):
            return x
        if isinstance(x, (int, Fraction)):
            x = _clean(x)
            return cls._raw({0: x} if x else {}, None, 1)
        raise TypeError(f"cannot coerce {type(x).__name__} to ExactScalar")

    # -- structure --------------------------------------------------------

    @property
    def is_laurent(self) -> bool:
        return self.den is None

    def __bool__(self) -> bool:
        return bool(self.num)

    def _lift(self, D: int):
        f = D // self.D
        den = self.den
        return _prescale(self.num, f), (None if den is None else _prescale(den, f))

    def _common(self, other: "ExactScalar"):
        if self.D == other.D:
            return self.D, self.num, self.den, other.num, other.den
        D = lcm(self.D, other.D)
        a, ad = self._lift(D)
        b, bd = other._lift(D)
        return D, a, ad, b, bd

    def terms(self):
        """Numerator terms as sorted ``(exponent_in_q, coefficient)`` pairs."""
        return [(Fraction(e, self.D), c) for e, c in sorted(self.num.items())]

    def exponent_denominator(self) -> int:
        return self.D

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, ExactScalar):
            if isinstance(other, (int, Fraction)):
                other = ExactScalar.coerce(other)
            else:
                return NotImplemented
        if not other.num:
            return self
        if not self.num:
            return other
        D, a, ad, b, bd = self._common(other)
        if ad is None and bd is None:
            s = _padd(a, b)
            if not s:
                return ZERO
            return ExactScalar._min_D(s, None, D)
        if ad is None:
            return ExactScalar._build(_padd(_pmul(a, bd), b), bd, D)
        if bd is None:
            return ExactScalar._build(_padd(a, _pmul(b, ad)), ad, D)
        if ad == bd:
            return ExactScalar._build(_padd(a, b), ad, D)
        return ExactScalar._build(_padd(_pmul(a, bd), _pmul(b, ad)), _pmul(ad, bd), D)

    __radd__ = __add__

    def __neg__(self):
        return ExactScalar._raw({e: -c for e, c in self.num.items()}, self.den, self.D)

    def __sub__(self, other):
        if not isinstance(other, ExactScalar):
            if isinstance(other, (int, Fraction)):
                other = ExactScalar.coerce(other)
            else:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, ExactScalar):
            if isinstance(other, (int, Fraction)):
                if not other:
                    return ZERO
                if other == 1:
                    return self
                other = _clean(other)
                return ExactScalar._raw({e: _clean(c * other) for e, c in self.num.items()}, self.den, self.D)
            return NotImplemented
        if not self.num or not other.num:
            return ZERO
        D, a, ad, b, bd = self._common(other)
        num = _pmul(a, b)
        if ad is None and bd is None:
            return ExactScalar._min_D(num, None, D)
        if ad is None:
            den = bd
        elif bd is None:
            den = ad
        else:
            den = _pmul(ad, bd)
        return ExactScalar._build(num, den, D)

    __rmul__ = __mul__

    def inverse(self) -> "ExactScalar":
        if not self.num:
            raise ZeroDivisionError("inverse of zero")
        return ExactScalar._build(dict(self.den) if self.den is not None else {0: 1}, dict(self.num), self.D)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division by zero")
            f = Fraction(1, 1) / other
            return self * _clean(f)
        if not isinstance(other, ExactScalar):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return ExactScalar.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ExactScalar.coerce(other)
        if not isinstance(other, ExactScalar):
            return NotImplemented
        D, a, ad, b, bd = self._common(other)
        lhs = a if bd is None else _pmul(a, bd)
        rhs = b if ad is None else _pmul(b, ad)
        return lhs == rhs

    __hash__ = None  # type: ignore[assignment]

    # -- transformations --------------------------------------------------

    def bar(self) -> "ExactScalar":
        """Image under the involution ``q -> q^{-1}``."""
        num = {-e: c for e, c in self.num.items()}
        den = None if self.den is None else {-e: c for e, c in self.den.items()}
        return ExactScalar._build(num, den, self.D)

    def at_one(self) -> Fraction:
        """Exact value at ``q = 1``."""
        n = sum(self.num.values(), Fraction(0))
        if self.den is None:
            return n
        d = sum(self.den.values(), Fraction(0))
        if not d:
            raise PoleError("denominator vanishes at q = 1")
        return n / d

    def evaluate(self, q_value=None, *, log_q=None) -> complex:
        return evaluate(self, q_value, log_q=log_q)

    # -- text -------------------------------------------------------------

    @staticmethod
    def _poly_text(p: Poly, D: int) -> str:
        if not p:
            return "0"
        return " + ".join(f"{c}*q^({e}/{D})" for e, c in sorted(p.items()))

    def to_text(self) -> str:
        """Canonical ``c*q^(p/D)`` serialisation, terms sorted by exponent."""
        if self.den is None:
            return self._poly_text(self.num, self.D)
        return f"({self._poly_text(self.num, self.D)})/({self._poly_text(self.den, self.D)})"

    def __repr__(self) -> str:
        return f"ExactScalar({self.to_text()})"

    __str__ = to_text


ZERO = ExactScalar._raw({}, None, 1)
ONE = ExactScalar._raw({0: 1}, None, 1)


def q_power(p) -> ExactScalar:
    """The monomial ``q^p`` for rational ``p``."""
    p = Fraction(p)
    return ExactScalar._min_D({p.numerator: 1}, None, p.denominator)


Q = q_power(1)


def qnumber(n: int) -> ExactScalar:
    """Symmetric q-integer ``[n] = (q^n - q^-n)/(q - q^-1)``."""
    if n == 0:
        return ZERO
    sign = 1 if n > 0 else -1
    n = abs(n)
    return ExactScalar._raw({e: sign for e in range(n - 1, -n, -2)}, None, 1)


_FACT_CACHE = {0: ONE}


def qfactorial(n: int) -> ExactScalar:
    if n < 0:
        raise ValueError("qfactorial of a negative integer")
    if n not in _FACT_CACHE:
        _FACT_CACHE[n] = qfactorial(n - 1) * qnumber(n)
    return _FACT_CACHE[n]


def qbinomial(n: int, k: int) -> ExactScalar:
    """Gaussian binomial ``[n]! / ([k]! [n-k]!)``; zero outside ``0 <= k <= n``."""
    if n < 0:
        raise ValueError("qbinomial needs n >= 0")
    if k < 0 or k > n:
        return ZERO
    return qfactorial(n) / (qfactorial(k) * qfactorial(n - k))


def qexp_nilpotent(A, variant: str = "q"):
    """Truncated ``exp_q(A) = sum_n q^{n(n-1)/2} A^n/[n]!`` of a nilpotent operator.

    ``variant`` is ``"q"`` or ``"qinv"`` (the latter uses ``q^{-n(n-1)/2}``).
    """
    from .sparse import SparseOperator

    if variant not in ("q", "qinv"):
        raise ValueError(f"unknown q-exponential variant {variant!r}")
    sign = 1 if variant == "q" else -1
    result = SparseOperator.identity(A.basis, one=ONE)
    power = A
    n = 1
    while not power.is_zero():
        if n > len(A.basis):
            raise NonNilpotentError(
                f"operator is not nilpotent within dimension {len(A.basis)}"
            )
        coeff = q_power(Fraction(sign * n * (n - 1), 2)) / qfactorial(n)
        result = result + power.scale(coeff)
        power = power @ A
        n += 1
    return result


def _eval_poly(p: Poly, u: complex) -> complex:
    return sum(complex(c) * u ** e for e, c in p.items())


def evaluate(s, q_value=None, *, log_q=None) -> complex:
    """Numeric value of ``s``.

    With ``log_q`` given, ``u = exp(log_q / D)``; otherwise ``u`` is the
    principal ``D``-th root of ``q_value``.
    """
    if isinstance(s, (int, Fraction)):
        return complex(s)
    if log_q is not None:
        u = cmath.exp(complex(log_q) / s.D)
    else:
        if q_value is None:
            raise ValueError("need q_value or log_q")
        q_value = complex(q_value)
        if q_value == 0:
            raise PoleError("q = 0")
        u = cmath.exp(cmath.log(q_value) / s.D)
    num = _eval_poly(s.num, u)
    if s.den is None:
        return num
    den = _eval_poly(s.den, u)
    if abs(den) < 1e-300:
        raise PoleError(f"denominator vanishes at q = {q_value if log_q is None else cmath.exp(log_q)}")
    return num / den
