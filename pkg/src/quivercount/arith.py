"""Exact scalar kernel: polynomials and rational functions in one variable,
q-combinatorics, partitions and the number-theoretic Moebius function.

The indeterminate is called ``q`` in formulas (finite field size) and is
rendered as ``t`` in output; they are the same formal variable.

Polynomial arithmetic is delegated to FLINT's ``fmpq_poly``; the classes
here fix a canonical form and an immutable value interface on top of it.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Sequence, Union

from flint import fmpq, fmpq_poly

Scalar = Union[int, Fraction]


def _to_fmpq(x) -> fmpq:
    if isinstance(x, fmpq):
        return x
    if isinstance(x, int):
        return fmpq(x)
    x = Fraction(x)
    return fmpq(x.numerator, x.denominator)


def _to_fraction(c: fmpq) -> Fraction:
    return Fraction(int(c.p), int(c.q))


class Polynomial:
    """Immutable univariate polynomial with exact rational coefficients.

    ``Polynomial([c0, c1, ...])`` holds ``c0 + c1*q + ...``; trailing zeros
    are stripped so the zero polynomial has an empty coefficient list.
    """

    __slots__ = ("_p",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        coeffs = list(coeffs)
        self._p = fmpq_poly([_to_fmpq(c) for c in coeffs]) if coeffs else fmpq_poly()

    @classmethod
    def _wrap(cls, p: fmpq_poly) -> "Polynomial":
        obj = cls.__new__(cls)
        obj._p = p
        return obj

    @classmethod
    def monomial(cls, k: int, c: Scalar = 1) -> "Polynomial":
        if k < 0:
            raise ValueError("negative exponent in a polynomial monomial")
        return cls([0] * k + [c])

    @classmethod
    def constant(cls, c: Scalar) -> "Polynomial":
        return cls([c])

    @property
    def coeffs(self) -> list[Fraction]:
        return [_to_fraction(c) for c in self._p.coeffs()]

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return self._p.degree()

    def is_zero(self) -> bool:
        return self._p.degree() < 0

    def is_integral(self) -> bool:
        return int(self._p.denom()) == 1

    def integer_coeffs(self) -> list[int]:
        if not self.is_integral():
            raise ValueError(f"non-integer coefficients in {self}")
        return [int(c.p) for c in self._p.coeffs()]

    def leading_coefficient(self) -> Fraction:
        if self.is_zero():
            return Fraction(0)
        return _to_fraction(self._p.coeffs()[-1])

    def __call__(self, x: Scalar) -> Fraction:
        return _to_fraction(self._p(_to_fmpq(x)))

    def compose_power(self, s: int) -> "Polynomial":
        """Substitute q -> q**s."""
        if s < 1:
            raise ValueError("compose_power requires s >= 1")
        if s == 1 or self.degree <= 0:
            return self
        cs = self._p.coeffs()
        out = [fmpq(0)] * ((len(cs) - 1) * s + 1)
        for i, c in enumerate(cs):
            out[i * s] = c
        return Polynomial._wrap(fmpq_poly(out))

    def __add__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return Polynomial._wrap(self._p + other._p)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._wrap(-self._p)

    def __sub__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return Polynomial._wrap(self._p - other._p)

    def __rsub__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return Polynomial._wrap(other._p - self._p)

    def __mul__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return Polynomial._wrap(self._p * other._p)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        return Polynomial._wrap(self._p ** n)

    def __divmod__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        quo, rem = divmod(self._p, other._p)
        return Polynomial._wrap(quo), Polynomial._wrap(rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __truediv__(self, other):
        return RationalFunction(self, other)

    def gcd(self, other: "Polynomial") -> "Polynomial":
        """Monic gcd (zero if both are zero)."""
        return Polynomial._wrap(self._p.gcd(other._p))

    def __eq__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self._p == other._p

    def __hash__(self):
        return hash(tuple(self.coeffs))

    def __repr__(self):
        return f"Polynomial({[str(c) for c in self.coeffs]})"

    def __str__(self):
        return format_polynomial(self)


def _as_poly(x):
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, (int, Fraction)):
        return Polynomial([x])
    return NotImplemented


def format_polynomial(p: Polynomial, var: str = "t") -> str:
    """Render highest power first, e.g. ``t^5 - t^2`` or ``1/2*t - 3``."""
    terms = []
    cs = p.coeffs
    for k in range(len(cs) - 1, -1, -1):
        c = cs[k]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if k == 0:
            body = str(a)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if a == 1 else f"{a}*{mono}"
        terms.append((sign, body))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


_TERM = re.compile(
    r"^(?:(?P<coef>\d+(?:/\d+)?)(?:\*(?P<v1>[a-z])(?:\^(?P<e1>\d+))?)?"
    r"|(?P<v2>[a-z])(?:\^(?P<e2>\d+))?)$"
)


def parse_polynomial(text: str) -> Polynomial:
    """Inverse of :func:`format_polynomial` (any single-letter variable)."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial string")
    if s[0] not in "+-":
        s = "+" + s
    coeffs: dict[int, Fraction] = {}
    for sign, body in re.findall(r"([+-])([^+-]+)", s):
        m = _TERM.match(body)
        if m is None:
            raise ValueError(f"cannot parse term {body!r} in {text!r}")
        if m.group("v2"):
            c, e = Fraction(1), int(m.group("e2") or 1)
        else:
            c = Fraction(m.group("coef"))
            e = int(m.group("e1") or 1) if m.group("v1") else 0
        if sign == "-":
            c = -c
        coeffs[e] = coeffs.get(e, Fraction(0)) + c
    if "".join(sign + body for sign, body in re.findall(r"([+-])([^+-]+)", s)) != s:
        raise ValueError(f"cannot parse polynomial {text!r}")
    top = max(coeffs)
    return Polynomial([coeffs.get(k, 0) for k in range(top + 1)])


class RationalFunction:
    """Reduced fraction num/den of polynomials with monic denominator.

    Equality of values is equality of representations.
    """

    __slots__ = ("_num", "_den")

    def __init__(self, num=0, den=1):
        num = _as_poly(num)
        den = _as_poly(den)
        if num is NotImplemented or den is NotImplemented:
            raise TypeError("RationalFunction expects polynomial or rational parts")
        self._num, self._den = _normalize(num._p, den._p)

    @classmethod
    def _wrap(cls, num: fmpq_poly, den: fmpq_poly) -> "RationalFunction":
        obj = cls.__new__(cls)
        obj._num, obj._den = num, den
        return obj

    @classmethod
    def q_power(cls, k: int) -> "RationalFunction":
        """q**k for any integer k."""
        mono = fmpq_poly([0] * abs(k) + [1])
        if k >= 0:
            return cls._wrap(mono, _ONE)
        return cls._wrap(_ONE, mono)

    @property
    def num(self) -> Polynomial:
        return Polynomial._wrap(self._num)

    @property
    def den(self) -> Polynomial:
        return Polynomial._wrap(self._den)

    def is_zero(self) -> bool:
        return self._num.degree() < 0

    def is_polynomial(self) -> bool:
        return self._den.degree() == 0

    def __add__(self, other):
        other = _as_rf(other)
        if other is NotImplemented:
            return NotImplemented
        if self._den == other._den:
            return RationalFunction._wrap(*_normalize(self._num + other._num, self._den))
        return RationalFunction._wrap(
            *_normalize(self._num * other._den + other._num * self._den, self._den * other._den)
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction._wrap(-self._num, self._den)

    def __sub__(self, other):
        other = _as_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _as_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _as_rf(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return ZERO
        # cross-cancel before multiplying keeps operands small
        g1 = self._num.gcd(other._den)
        g2 = other._num.gcd(self._den)
        a = self._num // g1 if g1.degree() > 0 else self._num
        b = other._num // g2 if g2.degree() > 0 else other._num
        c = self._den // g2 if g2.degree() > 0 else self._den
        e = other._den // g1 if g1.degree() > 0 else other._den
        num, den = a * b, c * e
        lc = den.coeffs()[-1]
        if lc != 1:
            num, den = num / lc, den / lc
        return RationalFunction._wrap(num, den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise ZeroDivisionError("inverse of the zero rational function")
        return RationalFunction._wrap(*_normalize(self._den, self._num))

    def __truediv__(self, other):
        other = _as_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _as_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RationalFunction._wrap(self._num ** n, self._den ** n)

    def __call__(self, x: Scalar) -> Fraction:
        x = _to_fmpq(x)
        d = self._den(x)
        if d == 0:
            raise ZeroDivisionError(f"pole of {self} at {x}")
        return _to_fraction(self._num(x) / d)

    def compose_power(self, s: int) -> "RationalFunction":
        """Substitute q -> q**s (stays reduced and monic)."""
        return RationalFunction._wrap(
            self.num.compose_power(s)._p, self.den.compose_power(s)._p
        )

    def __eq__(self, other):
        other = _as_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return self._num == other._num and self._den == other._den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RationalFunction({self})"

    def __str__(self):
        if self.is_polynomial():
            return format_polynomial(self.num)
        return f"({format_polynomial(self.num)})/({format_polynomial(self.den)})"


_ONE = fmpq_poly([1])


def _normalize(num: fmpq_poly, den: fmpq_poly) -> tuple[fmpq_poly, fmpq_poly]:
    if den.degree() < 0:
        raise ZeroDivisionError("rational function with zero denominator")
    if num.degree() < 0:
        return fmpq_poly(), _ONE
    if den.degree() > 0:
        g = num.gcd(den)
        if g.degree() > 0:
            num, den = num // g, den // g
    lc = den.coeffs()[-1]
    if lc != 1:
        num, den = num / lc, den / lc
    return num, den


def _as_rf(x):
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, Polynomial):
        return RationalFunction._wrap(x._p, _ONE)
    if isinstance(x, (int, Fraction)):
        return RationalFunction._wrap(fmpq_poly([_to_fmpq(x)]), _ONE)
    return NotImplemented


ZERO = RationalFunction(0)
ONE = RationalFunction(1)
Q = RationalFunction(Polynomial([0, 1]))


def ratfun_arith(a: RationalFunction, b: RationalFunction, op: str) -> RationalFunction:
    """Dispatch on ``op`` in {add, sub, mul, div, neg}; ``neg`` ignores ``b``."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "neg":
        return -a
    raise ValueError(f"unknown operation {op!r}")


def ratfun_eval(f: RationalFunction, x: Scalar) -> Fraction:
    return f(x)


def ratfun_compose_power(f: RationalFunction, s: int) -> RationalFunction:
    return f.compose_power(s)


def ratfun_binomial(f: RationalFunction, n: int) -> RationalFunction:
    """f(f-1)...(f-n+1)/n!"""
    if n < 0:
        raise ValueError("binomial with negative lower entry")
    if n == 0:
        return ONE
    if f.is_zero():
        return ZERO
    if f.is_polynomial():
        p = f._num
        out = p
        for k in range(1, n):
            out = out * (p - k)
        return RationalFunction._wrap(out / math.factorial(n), _ONE)
    # common denominator: prod (num - k*den) / den^n
    num, den = f._num, f._den
    out = num
    for k in range(1, n):
        out = out * (num - den * k)
    return RationalFunction._wrap(*_normalize(out / math.factorial(n), den ** n))


@lru_cache(maxsize=None)
def q_integer(n: int) -> Polynomial:
    """[n]_q = 1 + q + ... + q^(n-1)."""
    return Polynomial([1] * n)


@lru_cache(maxsize=None)
def q_factorial(n: int) -> Polynomial:
    out = Polynomial([1])
    for i in range(1, n + 1):
        out = out * q_integer(i)
    return out


@lru_cache(maxsize=None)
def qbinom(m: int, n: int) -> Polynomial:
    """Gaussian binomial coefficient [m choose n]_q."""
    if n < 0 or m < 0 or n > m:
        raise ValueError(f"qbinom needs 0 <= n <= m, got m={m}, n={n}")
    quo, rem = divmod(q_factorial(m), q_factorial(n) * q_factorial(m - n))
    assert rem.is_zero()
    return quo


def moebius_mu(n: int) -> int:
    if n < 1:
        raise ValueError("Moebius function is defined for n >= 1")
    result = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    if n > 1:
        result = -result
    return result


def divisors(n: int) -> list[int]:
    return [k for k in range(1, n + 1) if n % k == 0]


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        if any(p < 1 for p in self.parts):
            raise ValueError("partition parts must be positive")
        if any(a < b for a, b in zip(self.parts, self.parts[1:])):
            raise ValueError("partition parts must be weakly decreasing")

    @property
    def length(self) -> int:
        return len(self.parts)

    @property
    def weight(self) -> int:
        return sum(self.parts)

    def multiplicities(self) -> dict[int, int]:
        """Part size -> number of occurrences."""
        out: dict[int, int] = {}
        for p in self.parts:
            out[p] = out.get(p, 0) + 1
        return out

    def multinomial(self) -> int:
        """l(lambda)! / prod_i mu_i(lambda)!"""
        out = math.factorial(self.length)
        for k in self.multiplicities().values():
            out //= math.factorial(k)
        return out


def partitions_of(n: int) -> list[Partition]:
    """All partitions of n in lexicographically decreasing order."""
    if n < 0:
        raise ValueError("partitions of a negative integer")
    return [Partition(p) for p in _partitions(n, n)]


def _partitions(n: int, largest: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


def as_ratfun(x: Union[RationalFunction, Polynomial, Scalar]) -> RationalFunction:
    out = _as_rf(x)
    if out is NotImplemented:
        raise TypeError(f"cannot convert {type(x).__name__} to RationalFunction")
    return out


def coefficient_list(p: Polynomial) -> list:
    """Machine form [c0, c1, ...]: ints when integral, else 'a/b' strings."""
    return [int(c) if c.denominator == 1 else str(c) for c in p.coeffs]


def product(factors: Sequence[RationalFunction]) -> RationalFunction:
    out = ONE
    for f in factors:
        out = out * f
    return out
