"""Counting absolutely stable representations over F_q.

Pipeline for a quiver Q, stability theta and target d in the slope class mu:

1. ``ss_ratio(e)`` = |R_e^ss| / |G_e| from the Harder-Narasimhan recursion.
2. ``beta(e)``: coefficients of the inverse of sum_e ss_ratio(e) t^e in the
   twisted series ring restricted to slope mu.
3. ``stable_count(d)``: read the t^d coefficient of the polystable expansion
   of that inverse and solve for the one summand carrying a_d, bottom-up
   over the slope class.
4. ``certify_polynomial`` checks the result lies in Z[t].
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Optional

from quivercount.arith import (
    ONE,
    Q,
    ZERO,
    Polynomial,
    RationalFunction,
    divisors,
    moebius_mu,
    ratfun_binomial,
)
from quivercount.quiver import (
    DimVector,
    Quiver,
    Stability,
    divide_dimvector,
    enumerate_below,
    euler_form,
    in_slope_class,
    leq,
    slope,
    sub,
    total_dim,
)
from quivercount.series import TwistedSeries, invert


class CertificationError(ArithmeticError):
    """A counting function that should lie in Z[t] does not."""

    def __init__(self, value: RationalFunction, reason: str):
        self.value = value
        self.reason = reason
        super().__init__(f"{reason}: {value}")


@lru_cache(maxsize=None)
def gl_order(n: int) -> Polynomial:
    """|GL_n(F_q)| = prod_{i<n} (q^n - q^i)."""
    out = Polynomial([1])
    for i in range(n):
        out = out * (Polynomial.monomial(n) - Polynomial.monomial(i))
    return out


def group_order(d: DimVector) -> Polynomial:
    out = Polynomial([1])
    for x in d:
        out = out * gl_order(x)
    return out


def rd_gd_ratio(quiver: Quiver, d: DimVector) -> RationalFunction:
    """q^(dim R_d) / |G_d|."""
    return RationalFunction(Polynomial.monomial(quiver.rep_dimension(d)), group_order(d))


@dataclass(frozen=True)
class TypeFunction:
    """Finitely supported map (d, r, m) -> multiplicity, stored sorted."""

    support: tuple[tuple[tuple[DimVector, int, int], int], ...]

    @classmethod
    def from_dict(cls, data: dict) -> "TypeFunction":
        items = sorted((k, v) for k, v in data.items() if v)
        for (d, r, m), v in items:
            if total_dim(d) == 0 or r < 1 or m < 1 or v < 0:
                raise ValueError(f"invalid type function key {(d, r, m)}")
            if divide_dimvector(d, r) is None:
                raise ValueError(f"{r} does not divide {d}")
        return cls(tuple(items))

    def as_dict(self) -> dict:
        return dict(self.support)

    @property
    def dim(self) -> DimVector:
        (first, _, _), _ = self.support[0]
        out = [0] * len(first)
        for (d, _, m), v in self.support:
            for k, x in enumerate(d):
                out[k] += m * v * x
        return tuple(out)

    def is_trivial_for(self, d0: DimVector) -> bool:
        """True for the delta function at (d0, 1, 1)."""
        return self.support == (((tuple(d0), 1, 1), 1),)


class _TracedDict(dict):
    """dict recording keys read through ``__getitem__`` while ``trace`` is set."""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.trace: Optional[set] = None

    def __getitem__(self, key):
        if self.trace is not None:
            self.trace.add(key)
        return super().__getitem__(key)


@dataclass
class CountingContext:
    """Memoized state for one (quiver, stability, target) job.

    All vectors touched are <= target; the slope class is that of target.
    """

    quiver: Quiver
    theta: Stability
    target: DimVector
    memo_a: _TracedDict = field(default_factory=_TracedDict, repr=False)
    memo_ss: dict = field(default_factory=dict, repr=False)
    memo_beta: dict = field(default_factory=dict, repr=False)
    memo_s: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.target = tuple(self.target)
        self.theta = tuple(self.theta)
        self.quiver.check(self.target)
        self.quiver.check(self.theta)
        if total_dim(self.target) == 0:
            raise ValueError("target dimension vector must be nonzero")
        self.mu = slope(self.theta, self.target)
        self.zero = (0,) * self.quiver.n

    def in_class(self, e: DimVector) -> bool:
        return in_slope_class(self.theta, self.mu, e)

    def slope_class_below(self, d: DimVector) -> list[DimVector]:
        return enumerate_below(d, self.theta, self.mu)

    def _check_below_target(self, e: DimVector) -> DimVector:
        e = tuple(e)
        if not leq(e, self.target):
            raise ValueError(f"{e} is not below the target {self.target}")
        return e

    # semistable ratios

    def ss_ratio(self, e: DimVector) -> RationalFunction:
        e = self._check_below_target(e)
        if e == self.zero:
            return ONE
        if e not in self.memo_ss:
            self.memo_ss[e] = _hn_semistable_ratio(self.quiver, self.theta, e)
        return self.memo_ss[e]

    # inverse series

    def beta(self, d: DimVector) -> RationalFunction:
        d = self._check_below_target(d)
        if d == self.zero:
            return ONE
        if not self.in_class(d):
            raise ValueError(f"{d} is not of slope {self.mu}")
        if not self.memo_beta:
            index = self.slope_class_below(self.target)
            series = TwistedSeries(
                self.quiver,
                self.target,
                {e: self.ss_ratio(e) for e in index},
                (self.theta, self.mu),
            )
            inv = invert(series)
            self.memo_beta.update({e: inv[e] for e in index})
        return self.memo_beta[d]

    # stable counts

    def s_from_a(self, d: DimVector, r: int) -> RationalFunction:
        """Stable classes of dimension d with endomorphism field of degree r."""
        key = (tuple(d), r)
        if key in self.memo_s:
            return self.memo_s[key]
        base = divide_dimvector(tuple(d), r)
        if base is None:
            return ZERO
        a = self.memo_a[base]
        out = ZERO
        for s in divisors(r):
            mu = moebius_mu(r // s)
            if mu:
                out = out + a.compose_power(s) * mu
        out = out * Fraction(1, r)
        self.memo_s[key] = out
        return out

    def min_field_count(self, d: DimVector) -> RationalFunction:
        """Absolutely stable classes with minimal field of definition F_q."""
        return self.s_from_a(d, 1)

    def stable_count(self, d: DimVector) -> RationalFunction:
        d = self._check_below_target(d)
        if total_dim(d) == 0:
            raise ValueError("stable_count is undefined for the zero vector")
        if not self.in_class(d):
            raise ValueError(f"{d} is not of slope {self.mu}")
        for e in self.slope_class_below(d)[1:]:
            if e not in self.memo_a:
                self._fill(e)
        return self.memo_a[d]

    def _fill(self, d0: DimVector) -> None:
        rest = ZERO
        for xi in enumerate_type_functions(self, d0):
            if xi.is_trivial_for(d0):
                continue
            rest = rest + type_summand(self, xi)
        self.memo_a[d0] = (1 - Q) * (self.beta(d0) - rest)

    def polynomial(self, d: Optional[DimVector] = None) -> Polynomial:
        return certify_polynomial(self.stable_count(self.target if d is None else d))


def _hn_semistable_ratio(quiver: Quiver, theta: Stability, e: DimVector) -> RationalFunction:
    """Alternating sum over HN-type tuples (d^1..d^s) of e.

    Tuples are grown from the front; ``tail(c)`` sums over all tuples that
    continue from the partial sum c, so a first part f contributes
    -q^(-<e-c-f, f>) * |R_f|/|G_f| * tail(c + f).
    """
    mu = slope(theta, e)
    below = [c for c in enumerate_below(e) if total_dim(c) > 0]
    # partial sums strictly between 0 and e must have slope > mu
    admissible = {
        c for c in below if c != e and theta_gt(theta, c, mu)
    }
    tails: dict[DimVector, RationalFunction] = {}
    zero = (0,) * quiver.n
    for c in reversed([zero] + [c for c in below if c in admissible]):
        total = rd_gd_ratio(quiver, sub(e, c))
        for c2 in admissible:
            if c2 == c or not leq(c, c2):
                continue
            f = sub(c2, c)
            twist = RationalFunction.q_power(-euler_form(quiver, sub(e, c2), f))
            total = total - twist * rd_gd_ratio(quiver, f) * tails[c2]
        tails[c] = total
    return tails[zero]


def theta_gt(theta: Stability, c: DimVector, mu: Fraction) -> bool:
    """slope(c) > mu without building a Fraction."""
    n = total_dim(c)
    return sum(a * b for a, b in zip(theta, c)) * mu.denominator > mu.numerator * n


def _atoms(ctx: CountingContext, d0: DimVector) -> list[tuple[DimVector, int, int]]:
    out = []
    for d in ctx.slope_class_below(d0)[1:]:
        for r in divisors(math.gcd(*d)):
            m = 1
            while leq(tuple(m * x for x in d), d0):
                out.append((d, r, m))
                m += 1
    return out


def enumerate_type_functions(ctx: CountingContext, d0: DimVector) -> list[TypeFunction]:
    """All type functions of dimension d0, in a fixed order."""
    d0 = tuple(d0)
    if not ctx.in_class(d0):
        raise ValueError(f"{d0} is not of slope {ctx.mu}")
    atoms = _atoms(ctx, d0)
    weights = [tuple(m * x for x in d) for d, _, m in atoms]
    out = []

    def rec(i: int, rem: DimVector, chosen: list) -> None:
        if not any(rem):
            out.append(TypeFunction.from_dict(dict(chosen)))
            return
        if i == len(atoms):
            return
        w = weights[i]
        count = 0
        cur = rem
        while True:
            rec(i + 1, cur, chosen + ([(atoms[i], count)] if count else []))
            nxt = sub(cur, w)
            if any(x < 0 for x in nxt):
                break
            cur = nxt
            count += 1

    rec(0, d0, [])
    return out


@lru_cache(maxsize=None)
def _gl_reciprocal_factor(r: int, m: int) -> RationalFunction:
    """prod_{i=1..m} (1 - q^(r i))^(-1)."""
    den = Polynomial([1])
    for i in range(1, m + 1):
        den = den * (1 - Polynomial.monomial(r * i))
    return RationalFunction(1, den)


def type_summand(ctx: CountingContext, xi: TypeFunction) -> RationalFunction:
    """N(xi) times the automorphism weights of a polystable of type xi."""
    groups: dict[tuple[DimVector, int], list[int]] = {}
    out = ONE
    for (d, r, m), v in xi.support:
        groups.setdefault((d, r), []).append(v)
        out = out * _gl_reciprocal_factor(r, m) ** v
    for (d, r), counts in groups.items():
        n = sum(counts)
        multinom = math.factorial(n)
        for v in counts:
            multinom //= math.factorial(v)
        out = out * ratfun_binomial(ctx.s_from_a(d, r), n) * multinom
        if out.is_zero():
            return ZERO
    return out


def certify_polynomial(f: RationalFunction) -> Polynomial:
    if not f.is_polynomial():
        raise CertificationError(f, "denominator does not divide numerator")
    p = f.num
    if not p.is_integral():
        raise CertificationError(f, "non-integer coefficients")
    return p


def euler_characteristic(p: Polynomial) -> int:
    value = p(1)
    if value.denominator != 1:
        raise CertificationError(RationalFunction(p), "non-integral value at t=1")
    return int(value)


def counting_polynomial(quiver: Quiver, theta: Stability, d: DimVector) -> Polynomial:
    """Certified A_d(t) for one dimension vector."""
    return CountingContext(quiver, theta, d).polynomial()


def identity_check(ctx: CountingContext, d0: DimVector) -> bool:
    """beta(d0) equals the sum of all type summands of dimension d0."""
    ctx.stable_count(d0)
    total = ZERO
    for xi in enumerate_type_functions(ctx, d0):
        total = total + type_summand(ctx, xi)
    return total == ctx.beta(d0)
