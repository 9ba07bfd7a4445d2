"""Truncated series indexed by dimension vectors with the q-twisted product

    t^d * t^e = q^(-<d, e>) t^(d + e).

A series stores coefficients for every e <= bound (componentwise), optionally
only on the slope class of a fixed stability, which is closed under addition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional

from quivercount.arith import ONE, ZERO, RationalFunction, as_ratfun
from quivercount.quiver import (
    DimVector,
    Quiver,
    Stability,
    enumerate_below,
    euler_form,
    in_slope_class,
    leq,
    sub,
    total_dim,
)

SlopeRestriction = Optional[tuple[Stability, Fraction]]


@dataclass(frozen=True)
class TwistedSeries:
    quiver: Quiver
    bound: DimVector
    coeffs: Mapping[DimVector, RationalFunction] = field(default_factory=dict)
    restriction: SlopeRestriction = None

    def __post_init__(self):
        self.quiver.check(self.bound)
        clean = {}
        for key, value in self.coeffs.items():
            key = tuple(key)
            if not leq(key, self.bound):
                raise ValueError(f"key {key} exceeds truncation bound {self.bound}")
            if self.restriction is not None and total_dim(key) > 0:
                theta, mu = self.restriction
                if not in_slope_class(theta, mu, key):
                    raise ValueError(f"key {key} lies outside the slope class {mu}")
            value = as_ratfun(value)
            if not value.is_zero():
                clean[key] = value
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def one(cls, quiver: Quiver, bound: DimVector, restriction: SlopeRestriction = None):
        return cls(quiver, bound, {(0,) * quiver.n: ONE}, restriction)

    def index_set(self) -> list[DimVector]:
        if self.restriction is None:
            return enumerate_below(self.bound)
        theta, mu = self.restriction
        return enumerate_below(self.bound, theta, mu)

    def __getitem__(self, d: DimVector) -> RationalFunction:
        return coefficient(self, d)

    def __mul__(self, other: "TwistedSeries") -> "TwistedSeries":
        return twisted_mul(self, other)

    def __eq__(self, other):
        if not isinstance(other, TwistedSeries):
            return NotImplemented
        return (
            self.quiver == other.quiver
            and self.bound == other.bound
            and self.restriction == other.restriction
            and self.coeffs == other.coeffs
        )


def coefficient(a: TwistedSeries, d: DimVector) -> RationalFunction:
    d = tuple(d)
    if not leq(d, a.bound):
        raise IndexError(f"{d} lies beyond the truncation bound {a.bound}")
    return a.coeffs.get(d, ZERO)


def _check_compatible(a: TwistedSeries, b: TwistedSeries) -> None:
    if a.quiver != b.quiver or a.bound != b.bound or a.restriction != b.restriction:
        raise ValueError("series live in different truncated rings")


def twisted_mul(a: TwistedSeries, b: TwistedSeries) -> TwistedSeries:
    _check_compatible(a, b)
    out: dict[DimVector, RationalFunction] = {}
    for d, x in a.coeffs.items():
        for e, y in b.coeffs.items():
            f = tuple(u + v for u, v in zip(d, e))
            if not leq(f, a.bound):
                continue
            term = RationalFunction.q_power(-euler_form(a.quiver, d, e)) * x * y
            out[f] = out.get(f, ZERO) + term
    return TwistedSeries(a.quiver, a.bound, out, a.restriction)


def invert(a: TwistedSeries) -> TwistedSeries:
    """Inverse via beta_0 = 1, beta_d = -sum_{e < d} q^<e-d, e> alpha_{d-e} beta_e."""
    zero = (0,) * a.quiver.n
    if a.coeffs.get(zero, ZERO) != ONE:
        raise ValueError("series inversion needs constant coefficient 1")
    index = a.index_set()
    beta: dict[DimVector, RationalFunction] = {zero: ONE}
    for d in index[1:]:
        acc = ZERO
        for e, b_e in beta.items():
            if e == d or not leq(e, d):
                continue
            alpha = a.coeffs.get(sub(d, e))
            if alpha is None:
                continue
            acc = acc + RationalFunction.q_power(euler_form(a.quiver, sub(e, d), e)) * alpha * b_e
        if not acc.is_zero():
            beta[d] = -acc
    return TwistedSeries(a.quiver, a.bound, beta, a.restriction)
