"""Specialized recursion for the m-loop quiver (free algebra on m letters).

For one vertex with m loops the twisted series ring is an ordinary power
series ring once t^d is rescaled by q^((1-m) * binom(d, 2)), so inverses are
given by a closed sum over partitions. Stable summands are indexed by
triples (i, j, k): a stable of dimension i*j whose endomorphism field has
degree j, occurring with multiplicity k.

This module deliberately shares nothing with ``counting`` beyond the scalar
kernel, so the two paths cross-check each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from quivercount.arith import (
    ONE,
    Q,
    ZERO,
    Polynomial,
    RationalFunction,
    divisors,
    moebius_mu,
    partitions_of,
    ratfun_binomial,
)


@dataclass(frozen=True)
class LoopSeries:
    m: int
    bound: int
    coeffs: tuple[RationalFunction, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.bound + 1:
            raise ValueError("LoopSeries needs bound + 1 coefficients")


def untwist(m: int, d: int) -> RationalFunction:
    """Scale factor q^((1-m) * binom(d, 2)) identifying t^d with an ordinary power."""
    return RationalFunction.q_power((1 - m) * (d * (d - 1) // 2))


def partition_inverse(a: LoopSeries) -> LoopSeries:
    """(1 + sum a_d t^d)^-1 in the ordinary power series ring, by partitions."""
    if a.coeffs[0] != ONE:
        raise ValueError("partition_inverse needs constant coefficient 1")
    out = [ONE]
    for d in range(1, a.bound + 1):
        total = ZERO
        for lam in partitions_of(d):
            term = RationalFunction(lam.multinomial() * (-1) ** lam.length)
            for part in lam.parts:
                term = term * a.coeffs[part]
                if term.is_zero():
                    break
            total = total + term
        out.append(total)
    return LoopSeries(a.m, a.bound, tuple(out))


def _rep_over_group(m: int, n: int) -> RationalFunction:
    """Untwisted |R_n|/|G_n| = q^(m binom(n+1, 2)) / prod_{j=1..n} (q^j - 1)."""
    den = Polynomial([1])
    for j in range(1, n + 1):
        den = den * (Polynomial.monomial(j) - 1)
    return RationalFunction(Polynomial.monomial(m * n * (n + 1) // 2), den)


@lru_cache(maxsize=None)
def _inverse_coefficients(m: int, bound: int) -> tuple[RationalFunction, ...]:
    series = LoopSeries(m, bound, tuple([ONE] + [_rep_over_group(m, n) for n in range(1, bound + 1)]))
    inv = partition_inverse(series)
    # back to the twisted basis: t^d = q^((m-1) binom(d,2)) * (ordinary t^d)
    return tuple(c * untwist(m, d).inverse() for d, c in enumerate(inv.coeffs))


def _triples(d: int) -> list[tuple[int, int, int]]:
    return [
        (i, j, k)
        for i in range(1, d + 1)
        for j in range(1, d // i + 1)
        for k in range(1, d // (i * j) + 1)
    ]


def _xi_functions(d: int):
    """Multisets of triples (i, j, k) with sum of i*j*k equal to d."""
    triples = _triples(d)

    def rec(pos: int, rem: int):
        if rem == 0:
            yield {}
            return
        if pos == len(triples):
            return
        t = triples[pos]
        w = t[0] * t[1] * t[2]
        for count in range(rem // w + 1):
            for rest in rec(pos + 1, rem - count * w):
                if count:
                    rest = dict(rest)
                    rest[t] = count
                yield rest

    yield from rec(0, d)


@lru_cache(maxsize=None)
def _pochhammer_reciprocal(j: int, k: int) -> RationalFunction:
    den = Polynomial([1])
    for l in range(1, k + 1):
        den = den * (1 - Polynomial.monomial(l * j))
    return RationalFunction(1, den)


@lru_cache(maxsize=None)
def _stables_with_field_degree(i: int, j: int, m: int) -> RationalFunction:
    """(1/j) sum_{r|j} mu(j/r) A_i(q^r)."""
    a = free_algebra_poly(i, m)
    out = ZERO
    for r in divisors(j):
        out = out + a.compose_power(r) * moebius_mu(j // r)
    return out * Fraction(1, j)


@lru_cache(maxsize=None)
def free_algebra_poly(d: int, m: int) -> RationalFunction:
    """A_d for the m-loop quiver (absolutely simple d-dim reps of a free algebra)."""
    if d < 1 or m < 1:
        raise ValueError("free_algebra_poly needs d >= 1 and m >= 1")
    beta = _inverse_coefficients(m, d)[d]
    rest = ZERO
    for xi in _xi_functions(d):
        if xi == {(d, 1, 1): 1}:
            continue
        term = ONE
        by_ij: dict[tuple[int, int], int] = {}
        for (i, j, k), v in xi.items():
            term = term * _pochhammer_reciprocal(j, k) ** v * Fraction(1, math.factorial(v))
            by_ij[(i, j)] = by_ij.get((i, j), 0) + v
        for (i, j), n in by_ij.items():
            term = term * ratfun_binomial(_stables_with_field_degree(i, j, m), n) * math.factorial(n)
            if term.is_zero():
                break
        rest = rest + term
    return (1 - Q) * (beta - rest)


def kac_euler_prediction(d: int, m: int) -> Fraction:
    """(1/d) sum_{r|d} mu(d/r) m^r: number of aperiodic necklaces of length d on m letters."""
    if d < 1:
        raise ValueError("d must be positive")
    return Fraction(sum(moebius_mu(d // r) * m ** r for r in divisors(d)), d)
