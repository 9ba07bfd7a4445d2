"""Quivers, dimension vectors, Euler form, stability and slopes.

Dimension vectors and stabilities are plain tuples of ints aligned with the
quiver's vertex order; ``Quiver.vector`` converts from a vertex mapping.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

DimVector = tuple[int, ...]
Stability = tuple[int, ...]


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[tuple[str, str], ...] = ()
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "arrows", tuple(tuple(a) for a in self.arrows))
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex identifiers")
        index = {v: k for k, v in enumerate(self.vertices)}
        for a in self.arrows:
            if len(a) != 2:
                raise ValueError(f"arrow {a!r} is not a (source, target) pair")
            for end in a:
                if end not in index:
                    raise ValueError(f"arrow {a!r} uses undeclared vertex {end!r}")
        object.__setattr__(self, "_index", index)

    @classmethod
    def loop(cls, m: int) -> "Quiver":
        """One vertex with m loops."""
        return cls(("i",), (("i", "i"),) * m)

    @classmethod
    def kronecker(cls, m: int) -> "Quiver":
        """Two vertices i, j and m parallel arrows i -> j."""
        return cls(("i", "j"), (("i", "j"),) * m)

    @classmethod
    def star(cls, m: int) -> "Quiver":
        """Vertices i0, i1..im with one arrow ik -> i0 for each k >= 1."""
        names = tuple(f"i{k}" for k in range(m + 1))
        return cls(names, tuple((f"i{k}", "i0") for k in range(1, m + 1)))

    @property
    def n(self) -> int:
        return len(self.vertices)

    def index(self, v: str) -> int:
        return self._index[v]

    def arrow_indices(self) -> list[tuple[int, int]]:
        return [(self._index[s], self._index[t]) for s, t in self.arrows]

    def vector(self, values: Mapping[str, int]) -> tuple[int, ...]:
        """Tuple in vertex order; missing vertices default to 0."""
        unknown = set(values) - set(self.vertices)
        if unknown:
            raise ValueError(f"unknown vertices {sorted(unknown)}")
        return tuple(int(values.get(v, 0)) for v in self.vertices)

    def as_mapping(self, d: Sequence[int]) -> dict[str, int]:
        self.check(d)
        return dict(zip(self.vertices, d))

    def check(self, d: Sequence[int]) -> None:
        if len(d) != self.n:
            raise ValueError(f"vector {tuple(d)} does not match {self.n} vertices")

    def rep_dimension(self, d: DimVector) -> int:
        """Affine dimension of R_d: sum over arrows i->j of d_i*d_j."""
        self.check(d)
        return sum(d[s] * d[t] for s, t in self.arrow_indices())


def total_dim(d: Sequence[int]) -> int:
    return sum(d)


def euler_form(quiver: Quiver, d: DimVector, e: DimVector) -> int:
    """<d, e> = sum_i d_i e_i - sum_{arrows i->j} d_i e_j."""
    quiver.check(d)
    quiver.check(e)
    out = sum(x * y for x, y in zip(d, e))
    for s, t in quiver.arrow_indices():
        out -= d[s] * e[t]
    return out


def theta_value(theta: Stability, d: DimVector) -> int:
    if len(theta) != len(d):
        raise ValueError("stability and dimension vector have different lengths")
    return sum(a * b for a, b in zip(theta, d))


def slope(theta: Stability, d: DimVector) -> Fraction:
    n = total_dim(d)
    if n == 0:
        raise ValueError("slope of the zero dimension vector is undefined")
    return Fraction(theta_value(theta, d), n)


def same_slope(theta: Stability, d: DimVector, e: DimVector) -> bool:
    if total_dim(d) == 0 or total_dim(e) == 0:
        raise ValueError("slope comparison with the zero dimension vector")
    return theta_value(theta, d) * total_dim(e) == theta_value(theta, e) * total_dim(d)


def in_slope_class(theta: Stability, mu: Fraction, e: DimVector) -> bool:
    n = total_dim(e)
    return n > 0 and theta_value(theta, e) * mu.denominator == mu.numerator * n


def enumerate_below(
    d0: DimVector,
    theta: Optional[Stability] = None,
    mu: Optional[Fraction] = None,
) -> list[DimVector]:
    """All 0 <= e <= d0, by total dimension then lexicographically.

    With ``theta`` and ``mu`` given, keeps only 0 and vectors of slope mu.
    """
    if (theta is None) != (mu is None):
        raise ValueError("slope restriction needs both theta and mu")
    out = [tuple(e) for e in itertools.product(*(range(x + 1) for x in d0))]
    if theta is not None:
        mu = Fraction(mu)
        out = [e for e in out if total_dim(e) == 0 or in_slope_class(theta, mu, e)]
    out.sort(key=lambda e: (total_dim(e), e))
    return out


def divide_dimvector(d: DimVector, r: int) -> Optional[DimVector]:
    if r < 1:
        raise ValueError("divisor must be positive")
    if all(x % r == 0 for x in d):
        return tuple(x // r for x in d)
    return None


def leq(e: Sequence[int], d: Sequence[int]) -> bool:
    return all(a <= b for a, b in zip(e, d))


def add(d: Sequence[int], e: Sequence[int]) -> DimVector:
    return tuple(a + b for a, b in zip(d, e))


def sub(d: Sequence[int], e: Sequence[int]) -> DimVector:
    return tuple(a - b for a, b in zip(d, e))


def scale(k: int, d: Sequence[int]) -> DimVector:
    return tuple(k * a for a in d)


def zero(n: int) -> DimVector:
    return (0,) * n
