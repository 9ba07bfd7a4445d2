"""Brute-force ground truth over small prime fields.

Enumerates R_d(F_p), splits it into G_d(F_p)-orbits, and classifies every
orbit by exhaustive search over subrepresentations. Points are indexed by
reading all matrix entries (arrows in quiver order, each matrix row-major)
as base-p digits, most significant first, so index order is lexicographic
order of entries.

A stable representation has a finite field as endomorphism ring, so its
stabilizer (= automorphism group) has order p^r - 1 where r is the degree
of that field over F_p; absolutely stable means r = 1.
"""

from __future__ import annotations

import csv
import enum
import io
import itertools
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

import numpy as np

from quivercount.quiver import DimVector, Quiver, Stability, total_dim

DEFAULT_POINT_BUDGET = 2 ** 24
SUBSPACE_BUDGET = 10 ** 6


class BudgetExceeded(RuntimeError):
    pass


class Classification(str, enum.Enum):
    UNSTABLE = "unstable"
    SEMISTABLE = "semistable-not-stable"
    STABLE = "stable"


def point_budget() -> int:
    """Point budget, overridable through QUIVERCOUNT_BUDGET."""
    raw = os.environ.get("QUIVERCOUNT_BUDGET")
    return int(raw) if raw else DEFAULT_POINT_BUDGET


def _check_prime(p: int) -> None:
    if p < 2 or any(p % k == 0 for k in range(2, int(p ** 0.5) + 1)):
        raise ValueError(f"{p} is not prime")


@dataclass(frozen=True, eq=False)
class FiniteRepresentation:
    quiver: Quiver
    dim: DimVector
    p: int
    matrices: tuple[np.ndarray, ...]

    def __post_init__(self):
        arrows = self.quiver.arrow_indices()
        if len(self.matrices) != len(arrows):
            raise ValueError("one matrix per arrow required")
        for (s, t), mat in zip(arrows, self.matrices):
            if mat.shape != (self.dim[t], self.dim[s]):
                raise ValueError(f"matrix shape {mat.shape} does not match arrow {s}->{t}")

    @classmethod
    def from_index(cls, quiver: Quiver, d: DimVector, p: int, index: int) -> "FiniteRepresentation":
        n = quiver.rep_dimension(d)
        digits = []
        for _ in range(n):
            index, r = divmod(index, p)
            digits.append(r)
        digits.reverse()
        return cls(quiver, tuple(d), p, _split(quiver, d, np.array(digits, dtype=np.int64)))

    @property
    def index(self) -> int:
        out = 0
        for mat in self.matrices:
            for x in mat.reshape(-1):
                out = out * self.p + int(x)
        return out

    def act(self, g: tuple[np.ndarray, ...]) -> "FiniteRepresentation":
        """(g_i) . (M_a) = (g_j M_a g_i^-1)."""
        inv = [_inverse_mod(x, self.p) for x in g]
        mats = tuple(
            (g[t] @ mat @ inv[s]) % self.p
            for (s, t), mat in zip(self.quiver.arrow_indices(), self.matrices)
        )
        return FiniteRepresentation(self.quiver, self.dim, self.p, mats)


def _split(quiver: Quiver, d: DimVector, digits: np.ndarray) -> tuple[np.ndarray, ...]:
    out = []
    pos = 0
    for s, t in quiver.arrow_indices():
        size = d[t] * d[s]
        out.append(digits[pos:pos + size].reshape(d[t], d[s]))
        pos += size
    return tuple(out)


def enumerate_reps(
    quiver: Quiver, d: DimVector, p: int, budget: Optional[int] = None
) -> Iterator[FiniteRepresentation]:
    """Every point of R_d(F_p) once, in lexicographic entry order."""
    _check_prime(p)
    n_points = p ** quiver.rep_dimension(d)
    budget = point_budget() if budget is None else budget
    if n_points > budget:
        raise BudgetExceeded(f"{n_points} points exceed the budget {budget}")
    for idx in range(n_points):
        yield FiniteRepresentation.from_index(quiver, d, p, idx)


# linear algebra mod p


def _inverse_mod(a: np.ndarray, p: int) -> np.ndarray:
    n = a.shape[0]
    m = np.concatenate([a % p, np.eye(n, dtype=np.int64)], axis=1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r, col] % p), None)
        if pivot is None:
            raise ValueError("matrix is singular mod p")
        m[[col, pivot]] = m[[pivot, col]]
        m[col] = (m[col] * pow(int(m[col, col]), -1, p)) % p
        for r in range(n):
            if r != col and m[r, col]:
                m[r] = (m[r] - m[r, col] * m[col]) % p
    return m[:, n:]


def _rank_mod(a: np.ndarray, p: int) -> int:
    m = a.copy() % p
    rank = 0
    rows, cols = m.shape
    for col in range(cols):
        pivot = next((r for r in range(rank, rows) if m[r, col]), None)
        if pivot is None:
            continue
        m[[rank, pivot]] = m[[pivot, rank]]
        m[rank] = (m[rank] * pow(int(m[rank, col]), -1, p)) % p
        for r in range(rows):
            if r != rank and m[r, col]:
                m[r] = (m[r] - m[r, col] * m[rank]) % p
        rank += 1
    return rank


@lru_cache(maxsize=None)
def gl_elements(n: int, p: int) -> tuple[np.ndarray, ...]:
    """All invertible n x n matrices over F_p."""
    out = []
    for entries in itertools.product(range(p), repeat=n * n):
        a = np.array(entries, dtype=np.int64).reshape(n, n)
        if _rank_mod(a, p) == n:
            out.append(a)
    return tuple(out)


def group_order(d: DimVector, p: int) -> int:
    out = 1
    for n in d:
        for i in range(n):
            out *= p ** n - p ** i
    return out


def _group_mod_scalars(d: DimVector, p: int) -> list[tuple[np.ndarray, ...]]:
    """One element of G_d(F_p) per coset of the (trivially acting) scalars.

    The coset representative has the first entry of its first nonempty
    factor equal to 1 whenever that entry is nonzero, else the first
    nonzero entry.
    """
    factors = [gl_elements(n, p) if n else (np.zeros((0, 0), dtype=np.int64),) for n in d]
    lead = next((k for k, n in enumerate(d) if n), None)
    out = []
    for combo in itertools.product(*factors):
        if lead is not None:
            flat = combo[lead].reshape(-1)
            first = next(int(x) for x in flat if x)
            if first != 1:
                continue
        out.append(combo)
    return out


# subspaces and stability


@dataclass(frozen=True)
class Subspace:
    basis: tuple[tuple[int, ...], ...]
    members: frozenset

    @property
    def dim(self) -> int:
        return len(self.basis)


@lru_cache(maxsize=None)
def subspaces(n: int, p: int) -> tuple[Subspace, ...]:
    """All subspaces of F_p^n, one per reduced row-echelon form."""
    out = []
    for k in range(n + 1):
        for pivots in itertools.combinations(range(n), k):
            free = [
                (r, c) for r in range(k) for c in range(pivots[r] + 1, n) if c not in pivots
            ]
            for values in itertools.product(range(p), repeat=len(free)):
                rows = [[0] * n for _ in range(k)]
                for r, c in enumerate(pivots):
                    rows[r][c] = 1
                for (r, c), v in zip(free, values):
                    rows[r][c] = v
                basis = tuple(tuple(row) for row in rows)
                members = set()
                for coeffs in itertools.product(range(p), repeat=k):
                    members.add(
                        tuple(sum(a * row[c] for a, row in zip(coeffs, basis)) % p for c in range(n))
                    )
                out.append(Subspace(basis, frozenset(members)))
    return tuple(out)


def subrepresentation_dims(rep: FiniteRepresentation) -> Iterator[DimVector]:
    """Dimension vectors of all subrepresentations (with repetition)."""
    quiver, d, p = rep.quiver, rep.dim, rep.p
    choices = [subspaces(n, p) for n in d]
    size = 1
    for c in choices:
        size *= len(c)
    if size > SUBSPACE_BUDGET:
        raise BudgetExceeded(f"{size} subspace tuples exceed the budget {SUBSPACE_BUDGET}")
    arrows = list(zip(quiver.arrow_indices(), rep.matrices))
    # arrows checkable once both endpoints are chosen, in vertex order
    ready = [[] for _ in d]
    for (s, t), mat in arrows:
        ready[max(s, t)].append((s, t, mat))

    def closed(s, t, mat, chosen) -> bool:
        target = chosen[t].members
        for b in chosen[s].basis:
            image = tuple(int(x) for x in (mat @ np.array(b, dtype=np.int64)) % p)
            if image not in target:
                return False
        return True

    def rec(v: int, chosen: list) -> Iterator[DimVector]:
        if v == len(d):
            yield tuple(u.dim for u in chosen)
            return
        for u in choices[v]:
            chosen.append(u)
            if all(closed(s, t, mat, chosen) for s, t, mat in ready[v]):
                yield from rec(v + 1, chosen)
            chosen.pop()

    yield from rec(0, [])


def is_semistable(rep: FiniteRepresentation, theta: Stability) -> Classification:
    d = rep.dim
    n = total_dim(d)
    if n == 0:
        raise ValueError("stability of the zero representation is undefined")
    th = sum(a * b for a, b in zip(theta, d))
    stable = True
    for e in subrepresentation_dims(rep):
        k = total_dim(e)
        if k == 0 or e == d:
            continue
        # compare theta(e)/k with th/n
        lhs = sum(a * b for a, b in zip(theta, e)) * n
        rhs = th * k
        if lhs > rhs:
            return Classification.UNSTABLE
        if lhs == rhs:
            stable = False
    return Classification.STABLE if stable else Classification.SEMISTABLE


# orbit census


@dataclass(frozen=True)
class CensusEntry:
    representative: FiniteRepresentation
    orbit_size: int
    stabilizer_order: int
    classification: Classification


@dataclass(frozen=True)
class OrbitCensus:
    quiver: Quiver
    dim: DimVector
    p: int
    theta: Stability
    group_order: int
    entries: tuple[CensusEntry, ...]

    @property
    def n_points(self) -> int:
        return self.p ** self.quiver.rep_dimension(self.dim)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["orbit_representative_index", "orbit_size", "stabilizer_order", "classification"])
        for e in self.entries:
            writer.writerow([e.representative.index, e.orbit_size, e.stabilizer_order, e.classification.value])
        return buf.getvalue()


def _action_matrices(quiver: Quiver, d: DimVector, p: int) -> np.ndarray:
    """Stacked transposed linear maps of G_d / scalars on the entry vector.

    vec(g_t M g_s^-1) = (g_t kron g_s^-T) vec(M) for row-major vec, so the
    action of each group element is block diagonal over the arrows.
    """
    n_entries = quiver.rep_dimension(d)
    maps = []
    for g in _group_mod_scalars(d, p):
        ginv = [_inverse_mod(x, p) if x.size else x for x in g]
        lin = np.zeros((n_entries, n_entries), dtype=np.int64)
        pos = 0
        for s, t in quiver.arrow_indices():
            size = d[t] * d[s]
            if size:
                lin[pos:pos + size, pos:pos + size] = np.kron(g[t], ginv[s].T) % p
            pos += size
        maps.append(lin.T)
    return np.concatenate(maps, axis=1) if n_entries else np.zeros((0, 0), dtype=np.int64)


def orbit_representatives(
    quiver: Quiver, d: DimVector, p: int, budget: Optional[int] = None
) -> np.ndarray:
    """For every point index, the least index in its G_d(F_p)-orbit.

    Orbits are swept in index order; the first unvisited point is the least
    element of a new orbit, whose members are its images under the group.
    """
    _check_prime(p)
    d = tuple(d)
    n_entries = quiver.rep_dimension(d)
    n_points = p ** n_entries
    budget = point_budget() if budget is None else budget
    if n_points > budget:
        raise BudgetExceeded(f"{n_points} points exceed the budget {budget}")
    if group_order(d, p) > budget:
        raise BudgetExceeded(f"|G_d| = {group_order(d, p)} exceeds the budget {budget}")
    reps = np.full(n_points, -1, dtype=np.int64)
    if n_entries == 0:
        reps[:] = 0
        return reps
    stacked = _action_matrices(quiver, d, p)
    weights = np.array([p ** k for k in range(n_entries - 1, -1, -1)], dtype=np.int64)
    for x in range(n_points):
        if reps[x] >= 0:
            continue
        digits = (x // weights) % p
        images = ((digits @ stacked) % p).reshape(-1, n_entries) @ weights
        reps[images] = x
    return reps


def orbit_census(
    quiver: Quiver,
    d: DimVector,
    p: int,
    theta: Stability,
    budget: Optional[int] = None,
    check_invariance: bool = True,
) -> OrbitCensus:
    d = tuple(d)
    theta = tuple(theta)
    quiver.check(d)
    quiver.check(theta)
    reps = orbit_representatives(quiver, d, p, budget)
    g_order = group_order(d, p)
    labels, sizes = np.unique(reps, return_counts=True)
    probe = _group_mod_scalars(d, p)[-1]
    entries = []
    for label, size in zip(labels.tolist(), sizes.tolist()):
        if g_order % size:
            raise AssertionError(f"orbit size {size} does not divide |G_d| = {g_order}")
        rep = FiniteRepresentation.from_index(quiver, d, p, label)
        if total_dim(d) == 0:
            cls = Classification.STABLE
        else:
            cls = is_semistable(rep, theta)
            if check_invariance and is_semistable(rep.act(probe), theta) is not cls:
                raise AssertionError(f"classification not constant on orbit of {label}")
        entries.append(CensusEntry(rep, size, g_order // size, cls))
    if sum(e.orbit_size for e in entries) != p ** quiver.rep_dimension(d):
        raise AssertionError("orbits do not partition R_d")
    return OrbitCensus(quiver, d, p, theta, g_order, tuple(entries))


def measure_s_dr(census: OrbitCensus, r: int) -> int:
    """Stable orbits whose endomorphism field has degree r over F_p."""
    target = census.p ** r - 1
    return sum(
        1
        for e in census.entries
        if e.classification is Classification.STABLE and e.stabilizer_order == target
    )


def count_absolutely_stable(census: OrbitCensus, p: Optional[int] = None) -> int:
    if p is not None and p != census.p:
        raise ValueError("prime does not match the census")
    return measure_s_dr(census, 1)


def count_semistable_points(census: OrbitCensus) -> int:
    return sum(
        e.orbit_size for e in census.entries if e.classification is not Classification.UNSTABLE
    )
