#!/usr/bin/env python3
# file: bin/subspace.py
# Canonical (RREF) subspaces of F_p^n: span, membership, sum, intersection,
# enumeration and constrained linear extension.

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import List, Optional, Sequence, Tuple

from config import ENUM_CAP
from field_core import (
    DomainError,
    NoExtension,
    Point,
    PreconditionError,
    ProblemParams,
    ResourceError,
    point_from_row,
)

Row = Tuple[int, ...]


# ---------- elimination ----------
def _rref(
    rows: Sequence[Sequence[int]], p: int, ncols: Optional[int] = None
) -> Tuple[List[List[int]], List[int]]:
    """Gauss-Jordan over F_p on the first ncols columns.

    Returns the nonzero reduced rows and their pivot columns. Columns past
    ncols ride along (used for tags) but are never pivoted on.
    """
    work = [[c % p for c in r] for r in rows]
    width = len(work[0]) if work else 0
    ncols = width if ncols is None else ncols
    pivots: List[int] = []
    r = 0
    for col in range(ncols):
        if r == len(work):
            break
        pivot = None
        for i in range(r, len(work)):
            if work[i][col]:
                pivot = i
                break
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        inv = pow(work[r][col], -1, p)
        if inv != 1:
            work[r] = [(c * inv) % p for c in work[r]]
        prow = work[r]
        for i in range(len(work)):
            if i != r and work[i][col]:
                k = work[i][col]
                work[i] = [(a - k * b) % p for a, b in zip(work[i], prow)]
        pivots.append(col)
        r += 1
    return work[:r], pivots


# ---------- type ----------
@dataclass(frozen=True)
class Subspace:
    p: int
    n: int
    basis: Tuple[Row, ...]  # RREF rows, pivots strictly increasing

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> Tuple[int, ...]:
        return tuple(next(i for i, c in enumerate(r) if c) for r in self.basis)

    def points(self) -> List[Point]:
        return [point_from_row(r, self.p) for r in self.basis]

    def rows(self) -> List[List[int]]:
        return [list(r) for r in self.basis]

    def __repr__(self) -> str:
        return f"Subspace(p={self.p}, n={self.n}, dim={self.dim}, basis={list(self.basis)})"


def _from_rows(rows: Sequence[Sequence[int]], p: int, n: int) -> Subspace:
    reduced, _ = _rref(rows, p) if rows else ([], [])
    return Subspace(p, n, tuple(tuple(r) for r in reduced))


def zero_subspace(p: int, n: int) -> Subspace:
    return Subspace(p, n, ())


def full_subspace(p: int, n: int) -> Subspace:
    return Subspace(p, n, tuple(tuple(1 if j == i else 0 for j in range(n)) for i in range(n)))


def subspace_from_rows(rows: Sequence[Sequence[int]], p: int, n: int) -> Subspace:
    """Canonicalise raw rows (e.g. read back from a certificate)."""
    for r in rows:
        if len(r) != n or any(c < 0 or c >= p for c in r):
            raise DomainError(f"row {list(r)} is not a vector of F_{p}^{n}")
    return _from_rows(rows, p, n)


def _check(a: Subspace, b: Subspace) -> None:
    if (a.p, a.n) != (b.p, b.n):
        raise DomainError(f"subspaces of different spaces: F_{a.p}^{a.n} vs F_{b.p}^{b.n}")


# ---------- operations ----------
def span(points: Sequence[Point], params: ProblemParams) -> Subspace:
    p, n = params.p, params.n
    for v in points:
        if v.p != p or v.n != n:
            raise DomainError(f"{v!r} is not a point of F_{p}^{n}")
    return _from_rows([v.coords for v in points], p, n)


def _residual(vec: Sequence[int], V: Subspace) -> List[int]:
    p = V.p
    w = [c % p for c in vec]
    for row, piv in zip(V.basis, V.pivots):
        k = w[piv]
        if k:
            w = [(a - k * b) % p for a, b in zip(w, row)]
    return w


def member(v: Point, V: Subspace) -> bool:
    if v.p != V.p or v.n != V.n:
        raise DomainError(f"{v!r} is not a point of F_{V.p}^{V.n}")
    return not any(_residual(v.coords, V))


def contains(A: Subspace, B: Subspace) -> bool:
    """True iff B is a subspace of A."""
    _check(A, B)
    return all(not any(_residual(r, A)) for r in B.basis)


def subspace_sum(A: Subspace, B: Subspace) -> Subspace:
    _check(A, B)
    return _from_rows(list(A.basis) + list(B.basis), A.p, A.n)


def subspace_intersect(A: Subspace, B: Subspace) -> Subspace:
    """Zassenhaus: reduce [a|a] over [b|0]; zero-left rows carry A ∩ B."""
    _check(A, B)
    p, n = A.p, A.n
    if not A.basis or not B.basis:
        return zero_subspace(p, n)
    zeros = (0,) * n
    block = [tuple(a) + tuple(a) for a in A.basis] + [tuple(b) + zeros for b in B.basis]
    reduced, pivots = _rref(block, p)
    inter = [r[n:] for r, piv in zip(reduced, pivots) if piv >= n]
    return _from_rows(inter, p, n)


def _check_enum(V: Subspace, cap: Optional[int]) -> None:
    cap = ENUM_CAP if cap is None else cap
    if V.p**V.dim > cap:
        raise ResourceError(f"p^dim = {V.p}^{V.dim} exceeds enumeration cap {cap}")


def element_rows(V: Subspace, cap: Optional[int] = None) -> List[Tuple[Tuple[int, ...], Row]]:
    """(coefficient vector, element) pairs, coefficient vectors in lexicographic order."""
    _check_enum(V, cap)
    p, n = V.p, V.n
    out = []
    for coeffs in product(range(p), repeat=V.dim):
        acc = [0] * n
        for c, row in zip(coeffs, V.basis):
            if c:
                acc = [(a + c * b) % p for a, b in zip(acc, row)]
        out.append((coeffs, tuple(acc)))
    return out


def enumerate_elements(V: Subspace, cap: Optional[int] = None) -> List[Point]:
    return [point_from_row(row, V.p) for _, row in element_rows(V, cap)]


def _express(basis: Sequence[Sequence[int]], target: Sequence[int], p: int) -> List[int]:
    """Coefficients c with sum(c_j * basis_j) == target; basis must be independent."""
    k = len(basis)
    n = len(target)
    tagged = [list(b) + [1 if j == i else 0 for j in range(k)] for i, b in enumerate(basis)]
    reduced, pivots = _rref(tagged, p, ncols=n)
    if len(reduced) != k:
        raise PreconditionError("basis rows are linearly dependent")
    w = [c % p for c in target]
    coeffs = [0] * k
    for row, piv in zip(reduced, pivots):
        c = w[piv]
        if c:
            w = [(a - c * b) % p for a, b in zip(w, row[:n])]
            coeffs = [(a + c * b) % p for a, b in zip(coeffs, row[n:])]
    if any(w):
        raise PreconditionError("target is not in the span of the basis")
    return coeffs


def linear_extension(V: Subspace, Z: Subspace, z: Point) -> List[int]:
    """Linear l: V -> F_p with l|Z = 0 and l(z) = 1.

    Values are aligned with enumerate_elements(V). The extension is the
    canonical one: Z's basis, then z, then V's own RREF rows in order as
    completion vectors; l is 1 on z and 0 on every other basis vector.
    """
    _check(V, Z)
    if not contains(V, Z):
        raise PreconditionError("Z is not contained in V")
    if not member(z, V):
        raise PreconditionError(f"{z!r} is not in V")
    if member(z, Z):
        raise NoExtension(f"{z!r} lies in the subspace that must vanish")
    p = V.p
    ordered: List[Sequence[int]] = list(Z.basis) + [z.coords]
    for row in V.basis:
        if len(_rref(ordered + [row], p)[0]) > len(ordered):
            ordered.append(row)
    slot = Z.dim
    # l on each RREF row of V; linearity carries it to every element
    on_rows = [_express(ordered, row, p)[slot] for row in V.basis]
    return [
        sum(c * l for c, l in zip(coeffs, on_rows)) % p
        for coeffs, _ in element_rows(V)
    ]
