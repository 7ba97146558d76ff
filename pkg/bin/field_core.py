#!/usr/bin/env python3
"""
Prime-field scalars, points of F_p^n and dense function tables.

Points carry a canonical little-endian base-p index
(index = sum(coords[i] * p**i)); every serialized artifact in pfrlab uses it.
Residues are stored in [0, p) and reduced eagerly, so equality of values is
equality of representations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence, Tuple

import numpy as np

from config import TABLE_CAP


# ---------- errors ----------
class PFRLabError(Exception):
    """Base class for every error raised by pfrlab."""


class DomainError(PFRLabError, ValueError):
    """Out-of-range residue or index, or operands from different spaces."""


class ResourceError(PFRLabError, RuntimeError):
    """A desk-scale cap would be exceeded."""


class PreconditionError(PFRLabError, ValueError):
    """An operation was called outside its documented precondition."""


class NoExtension(PFRLabError, ArithmeticError):
    """The requested point already lies in the subspace that must vanish."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def power_exceeds(p: int, n: int, cap: int) -> bool:
    """p**n > cap, without building p**n when it is huge."""
    acc = 1
    for _ in range(n):
        acc *= p
        if acc > cap:
            return True
    return False


# ---------- parameters ----------
@dataclass(frozen=True)
class ProblemParams:
    p: int
    n: int
    t: int = 0

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise DomainError(f"p={self.p} is not prime")
        if self.n < 1:
            raise DomainError(f"n={self.n} must be >= 1")
        if self.t < 0:
            raise DomainError(f"t={self.t} must be >= 0")
        if power_exceeds(self.p, self.n, TABLE_CAP):
            raise ResourceError(
                f"p^n = {self.p}^{self.n} exceeds table cap {TABLE_CAP}"
            )

    @property
    def size(self) -> int:
        return self.p**self.n

    def with_t(self, t: int) -> "ProblemParams":
        return ProblemParams(self.p, self.n, t)


# ---------- points ----------
@dataclass(frozen=True)
class Point:
    coords: Tuple[int, ...]
    index: int
    p: int

    @property
    def n(self) -> int:
        return len(self.coords)

    def is_zero(self) -> bool:
        return self.index == 0

    def __repr__(self) -> str:
        return f"Point({self.coords}, index={self.index})"


def _index_of(coords: Sequence[int], p: int) -> int:
    idx = 0
    for c in reversed(coords):
        idx = idx * p + c
    return idx


def _coords_of(index: int, p: int, n: int) -> Tuple[int, ...]:
    out = []
    for _ in range(n):
        index, r = divmod(index, p)
        out.append(r)
    return tuple(out)


def point_codec(
    params: ProblemParams,
    coords: Optional[Sequence[int]] = None,
    index: Optional[int] = None,
) -> Point:
    """Build a Point from exactly one of coords or index."""
    p, n = params.p, params.n
    if (coords is None) == (index is None):
        raise DomainError("pass exactly one of coords or index")
    if coords is not None:
        coords = tuple(int(c) for c in coords)
        if len(coords) != n:
            raise DomainError(f"expected {n} coordinates, got {len(coords)}")
        if any(c < 0 or c >= p for c in coords):
            raise DomainError(f"coordinate out of range [0,{p}): {coords}")
        return Point(coords, _index_of(coords, p), p)
    index = int(index)
    if index < 0 or index >= params.size:
        raise DomainError(f"index {index} out of range [0,{params.size})")
    return Point(_coords_of(index, p, n), index, p)


def point_at(params: ProblemParams, index: int) -> Point:
    return point_codec(params, index=index)


def zero_point(params: ProblemParams) -> Point:
    return Point((0,) * params.n, 0, params.p)


def unit_point(params: ProblemParams, i: int) -> Point:
    """Standard basis vector e_i (0-based)."""
    coords = [0] * params.n
    coords[i] = 1
    return point_codec(params, coords=coords)


def all_points(params: ProblemParams) -> Iterator[Point]:
    for i in range(params.size):
        yield point_at(params, i)


def _same_space(a: Point, b: Point) -> None:
    if a.p != b.p or len(a.coords) != len(b.coords):
        raise DomainError(f"points from different spaces: {a!r} vs {b!r}")


def point_add(a: Point, b: Point) -> Point:
    _same_space(a, b)
    p = a.p
    coords = tuple((x + y) % p for x, y in zip(a.coords, b.coords))
    return Point(coords, _index_of(coords, p), p)


def point_scale(lam: int, a: Point) -> Point:
    p = a.p
    if lam < 0 or lam >= p:
        raise DomainError(f"scalar {lam} out of range [0,{p})")
    coords = tuple((lam * x) % p for x in a.coords)
    return Point(coords, _index_of(coords, p), p)


def point_from_row(row: Sequence[int], p: int) -> Point:
    coords = tuple(row)
    return Point(coords, _index_of(coords, p), p)


# ---------- function tables ----------
class FunctionTable:
    """Dense f: F_p^n -> F_p, values in index order. Read-only after construction."""

    __slots__ = ("params", "values")

    def __init__(self, params: ProblemParams, values: Iterable[int]) -> None:
        if not isinstance(values, np.ndarray):
            values = list(values)
        arr = np.array(values, dtype=np.int64)
        if arr.ndim != 1 or arr.shape[0] != params.size:
            raise DomainError(f"table length must be {params.size}, got {arr.shape}")
        if arr.size and (arr.min() < 0 or arr.max() >= params.p):
            raise DomainError(f"table entries must lie in [0,{params.p})")
        arr.flags.writeable = False
        self.params = params
        self.values = arr

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FunctionTable):
            return NotImplemented
        return (self.params.p, self.params.n) == (other.params.p, other.params.n) and bool(
            np.array_equal(self.values, other.values)
        )

    def __hash__(self) -> int:
        return hash((self.params.p, self.params.n, self.values.tobytes()))

    def __len__(self) -> int:
        return int(self.values.shape[0])

    def __getitem__(self, index: int) -> int:
        return int(self.values[index])

    def to_list(self) -> list:
        return [int(v) for v in self.values]

    def with_values(self, updates: dict) -> "FunctionTable":
        """Copy with some entries replaced ({index: residue})."""
        arr = self.values.copy()
        for k, v in updates.items():
            arr[k] = v
        return FunctionTable(self.params, arr)

    def __repr__(self) -> str:
        return f"FunctionTable(p={self.params.p}, n={self.params.n}, values={self.to_list()[:16]}...)"


def table_zero(params: ProblemParams) -> FunctionTable:
    return FunctionTable(params, np.zeros(params.size, dtype=np.int64))


def table_eval(f: FunctionTable, v: Point) -> int:
    if v.p != f.params.p or v.n != f.params.n:
        raise DomainError(f"{v!r} is not a point of the table's space")
    return int(f.values[v.index])


def table_random(params: ProblemParams, seed: int) -> FunctionTable:
    rng = np.random.default_rng(seed)
    return FunctionTable(params, rng.integers(0, params.p, size=params.size, dtype=np.int64))
