#!/usr/bin/env python3
"""
Functionals on F_p^{F_p^n} supported on evaluations.

Only the subspace W = span{e_v : v in F_p^n} of the ambient F_p^N is ever
materialised: every value of phi, phi~, S and tS lies in W. A Functional is a
sorted tuple of (point index, nonzero coefficient); evaluations are linearly
independent, so two Functionals are equal iff their supports are equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from config import PAIR_CAP, SUMSET_CAP
from field_core import (
    DomainError,
    FunctionTable,
    Point,
    ProblemParams,
    ResourceError,
    _index_of,
    point_add,
    point_at,
)
from subspace import Subspace, _check_enum, element_rows

EXACT = "exact"
UPTO = "upto"
MODES = (EXACT, UPTO)


# ---------- type ----------
@dataclass(frozen=True)
class Functional:
    p: int
    support: Tuple[Tuple[int, int], ...]

    @classmethod
    def from_terms(cls, p: int, terms: Iterable[Tuple[int, int]]) -> "Functional":
        acc: Dict[int, int] = {}
        for idx, c in terms:
            acc[idx] = (acc.get(idx, 0) + c) % p
        return cls.from_dict(p, acc)

    @classmethod
    def from_dict(cls, p: int, coeffs: Mapping[int, int]) -> "Functional":
        return cls(p, tuple(sorted((i, c % p) for i, c in coeffs.items() if c % p)))

    def as_dict(self) -> Dict[int, int]:
        return dict(self.support)

    def is_zero(self) -> bool:
        return not self.support

    def __len__(self) -> int:
        return len(self.support)

    def __add__(self, other: "Functional") -> "Functional":
        return combine(self, other, 1)

    def __sub__(self, other: "Functional") -> "Functional":
        return combine(self, other, self.p - 1)

    def to_json(self) -> List[List[int]]:
        return [[i, c] for i, c in self.support]

    def __repr__(self) -> str:
        if not self.support:
            return "0"
        return " + ".join(f"{c}·e{i}" if c != 1 else f"e{i}" for i, c in self.support)


def zero_functional(p: int) -> Functional:
    return Functional(p, ())


def functional_from_json(params: ProblemParams, data: Sequence[Sequence[int]]) -> Functional:
    """Parse [[point_index, coeff], ...]; strictly sorted, nonzero, in range."""
    p = params.p
    terms = []
    last = -1
    for item in data:
        if not isinstance(item, (list, tuple)) or len(item) != 2:
            raise DomainError(f"functional term must be [index, coeff], got {item!r}")
        if any(isinstance(v, bool) or not isinstance(v, int) for v in item):
            raise DomainError(f"functional term entries must be integers, got {item!r}")
        idx, c = item
        if idx <= last or idx >= params.size:
            raise DomainError(f"functional indices must be increasing and < {params.size}")
        if c <= 0 or c >= p:
            raise DomainError(f"functional coefficient {c} outside [1,{p})")
        terms.append((idx, c))
        last = idx
    return Functional(p, tuple(terms))


# ---------- operations ----------
def evaluation(v: Point) -> Functional:
    return Functional(v.p, ((v.index, 1),))


def coboundary(a: Point, b: Point) -> Functional:
    """e_{a+b} - e_a - e_b, coefficients merged where points coincide."""
    s = point_add(a, b)
    p = a.p
    return Functional.from_terms(p, ((s.index, 1), (a.index, p - 1), (b.index, p - 1)))


def apply(g: Functional, f: FunctionTable) -> int:
    if g.p != f.params.p:
        raise DomainError("functional and table over different fields")
    vals = f.values
    size = vals.shape[0]
    total = 0
    for idx, c in g.support:
        if idx >= size:
            raise DomainError(f"functional index {idx} outside table of size {size}")
        total += c * int(vals[idx])
    return total % g.p


def combine(g: Functional, h: Functional, lam: int) -> Functional:
    """g + lam*h."""
    if g.p != h.p:
        raise DomainError("functionals over different fields")
    p = g.p
    acc = g.as_dict()
    lam %= p
    if lam:
        for idx, c in h.support:
            acc[idx] = (acc.get(idx, 0) + lam * c) % p
    return Functional.from_dict(p, acc)


# ---------- S and tS ----------
@dataclass(frozen=True)
class DecompositionPairs:
    pairs: Tuple[Tuple[Point, Point], ...]

    def __len__(self) -> int:
        return len(self.pairs)

    def points(self) -> List[Point]:
        return [v for ab in self.pairs for v in ab]

    def as_indices(self) -> List[List[int]]:
        return [[a.index, b.index] for a, b in self.pairs]


def resum(pairs: DecompositionPairs, p: int) -> Functional:
    acc: Dict[int, int] = {}
    for a, b in pairs.pairs:
        for idx, c in coboundary(a, b).support:
            acc[idx] = (acc.get(idx, 0) + c) % p
    return Functional.from_dict(p, acc)


@dataclass(frozen=True)
class SSet:
    """Distinct coboundaries, ordered by their least generating pair."""

    params: ProblemParams
    elements: Tuple[Functional, ...]
    witnesses: Tuple[Tuple[Point, Point], ...]
    _position: Dict[Functional, int] = field(compare=False, repr=False, hash=False, default_factory=dict)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, g: object) -> bool:
        return g in self._position

    def position(self, g: Functional) -> Optional[int]:
        return self._position.get(g)

    def witness(self, g: Functional) -> Tuple[Point, Point]:
        return self.witnesses[self._position[g]]


def build_S(params: ProblemParams) -> SSet:
    size = params.size
    if size * size > PAIR_CAP:
        raise ResourceError(f"p^(2n) = {size * size} pairs exceed pair cap {PAIR_CAP}")
    pts = [point_at(params, i) for i in range(size)]
    position: Dict[Functional, int] = {}
    elements: List[Functional] = []
    witnesses: List[Tuple[Point, Point]] = []
    for a in pts:
        for b in pts:
            g = coboundary(a, b)
            if g not in position:
                position[g] = len(elements)
                elements.append(g)
                witnesses.append((a, b))
    return SSet(params, tuple(elements), tuple(witnesses), position)


def _exact_positions(g: Functional, t: int, S: SSet) -> Optional[List[int]]:
    """Lexicographically least non-decreasing positions i_1 <= ... <= i_t with sum S[i] == g."""
    if t == 0:
        return [] if g.is_zero() else None
    p = g.p
    elems = S.elements

    def dfs(start: int, remaining: Dict[int, int], left: int) -> Optional[List[int]]:
        # every coboundary has support <= 3
        if len(remaining) > 3 * left:
            return None
        if left == 1:
            pos = S.position(Functional.from_dict(p, remaining))
            return [pos] if pos is not None and pos >= start else None
        for i in range(start, len(elems)):
            nxt = dict(remaining)
            for idx, c in elems[i].support:
                v = (nxt.get(idx, 0) - c) % p
                if v:
                    nxt[idx] = v
                else:
                    nxt.pop(idx, None)
            found = dfs(i, nxt, left - 1)
            if found is not None:
                return [i] + found
        return None

    return dfs(0, g.as_dict(), t)


def in_tS(g: Functional, t: int, S: SSet, mode: str = EXACT) -> Optional[DecompositionPairs]:
    """Pairs (a_i, b_i) whose coboundaries sum to g, or None.

    exact: exactly t summands (repeats allowed). upto: the fewest summands
    s <= t that work, with 0S = {0}. Ties break to the lexicographically
    least choice in S's witness order.
    """
    if t < 0:
        raise DomainError(f"t={t} must be >= 0")
    if mode not in MODES:
        raise DomainError(f"unknown mode {mode!r}")
    counts = range(t + 1) if mode == UPTO else (t,)
    for s in counts:
        positions = _exact_positions(g, s, S)
        if positions is None:
            continue
        pairs = DecompositionPairs(tuple(S.witnesses[i] for i in positions))
        if resum(pairs, g.p) != g:
            raise AssertionError(f"decomposition of {g!r} does not re-sum")
        return pairs
    return None


def sumset(S: SSet, t: int, mode: str = EXACT) -> frozenset:
    """tS materialised (exact) or the union of sS for s <= t (upto)."""
    if mode not in MODES:
        raise DomainError(f"unknown mode {mode!r}")
    if len(S) ** t > SUMSET_CAP:
        raise ResourceError(f"|S|^t = {len(S)}^{t} exceeds sumset cap {SUMSET_CAP}")
    p = S.params.p
    out = set()
    counts = range(t + 1) if mode == UPTO else (t,)
    for s in counts:
        for combo in combinations_with_replacement(S.elements, s):
            acc = zero_functional(p)
            for g in combo:
                acc = acc + g
            out.add(acc)
    return frozenset(out)


# ---------- linearity ----------
def is_linear_on(f: FunctionTable, V: Subspace) -> bool:
    """f(u+w) == f(u) + f(w) on all of V.

    Over F_p additivity on V is the same as agreeing with the linear map fixed
    by f's values on V's basis, so p^dim lookups suffice.
    """
    _check_enum(V, None)
    p = V.p
    if f.params.p != p or f.params.n != V.n:
        raise DomainError("table and subspace over different spaces")
    vals = f.values
    on_basis = [int(vals[_index_of(r, p)]) for r in V.basis]
    for coeffs, row in element_rows(V):
        want = sum(c * b for c, b in zip(coeffs, on_basis)) % p
        if int(vals[_index_of(row, p)]) != want:
            return False
    return True
