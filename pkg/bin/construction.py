#!/usr/bin/env python3
"""
The evaluation construction and its refutation machinery.

phi(x) = e_x. A candidate linear map phi~ is stored by its basis images.
For every x the defect phi(x) - phi~(x) must be a sum of t coboundaries;
the points of that decomposition, together with x, span V_x. A pair (x, y)
with x+y outside (V_x ∩ V_{x+y}) + (V_y ∩ V_{x+y}) yields a witness function
that is linear on V_x, V_y and V_{x+y} yet separates phi~(x+y) from
phi~(x) + phi~(y).
"""

from __future__ import annotations

from collections.abc import Sequence as SequenceABC
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from config import DEFAULT_BUDGET
from field_core import (
    DomainError,
    FunctionTable,
    Point,
    PreconditionError,
    ProblemParams,
    all_points,
    point_add,
    point_at,
    table_eval,
    unit_point,
)
from functionals import (
    EXACT,
    DecompositionPairs,
    Functional,
    SSet,
    apply,
    coboundary,
    evaluation,
    functional_from_json,
    in_tS,
    is_linear_on,
)
from runlog import jlog
from subspace import (
    Subspace,
    _from_rows,
    enumerate_elements,
    full_subspace,
    linear_extension,
    member,
    span,
    subspace_intersect,
    subspace_sum,
)

EXHAUSTIVE = "exhaustive"
RANDOMIZED = "randomized"
STRATEGIES = (EXHAUSTIVE, RANDOMIZED)


@dataclass(frozen=True)
class Verdict:
    ok: bool
    check: Optional[str] = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


PASS = Verdict(True)


# ---------- maps ----------
@dataclass(frozen=True)
class LinearMap:
    params: ProblemParams
    images: Tuple[Functional, ...]

    def __post_init__(self) -> None:
        if len(self.images) != self.params.n:
            raise DomainError(f"need {self.params.n} basis images, got {len(self.images)}")
        for g in self.images:
            if g.p != self.params.p:
                raise DomainError("basis image over the wrong field")
            if g.support and g.support[-1][0] >= self.params.size:
                raise DomainError(f"basis image {g!r} references a point outside F_p^n")

    def to_json(self) -> List[List[List[int]]]:
        return [g.to_json() for g in self.images]

    @classmethod
    def from_json(cls, params: ProblemParams, data: Sequence) -> "LinearMap":
        if not isinstance(data, (list, tuple)) or len(data) != params.n:
            raise DomainError(f"map must list {params.n} basis images")
        return cls(params, tuple(functional_from_json(params, img) for img in data))


def phi(x: Point) -> Functional:
    return evaluation(x)


def phi_tilde_eval(L: LinearMap, x: Point) -> Functional:
    p = L.params.p
    acc: Dict[int, int] = {}
    for xi, img in zip(x.coords, L.images):
        if xi:
            for idx, c in img.support:
                acc[idx] = (acc.get(idx, 0) + xi * c) % p
    return Functional.from_dict(p, acc)


def defect(L: LinearMap, x: Point) -> Functional:
    """phi(x) - phi~(x)."""
    return phi(x) - phi_tilde_eval(L, x)


def decompose(
    x: Point, L: LinearMap, t: int, S: SSet, mode: str = EXACT
) -> Optional[DecompositionPairs]:
    return in_tS(defect(L, x), t, S, mode)


def random_map(params: ProblemParams, S: SSet, t: int, seed: int) -> LinearMap:
    """Linear candidate covered on the standard basis: phi~(e_i) = e_{e_i} - (t random elements of S)."""
    rng = np.random.default_rng(seed)
    images = []
    for i in range(params.n):
        g = phi(unit_point(params, i))
        for pos in rng.integers(0, len(S), size=t):
            g = g - S.elements[int(pos)]
        images.append(g)
    return LinearMap(params, tuple(images))


# ---------- families ----------
class SeededSpaces(SequenceABC):
    """V_x = span(x, r_1, ..., r_{dim-1}) with r_i drawn from a per-point stream.

    Spaces are generated on first access, so huge families cost only what
    a search actually touches.
    """

    def __init__(self, params: ProblemParams, dim: int, seed: int) -> None:
        if dim < 1:
            raise DomainError(f"family dimension {dim} must be >= 1")
        self.params = params
        self.dim = dim
        self.seed = seed
        self._cache: Dict[int, Subspace] = {}

    def __len__(self) -> int:
        return self.params.size

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(len(self)))]
        if i < 0 or i >= self.params.size:
            raise IndexError(i)
        V = self._cache.get(i)
        if V is None:
            p, n = self.params.p, self.params.n
            rng = np.random.default_rng([self.seed, i])
            extra = rng.integers(0, p, size=(self.dim - 1, n)).tolist()
            V = _from_rows([point_at(self.params, i).coords] + extra, p, n)
            self._cache[i] = V
        return V


@dataclass(frozen=True)
class VFamily:
    params: ProblemParams
    spaces: Sequence[Subspace]
    provenance: Optional[Tuple[DecompositionPairs, ...]] = None
    source: str = "explicit"

    @property
    def t(self) -> int:
        return self.params.t

    def space(self, x: Union[Point, int]) -> Subspace:
        return self.spaces[x.index if isinstance(x, Point) else x]

    def __len__(self) -> int:
        return len(self.spaces)


@dataclass(frozen=True)
class UncoveredPoint:
    x: Point


def local_space(x: Point, pairs: DecompositionPairs, params: ProblemParams) -> Subspace:
    return span([x] + pairs.points(), params)


def build_family(
    L: LinearMap, t: int, S: SSet, mode: str = EXACT
) -> Union[VFamily, UncoveredPoint]:
    params = L.params.with_t(t)
    spaces: List[Subspace] = []
    provenance: List[DecompositionPairs] = []
    for x in all_points(params):
        pairs = decompose(x, L, t, S, mode)
        if pairs is None:
            jlog(mod="construction", event="uncovered_point", x=x.index, t=t, mode=mode)
            return UncoveredPoint(x)
        spaces.append(local_space(x, pairs, params))
        provenance.append(pairs)
    jlog(
        mod="construction",
        event="family_built",
        p=params.p,
        n=params.n,
        t=t,
        mode=mode,
        max_dim=max(V.dim for V in spaces),
    )
    return VFamily(params, tuple(spaces), tuple(provenance), source="map")


def random_family(params: ProblemParams, dim: int, seed: int) -> VFamily:
    return VFamily(params, SeededSpaces(params, dim, seed), None, source=f"random:{seed}")


def span_family(params: ProblemParams) -> VFamily:
    return VFamily(params, tuple(span([x], params) for x in all_points(params)), None, source="span")


def full_family(params: ProblemParams) -> VFamily:
    V = full_subspace(params.p, params.n)
    return VFamily(params, (V,) * params.size, None, source="full")


def family_violations(F: VFamily) -> List[int]:
    """Points x with dim V_x > 2t+1 or x not in V_x."""
    bound = 2 * F.t + 1
    bad = []
    for x in all_points(F.params):
        V = F.space(x)
        if V.dim > bound or not member(x, V):
            bad.append(x.index)
    return bad


def property3_check(F: VFamily, L: LinearMap, x: Point, f: FunctionTable) -> bool:
    """(phi(x) - phi~(x))(f) != 0 implies f is nonlinear on V_x."""
    if F.provenance is None:
        raise PreconditionError("family has no decomposition provenance")
    if apply(defect(L, x), f) == 0:
        return True
    return not is_linear_on(f, F.space(x))


def decomposition_terms(F: VFamily, x: Point, f: FunctionTable) -> List[int]:
    """f(a+b) - f(a) - f(b) for each pair of x's decomposition."""
    if F.provenance is None:
        raise PreconditionError("family has no decomposition provenance")
    return [apply(coboundary(a, b), f) for a, b in F.provenance[x.index].pairs]


# ---------- violating pairs ----------
@dataclass(frozen=True)
class PairData:
    x: Point
    y: Point
    s: Point
    x_side: Subspace  # V_x ∩ V_{x+y}
    y_side: Subspace  # V_y ∩ V_{x+y}
    total: Subspace

    @property
    def degenerate(self) -> bool:
        return self.x.is_zero() or self.y.is_zero() or self.s.is_zero()

    @property
    def violating(self) -> bool:
        return not self.degenerate and not member(self.s, self.total)


def pair_data(F: VFamily, x: Point, y: Point) -> PairData:
    s = point_add(x, y)
    Vs = F.space(s)
    x_side = subspace_intersect(F.space(x), Vs)
    y_side = subspace_intersect(F.space(y), Vs)
    return PairData(x, y, s, x_side, y_side, subspace_sum(x_side, y_side))


def is_violating(F: VFamily, x: Point, y: Point) -> bool:
    # x = 0: x+y = y lies in V_y ∩ V_{x+y}; x+y = 0: 0 lies in every sum
    if x.is_zero() or y.is_zero() or point_add(x, y).is_zero():
        return False
    return pair_data(F, x, y).violating


@dataclass(frozen=True)
class PairSearch:
    pair: Optional[Tuple[Point, Point]]
    probes: int
    strategy: str
    seed: Optional[int] = None
    budget: Optional[int] = None

    @property
    def found(self) -> bool:
        return self.pair is not None


def _scan_range(F: VFamily, lo: int, hi: int) -> Tuple[Optional[Tuple[int, int]], int]:
    """Least violating (x, y) with lo <= index(x) < hi, and non-degenerate probes spent."""
    params = F.params
    probes = 0
    for xi in range(max(lo, 1), hi):
        x = point_at(params, xi)
        for yi in range(1, params.size):
            y = point_at(params, yi)
            if point_add(x, y).is_zero():
                continue
            probes += 1
            if pair_data(F, x, y).violating:
                return (xi, yi), probes
    return None, probes


def _scan_job(args):
    F, lo, hi = args
    return _scan_range(F, lo, hi)


def _exhaustive(F: VFamily, workers: int) -> PairSearch:
    size = F.params.size
    if workers <= 1 or size < 4:
        hit, probes = _scan_range(F, 1, size)
    else:
        # contiguous x-chunks reduced in order: identical to the serial scan
        step = max(1, -(-size // (workers * 4)))
        jobs = [(F, lo, min(lo + step, size)) for lo in range(0, size, step)]
        hit, probes = None, 0
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for chunk_hit, chunk_probes in pool.map(_scan_job, jobs):
                if hit is not None:
                    continue
                probes += chunk_probes
                hit = chunk_hit
    pair = None
    if hit is not None:
        pair = (point_at(F.params, hit[0]), point_at(F.params, hit[1]))
    return PairSearch(pair, probes, EXHAUSTIVE)


def _randomized(F: VFamily, seed: int, budget: int) -> PairSearch:
    params = F.params
    rng = np.random.default_rng(seed)
    for probe in range(1, budget + 1):
        xi, yi = (int(v) for v in rng.integers(1, params.size, size=2))
        x, y = point_at(params, xi), point_at(params, yi)
        if is_violating(F, x, y):
            return PairSearch((x, y), probe, RANDOMIZED, seed, budget)
    return PairSearch(None, budget, RANDOMIZED, seed, budget)


def search_violating_pair(
    F: VFamily,
    strategy: str = EXHAUSTIVE,
    seed: int = 0,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
) -> PairSearch:
    """Randomized search is a single seeded stream, so its result never depends on workers."""
    if strategy == EXHAUSTIVE:
        result = _exhaustive(F, workers)
    elif strategy == RANDOMIZED:
        result = _randomized(F, seed, budget)
    else:
        raise DomainError(f"unknown pair strategy {strategy!r}")
    if result.found:
        x, y = result.pair
        jlog(mod="construction", event="pair_found", x=x.index, y=y.index, probes=result.probes, strategy=strategy)
    else:
        jlog(mod="construction", event="pair_search_exhausted", probes=result.probes, strategy=strategy)
    return result


def find_violating_pair(
    F: VFamily,
    strategy: str = EXHAUSTIVE,
    seed: int = 0,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
) -> Optional[Tuple[Point, Point]]:
    return search_violating_pair(F, strategy, seed, budget, workers).pair


# ---------- witness ----------
def check_witness(
    f: FunctionTable, x: Point, y: Point, Vx: Subspace, Vy: Subspace, Vs: Subspace
) -> Verdict:
    s = point_add(x, y)
    got = (table_eval(f, x), table_eval(f, y), table_eval(f, s))
    if got != (0, 0, 1):
        return Verdict(False, "witness_values", f"(f(x), f(y), f(x+y)) = {got}, want (0, 0, 1)")
    for name, V in (("V_x", Vx), ("V_y", Vy)):
        for v in enumerate_elements(V):
            if table_eval(f, v):
                return Verdict(False, "witness_vanishing", f"f({v.index}) != 0 on {name}")
    for name, V in (("V_x", Vx), ("V_y", Vy), ("V_x+y", Vs)):
        if not is_linear_on(f, V):
            return Verdict(False, "witness_linearity", f"f is not linear on {name}")
    return PASS


def build_witness(x: Point, y: Point, F: VFamily) -> FunctionTable:
    """f = 0 on V_x ∪ V_y, linear on V_{x+y} with f(x+y) = 1, 0 everywhere else.

    Raises NoExtension when (x, y) is not violating.
    """
    data = pair_data(F, x, y)
    Vs = F.space(data.s)
    values = linear_extension(Vs, data.total, data.s)
    arr = np.zeros(F.params.size, dtype=np.int64)
    for v, val in zip(enumerate_elements(Vs), values):
        arr[v.index] = val
    f = FunctionTable(F.params, arr)
    verdict = check_witness(f, x, y, F.space(x), F.space(y), Vs)
    if not verdict:
        raise AssertionError(f"witness for ({x.index}, {y.index}) failed {verdict.check}: {verdict.detail}")
    jlog(mod="construction", event="witness_built", x=x.index, y=y.index)
    return f
