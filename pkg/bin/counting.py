#!/usr/bin/env python3
"""
Counting diagnostics for families of small subspaces, and parameter sweeps.

If no pair (x, y) violates x+y in (V_x ∩ V_{x+y}) + (V_y ∩ V_{x+y}), the set U
of points lying in at least p^(n-4t-2) of the V_x satisfies U + U = F_p^n,
while double counting caps |U| at p^(6t+3). These helpers compute every
quantity of that chain on concrete families.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, TextIO, Tuple

import numpy as np

from config import DEFAULT_BUDGET, U_CAP
from construction import (
    EXHAUSTIVE,
    RANDOMIZED,
    PairSearch,
    UncoveredPoint,
    VFamily,
    build_family,
    full_family,
    random_family,
    random_map,
    search_violating_pair,
    span_family,
)
from field_core import PFRLabError, ProblemParams, _index_of
from functionals import EXACT, build_S
from runlog import jlog
from subspace import element_rows

SOURCES = ("random", "from-map", "span", "full")
CSV_FIELDS = [
    "p",
    "n",
    "t",
    "source",
    "seed",
    "probes",
    "pair_found",
    "x_index",
    "y_index",
    "u_size",
    "u_covers",
    "error",
]


# ---------- U set ----------
@dataclass(frozen=True)
class UDiagnostic:
    threshold: Fraction
    U: Tuple[int, ...]
    pair_count: int
    covers: bool
    pair_bound: int
    u_bound: int
    half_bound: int
    ceil_half_bound: int

    @property
    def u_size(self) -> int:
        return len(self.U)

    @property
    def pair_bound_ok(self) -> bool:
        return self.pair_count <= self.pair_bound

    @property
    def u_bound_ok(self) -> Optional[bool]:
        """|U| <= p^(6t+3); only claimed when the threshold is at least 1."""
        if self.threshold < 1:
            return None
        return self.u_size <= self.u_bound

    @property
    def u_meets_half(self) -> bool:
        """|U| >= p^(n/2), compared as |U|^2 >= p^n."""
        return self.u_size * self.u_size >= self.half_bound

    @property
    def u_meets_ceil_half(self) -> bool:
        """|U| >= p^ceil(n/2); stricter than u_meets_half for odd n."""
        return self.u_size >= self.ceil_half_bound

    def as_dict(self) -> dict:
        return {
            "threshold": str(self.threshold),
            "u_size": self.u_size,
            "pair_count": self.pair_count,
            "covers": self.covers,
            "pair_bound": self.pair_bound,
            "pair_bound_ok": self.pair_bound_ok,
            "u_bound": self.u_bound,
            "u_bound_ok": self.u_bound_ok,
            "u_meets_half": self.u_meets_half,
            "u_meets_ceil_half": self.u_meets_ceil_half,
        }


def _covers(U: Sequence[int], params: ProblemParams) -> bool:
    """U + U == F_p^n."""
    p, n, size = params.p, params.n, params.size
    if len(U) * len(U) < size:
        return False
    if len(U) == size:
        return True
    weights = np.array([p**i for i in range(n)], dtype=np.int64)
    digits = (np.array(U, dtype=np.int64)[:, None] // weights[None, :]) % p
    reached = np.zeros(size, dtype=bool)
    for row in digits:
        reached[(((digits + row) % p) @ weights)] = True
        if reached.all():
            return True
    return False


def u_diagnostic(F: VFamily) -> UDiagnostic:
    params = F.params
    p, n, t, size = params.p, params.n, params.t, params.size
    counts = np.zeros(size, dtype=np.int64)
    pair_count = 0
    for x in range(size):
        elems = element_rows(F.space(x))
        pair_count += len(elems)
        for _, row in elems:
            counts[_index_of(row, p)] += 1
    threshold = Fraction(p) ** (n - 4 * t - 2)
    # integer counts: count >= threshold iff count >= ceil(threshold), and 0 never qualifies
    need = max(1, math.ceil(threshold))
    U = tuple(int(v) for v in np.flatnonzero(counts >= need))
    return UDiagnostic(
        threshold=threshold,
        U=U,
        pair_count=pair_count,
        covers=_covers(U, params),
        pair_bound=p ** (n + 2 * t + 1),
        u_bound=p ** (6 * t + 3),
        half_bound=size,
        ceil_half_bound=p ** -(-n // 2),
    )


@dataclass(frozen=True)
class ChainReport:
    search: PairSearch
    diagnostic: UDiagnostic
    dims_ok: bool
    implication: str  # holds | vacuous | violated

    @property
    def holds(self) -> bool:
        return self.implication != "violated"

    def as_dict(self) -> dict:
        pair = self.search.pair
        return {
            "pair": None if pair is None else [pair[0].index, pair[1].index],
            "probes": self.search.probes,
            "dims_ok": self.dims_ok,
            "implication": self.implication,
            **self.diagnostic.as_dict(),
        }


def counting_chain_check(F: VFamily, workers: int = 1) -> ChainReport:
    """No violating pair (exhaustive) must force U + U = F_p^n."""
    search = search_violating_pair(F, EXHAUSTIVE, workers=workers)
    diag = u_diagnostic(F)
    bound = 2 * F.t + 1
    dims_ok = all(F.space(x).dim <= bound for x in range(F.params.size))
    if search.found:
        implication = "vacuous"
    else:
        implication = "holds" if diag.covers else "violated"
    if implication == "violated":
        jlog(mod="counting", level="error", event="counting_chain_violated", source=F.source, dims_ok=dims_ok)
    return ChainReport(search, diag, dims_ok, implication)


# ---------- sweeps ----------
@dataclass(frozen=True)
class SweepCell:
    p: int
    n: int
    t: int
    source: str = "random"
    seed: int = 0
    strategy: str = RANDOMIZED


@dataclass(frozen=True)
class SweepRow:
    p: int
    n: int
    t: int
    source: str
    seed: int
    probes: Optional[int] = None
    pair_found: Optional[bool] = None
    x_index: Optional[int] = None
    y_index: Optional[int] = None
    u_size: Optional[int] = None
    u_covers: Optional[bool] = None
    error: str = ""

    def csv_values(self) -> List[str]:
        out = []
        for k in CSV_FIELDS:
            v = getattr(self, k)
            if v is None:
                out.append("")
            elif isinstance(v, bool):
                out.append("true" if v else "false")
            else:
                out.append(str(v))
        return out


def cell_family(cell: SweepCell, params: ProblemParams) -> VFamily:
    if cell.source == "random":
        return random_family(params, 2 * params.t + 1, cell.seed)
    if cell.source == "span":
        return span_family(params)
    if cell.source == "full":
        return full_family(params)
    if cell.source == "from-map":
        S = build_S(params)
        fam = build_family(random_map(params, S, params.t, cell.seed), params.t, S, EXACT)
        if isinstance(fam, UncoveredPoint):
            raise PFRLabError(f"uncovered point {fam.x.index}")
        return fam
    raise PFRLabError(f"unknown family source {cell.source!r}")


def run_cell(cell: SweepCell, budget: int = DEFAULT_BUDGET) -> SweepRow:
    base = dict(p=cell.p, n=cell.n, t=cell.t, source=cell.source, seed=cell.seed)
    try:
        params = ProblemParams(cell.p, cell.n, cell.t)
        fam = cell_family(cell, params)
        search = search_violating_pair(fam, cell.strategy, seed=cell.seed, budget=budget)
        u_size = u_covers = None
        if params.size <= U_CAP:
            diag = u_diagnostic(fam)
            u_size, u_covers = diag.u_size, diag.covers
        pair = search.pair
        row = SweepRow(
            **base,
            probes=search.probes,
            pair_found=search.found,
            x_index=None if pair is None else pair[0].index,
            y_index=None if pair is None else pair[1].index,
            u_size=u_size,
            u_covers=u_covers,
        )
    except PFRLabError as e:
        row = SweepRow(**base, error=str(e))
    jlog(mod="counting", event="sweep_cell", **asdict(row))
    return row


def _cell_job(args):
    cell, budget = args
    return run_cell(cell, budget)


def sweep(cells: Iterable[SweepCell], budget: int = DEFAULT_BUDGET, workers: int = 1) -> List[SweepRow]:
    """One row per cell, in grid order; rows depend only on (cell, budget)."""
    jobs = [(c, budget) for c in cells]
    if workers <= 1 or len(jobs) < 2:
        return [_cell_job(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_cell_job, jobs))


def write_csv(rows: Iterable[SweepRow], stream: TextIO) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in rows:
        w.writerow(r.csv_values())


def rows_to_csv(rows: Iterable[SweepRow]) -> str:
    buf = io.StringIO()
    write_csv(rows, buf)
    return buf.getvalue()
