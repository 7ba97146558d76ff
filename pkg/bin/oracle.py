#!/usr/bin/env python3
# file: bin/oracle.py
# Brute-force verdicts at tiny scale: does any linear phi~ keep phi - phi~ inside tS?

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator, List, Optional, Tuple, Union

from config import ORACLE_CAP
from construction import LinearMap, defect, phi, phi_tilde_eval
from field_core import ProblemParams, ResourceError, all_points, unit_point, zero_point
from functionals import EXACT, Functional, SSet, build_S, sumset, zero_functional
from runlog import jlog


@dataclass(frozen=True)
class ExistsValidMap:
    L: LinearMap
    visited: int


@dataclass(frozen=True)
class NoValidMap:
    visited: int


OracleVerdict = Union[ExistsValidMap, NoValidMap]


def is_valid_map(L: LinearMap, t: int, S: SSet, mode: str = EXACT, tS: Optional[frozenset] = None) -> bool:
    """phi(x) - phi~(x) in tS for every x, checked against the materialised sumset."""
    tS = sumset(S, t, mode) if tS is None else tS
    return all(defect(L, x) in tS for x in all_points(L.params))


def refute_exhaustive(params: ProblemParams, mode: str = EXACT, S: Optional[SSet] = None) -> OracleVerdict:
    """First valid map in candidate order, or definitive absence.

    phi~(e_k) ranges over e_{e_k} - tS. Points are grouped by their highest
    nonzero coordinate; once phi~(e_0..e_k) are fixed, every point of group k
    is determined and checked before the search goes deeper.
    """
    t = params.t
    S = build_S(params) if S is None else S
    tS = sumset(S, t, mode)
    ordered = sorted(tS, key=lambda g: g.support)
    n = params.n
    bound = len(ordered) ** n
    if bound > ORACLE_CAP:
        raise ResourceError(f"|tS|^n = {len(ordered)}^{n} candidate maps exceed oracle cap {ORACLE_CAP}")

    candidates = [[phi(unit_point(params, k)) - s for s in ordered] for k in range(n)]
    groups: List[List] = [[] for _ in range(n)]
    for x in all_points(params):
        if not x.is_zero():
            groups[max(i for i, c in enumerate(x.coords) if c)].append(x)

    visited = 0

    def partial_ok(images: List[Functional], k: int) -> bool:
        padded = LinearMap(params, tuple(images) + (zero_functional(params.p),) * (n - len(images)))
        return all(phi(x) - phi_tilde_eval(padded, x) in tS for x in groups[k])

    def dfs(images: List[Functional]) -> Optional[List[Functional]]:
        nonlocal visited
        k = len(images)
        if k == n:
            return images
        for img in candidates[k]:
            visited += 1
            images.append(img)
            if partial_ok(images, k):
                found = dfs(images)
                if found is not None:
                    return found
            images.pop()
        return None

    # phi~(0) = 0 for every linear map
    if phi(zero_point(params)) not in tS:
        found = None
    else:
        found = dfs([])
    if found is None:
        verdict: OracleVerdict = NoValidMap(visited)
    else:
        verdict = ExistsValidMap(LinearMap(params, tuple(found)), visited)
    jlog(
        mod="oracle",
        event="oracle_done",
        p=params.p,
        n=n,
        t=t,
        mode=mode,
        exists=isinstance(verdict, ExistsValidMap),
        visited=visited,
    )
    return verdict


def all_functionals(params: ProblemParams) -> Iterator[Functional]:
    """Every element of W = span{e_v}, in coefficient-vector order."""
    p = params.p
    for coeffs in product(range(p), repeat=params.size):
        yield Functional(p, tuple((i, c) for i, c in enumerate(coeffs) if c))


def iter_candidate_maps(params: ProblemParams) -> Iterator[LinearMap]:
    total = (params.p**params.size) ** params.n
    if total > ORACLE_CAP:
        raise ResourceError(f"(p^(p^n))^n = {total} candidate maps exceed oracle cap {ORACLE_CAP}")
    funcs = list(all_functionals(params))
    for images in product(funcs, repeat=params.n):
        yield LinearMap(params, tuple(images))


def classify_maps(params: ProblemParams, mode: str = EXACT, S: Optional[SSet] = None) -> List[Tuple[LinearMap, bool]]:
    S = build_S(params) if S is None else S
    tS = sumset(S, params.t, mode)
    return [(L, is_valid_map(L, params.t, S, mode, tS)) for L in iter_candidate_maps(params)]
