#!/usr/bin/env python3
"""
Refutation certificates: emission, JSON I/O and independent re-validation.

A certificate names a candidate linear map and one of three outcomes:

  uncovered     some x has phi(x) - phi~(x) outside tS
  witness       a violating pair (x, y) with the witness function f
  inconclusive  every point decomposes and the pair search found nothing;
                all decompositions and the search report are recorded

validate_certificate rebuilds everything from the raw fields and reports the
first check that fails. It never raises on bad data.
"""

from __future__ import annotations

import json
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, ValidationError

from config import DEFAULT_BUDGET, SUMSET_CAP
from construction import (
    EXHAUSTIVE,
    PASS,
    RANDOMIZED,
    LinearMap,
    UncoveredPoint,
    VFamily,
    Verdict,
    build_family,
    build_witness,
    check_witness,
    defect,
    local_space,
    pair_data,
    phi_tilde_eval,
    search_violating_pair,
)
from field_core import (
    FunctionTable,
    PFRLabError,
    Point,
    ProblemParams,
    point_add,
    point_at,
)
from functionals import (
    EXACT,
    UPTO,
    DecompositionPairs,
    SSet,
    apply,
    build_S,
    coboundary,
    in_tS,
    resum,
    sumset,
)
from runlog import jlog
from subspace import Subspace, member, subspace_from_rows
from version import VALIDATOR_VERSION

UNCOVERED = "uncovered"
WITNESS = "witness"
INCONCLUSIVE = "inconclusive"


class CertificateFormatError(PFRLabError):
    """Certificate file is unreadable, not JSON, or does not match the schema."""


# ---------- schema ----------
class SearchReport(BaseModel):
    model_config = ConfigDict(extra="forbid")

    strategy: Literal["exhaustive", "randomized"]
    probes: int
    seed: Optional[int] = None
    budget: Optional[int] = None


class Certificate(BaseModel):
    model_config = ConfigDict(extra="forbid")

    p: int
    n: int
    t: int
    mode: Literal["exact", "upto"]
    map: List[List[List[int]]]
    variant: Literal["uncovered", "witness", "inconclusive"]
    x: Optional[int] = None
    y: Optional[int] = None
    decompositions: Dict[str, List[List[int]]] = {}
    witness_table: Optional[List[int]] = None
    intersections: Optional[Dict[str, List[List[int]]]] = None
    search: Optional[SearchReport] = None
    validator_version: str = VALIDATOR_VERSION


# ---------- emit ----------
def _search_report(search) -> SearchReport:
    return SearchReport(strategy=search.strategy, probes=search.probes, seed=search.seed, budget=search.budget)


def refute(
    L: LinearMap,
    t: int,
    S: SSet,
    mode: str = EXACT,
    strategy: str = EXHAUSTIVE,
    seed: int = 0,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
) -> Certificate:
    params = L.params.with_t(t)
    base = dict(p=params.p, n=params.n, t=t, mode=mode, map=L.to_json())
    fam = build_family(L, t, S, mode)
    if isinstance(fam, UncoveredPoint):
        cert = Certificate(**base, variant=UNCOVERED, x=fam.x.index)
        jlog(mod="certificate", event="refute_done", variant=UNCOVERED, x=fam.x.index)
        return cert

    search = search_violating_pair(fam, strategy, seed=seed, budget=budget, workers=workers)
    if search.found:
        x, y = search.pair
        data = pair_data(fam, x, y)
        f = build_witness(x, y, fam)
        cert = Certificate(
            **base,
            variant=WITNESS,
            x=x.index,
            y=y.index,
            decompositions={str(z.index): fam.provenance[z.index].as_indices() for z in (x, y, data.s)},
            witness_table=f.to_list(),
            intersections={
                "x_side": data.x_side.rows(),
                "y_side": data.y_side.rows(),
                "sum": data.total.rows(),
            },
            search=_search_report(search),
        )
        # a linear candidate with valid decompositions cannot have a violating pair
        jlog(mod="certificate", level="error", event="refute_done", variant=WITNESS, x=x.index, y=y.index)
        return cert

    cert = Certificate(
        **base,
        variant=INCONCLUSIVE,
        decompositions={str(i): pairs.as_indices() for i, pairs in enumerate(fam.provenance)},
        search=_search_report(search),
    )
    jlog(mod="certificate", event="refute_done", variant=INCONCLUSIVE, probes=search.probes, strategy=strategy)
    return cert


# ---------- validate ----------
class _Invalid(Exception):
    def __init__(self, check: str, detail: str = "") -> None:
        super().__init__(f"{check}: {detail}")
        self.verdict = Verdict(False, check, detail)


def _point(params: ProblemParams, idx: Optional[int], check: str) -> Point:
    if idx is None or not 0 <= idx < params.size:
        raise _Invalid(check, f"index {idx!r} is not a point of F_{params.p}^{params.n}")
    return point_at(params, idx)


def _absent(g, t: int, S: SSet, mode: str) -> bool:
    # materialised sumset when affordable, so absence does not rest on in_tS alone
    if len(S) ** t <= SUMSET_CAP:
        return g not in sumset(S, t, mode)
    return in_tS(g, t, S, mode) is None


def _decompositions(
    cert: Certificate, params: ProblemParams, L: LinearMap, points: List[Point]
) -> Dict[int, DecompositionPairs]:
    t = params.t
    out: Dict[int, DecompositionPairs] = {}
    for z in points:
        raw = cert.decompositions.get(str(z.index))
        if raw is None:
            raise _Invalid("decomposition_points", f"no decomposition for point {z.index}")
        bad_length = len(raw) > t if cert.mode == UPTO else len(raw) != t
        if bad_length:
            want = f"at most {t}" if cert.mode == UPTO else f"exactly {t}"
            raise _Invalid("decomposition_length", f"point {z.index} has {len(raw)} pairs, want {want}")
    for z in points:
        pairs = []
        for item in cert.decompositions[str(z.index)]:
            if len(item) != 2:
                raise _Invalid("decomposition_points", f"point {z.index}: {item!r} is not a pair")
            a = _point(params, item[0], "decomposition_points")
            b = _point(params, item[1], "decomposition_points")
            pairs.append((a, b))
        out[z.index] = DecompositionPairs(tuple(pairs))
    for z in points:
        if resum(out[z.index], params.p) != defect(L, z):
            raise _Invalid("decomposition_sum", f"pairs at point {z.index} do not sum to phi(x) - phi~(x)")
    return out


def _spaces(
    params: ProblemParams, points: List[Point], decomps: Dict[int, DecompositionPairs]
) -> Dict[int, Subspace]:
    bound = 2 * params.t + 1
    spaces = {}
    for z in points:
        V = local_space(z, decomps[z.index], params)
        if V.dim > bound:
            raise _Invalid("dimension", f"dim V_{z.index} = {V.dim} > {bound}")
        if not member(z, V):
            raise _Invalid("membership", f"point {z.index} not in its own V_x")
        spaces[z.index] = V
    return spaces


def _check_uncovered(cert: Certificate, params: ProblemParams, L: LinearMap, S: SSet) -> None:
    x = _point(params, cert.x, "uncovered_point")
    if not _absent(defect(L, x), params.t, S, cert.mode):
        raise _Invalid("uncovered_absence", f"phi(x) - phi~(x) at point {x.index} lies in tS")


def _rows(cert: Certificate, key: str, params: ProblemParams) -> Subspace:
    try:
        return subspace_from_rows(cert.intersections[key], params.p, params.n)
    except (KeyError, TypeError, PFRLabError) as e:
        raise _Invalid("intersections", f"{key}: {e}")


def _check_witness(cert: Certificate, params: ProblemParams, L: LinearMap) -> None:
    x = _point(params, cert.x, "pair_points")
    y = _point(params, cert.y, "pair_points")
    s = point_add(x, y)
    if x.is_zero() or y.is_zero() or s.is_zero():
        raise _Invalid("pair_points", f"degenerate pair ({x.index}, {y.index})")
    pts = [x, y, s]
    decomps = _decompositions(cert, params, L, pts)
    V = _spaces(params, pts, decomps)
    fam = VFamily(params, _SparseSpaces(V, params.size), None, source="certificate")
    data = pair_data(fam, x, y)
    if not data.violating:
        raise _Invalid("violating_condition", f"x+y = {s.index} lies in the intersection sum")
    if cert.intersections is None:
        raise _Invalid("intersections", "missing")
    for key, fresh in (("x_side", data.x_side), ("y_side", data.y_side), ("sum", data.total)):
        if _rows(cert, key, params) != fresh:
            raise _Invalid("intersections", f"{key} does not match the recomputed subspace")

    table = cert.witness_table
    if table is None or len(table) != params.size or any(not 0 <= v < params.p for v in table):
        raise _Invalid("witness_table", f"need {params.size} residues in [0, {params.p})")
    f = FunctionTable(params, table)
    verdict = check_witness(f, x, y, V[x.index], V[y.index], V[s.index])
    if not verdict:
        raise _Invalid(verdict.check, verdict.detail)

    p = params.p
    # f linear on V_z kills every coboundary term, so phi~(z)(f) is forced to f(z)
    forced = 0
    for z, sign in ((s, 1), (x, -1), (y, -1)):
        terms = [apply(coboundary(a, b), f) for a, b in decomps[z.index].pairs]
        if any(terms):
            raise _Invalid("contradiction", f"nonzero coboundary term at point {z.index}: {terms}")
        forced += sign * (f[z.index] - sum(terms))
    D = phi_tilde_eval(L, s) - phi_tilde_eval(L, x) - phi_tilde_eval(L, y)
    if forced % p != 1:
        raise _Invalid("contradiction", f"forced value {forced % p}, want 1")
    if not D.is_zero() or apply(D, f) != 0:
        raise _Invalid("contradiction", f"phi~(x+y) - phi~(x) - phi~(y) = {D!r} is not zero")


def _check_inconclusive(cert: Certificate, params: ProblemParams, L: LinearMap) -> None:
    pts = [point_at(params, i) for i in range(params.size)]
    extra = set(cert.decompositions) - {str(i) for i in range(params.size)}
    if extra:
        raise _Invalid("decomposition_points", f"unknown point keys {sorted(extra)}")
    decomps = _decompositions(cert, params, L, pts)
    V = _spaces(params, pts, decomps)
    fam = VFamily(
        params,
        tuple(V[i] for i in range(params.size)),
        tuple(decomps[i] for i in range(params.size)),
        source="certificate",
    )
    rep = cert.search
    if rep is None:
        raise _Invalid("pair_search", "missing search report")
    if rep.strategy == RANDOMIZED and (rep.seed is None or rep.budget is None):
        raise _Invalid("pair_search", "randomized report needs seed and budget")
    again = search_violating_pair(fam, rep.strategy, seed=rep.seed or 0, budget=rep.budget or 0)
    if again.found:
        x, y = again.pair
        raise _Invalid("pair_search", f"violating pair ({x.index}, {y.index}) exists")
    if again.probes != rep.probes:
        raise _Invalid("pair_search", f"probes {rep.probes} recorded, {again.probes} on replay")


class _SparseSpaces:
    """Index -> Subspace for just the points a witness certificate names."""

    def __init__(self, spaces: Dict[int, Subspace], size: int) -> None:
        self._spaces = spaces
        self._size = size

    def __len__(self) -> int:
        return self._size

    def __getitem__(self, i: int) -> Subspace:
        return self._spaces[i]


def validate_certificate(cert: Certificate, S: Optional[SSet] = None) -> Verdict:
    try:
        if cert.validator_version != VALIDATOR_VERSION:
            raise _Invalid(
                "validator_version", f"certificate v{cert.validator_version}, validator v{VALIDATOR_VERSION}"
            )
        try:
            params = ProblemParams(cert.p, cert.n, cert.t)
            L = LinearMap.from_json(params, cert.map)
            if S is None or (S.params.p, S.params.n) != (params.p, params.n):
                S = build_S(params)
        except PFRLabError as e:
            raise _Invalid("params", str(e))

        if cert.variant == UNCOVERED:
            _check_uncovered(cert, params, L, S)
        elif cert.variant == WITNESS:
            _check_witness(cert, params, L)
        else:
            _check_inconclusive(cert, params, L)
    except _Invalid as bad:
        jlog(mod="certificate", event="certificate_invalid", check=bad.verdict.check, detail=bad.verdict.detail)
        return bad.verdict
    return PASS


# ---------- files ----------
def dumps_certificate(cert: Certificate) -> str:
    return json.dumps(cert.model_dump(mode="json"), indent=2) + "\n"


def save_certificate(cert: Certificate, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_certificate(cert))


def loads_certificate(text: str) -> Certificate:
    try:
        return Certificate.model_validate(json.loads(text))
    except json.JSONDecodeError as e:
        raise CertificateFormatError(f"not JSON: {e}") from e
    except ValidationError as e:
        raise CertificateFormatError(f"schema mismatch: {e.error_count()} error(s): {e.errors()[0]['msg']}") from e


def load_certificate(path: str) -> Certificate:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise CertificateFormatError(f"cannot read {path}: {e}") from e
    return loads_certificate(text)

