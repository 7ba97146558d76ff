#!/usr/bin/env python3
# file: bin/pfrlab.py
# Command-line entry point: refute candidate maps, validate certificates,
# run parameter sweeps, the tiny-scale oracle and counting diagnostics.

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from certificate import (
    INCONCLUSIVE,
    CertificateFormatError,
    dumps_certificate,
    load_certificate,
    refute,
    validate_certificate,
)
from config import DEFAULT_BUDGET, DEFAULT_MODE, DEFAULT_STRATEGY, DEFAULT_WORKERS, TABLE_CAP
from construction import (
    RANDOMIZED,
    LinearMap,
    UncoveredPoint,
    build_family,
    full_family,
    random_family,
    random_map,
    span_family,
)
from counting import SweepCell, counting_chain_check, rows_to_csv, sweep
from field_core import DomainError, PFRLabError, ProblemParams, is_prime, power_exceeds
from functionals import build_S
from oracle import ExistsValidMap, refute_exhaustive
from runlog import jlog
from version import VERSION

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_INPUT = 4
EXIT_INCONCLUSIVE = 10
EXIT_MAP_EXISTS = 20

EPILOG = """
Exit codes:
   0  refuted (refute/oracle), certificate valid (validate), sweep done
   1  certificate invalid, or the counting implication failed (diag)
   2  usage error
   3  parameter, config or cap error
   4  malformed input file (map, certificate, grid)
  10  inconclusive: every point decomposes and no violating pair was found
  20  a valid linear map exists (refute --map-source all, oracle)

Examples:
  pfrlab.py refute --p 2 --n 2 --t 0 --map-source random --seed 0 --out cert.json
  pfrlab.py validate cert.json
  pfrlab.py refute --p 2 --n 1 --t 1 --map-source all
  pfrlab.py sweep --grid grid.json --out sweep.csv
  pfrlab.py diag --p 2 --n 4 --t 1 --family random --seed 3
"""


# ---------- run config ----------
class RunConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    p: int
    n: int = Field(ge=1)
    t: int = Field(1, ge=0)
    mode: Literal["exact", "upto"] = DEFAULT_MODE
    strategy: Literal["exhaustive", "randomized"] = DEFAULT_STRATEGY
    seed: Optional[int] = None
    budget: int = Field(DEFAULT_BUDGET, ge=1)
    workers: int = Field(DEFAULT_WORKERS, ge=1)

    @field_validator("p")
    @classmethod
    def _prime(cls, v: int) -> int:
        if not is_prime(v):
            raise ValueError(f"p={v} is not prime")
        return v

    @model_validator(mode="after")
    def _caps(self) -> "RunConfig":
        if power_exceeds(self.p, self.n, TABLE_CAP):
            raise ValueError(f"p^n = {self.p}^{self.n} exceeds table cap {TABLE_CAP}")
        if self.strategy == RANDOMIZED and self.seed is None:
            raise ValueError("randomized pair search needs an explicit --seed")
        return self

    @property
    def params(self) -> ProblemParams:
        return ProblemParams(self.p, self.n, self.t)


class GridCell(BaseModel):
    model_config = ConfigDict(extra="forbid")

    p: int
    n: int
    t: int
    seed: int
    source: Literal["random", "from-map", "span", "full"] = "random"
    strategy: Literal["exhaustive", "randomized"] = RANDOMIZED


class GridProduct(BaseModel):
    """Cartesian grid: every combination of the listed values, in nested order p, n, t, source, seed."""

    model_config = ConfigDict(extra="forbid")

    p: List[int]
    n: List[int]
    t: List[int]
    seed: List[int]
    source: List[Literal["random", "from-map", "span", "full"]] = ["random"]
    strategy: Literal["exhaustive", "randomized"] = RANDOMIZED

    def cells(self) -> List[GridCell]:
        return [
            GridCell(p=p, n=n, t=t, source=src, seed=seed, strategy=self.strategy)
            for p, n, t, src, seed in itertools.product(self.p, self.n, self.t, self.source, self.seed)
        ]


class _InputError(Exception):
    """A file named on the command line is missing or malformed."""


class _UsageError(Exception):
    """Flags that argparse accepts but that do not combine."""


def _read_json(path: str, what: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise _InputError(f"cannot read {what} {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise _InputError(f"{what} {path} is not JSON: {e}") from e


def load_map(path: str, params: ProblemParams) -> LinearMap:
    """Map file: a list of basis images, or an object with a "map" key."""
    data = _read_json(path, "map file")
    if isinstance(data, dict):
        data = data.get("map")
    try:
        return LinearMap.from_json(params, data)
    except (DomainError, TypeError, ValueError) as e:
        raise _InputError(f"map file {path}: {e}") from e


def load_grid(path: str) -> List[SweepCell]:
    data = _read_json(path, "grid file")
    try:
        if isinstance(data, list):
            cells = [GridCell.model_validate(c) for c in data]
        else:
            cells = GridProduct.model_validate(data).cells()
    except ValidationError as e:
        raise _InputError(f"grid file {path}: {e.errors()[0]['msg']}") from e
    return [SweepCell(c.p, c.n, c.t, c.source, c.seed, c.strategy) for c in cells]


def _emit(text: str, out: Optional[str]) -> None:
    if not out:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    parent = os.path.dirname(os.path.abspath(out))
    os.makedirs(parent, exist_ok=True)
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


# ---------- commands ----------
def _oracle_result(cfg: RunConfig, out: Optional[str]) -> int:
    verdict = refute_exhaustive(cfg.params, cfg.mode)
    if isinstance(verdict, ExistsValidMap):
        _emit(
            _json_text({"verdict": "exists", "p": cfg.p, "n": cfg.n, "t": cfg.t, "mode": cfg.mode,
                        "map": verdict.L.to_json(), "visited": verdict.visited}),
            out,
        )
        return EXIT_MAP_EXISTS
    _emit(
        _json_text({"verdict": "none", "p": cfg.p, "n": cfg.n, "t": cfg.t, "mode": cfg.mode,
                    "visited": verdict.visited}),
        out,
    )
    return EXIT_OK


def cmd_refute(cfg: RunConfig, args: argparse.Namespace) -> int:
    source = args.map_source or ("file" if args.map_file else None)
    if source == "all":
        return _oracle_result(cfg, args.out)
    params = cfg.params
    S = build_S(params)
    if source == "file":
        if not args.map_file:
            raise _UsageError("--map-source file needs --map-file")
        L = load_map(args.map_file, params)
    elif source == "random":
        if cfg.seed is None:
            raise _UsageError("--map-source random needs an explicit --seed")
        L = random_map(params, S, cfg.t, cfg.seed)
    else:
        raise _UsageError("give --map-file or --map-source")
    cert = refute(L, cfg.t, S, cfg.mode, cfg.strategy, cfg.seed or 0, cfg.budget, cfg.workers)
    _emit(dumps_certificate(cert), args.out)
    return EXIT_INCONCLUSIVE if cert.variant == INCONCLUSIVE else EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    try:
        cert = load_certificate(args.certificate)
    except CertificateFormatError as e:
        raise _InputError(str(e)) from e
    verdict = validate_certificate(cert)
    if verdict:
        print(f"valid: {cert.variant}")
        return EXIT_OK
    print(f"invalid: {verdict.check}: {verdict.detail}")
    return EXIT_INVALID


def cmd_sweep(args: argparse.Namespace) -> int:
    cells = load_grid(args.grid)
    rows = sweep(cells, budget=args.budget, workers=args.workers)
    _emit(rows_to_csv(rows), args.out)
    return EXIT_OK


def cmd_oracle(cfg: RunConfig, args: argparse.Namespace) -> int:
    return _oracle_result(cfg, args.out)


def cmd_diag(cfg: RunConfig, args: argparse.Namespace) -> int:
    params = cfg.params
    kind = args.family
    if kind in ("random", "from-map") and cfg.seed is None:
        raise _UsageError(f"--family {kind} needs an explicit --seed")
    if kind == "random":
        fam = random_family(params, 2 * cfg.t + 1, cfg.seed)
    elif kind == "span":
        fam = span_family(params)
    elif kind == "full":
        fam = full_family(params)
    else:
        S = build_S(params)
        fam = build_family(random_map(params, S, cfg.t, cfg.seed), cfg.t, S, cfg.mode)
        if isinstance(fam, UncoveredPoint):
            _emit(_json_text({"family": kind, "uncovered_point": fam.x.index}), args.out)
            return EXIT_OK
    report = counting_chain_check(fam, workers=cfg.workers)
    _emit(_json_text({"family": kind, "p": cfg.p, "n": cfg.n, "t": cfg.t, **report.as_dict()}), args.out)
    return EXIT_OK if report.holds else EXIT_INVALID


# ---------- argparse ----------
def build_parser() -> argparse.ArgumentParser:
    problem = argparse.ArgumentParser(add_help=False)
    problem.add_argument("--p", type=int, required=True, help="field characteristic (prime)")
    problem.add_argument("--n", type=int, required=True, help="dimension of F_p^n")
    problem.add_argument("--t", type=int, default=1, help="number of coboundaries per decomposition")
    problem.add_argument("--mode", choices=["exact", "upto"], default=DEFAULT_MODE)

    search = argparse.ArgumentParser(add_help=False)
    search.add_argument("--strategy", choices=["exhaustive", "randomized"], default=DEFAULT_STRATEGY)
    search.add_argument("--seed", type=int, default=None, help="required for anything randomized")
    search.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="probes for randomized search")
    search.add_argument("--workers", type=int, default=DEFAULT_WORKERS)

    output = argparse.ArgumentParser(add_help=False)
    output.add_argument("--out", default=None, help="output path (default: stdout)")

    ap = argparse.ArgumentParser(
        prog="pfrlab.py",
        description=f"pfrlab {VERSION}: refutation certificates for linear approximations of the evaluation map",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p_ref = sub.add_parser("refute", parents=[problem, search, output], help="refute one candidate map")
    p_ref.add_argument("--map-file", default=None, help="JSON list of basis images [[point_index, coeff], ...]")
    p_ref.add_argument(
        "--map-source",
        choices=["file", "random", "all"],
        default=None,
        help="file: --map-file; random: seeded covered candidate; all: exhaustive search over every map",
    )

    p_val = sub.add_parser("validate", help="re-check a certificate from its own contents")
    p_val.add_argument("certificate")

    p_sw = sub.add_parser("sweep", parents=[output], help="violating-pair and U statistics over a grid")
    p_sw.add_argument("--grid", required=True, help="JSON list of cells or a cartesian object")
    p_sw.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p_sw.add_argument("--workers", type=int, default=DEFAULT_WORKERS)

    sub.add_parser("oracle", parents=[problem, output], help="exhaustive search for a valid linear map")

    p_diag = sub.add_parser("diag", parents=[problem, search, output], help="counting-chain check on one family")
    p_diag.add_argument("--family", choices=["random", "span", "full", "from-map"], default="random")
    return ap


def _run_config(args: argparse.Namespace) -> RunConfig:
    fields = {k: getattr(args, k) for k in RunConfig.model_fields if getattr(args, k, None) is not None}
    return RunConfig(**fields)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    cmd = args.command
    try:
        if cmd == "validate":
            return cmd_validate(args)
        if cmd == "sweep":
            if args.budget < 1 or args.workers < 1:
                raise PFRLabError("--budget and --workers must be >= 1")
            return cmd_sweep(args)
        cfg = _run_config(args)
        if cmd == "refute":
            return cmd_refute(cfg, args)
        if cmd == "oracle":
            return cmd_oracle(cfg, args)
        return cmd_diag(cfg, args)
    except _UsageError as e:
        jlog(mod="cli", level="error", event="cli_error", command=cmd, kind="usage", error=str(e))
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except _InputError as e:
        jlog(mod="cli", level="error", event="cli_error", command=cmd, kind="input", error=str(e))
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except ValidationError as e:
        msg = "; ".join(err["msg"] for err in e.errors())
        jlog(mod="cli", level="error", event="cli_error", command=cmd, kind="config", error=msg)
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_CONFIG
    except PFRLabError as e:
        jlog(mod="cli", level="error", event="cli_error", command=cmd, kind="config", error=str(e))
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
