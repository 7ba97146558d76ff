# tests/test_certificate.py
import json

import pytest

from certificate import (
    INCONCLUSIVE,
    UNCOVERED,
    WITNESS,
    Certificate,
    CertificateFormatError,
    dumps_certificate,
    load_certificate,
    loads_certificate,
    refute,
    save_certificate,
    validate_certificate,
)
from construction import EXHAUSTIVE, RANDOMIZED, LinearMap, random_map, span_family
from field_core import ProblemParams
from functionals import UPTO, build_S
from version import VALIDATOR_VERSION

VALID_MAP = [[[0, 1], [1, 1]], [[0, 1], [2, 1]]]


@pytest.fixture
def valid_L(p2n2):
    return LinearMap.from_json(p2n2, VALID_MAP)


@pytest.fixture
def inconclusive(valid_L, S_p2n2):
    return refute(valid_L, 1, S_p2n2)


def tampered(cert, **changes):
    data = cert.model_dump(mode="json")
    data.update(changes)
    return Certificate.model_validate(data)


# ---------------------------------------------------------
# Emission
# ---------------------------------------------------------
def test_t0_is_uncovered_at_zero():
    for p, n in [(2, 2), (3, 2), (5, 1)]:
        params = ProblemParams(p, n, 0)
        S = build_S(params)
        cert = refute(random_map(params, S, 0, 1), 0, S)
        assert cert.variant == UNCOVERED
        assert cert.x == 0
        assert validate_certificate(cert, S).ok


def test_valid_map_gives_inconclusive(inconclusive):
    assert inconclusive.variant == INCONCLUSIVE
    assert inconclusive.decompositions == {"0": [[0, 0]], "1": [[0, 0]], "2": [[0, 0]], "3": [[1, 2]]}
    assert inconclusive.search.strategy == EXHAUSTIVE
    assert inconclusive.search.probes == 6
    assert inconclusive.witness_table is None
    assert validate_certificate(inconclusive).ok


def test_randomized_inconclusive_replays(valid_L, S_p2n2):
    cert = refute(valid_L, 1, S_p2n2, strategy=RANDOMIZED, seed=4, budget=50)
    assert cert.variant == INCONCLUSIVE
    assert (cert.search.seed, cert.search.budget, cert.search.probes) == (4, 50, 50)
    assert validate_certificate(cert).ok
    assert validate_certificate(tampered(cert, search={**cert.search.model_dump(), "probes": 49})).check == "pair_search"


def test_upto_certificate(p2n2, S_p2n2):
    L = LinearMap.from_json(p2n2, [[[1, 1]], [[2, 1]]])
    cert = refute(L, 1, S_p2n2, mode=UPTO)
    assert cert.variant == INCONCLUSIVE
    assert cert.decompositions["1"] == []
    assert validate_certificate(cert).ok


def test_uncovered_for_unit_map(p2n2, S_p2n2):
    L = LinearMap.from_json(p2n2, [[[1, 1]], [[2, 1]]])
    cert = refute(L, 1, S_p2n2)
    assert (cert.variant, cert.x) == (UNCOVERED, 1)
    assert validate_certificate(cert).ok


# ---------------------------------------------------------
# Tampering
# ---------------------------------------------------------
def test_tampered_decomposition_pair(inconclusive):
    decs = dict(inconclusive.decompositions)
    decs["3"] = [[0, 0]]
    verdict = validate_certificate(tampered(inconclusive, decompositions=decs))
    assert not verdict.ok
    assert verdict.check == "decomposition_sum"


def test_tampered_t(inconclusive):
    verdict = validate_certificate(tampered(inconclusive, t=0))
    assert not verdict.ok
    assert verdict.check == "decomposition_length"


def test_tampered_uncovered_t():
    params = ProblemParams(2, 2, 0)
    S = build_S(params)
    cert = refute(random_map(params, S, 0, 0), 0, S)
    # e_0 lies in 1S, so the point is covered once t is raised
    assert validate_certificate(tampered(cert, t=1)).check == "uncovered_absence"
    assert validate_certificate(tampered(cert, x=7)).check == "uncovered_point"


def test_tampered_map_and_version(inconclusive):
    assert validate_certificate(tampered(inconclusive, map=[[[0, 1]]])).check == "params"
    assert validate_certificate(tampered(inconclusive, p=4)).check == "params"
    assert validate_certificate(tampered(inconclusive, validator_version="0")).check == "validator_version"
    assert VALIDATOR_VERSION != "0"


def test_missing_and_bad_points(inconclusive):
    decs = dict(inconclusive.decompositions)
    del decs["2"]
    assert validate_certificate(tampered(inconclusive, decompositions=decs)).check == "decomposition_points"
    decs = dict(inconclusive.decompositions, **{"2": [[0, 9]]})
    assert validate_certificate(tampered(inconclusive, decompositions=decs)).check == "decomposition_points"
    decs = dict(inconclusive.decompositions, **{"9": [[0, 0]]})
    assert validate_certificate(tampered(inconclusive, decompositions=decs)).check == "decomposition_points"


def test_witness_certificate_checks(inconclusive):
    # a hand-made witness claim for the span-family pair of F_2^2
    fam = span_family(ProblemParams(2, 2, 1))
    assert fam.space(3).dim == 1
    claim = tampered(
        inconclusive,
        variant=WITNESS,
        x=1,
        y=2,
        decompositions={"1": [[0, 0]], "2": [[0, 0]], "3": [[0, 0]]},
        witness_table=[0, 0, 0, 1],
        intersections={"x_side": [], "y_side": [], "sum": []},
    )
    # V_3 would have to be span(3), but the map's defect at 3 is not e_0
    assert validate_certificate(claim).check == "decomposition_sum"
    assert validate_certificate(tampered(claim, x=3, y=3)).check == "pair_points"
    assert validate_certificate(tampered(claim, y=None)).check == "pair_points"


def test_honest_witness_data_hits_a_check(inconclusive):
    # real decompositions: V_3 is the whole plane, so (1, 2) no longer violates
    claim = tampered(
        inconclusive,
        variant=WITNESS,
        x=1,
        y=2,
        decompositions={"1": [[0, 0]], "2": [[0, 0]], "3": [[1, 2]]},
        witness_table=[0, 0, 0, 1],
        intersections={"x_side": [[1, 0]], "y_side": [[0, 1]], "sum": [[1, 0], [0, 1]]},
    )
    assert validate_certificate(claim).check == "violating_condition"


# ---------------------------------------------------------
# Files
# ---------------------------------------------------------
def test_save_and_load(tmp_path, inconclusive):
    path = tmp_path / "cert.json"
    save_certificate(inconclusive, str(path))
    text = path.read_text(encoding="utf-8")
    assert text == dumps_certificate(inconclusive)
    assert text.endswith("\n")
    loaded = load_certificate(str(path))
    assert loaded == inconclusive
    assert validate_certificate(loaded).ok


def test_output_is_byte_deterministic(valid_L, S_p2n2):
    assert dumps_certificate(refute(valid_L, 1, S_p2n2)) == dumps_certificate(refute(valid_L, 1, S_p2n2))


def test_field_names_are_frozen(inconclusive):
    data = json.loads(dumps_certificate(inconclusive))
    assert set(data) == {
        "p", "n", "t", "mode", "map", "variant", "x", "y", "decompositions",
        "witness_table", "intersections", "search", "validator_version",
    }


def test_malformed_files(tmp_path, inconclusive):
    text = dumps_certificate(inconclusive)
    with pytest.raises(CertificateFormatError, match="not JSON"):
        loads_certificate(text[: len(text) // 2])
    with pytest.raises(CertificateFormatError, match="schema"):
        loads_certificate(json.dumps({**json.loads(text), "extra": 1}))
    with pytest.raises(CertificateFormatError, match="schema"):
        loads_certificate(json.dumps({**json.loads(text), "variant": "maybe"}))
    with pytest.raises(CertificateFormatError, match="cannot read"):
        load_certificate(str(tmp_path / "missing.json"))
