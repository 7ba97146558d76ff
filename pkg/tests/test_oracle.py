# tests/test_oracle.py
import pytest

from certificate import INCONCLUSIVE, UNCOVERED, refute, validate_certificate
from config import ORACLE_CAP
from construction import LinearMap, UncoveredPoint, build_family
from field_core import ProblemParams, ResourceError
from functionals import EXACT, UPTO, build_S, sumset
from oracle import (
    ExistsValidMap,
    NoValidMap,
    classify_maps,
    is_valid_map,
    iter_candidate_maps,
    refute_exhaustive,
)


def test_p2n1t1_exact_map_exists(p2n1):
    verdict = refute_exhaustive(p2n1, EXACT)
    assert isinstance(verdict, ExistsValidMap)
    # phi~(1) = e_1 + e_0
    assert verdict.L.to_json() == [[[0, 1], [1, 1]]]
    assert verdict.visited == 1


def test_p2n1t1_upto_prefers_smallest_candidate(p2n1):
    verdict = refute_exhaustive(p2n1, UPTO)
    assert isinstance(verdict, ExistsValidMap)
    assert verdict.L.to_json() == [[[1, 1]]]


@pytest.mark.parametrize("p,n", [(2, 1), (2, 2), (3, 1), (5, 1)])
@pytest.mark.parametrize("mode", [EXACT, UPTO])
def test_t0_never_has_a_map(p, n, mode):
    verdict = refute_exhaustive(ProblemParams(p, n, 0), mode)
    assert isinstance(verdict, NoValidMap)
    assert verdict.visited == 0


def test_p2n2t1_first_valid_map(p2n2):
    verdict = refute_exhaustive(p2n2, EXACT)
    assert isinstance(verdict, ExistsValidMap)
    assert verdict.L.to_json() == [[[0, 1], [1, 1]], [[0, 1], [2, 1]]]


def test_candidate_enumeration_size():
    params = ProblemParams(2, 2, 1)
    assert sum(1 for _ in iter_candidate_maps(params)) == 256
    assert len(set(iter_candidate_maps(ProblemParams(2, 1, 1)))) == 4


def test_candidate_enumeration_cap():
    with pytest.raises(ResourceError, match="oracle cap"):
        next(iter_candidate_maps(ProblemParams(2, 4, 1)))
    assert (2**16) ** 4 > ORACLE_CAP


def test_exactly_four_valid_maps_p2n2t1(p2n2, S_p2n2):
    valid = [L for L, ok in classify_maps(p2n2, EXACT, S_p2n2) if ok]
    # phi~(e_1) in {e_1 + e_0, e_2 + e_3}, phi~(e_2) in {e_2 + e_0, e_1 + e_3}
    assert sorted(L.to_json() for L in valid) == sorted(
        [
            [a, b]
            for a in ([[0, 1], [1, 1]], [[2, 1], [3, 1]])
            for b in ([[0, 1], [2, 1]], [[1, 1], [3, 1]])
        ]
    )


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("t", [0, 1])
@pytest.mark.parametrize("mode", [EXACT, UPTO])
def test_oracle_and_pipeline_agree(n, t, mode):
    params = ProblemParams(2, n, t)
    S = build_S(params)
    tS = sumset(S, t, mode)
    classified = classify_maps(params, mode, S)
    assert any(ok for _, ok in classified) == isinstance(refute_exhaustive(params, mode, S), ExistsValidMap)
    for L, ok in classified:
        assert is_valid_map(L, t, S, mode, tS) == ok
        cert = refute(L, t, S, mode)
        if ok:
            # nothing refutes a valid map; the certificate records full coverage instead
            assert cert.variant == INCONCLUSIVE
            assert validate_certificate(cert, S).ok
        else:
            assert cert.variant == UNCOVERED
            assert validate_certificate(cert, S).ok
            assert isinstance(build_family(L, t, S, mode), UncoveredPoint)


def test_oracle_cap_on_tS(monkeypatch):
    import oracle

    monkeypatch.setattr(oracle, "ORACLE_CAP", 1)
    with pytest.raises(ResourceError, match="oracle cap"):
        refute_exhaustive(ProblemParams(2, 2, 1), EXACT)


def test_linear_map_hashable_for_sets(p2n1):
    L = LinearMap.from_json(p2n1, [[[0, 1], [1, 1]]])
    assert L in set(iter_candidate_maps(p2n1))
