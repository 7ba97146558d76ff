# tests/test_functionals.py
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from config import SUMSET_CAP
from field_core import (
    DomainError,
    FunctionTable,
    ProblemParams,
    ResourceError,
    all_points,
    point_add,
    point_at,
    table_random,
)
from functionals import (
    EXACT,
    UPTO,
    Functional,
    apply,
    build_S,
    coboundary,
    evaluation,
    functional_from_json,
    in_tS,
    is_linear_on,
    resum,
    sumset,
    zero_functional,
)
from subspace import full_subspace, span


def every_functional(params):
    p = params.p
    for coeffs in product(range(p), repeat=params.size):
        yield Functional.from_dict(p, dict(enumerate(coeffs)))


# ---------------------------------------------------------
# Algebra
# ---------------------------------------------------------
def test_evaluation_applies_to_value():
    params = ProblemParams(3, 2)
    f = table_random(params, 1)
    for v in all_points(params):
        assert apply(evaluation(v), f) == f[v.index]


def test_coboundary_merges_coincident_points():
    params = ProblemParams(2, 2)
    zero = point_at(params, 0)
    a = point_at(params, 1)
    assert coboundary(zero, zero) == evaluation(zero)
    assert coboundary(a, a) == evaluation(zero)
    assert coboundary(a, point_at(params, 2)).support == ((1, 1), (2, 1), (3, 1))
    params3 = ProblemParams(3, 1)
    one = point_at(params3, 1)
    # e_2 - 2 e_1 over F_3
    assert coboundary(one, one).support == ((1, 1), (2, 1))


@settings(max_examples=80)
@given(st.integers(0, 8), st.integers(0, 8), st.integers(0, 10_000))
def test_coboundary_evaluates_to_additivity_defect(i, j, seed):
    params = ProblemParams(3, 2)
    a, b = point_at(params, i), point_at(params, j)
    f = table_random(params, seed)
    want = (f[point_add(a, b).index] - f[a.index] - f[b.index]) % 3
    assert apply(coboundary(a, b), f) == want


@pytest.mark.parametrize("n", [1, 2, 3])
def test_coboundary_identity_exhaustive_p2(n):
    params = ProblemParams(2, n)
    pts = list(all_points(params))
    for seed in range(100):
        f = table_random(params, seed)
        for a in pts:
            for b in pts:
                want = (f[point_add(a, b).index] - f[a.index] - f[b.index]) % 2
                assert apply(coboundary(a, b), f) == want


def test_combine_and_zero():
    g = Functional.from_terms(5, [(0, 2), (3, 4)])
    h = Functional.from_terms(5, [(0, 3), (1, 1)])
    assert (g + h).support == ((1, 1), (3, 4))
    assert (g - g).is_zero()
    assert g + zero_functional(5) == g
    with pytest.raises(DomainError):
        g + Functional.from_terms(3, [(0, 1)])


def test_functional_json_is_strict():
    params = ProblemParams(2, 2)
    g = functional_from_json(params, [[0, 1], [3, 1]])
    assert g.to_json() == [[0, 1], [3, 1]]
    bad_terms = (
        [[3, 1], [0, 1]],
        [[0, 0]],
        [[4, 1]],
        [[0, 1, 1]],
        [[0, 2]],
        [[0.9, 1]],
        [[True, 1]],
        [[0, "1"]],
        [5],
    )
    for bad in bad_terms:
        with pytest.raises(DomainError):
            functional_from_json(params, bad)


# ---------------------------------------------------------
# S
# ---------------------------------------------------------
@pytest.mark.parametrize("p,n", [(p, n) for p in (2, 3) for n in (1, 2, 3)])
def test_zero_never_in_S(p, n):
    S = build_S(ProblemParams(p, n))
    assert zero_functional(p) not in S
    assert all(not g.is_zero() for g in S.elements)


@pytest.mark.parametrize("n,size", [(1, 1), (2, 2), (3, 8)])
def test_S_size_p2(n, size):
    # 1 + (2^n - 1)(2^n - 2)/6: e_0 plus one element per 2-dim subspace
    assert len(build_S(ProblemParams(2, n))) == size
    assert size == 1 + (2**n - 1) * (2**n - 2) // 6


def test_S_p2n2_elements_and_witnesses(S_p2n2):
    assert [g.support for g in S_p2n2.elements] == [((0, 1),), ((1, 1), (2, 1), (3, 1))]
    assert [(a.index, b.index) for a, b in S_p2n2.witnesses] == [(0, 0), (1, 2)]


def test_S_contains_every_coboundary():
    params = ProblemParams(3, 2)
    S = build_S(params)
    for a in all_points(params):
        for b in all_points(params):
            g = coboundary(a, b)
            assert g in S
            wa, wb = S.witness(g)
            assert (wa.index, wb.index) <= (a.index, b.index)


def test_S_pair_cap():
    with pytest.raises(ResourceError, match="pair cap"):
        build_S(ProblemParams(2, 11))


# ---------------------------------------------------------
# tS membership
# ---------------------------------------------------------
def test_in_tS_t0():
    params = ProblemParams(2, 2)
    S = build_S(params)
    assert len(in_tS(zero_functional(2), 0, S)) == 0
    assert in_tS(evaluation(point_at(params, 0)), 0, S) is None


def test_in_tS_least_decomposition(S_p2n2):
    params = ProblemParams(2, 2)
    e0 = evaluation(point_at(params, 0))
    assert in_tS(e0, 1, S_p2n2).as_indices() == [[0, 0]]
    assert in_tS(e0 + e0, 2, S_p2n2).as_indices() == [[0, 0], [0, 0]]
    # upto returns the fewest summands
    assert in_tS(zero_functional(2), 2, S_p2n2, UPTO).as_indices() == []


def test_in_tS_argument_errors(S_p2n2):
    with pytest.raises(DomainError):
        in_tS(zero_functional(2), -1, S_p2n2)
    with pytest.raises(DomainError):
        in_tS(zero_functional(2), 1, S_p2n2, "some")


@pytest.mark.parametrize("p,n", [(2, 2), (3, 1)])
@pytest.mark.parametrize("t", [0, 1, 2])
@pytest.mark.parametrize("mode", [EXACT, UPTO])
def test_in_tS_agrees_with_sumset(p, n, t, mode):
    params = ProblemParams(p, n)
    S = build_S(params)
    tS = sumset(S, t, mode)
    for g in every_functional(params):
        pairs = in_tS(g, t, S, mode)
        assert (pairs is not None) == (g in tS)
        if pairs is not None:
            assert resum(pairs, p) == g
            assert len(pairs) == t if mode == EXACT else len(pairs) <= t


def test_sumset_cap():
    S = build_S(ProblemParams(2, 3))
    t = 1
    while len(S) ** t <= SUMSET_CAP:
        t += 1
    with pytest.raises(ResourceError, match="sumset cap"):
        sumset(S, t)


# ---------------------------------------------------------
# Linearity on subspaces
# ---------------------------------------------------------
def test_is_linear_on_indicator():
    params = ProblemParams(2, 2)
    V = full_subspace(2, 2)
    ind3 = FunctionTable(params, [0, 0, 0, 1])
    assert not is_linear_on(ind3, V)
    assert is_linear_on(ind3, span([point_at(params, 1)], params))
    assert is_linear_on(FunctionTable(params, [0, 1, 1, 0]), V)


def test_is_linear_on_brute_force():
    params = ProblemParams(3, 2)
    V = span([point_at(params, 4)], params)
    elems = [point_at(params, i) for i in (0, 4, 8)]
    for seed in range(50):
        f = table_random(params, seed)
        want = all(
            f[point_add(a, b).index] == (f[a.index] + f[b.index]) % 3 for a in elems for b in elems
        )
        assert is_linear_on(f, V) == want
