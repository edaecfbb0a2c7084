import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from ocha_lab.coalgebra import Pair
from ocha_lab.coderivations import ComponentMap
from ocha_lab.enveloping import (contexts, enveloping,
                                 enveloping_extension_check,
                                 induced_extension_morphism, linf_enveloping,
                                 substitute)
from ocha_lab.errors import PreconditionError
from ocha_lab.extensions import ExtensionSequence, SplitAInfinity
from ocha_lab.spaces import GradedSpace, wedge_words
from ocha_lab.structures import (LinearOchaMorphism, OchaStructure,
                                 check_ainfinity, empty_space,
                                 symmetrize_ainfinity)

from support import load, relabel, unitriangular

SMALL = ["ocha_small.json", "abelian_ocha.json", "closed_only_ocha.json", "zero_ocha.json"]


def abelian_weight_two(closed, open_):
    """Closed-form weight-2 dimensions of the abelian enveloping algebra:
    closed-closed products modulo graded symmetry, one of the two mixed
    orders, and no open-open products."""
    dims = {}

    def bump(d, n):
        if n:
            dims[d] = dims.get(d, 0) + n

    for x, y in product(closed.degrees, repeat=2):
        bump(x + y + 1, 1)
    for w in wedge_words(closed, 2):
        bump(sum(closed.degrees[i] for i in w) + 1, -1)
    for x, y in product(closed.degrees, open_.degrees):
        bump(x + y + 1, 1)
    return {(2, d): n for d, n in dims.items() if n}


def test_contexts_and_substitution():
    ctxs = contexts(1, 2)
    assert sorted(ctxs, key=repr) == sorted([(-1, 0), (0, -1)], key=repr)
    assert substitute((0, -1), (0, 0)) == (0, (0, 0))


@settings(max_examples=10, deadline=None)
@given(st.lists(st.integers(-1, 1), min_size=1, max_size=2),
       st.lists(st.integers(-1, 1), min_size=0, max_size=1))
def test_abelian_weight_two_closed_form(cdeg, odeg):
    Hc = GradedSpace("Hc", [f"c{i}" for i in range(len(cdeg))], cdeg)
    Ho = GradedSpace("Ho", [f"o{i}" for i in range(len(odeg))], odeg)
    q = enveloping(OchaStructure(Pair(Hc, Ho)), 2, slack=1)
    got = {k: v for k, v in q.dimension_table().items() if k[0] == 2}
    assert got == abelian_weight_two(Hc, Ho)


def test_single_even_generator_square_is_killed():
    Hc = GradedSpace("Hc", ["c"], [0])
    q = enveloping(OchaStructure(Pair(Hc, empty_space("none"))), 2)
    assert q.dimension_table() == {(1, 0): 1}


def test_no_open_part_matches_linfinity_enveloping():
    S = load("closed_only_ocha.json")[1]
    a = enveloping(S, 3).dimension_table()
    b = linf_enveloping(S.l_infinity(), 3).dimension_table()
    assert a == b


@settings(max_examples=4, deadline=None)
@given(st.integers(0, 10**6))
def test_no_open_part_matches_linfinity_enveloping_random(seed):
    rng = random.Random(seed)
    M = load("triangular_ainf.json")[1]
    psi, inv = unitriangular(rng, M.space)
    L = symmetrize_ainfinity(relabel(M, psi, inv))
    S = OchaStructure(Pair(L.space, empty_space("none")), L.ops, {})
    assert enveloping(S, 3).dims == linf_enveloping(L, 3).dims


def test_no_closed_part_collapses_to_generators():
    M = load("triangular_ainf.json")[1]
    n = {(0, k): ComponentMap("open", (0, k), 1, {((), w): v for w, v in c.table.items()})
         for k, c in M.ops.items()}
    S = OchaStructure(Pair(empty_space("none"), M.space), {}, n)
    r = enveloping_extension_check(S, 3)
    assert r.ok
    assert r.full == {(1, -1): 2} == r.open_part
    assert r.closed_part == {}


@pytest.mark.parametrize("name", SMALL)
def test_extension_check_small_examples(name):
    r = enveloping_extension_check(load(name)[1], 3)
    assert r.ok, r.failures
    assert r.stable_slack == 2
    for key, n in r.full.items():
        assert n == r.open_part.get(key, 0) + r.closed_part.get(key, 0)


@pytest.mark.parametrize("name", SMALL)
def test_dimensions_non_increasing_in_slack(name):
    S = load(name)[1]
    prev = None
    for s in range(4):
        d = enveloping(S, 3, s, recheck=False).dims
        if prev is not None:
            assert all(d.get(k, 0) <= prev.get(k, 0) for k in set(d) | set(prev))
        prev = d


@pytest.mark.parametrize("name", SMALL)
def test_quotient_operations_form_an_ainfinity_algebra(name):
    q = enveloping(load(name)[1], 3)
    M, weights, normal = q.structure()
    assert len(normal) == sum(q.dims.values())
    assert check_ainfinity(M, 3, weights)


def test_non_ocha_rejected():
    S = load("ocha_small.json")[1]
    # n_{1,1}(p; a) = a and n_{0,2}(a, a) = a: the derivation rule on
    # (p; a, a) leaves a residual a
    bad = OchaStructure(S.pair, {}, {(1, 1): S.n[(1, 1)], (0, 2): {((), (0, 0)): {0: 1}}})
    with pytest.raises(PreconditionError):
        enveloping(bad, 2)


def test_universal_property_bundled():
    doc = load("universal_small.json")[1]
    r = induced_extension_morphism(doc["map"], doc["extension"], doc["ocha"], 3)
    assert r.ok, (r.relation, r.witness)
    assert r.table


def test_universal_property_zero_map():
    A = GradedSpace("A", ["a"], [-1])
    B = GradedSpace("B", ["p"], [-1])
    X = ExtensionSequence.from_split(SplitAInfinity.build(A, B, {}))
    S = OchaStructure(Pair(B, A))
    r = induced_extension_morphism(LinearOchaMorphism(), X, S, 3)
    assert r.ok
    assert all(not v for v in r.table.values())


def test_universal_property_needs_a_morphism():
    doc = load("universal_small.json")[1]
    phi = LinearOchaMorphism({0: {0: 2}}, {0: {0: 1}})
    with pytest.raises(PreconditionError):
        induced_extension_morphism(phi, doc["extension"], doc["ocha"], 2)
