import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ocha_lab.coalgebra import Pair
from ocha_lab.coderivations import ComponentMap
from ocha_lab.errors import ArgumentError
from ocha_lab.extensions import ExtensionSequence, oc_from_extension
from ocha_lab.spaces import GradedSpace
from ocha_lab.structures import (AInfinityStructure, LInfinityStructure,
                                 LinearOchaMorphism, OchaStructure,
                                 check_ainfinity, check_linear_ocha_morphism,
                                 check_linfinity, check_ocha, empty_space,
                                 symmetric_table, symmetrize_ainfinity)

from support import flip_entry, load, relabel, unitriangular

seeds = st.integers(0, 10**6)
AINF_FILES = ["triangular_ainf.json"]
EXT_FILES = ["ext_constrained.json", "ext_twisted.json", "ext_interleaved.json",
             "ext_split.json", "ext_small.json"]


def ainf_samples():
    out = [load(f)[1] for f in AINF_FILES]
    out += [load(f)[1].split.structure for f in EXT_FILES]
    return out


def test_square_zero_differential_passes():
    E = GradedSpace("E", ["x", "y"], [0, 1])
    assert check_ainfinity(AInfinityStructure(E, {1: {(0,): {1: 1}}}), 4)


def test_broken_differential_fails_at_weight_one():
    v = check_ainfinity(load("broken_m1.json")[1], 4)
    assert not v and v.weight() == 1 and v.agree


def test_non_associative_product_fails_at_weight_three():
    E = GradedSpace("E", ["a", "b"], [-1, -1])
    # m2(m2(a,a),a) = a but m2(a,m2(a,a)) = 0
    M = AInfinityStructure(E, {2: {(0, 0): {1: 1}, (1, 0): {0: 1}}})
    v = check_ainfinity(M, 4)
    assert not v
    assert v.witness == (0, 0, 0) and v.residual == {(0,): 1}
    assert v.agree


def test_wrong_degree_rejected():
    E = GradedSpace("E", ["a"], [0])
    with pytest.raises(ArgumentError):
        AInfinityStructure(E, {2: {(0, 0): {0: 1}}})


def test_abelian_linfinity_passes():
    V = GradedSpace("V", ["x", "y"], [0, 1])
    assert check_linfinity(LInfinityStructure(V, {}), 5)


def test_symmetrize_two_term_formula():
    for M in ainf_samples():
        L = symmetrize_ainfinity(M)
        deg = M.space.degrees
        m2, l2 = M.m(2).table, L.l(2).table
        for a in range(M.space.dim):
            for b in range(a, M.space.dim):
                if a == b and deg[a] % 2:
                    continue
                expect = dict(m2.get((a, b), {}))
                s = -1 if deg[a] * deg[b] % 2 else 1
                for x, c in m2.get((b, a), {}).items():
                    expect[x] = expect.get(x, 0) + s * c
                expect = {x: c for x, c in expect.items() if c}
                assert l2.get(((a, b), ()), {}) == expect


def test_symmetric_table_checks_symmetry():
    V = GradedSpace("V", ["x", "y"], [1, 1])
    ok = symmetric_table(V, {(0, 1): {0: 1}, (1, 0): {0: -1}}, 2)
    assert ok == {((0, 1), ()): {0: 1}}
    with pytest.raises(ArgumentError):
        symmetric_table(V, {(0, 1): {0: 1}, (1, 0): {0: 1}}, 2)


@settings(max_examples=15, deadline=None)
@given(seeds, st.sampled_from(range(len(AINF_FILES) + len(EXT_FILES))))
def test_relabelled_structures_pass_on_both_routes(seed, which):
    rng = random.Random(seed)
    M = ainf_samples()[which]
    psi, inv = unitriangular(rng, M.space)
    M2 = relabel(M, psi, inv)
    v = check_ainfinity(M2, 4)
    assert v and v.agree
    lv = check_linfinity(symmetrize_ainfinity(M2), 4)
    assert lv and lv.agree


@settings(max_examples=25, deadline=None)
@given(seeds, st.sampled_from(range(len(AINF_FILES) + len(EXT_FILES))))
def test_single_sign_flip_routes_agree(seed, which):
    rng = random.Random(seed)
    M = ainf_samples()[which]
    psi, inv = unitriangular(rng, M.space)
    M2 = relabel(M, psi, inv)
    bad = AInfinityStructure(M2.space, flip_entry(rng, M2.ops))
    v = check_ainfinity(bad, 4)
    assert v.agree
    assert {r.witness for r in v.routes.values()} == {v.witness}
    L = symmetrize_ainfinity(bad)
    if L.ops:
        assert check_linfinity(L, 4).agree


def test_ocha_with_trivial_open_part_passes():
    S = load("closed_only_ocha.json")[1]
    assert check_ocha(S, 5)
    assert check_ocha(load("zero_ocha.json")[1], 5)


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_ocha_without_open_part_is_linfinity(seed):
    rng = random.Random(seed)
    M = load("triangular_ainf.json")[1]
    psi, inv = unitriangular(rng, M.space)
    L = symmetrize_ainfinity(relabel(M, psi, inv))
    if rng.random() < 0.5 and L.ops:
        L = LInfinityStructure(L.space, flip_entry(rng, L.ops))
    S = OchaStructure(Pair(L.space, empty_space("none")), L.ops, {})
    assert check_ocha(S, 4).ok == check_linfinity(L, 4).ok


@settings(max_examples=20, deadline=None)
@given(seeds, st.sampled_from(range(len(AINF_FILES) + len(EXT_FILES))))
def test_ocha_without_closed_part_is_ainfinity(seed, which):
    rng = random.Random(seed)
    M = ainf_samples()[which]
    if rng.random() < 0.5:
        M = AInfinityStructure(M.space, flip_entry(rng, M.ops))
    n = {(0, k): ComponentMap("open", (0, k), 1, {((), w): v for w, v in c.table.items()})
         for k, c in M.ops.items()}
    S = OchaStructure(Pair(empty_space("none"), M.space), {}, n)
    a, b = check_ocha(S, 4), check_ainfinity(M, 4)
    assert a.ok == b.ok
    if not a.ok:
        assert a.witness == ((), b.witness)


def test_oc_from_extension_structure_passes():
    for f in EXT_FILES:
        X = load(f)[1]
        v = check_ocha(oc_from_extension(X, 4), 4)
        assert v and v.agree, f


def identity_morphism(S):
    return LinearOchaMorphism({i: {i: 1} for i in range(S.closed.dim)},
                              {i: {i: 1} for i in range(S.open.dim)})


def test_identity_morphism_passes():
    for f in ["ext_constrained_oc.json", "ocha_small.json", "abelian_ocha.json"]:
        S = load(f)[1]
        v = check_linear_ocha_morphism(identity_morphism(S), S, S, 4)
        assert v and v.agree


def test_any_map_between_zero_structures_passes():
    Hc = GradedSpace("Hc", ["c1", "c2"], [0, 0])
    Ho = GradedSpace("Ho", ["o1"], [0])
    S = OchaStructure(Pair(Hc, Ho))
    phi = LinearOchaMorphism({0: {1: 3}, 1: {0: Fraction(1, 2)}}, {0: {0: -1}},
                             {0: {0: 2}})
    assert check_linear_ocha_morphism(phi, S, S, 4)


def test_morphism_with_f10_agrees_on_both_routes():
    doc = load("morphism_f10.json")[1]
    assert doc["map"].f10
    v = check_linear_ocha_morphism(doc["map"], doc["source"], doc["target"], 4)
    assert v and v.agree


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_perturbed_morphism_routes_agree(seed):
    rng = random.Random(seed)
    doc = load("morphism_f10.json")[1]
    phi = doc["map"]
    parts = {k: {i: dict(r) for i, r in getattr(phi, k).items()} for k in ("g", "f01", "f10")}
    slots = [(k, i, j) for k, m in parts.items() for i, r in m.items() for j in r]
    k, i, j = rng.choice(sorted(slots))
    parts[k][i][j] += rng.choice([1, -1, Fraction(1, 2)])
    v = check_linear_ocha_morphism(LinearOchaMorphism(**parts), doc["source"],
                                   doc["target"], 4)
    assert v.agree
