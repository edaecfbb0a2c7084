import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ocha_lab.errors import PreconditionError
from ocha_lab.extensions import (ExtensionSequence, SplitAInfinity,
                                 check_ainfinity_ideal, check_extension,
                                 check_ocha_constraint, check_xi_intertwines,
                                 oc_from_extension)
from ocha_lab.spaces import GradedSpace
from ocha_lab.structures import (check_linfinity, check_ocha,
                                 symmetrize_ainfinity)

from support import load, relabel, unitriangular

VALID = ["ext_constrained.json", "ext_twisted.json", "ext_interleaved.json",
         "ext_split.json", "ext_small.json"]


def tiny_split(ops):
    A = GradedSpace("A", ["a"], [-1])
    B = GradedSpace("B", ["b", "b2"], [-1, -1])
    return SplitAInfinity.build(A, B, ops)


def test_constraint_direct_sum_passes():
    c = check_ocha_constraint(load("ext_split.json")[1].split)
    assert c and c.strict_ok and c.tolerant_ok


def test_constraint_pure_b_into_a_fails():
    c = check_ocha_constraint(tiny_split({2: {(1, 2): {0: 1}}}))
    assert not c.tolerant_ok and not c.strict_ok
    assert c.witness()[1] == (1, 2)


def test_constraint_two_sided_action():
    S = tiny_split({2: {(0, 1): {0: 1}, (1, 0): {0: 1}, (1, 2): {1: 1}}})
    strict = check_ocha_constraint(S)
    tolerant = check_ocha_constraint(S, tolerant=True)
    assert tolerant.ok and not strict.ok
    assert strict.interleaved[0][1] == (1, 0)


def test_constraint_bundled_examples():
    assert check_ocha_constraint(load("ext_constrained.json")[1].split).strict_ok
    inter = check_ocha_constraint(load("ext_interleaved.json")[1].split)
    assert inter.tolerant_ok and not inter.strict_ok
    bad = check_ocha_constraint(load("ext_violating.json")[1].split, tolerant=True)
    assert not bad and "B-output" in bad.offending[0][3]


def test_ideal_examples():
    X = load("ext_constrained.json")[1]
    M, E = X.split.structure, X.split.E
    everything = [{i: Fraction(1)} for i in range(E.dim)]
    assert check_ainfinity_ideal(everything, M, 3)
    assert check_ainfinity_ideal([], M, 3)
    A = [{e: Fraction(1)} for e in X.split.a_index]
    assert check_ainfinity_ideal(A, M, 3)
    B = [{e: Fraction(1)} for e in X.split.b_index]
    v = check_ainfinity_ideal(B, M, 3)
    assert not v and v.relation == "ideal"


@pytest.mark.parametrize("name", VALID)
def test_bundled_extensions_pass(name):
    assert check_extension(load(name)[1], 4)


def test_violating_extension_fails():
    v = check_extension(load("ext_violating.json")[1], 4)
    assert not v and v.witness is not None


def test_extension_detects_bad_maps():
    X = load("ext_small.json")[1]
    s = X.split
    # projection that does not kill A
    proj = {e: {0: Fraction(1)} for e in range(s.E.dim)}
    v = check_extension(ExtensionSequence(s, projection=proj), 3)
    assert not v and v.relation == "projection o inclusion != 0"


def test_oc_from_constrained_extension_at_weight_five():
    X = load("ext_constrained.json")[1]
    assert set(X.split.structure.ops) == {1, 2, 3}
    S = oc_from_extension(X, 5)
    v = check_ocha(S, 5)
    assert v and v.agree
    L = symmetrize_ainfinity(X.on_B)
    assert {k: c.table for k, c in S.l.items()} == {k: c.table for k, c in L.ops.items()}
    assert check_linfinity(L, 5)


@pytest.mark.parametrize("name", VALID)
def test_oc_structure_intertwines_xi(name):
    X = load(name)[1]
    S = oc_from_extension(X, 4)
    assert check_xi_intertwines(X, S, 4)
    assert check_ocha(S, 4)


def test_split_extension_gives_only_open_operations():
    S = oc_from_extension(load("ext_split.json")[1], 4)
    assert S.n and all(p == 0 for p, q in S.n)


def test_oc_from_extension_preconditions():
    with pytest.raises(PreconditionError):
        oc_from_extension(load("ext_violating.json")[1], 3)
    with pytest.raises(PreconditionError):
        oc_from_extension(load("ext_violating.json")[1], 3, check=False)
    X = load("ext_small.json")[1]
    scaled = ExtensionSequence(X.split, inclusion={0: {0: Fraction(2)}})
    assert check_extension(scaled, 3)
    with pytest.raises(PreconditionError):
        oc_from_extension(scaled, 3)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(VALID))
def test_block_relabelled_extensions_stay_valid(seed, name):
    rng = random.Random(seed)
    X = load(name)[1]
    s = X.split
    psi, inv = unitriangular(rng, s.E, blocks=[s.a_index, s.b_index])
    s2 = SplitAInfinity(s.A, s.B, relabel(s.structure, psi, inv))
    X2 = ExtensionSequence.from_split(s2)
    assert check_extension(X2, 4)
    assert check_ocha_constraint(s2, tolerant=True).ok == \
        check_ocha_constraint(s, tolerant=True).ok
    assert check_ocha(oc_from_extension(X2, 4), 4)
