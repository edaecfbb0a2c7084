from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from ocha_lab.coalgebra import (NotInImageError, Pair, deconcatenate,
                                mixed_coproduct, shuffle_product,
                                symmetrize_chi, xi, xi_component_rank,
                                xi_left_inverse)
from ocha_lab.signs import koszul_sign
from ocha_lab.spaces import GradedSpace, add_term, tensor_words


def make_pair(cdeg, odeg):
    return Pair(GradedSpace("Hc", [f"c{i + 1}" for i in range(len(cdeg))], cdeg),
                GradedSpace("Ho", [f"o{i + 1}" for i in range(len(odeg))], odeg))


degree_lists = st.lists(st.integers(-1, 2), min_size=1, max_size=2)


def test_deconcatenate_examples():
    assert deconcatenate((5, 6), reduced=True) == {((5,), (6,)): 1}
    full = deconcatenate((1, 2, 3))
    assert len(full) == 4
    assert ((), (1, 2, 3)) in full and ((1, 2, 3), ()) in full


def test_mixed_coproduct_bidegree_one_one():
    P = make_pair([1], [1])
    u, v, e = (0,), (0,), ()
    got = mixed_coproduct((u, v), P)
    assert got == {
        ((e, e), (u, v)): 1,
        ((u, e), (e, v)): 1,
        ((e, v), (u, e)): -1,
        ((u, v), (e, e)): 1,
    }


def test_mixed_coproduct_of_unit_is_grouplike():
    P = make_pair([1], [0])
    assert mixed_coproduct(((), ()), P) == {(((), ()), ((), ())): 1}


def _mixed_delta_left(vec, P):
    out = {}
    for (x, y), c in vec.items():
        for (x1, x2), c2 in mixed_coproduct(x, P).items():
            add_term(out, (x1, x2, y), c * c2)
    return out


def _mixed_delta_right(vec, P):
    out = {}
    for (x, y), c in vec.items():
        for (y1, y2), c2 in mixed_coproduct(y, P).items():
            add_term(out, (x, y1, y2), c * c2)
    return out


@settings(max_examples=25, deadline=None)
@given(degree_lists, degree_lists)
def test_mixed_coproduct_coassociative_and_counital(cdeg, odeg):
    P = make_pair(cdeg, odeg)
    empty = ((), ())
    for w in P.words(4, 0):
        if len(w[0]) > 2 or len(w[1]) > 2:
            continue
        d = mixed_coproduct(w, P)
        assert _mixed_delta_left(d, P) == _mixed_delta_right(d, P)
        assert {y: c for (x, y), c in d.items() if x == empty} == {w: 1}
        assert {x: c for (x, y), c in d.items() if y == empty} == {w: 1}


def test_deconcatenation_coassociative():
    for w in product(range(2), repeat=4):
        left, right = {}, {}
        for (x, y), c in deconcatenate(w).items():
            for (x1, x2), c2 in deconcatenate(x).items():
                add_term(left, (x1, x2, y), c * c2)
            for (y1, y2), c2 in deconcatenate(y).items():
                add_term(right, (x, y1, y2), c * c2)
        assert left == right


def test_shuffle_examples():
    deg = [1, 1, 0]
    assert shuffle_product((0,), (1,), deg) == {(0, 1): 1, (1, 0): -1}
    assert shuffle_product((0, 2), (), deg) == {(0, 2): 1}


def _sh(x, y, deg):
    out = {}
    for a, ca in x.items():
        for b, cb in y.items():
            for w, c in shuffle_product(a, b, deg).items():
                add_term(out, w, ca * cb * c)
    return out


@given(st.lists(st.integers(-1, 2), min_size=3, max_size=3))
def test_shuffle_associative_and_graded_commutative(deg):
    words = [w for n in (1, 2) for w in tensor_words(GradedSpace("V", "xyz", deg), n)]
    for a in words[:3]:
        for b in words:
            for c in words[:3]:
                assert _sh(_sh({a: 1}, {b: 1}, deg), {c: 1}, deg) == \
                    _sh({a: 1}, _sh({b: 1}, {c: 1}, deg), deg)
            da, db = sum(deg[i] for i in a), sum(deg[i] for i in b)
            sign = -1 if da * db % 2 else 1
            ba = {w: sign * c for w, c in shuffle_product(b, a, deg).items()}
            assert shuffle_product(a, b, deg) == ba


def test_chi_examples():
    assert symmetrize_chi((0,), [1]) == {(0,): 1}
    assert symmetrize_chi((0, 1), [1, 1]) == {(0, 1): 1, (1, 0): -1}
    deg = [1, 0, 1]
    three = symmetrize_chi((0, 1, 2), deg)
    assert len(three) == 6
    for w, c in three.items():
        perm = tuple(i + 1 for i in w)
        assert c == koszul_sign(perm, deg)


def test_xi_on_two_odd_singletons():
    P = make_pair([1], [1])
    assert xi(((0,), (0,)), P) == {(0, 1): 1, (1, 0): -1}


def test_xi_left_inverse_examples():
    P = make_pair([1], [1])
    assert xi_left_inverse(2, {(0, 1): 1, (1, 0): -1}, P) == {((0,), (0,)): 1}
    with pytest.raises(NotInImageError):
        xi_left_inverse(2, {(0, 1): 1, (1, 0): 1}, P)


@settings(max_examples=20, deadline=None)
@given(degree_lists, degree_lists)
def test_xi_left_inverse_round_trip(cdeg, odeg):
    P = make_pair(cdeg, odeg)
    for w in P.words(4):
        if len(w[0]) <= 2 and len(w[1]) <= 2:
            assert xi_left_inverse(len(w[0]) + len(w[1]), xi(w, P), P) == {w: 1}


def xi_is_coalgebra_map(P, max_weight):
    for w in P.words(max_weight, 0):
        lhs = {}
        for t, c in xi(w, P).items():
            for k, c2 in deconcatenate(t).items():
                add_term(lhs, k, c * c2)
        rhs = {}
        for (x, y), c in mixed_coproduct(w, P).items():
            for a, ca in xi(x, P).items():
                for b, cb in xi(y, P).items():
                    add_term(rhs, (a, b), c * ca * cb)
        if lhs != rhs:
            return w
    return None


@settings(max_examples=15, deadline=None)
@given(st.lists(st.integers(-1, 2), min_size=0, max_size=3),
       st.lists(st.integers(-1, 2), min_size=0, max_size=3))
def test_xi_coalgebra_map_property(cdeg, odeg):
    if not cdeg and not odeg:
        return
    P = make_pair(cdeg, odeg)
    assert xi_is_coalgebra_map(P, 3) is None


@settings(max_examples=10, deadline=None)
@given(degree_lists, degree_lists)
def test_xi_injective_per_weight(cdeg, odeg):
    P = make_pair(cdeg, odeg)
    for n in range(1, 5):
        assert xi_component_rank(P, n) == len(P.words(n, n))
