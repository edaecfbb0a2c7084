"""Regenerate the bundled corpus in src/ocha_lab/corpus/.

Extensions come from small differential graded algebras converted to the
degree +1 convention (see ``dga_to_ainf``), then
pushed through a coalgebra automorphism with a degree-0 quadratic component
so that ``m_3`` appears.  Every file is re-checked after writing.

    python3 tools/make_corpus.py
"""

import os
import sys
from fractions import Fraction as F

from ocha_lab import (AInfinityStructure, ComponentMap, ExtensionSequence,
                      GradedSpace, LinearOchaMorphism, OchaStructure, Pair,
                      SplitAInfinity, check_ainfinity, check_extension,
                      check_linear_ocha_morphism, check_ocha,
                      check_ocha_constraint, direct_sum,
                      oc_from_extension, symmetrize_ainfinity)
from ocha_lab.coderivations import Coderivation
from ocha_lab.fileformat import (SCHEMA, ainf_document, dump_document,
                                 extension_document, family_document,
                                 format_fraction, linf_document, ocha_document)
from ocha_lab.spaces import add_term
from ocha_lab.structures import coalgebra_morphism, weighted_words

OUT = os.path.join(os.path.dirname(__file__), "..", "src", "ocha_lab", "corpus")


def dga_to_ainf(E, odeg, d, mult):
    """``m_1(sx) = s(dx)``, ``m_2(sx, sy) = (-1)^{|x|} s(xy)`` (ordinary
    degrees ``odeg``); the sign choice was fixed by the A-infinity check."""
    idx = {n: i for i, n in enumerate(E.names)}
    m1, m2 = {}, {}
    for x, v in d.items():
        m1[(idx[x],)] = {idx[y]: c for y, c in v.items()}
    for (x, y), v in mult.items():
        s = -1 if odeg[x] % 2 else 1
        m2[(idx[x], idx[y])] = {idx[z]: s * c for z, c in v.items()}
    return {1: m1, 2: m2}


def F_word(x, f2):
    if not x:
        return {(): F(1)}
    out = {}
    for w, c in F_word(x[1:], f2).items():
        add_term(out, (x[0],) + w, c)
    if len(x) >= 2:
        for y, c in f2.get(x[:2], {}).items():
            for w, c2 in F_word(x[2:], f2).items():
                add_term(out, (y,) + w, c * c2)
    return out


def gauge(M, f2, top):
    """Transport ``M`` along the automorphism with components ``(1, f2)``."""
    ops = {}
    for n in range(1, top + 1):
        table = {}
        lower = Coderivation(M.space, [ComponentMap("tensor", k, 1, t)
                                       for k, t in ops.items()])
        for x in weighted_words(M.space.dim, n, min_weight=n):
            val = {}
            for w, c in F_word(x, f2).items():
                for y, c2 in M.m(len(w)).table.get(w, {}).items():
                    add_term(val, y, c * c2)
            for w, c in lower.on_word(x).items():
                if len(w) == 2:
                    for y, c2 in f2.get(w, {}).items():
                        add_term(val, y, -c * c2)
            if val:
                table[x] = val
        if table:
            ops[n] = table
    return AInfinityStructure(M.space, {k: ComponentMap("tensor", k, 1, t)
                                        for k, t in ops.items()})


def transport(S, phi, phi_inv, target_pair, top):
    """The OCHA ``f D f^{-1}`` on ``target_pair``."""
    f = coalgebra_morphism(phi, S.pair, target_pair)
    finv = coalgebra_morphism(phi_inv, target_pair, S.pair)
    D = S.coderivation()
    l, n = {}, {}
    for w in target_pair.words(top):
        image = {}
        for w1, c1 in finv(w).items():
            for w2, c2 in D.on_word(w1).items():
                for w3, c3 in f(w2).items():
                    add_term(image, w3, c1 * c2 * c3)
        p, q = len(w[0]), len(w[1])
        for (u, v), c in image.items():
            if len(u) == 1 and not v:
                l.setdefault(p, {}).setdefault(w, {})[u[0]] = c
            elif len(v) == 1 and not u:
                n.setdefault((p, q), {}).setdefault(w, {})[v[0]] = c
    return OchaStructure(target_pair,
                         {p: ComponentMap("closed", (p, 0), 1, t) for p, t in l.items()},
                         {pq: ComponentMap("open", pq, 1, t) for pq, t in n.items()})


def relabel(M, psi, psi_inv):
    """``psi^{-1} m_k psi^{(x)k}`` for a degree-0 basis change ``psi``
    (identity off the listed generators)."""
    def lin(m, x):
        return m.get(x, {x: 1})
    ops = {}
    for k, comp in M.ops.items():
        table = {}
        for w in weighted_words(M.space.dim, k, min_weight=k):
            terms = {(): F(1)}
            for x in w:
                nxt = {}
                for pre, c in terms.items():
                    for y, c2 in lin(psi, x).items():
                        add_term(nxt, pre + (y,), c * c2)
                terms = nxt
            val = {}
            for key, c in terms.items():
                for y, c2 in comp.table.get(key, {}).items():
                    for z, c3 in lin(psi_inv, y).items():
                        add_term(val, z, c * c2 * c3)
            if val:
                table[w] = val
        ops[k] = ComponentMap("tensor", k, 1, table)
    return AInfinityStructure(M.space, ops)


def write(name, doc):
    path = os.path.join(OUT, name)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_document(doc))
    print("wrote", name)


def morphism_document(S, T, phi):
    def part(m, a, b):
        return {a.names[i]: {b.names[j]: format_fraction(c) for j, c in sorted(row.items())}
                for i, row in sorted(m.items())}
    return {"schema": SCHEMA, "kind": "morphism",
            "source": ocha_document(S), "target": ocha_document(T),
            "map": {"g": part(phi.g, S.closed, T.closed),
                    "f01": part(phi.f01, S.open, T.open),
                    "f10": part(phi.f10, S.closed, T.open)}}


def main():
    os.makedirs(OUT, exist_ok=True)
    # -- zero OCHA and small broken / valid A-infinity examples
    Hc = GradedSpace("Hc", ["c1", "c2"], [0, -1])
    Ho = GradedSpace("Ho", ["o1"], [-1])
    write("zero_ocha.json", ocha_document(OchaStructure(Pair(Hc, Ho))))

    V = GradedSpace("V", ["x", "y", "z"], [-1, 0, 1])
    bad = AInfinityStructure(V, {1: {(0,): {1: 1}, (1,): {2: 1}}})
    assert not check_ainfinity(bad, 3)
    write("broken_m1.json", ainf_document(bad))

    # upper triangular 2x2 algebra on degree -1 letters: p = e11, n = e12
    T = GradedSpace("T", ["p", "n"], [-1, -1])
    tri = AInfinityStructure(T, {2: {(0, 0): {0: 1}, (0, 1): {1: 1}}})
    assert check_ainfinity(tri, 5)
    write("triangular_ainf.json", ainf_document(tri))
    Ltri = symmetrize_ainfinity(tri)
    write("triangular_linf.json", linf_document(Ltri))

    # -- the constrained 2 + 2 extension
    A = GradedSpace("A", ["a", "h"], [-1, -2])
    B = GradedSpace("B", ["p", "n"], [-1, -1])
    E = direct_sum(A, B, tags=("A", "B"))
    odeg = {"a": 0, "h": -1, "p": 0, "n": 0}
    d = {"h": {"a": 1}}
    # A is square zero and B acts from the right only, so A-inputs always
    # precede B-inputs
    mult = {("p", "p"): {"p": 1}, ("p", "n"): {"n": 1},
            ("a", "p"): {"a": 1}, ("h", "p"): {"h": 1}}
    ops = dga_to_ainf(E, odeg, d, mult)
    dga = AInfinityStructure(E, ops)
    v = check_ainfinity(dga, 4)
    assert v, v
    idx = {n: i for i, n in enumerate(E.names)}
    a, h, p, n = idx["a"], idx["h"], idx["p"], idx["n"]
    f2 = {(a, p): {h: F(2)}, (a, n): {h: F(-1)}}
    G = gauge(dga, f2, 5)
    assert check_ainfinity(G, 5)
    assert set(G.ops) == {1, 2, 3}, G.ops.keys()
    X = ExtensionSequence.from_split(SplitAInfinity(A, B, G))
    assert check_extension(X, 5)
    cv = check_ocha_constraint(X.split)
    assert cv, (cv.offending, cv.interleaved)
    write("ext_constrained.json", extension_document(X))
    OC = oc_from_extension(X, 5)
    assert check_ocha(OC, 5)
    write("ext_constrained_oc.json", ocha_document(OC))

    # -- two-sided action: passes only the interleaving-tolerant reading
    mult2 = dict(mult)
    mult2.update({("a", "a"): {"a": 1}, ("a", "h"): {"h": 1}, ("h", "a"): {"h": 1},
                  ("p", "a"): {"a": 1}, ("p", "h"): {"h": 1}})
    G2 = gauge(AInfinityStructure(E, dga_to_ainf(E, odeg, d, mult2)),
               {(a, a): {h: F(1, 2)}, (p, a): {h: F(2)}, (a, n): {h: F(-1)}}, 5)
    assert check_ainfinity(G2, 5)
    X2 = ExtensionSequence.from_split(SplitAInfinity(A, B, G2))
    assert check_extension(X2, 5)
    c2 = check_ocha_constraint(X2.split)
    assert not c2 and c2.tolerant_ok
    write("ext_interleaved.json", extension_document(X2))

    # -- the split (direct sum) version: no cross terms
    mult_split = {k: v for k, v in mult.items()
                  if all(x in ("a", "h") for x in k) or all(x in ("p", "n") for x in k)}
    split_ops = dga_to_ainf(E, odeg, d, mult_split)
    Xs = ExtensionSequence.from_split(SplitAInfinity(A, B, AInfinityStructure(E, split_ops)))
    assert check_extension(Xs, 5)
    write("ext_split.json", extension_document(Xs))

    # -- an extension with a pure-B product landing in A (not constrained):
    # the constrained one seen through the section p -> p + a
    tw = relabel(G, {p: {p: 1, a: 1}}, {p: {p: 1, a: -1}})
    assert check_ainfinity(tw, 5)
    Xt = ExtensionSequence.from_split(SplitAInfinity(A, B, tw))
    assert check_extension(Xt, 4)
    write("ext_twisted.json", extension_document(Xt))
    OCt = oc_from_extension(Xt, 4)
    assert (1, 0) in OCt.n or (2, 0) in OCt.n
    assert check_ocha(OCt, 5)

    # -- an E violating the constraint: an A-input with a B-output
    bad_ops = dga_to_ainf(E, odeg, d, mult)
    bad_ops[2][(idx["a"], idx["p"])] = {idx["p"]: 1}
    write("ext_violating.json", extension_document(ExtensionSequence.from_split(
        SplitAInfinity(A, B, AInfinityStructure(E, bad_ops)))))

    # -- morphisms: identity, and a transported structure with f10 != 0
    OCs = oc_from_extension(Xs, 5)
    ident = LinearOchaMorphism({i: {i: 1} for i in range(2)}, {i: {i: 1} for i in range(2)}, {})
    assert check_linear_ocha_morphism(ident, OC, OC, 4)
    write("morphism_identity.json", morphism_document(OC, OC, ident))
    B2 = GradedSpace("B2", ["p'", "n'"], [-1, -1])
    A2 = GradedSpace("A2", ["a'", "h'"], [-1, -2])
    pair2 = Pair(B2, A2)
    phi = LinearOchaMorphism({0: {0: 1}, 1: {1: 1, 0: 1}}, {0: {0: 1}, 1: {1: 2}},
                             {0: {0: 1}, 1: {0: -1}})
    # inverse of [[g, 0], [f10, f01]] is [[g^-1, 0], [-f01^-1 f10 g^-1, f01^-1]]
    phi_inv = LinearOchaMorphism({0: {0: 1}, 1: {1: 1, 0: -1}}, {0: {0: 1}, 1: {1: F(1, 2)}},
                                 {0: {0: -1}, 1: {0: 2}})
    T2 = transport(OCs, phi, phi_inv, pair2, 5)
    assert check_ocha(T2, 4)
    v = check_linear_ocha_morphism(phi, OCs, T2, 4)
    assert v and v.agree, v
    write("morphism_f10.json", morphism_document(OCs, T2, phi))

    # -- a 1 + 1 extension for enveloping and the universal property
    A1 = GradedSpace("A1", ["a"], [-1])
    B1 = GradedSpace("B1", ["p"], [-1])
    E1 = direct_sum(A1, B1, tags=("A", "B"))
    ops1 = dga_to_ainf(E1, {"a": 0, "p": 0}, {},
                       {("p", "p"): {"p": 1}, ("p", "a"): {"a": 1}})
    X1 = ExtensionSequence.from_split(SplitAInfinity(A1, B1, AInfinityStructure(E1, ops1)))
    assert check_extension(X1, 5)
    write("ext_small.json", extension_document(X1))
    OC1 = oc_from_extension(X1, 5)
    write("ocha_small.json", ocha_document(OC1))
    write("universal_small.json", {
        "schema": SCHEMA, "kind": "universal",
        "ocha": ocha_document(OC1), "extension": extension_document(X1),
        "map": {"g": {"p": {"p": "1"}}, "f01": {"a": {"a": "1"}}, "f10": {}}})

    # -- abelian and closed-only OCHAs for enveloping
    Hc1 = GradedSpace("Hc", ["c"], [0])
    Ho1 = GradedSpace("Ho", ["o"], [0])
    write("abelian_ocha.json", ocha_document(OchaStructure(Pair(Hc1, Ho1))))
    Ho0 = GradedSpace("Ho", [], [])
    write("closed_only_ocha.json", ocha_document(OchaStructure(
        Pair(T, Ho0), {k: c.table for k, c in Ltri.ops.items()}, {})))

    # -- a family to decompose: open and closed components on (Hc, Ho)
    fam = [ComponentMap("closed", (2, 0), 1, {((0, 1), ()): {0: F(1, 3)}}),
           ComponentMap("open", (1, 1), 1, {((1,), (0,)): {0: 2}}),
           ComponentMap("open", (0, 2), 1, {((), (0, 0)): {0: -1}})]
    fam = [c for c in fam if not c.is_zero()]
    for c in fam:
        c.validate(Pair(Hc, Ho))
    write("family_mixed.json", family_document(fam, Pair(Hc, Ho), 1))
    write("space_free.json", {"schema": SCHEMA, "kind": "space",
                              "spaces": {"V": [["x", 0], ["y", -1]]}, "space": "V"})
    return 0


if __name__ == "__main__":
    sys.exit(main())
