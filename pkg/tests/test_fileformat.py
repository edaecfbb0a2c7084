import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ocha_lab.fileformat import (SCHEMA, FormatError, ainf_document,
                                 dump_document, extension_document,
                                 family_document, format_fraction,
                                 linf_document, loads_document,
                                 ocha_document, parse_fraction)

from support import CORPUS, corpus, load


def test_parse_fraction_forms():
    assert parse_fraction(3) == 3
    assert parse_fraction("-1/2") == Fraction(-1, 2)
    assert parse_fraction(" 4 ") == 4


@pytest.mark.parametrize("bad", [0.5, True, "1/0", "x", None, [1]])
def test_parse_fraction_rejects(bad):
    with pytest.raises(FormatError):
        parse_fraction(bad)


@given(st.fractions())
def test_format_parse_round_trip(c):
    assert parse_fraction(format_fraction(c)) == c


def _doc(**extra):
    doc = {"schema": SCHEMA, "kind": "ainf",
           "spaces": {"E": [["x", 0], ["y", 1]]}, "space": "E",
           "ops": [{"arity": 1, "entries": [{"in": ["x"], "out": {"y": "1"}}]}]}
    doc.update(extra)
    return doc


def test_minimal_document_parses():
    raw, M = loads_document(json.dumps(_doc()))
    assert M.m(1).table == {(0,): {1: 1}}


def test_float_coefficient_reports_line():
    doc = _doc(ops=[{"arity": 1, "entries": [{"in": ["x"], "out": {"y": 0.5}}]}])
    text = json.dumps(doc, indent=2)
    with pytest.raises(FormatError) as exc:
        loads_document(text)
    line = exc.value.line
    assert line is not None and "0.5" in text.splitlines()[line - 1]


def test_unknown_generator_reports_line():
    doc = _doc(ops=[{"arity": 1, "entries": [{"in": ["zz"], "out": {"y": "1"}}]}])
    text = json.dumps(doc, indent=2)
    with pytest.raises(FormatError) as exc:
        loads_document(text)
    assert '"zz"' in text.splitlines()[exc.value.line - 1]


@pytest.mark.parametrize("mutate, message", [
    (lambda d: d.pop("schema"), "schema"),
    (lambda d: d.update(schema="ocha-lab/9"), "schema"),
    (lambda d: d.update(kind="banana"), "kind"),
    (lambda d: d.update(space="F"), "unknown space"),
    (lambda d: d["spaces"]["E"].append(["x", 2]), "duplicate"),
    (lambda d: d["ops"][0]["entries"][0].update(out={"x": "1"}), "degree"),
])
def test_malformed_documents(mutate, message):
    doc = _doc()
    mutate(doc)
    with pytest.raises(FormatError) as exc:
        loads_document(json.dumps(doc, indent=2))
    assert message in str(exc.value)


def test_invalid_json_has_line():
    with pytest.raises(FormatError) as exc:
        loads_document('{\n  "schema": "ocha-lab/1",\n  oops\n}')
    assert exc.value.line == 3


def _reparse(doc):
    return loads_document(dump_document(doc))[1]


@pytest.mark.parametrize("path", sorted(CORPUS.glob("*.json")), ids=lambda p: p.name)
def test_corpus_files_load(path):
    raw, obj = load(path.name)
    assert raw["schema"] == SCHEMA


def test_writers_round_trip():
    M = load("triangular_ainf.json")[1]
    assert _reparse(ainf_document(M)).ops.keys() == M.ops.keys()
    assert all(_reparse(ainf_document(M)).m(k).table == M.m(k).table for k in M.ops)

    L = load("triangular_linf.json")[1]
    L2 = _reparse(linf_document(L))
    assert {k: c.table for k, c in L2.ops.items()} == {k: c.table for k, c in L.ops.items()}

    for name in ["ocha_small.json", "ext_constrained_oc.json", "zero_ocha.json"]:
        S = load(name)[1]
        S2 = _reparse(ocha_document(S))
        assert {k: c.table for k, c in S2.l.items()} == {k: c.table for k, c in S.l.items()}
        assert {k: c.table for k, c in S2.n.items()} == {k: c.table for k, c in S.n.items()}

    X = load("ext_constrained.json")[1]
    X2 = _reparse(extension_document(X))
    ops = X.split.structure.ops
    assert {k: c.table for k, c in X2.split.structure.ops.items()} == \
        {k: c.table for k, c in ops.items()}

    fam = load("family_mixed.json")[1]
    fam2 = _reparse(family_document(fam["components"], fam["carrier"], fam["degree"]))
    assert [(c.kind, c.arity, c.table) for c in fam2["components"]] == \
        [(c.kind, c.arity, c.table) for c in fam["components"]]


def test_dump_is_canonical():
    text = corpus("ocha_small.json").read_text()
    raw = json.loads(text)
    assert dump_document(raw) == dump_document(json.loads(dump_document(raw)))
