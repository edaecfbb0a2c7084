"""JSON structure files with exact rational coefficients.

Every document carries ``"schema": "ocha-lab/1"`` and a ``"kind"``.  Spaces
are declared once under ``"spaces"`` as ``{name: [[generator, degree], ...]}``
and operations refer to generators by name.  Coefficients are integers or
strings ``"num/den"``; floats are rejected.

Operation entries::

    {"arity": 2, "entries": [{"in": ["x", "y"], "out": {"z": "1/2"}}]}
    {"arity": [1, 2], "entries": [{"closed": ["c"], "open": ["a", "b"],
                                   "out": {"a": "-1"}}]}
"""

import json
from fractions import Fraction

from .coalgebra import Pair
from .coderivations import ComponentMap
from .errors import ArgumentError
from .extensions import ExtensionSequence, SplitAInfinity
from .spaces import GradedSpace, _canon_fast, direct_sum
from .structures import (AInfinityStructure, LInfinityStructure,
                         LinearOchaMorphism, OchaStructure, symmetric_table)

SCHEMA = "ocha-lab/1"

__all__ = [
    "SCHEMA",
    "FormatError",
    "load_document",
    "loads_document",
    "parse_structure",
    "dump_document",
    "format_fraction",
    "ainf_document",
    "linf_document",
    "ocha_document",
    "family_document",
    "extension_document",
]


class FormatError(ArgumentError):
    """Malformed structure file; ``line`` is 1-based when known."""

    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = []
        if line is not None:
            where.append(f"line {line}")
        if path:
            where.append(path)
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


class _Ctx:
    def __init__(self, text):
        self.text = text or ""

    def fail(self, message, path, token=None):
        raise FormatError(message, self.locate(token), path)

    def locate(self, token):
        if token is None or not self.text:
            return None
        needle = json.dumps(token) if isinstance(token, str) else str(token)
        pos = self.text.find(needle)
        if pos < 0:
            return None
        return self.text.count("\n", 0, pos) + 1


def parse_fraction(value, ctx=None, path=""):
    if isinstance(value, bool) or isinstance(value, float):
        (ctx or _Ctx("")).fail(f"coefficient {value!r} is not exact", path, value)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            num, _, den = value.strip().partition("/")
            if den:
                return Fraction(int(num), int(den))
            return Fraction(int(num))
        except (ValueError, ZeroDivisionError):
            (ctx or _Ctx("")).fail(f"bad rational {value!r}", path, value)
    (ctx or _Ctx("")).fail(f"bad coefficient {value!r}", path, value)


def format_fraction(c):
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _spaces(doc, ctx):
    raw = doc.get("spaces")
    if not isinstance(raw, dict):
        ctx.fail("missing 'spaces' object", "spaces")
    out = {}
    for name, basis in raw.items():
        if not isinstance(basis, list):
            ctx.fail(f"space {name!r} must list [generator, degree] pairs", f"spaces.{name}", name)
        names, degs = [], []
        for i, item in enumerate(basis):
            if (not isinstance(item, list) or len(item) != 2 or not isinstance(item[0], str)
                    or not isinstance(item[1], int) or isinstance(item[1], bool)):
                ctx.fail(f"bad generator entry {item!r}", f"spaces.{name}[{i}]", name)
            names.append(item[0])
            degs.append(item[1])
        if len(set(names)) != len(names):
            ctx.fail(f"duplicate generator in space {name!r}", f"spaces.{name}", name)
        out[name] = GradedSpace(name, names, degs)
    return out


def _space(doc, key, spaces, ctx):
    name = doc.get(key)
    if name not in spaces:
        ctx.fail(f"{key!r} refers to unknown space {name!r}", key, name)
    return spaces[name]


def _index(space, gen, ctx, path):
    if not isinstance(gen, str):
        ctx.fail(f"generator reference {gen!r} must be a string", path, gen)
    try:
        return space.names.index(gen)
    except ValueError:
        ctx.fail(f"unknown generator {gen!r} in space {space.name!r}", path, gen)


def _vector(raw, space, ctx, path):
    if not isinstance(raw, dict):
        ctx.fail("output must be an object {generator: coefficient}", path)
    out = {}
    for gen, c in raw.items():
        i = _index(space, gen, ctx, f"{path}.{gen}")
        c = parse_fraction(c, ctx, f"{path}.{gen}")
        if c:
            out[i] = out.get(i, 0) + c
    return {i: c for i, c in out.items() if c}


def _ops_list(doc, key, ctx):
    ops = doc.get(key, [])
    if not isinstance(ops, list):
        ctx.fail(f"{key!r} must be a list of operations", key)
    return ops


def _tensor_ops(ops, space, ctx, key, out_space=None, degree=1):
    out_space = out_space or space
    result = {}
    for a, op in enumerate(ops):
        path = f"{key}[{a}]"
        k = op.get("arity")
        if not isinstance(k, int) or isinstance(k, bool) or k < 1:
            ctx.fail(f"bad arity {k!r}", path)
        table = result.setdefault(k, {})
        for b, e in enumerate(op.get("entries", [])):
            p = f"{path}.entries[{b}]"
            ins = e.get("in")
            if not isinstance(ins, list) or len(ins) != k:
                ctx.fail(f"entry input must list {k} generators", p, k)
            w = tuple(_index(space, g, ctx, f"{p}.in") for g in ins)
            if w in table:
                ctx.fail(f"duplicate entry for input {ins!r}", p, ins[0])
            val = _vector(e.get("out", {}), out_space, ctx, f"{p}.out")
            table[w] = val
    return result


def _mixed_ops(ops, pair, kind, ctx, key, degree=1):
    out_space = pair.closed if kind == "closed" else pair.open
    result = {}
    for a, op in enumerate(ops):
        path = f"{key}[{a}]"
        ar = op.get("arity")
        if not (isinstance(ar, list) and len(ar) == 2 and all(isinstance(x, int) for x in ar)):
            ctx.fail(f"mixed arity must be [p, q], got {ar!r}", path)
        p, q = ar
        table = result.setdefault((p, q), {})
        for b, e in enumerate(op.get("entries", [])):
            pth = f"{path}.entries[{b}]"
            cl, op_ = e.get("closed", []), e.get("open", [])
            if len(cl) != p or len(op_) != q:
                ctx.fail(f"entry does not have arity ({p}, {q})", pth)
            u = tuple(_index(pair.closed, g, ctx, f"{pth}.closed") for g in cl)
            v = tuple(_index(pair.open, g, ctx, f"{pth}.open") for g in op_)
            val = _vector(e.get("out", {}), out_space, ctx, f"{pth}.out")
            s, w = _canon_fast(u, pair.cpar)
            if not s:
                if val:
                    ctx.fail(f"nonzero value on a vanishing wedge {cl!r}", pth, cl[0])
                continue
            val = {i: s * c for i, c in val.items()}
            if (w, v) in table and table[(w, v)] != val:
                ctx.fail(f"entries for {cl!r} are not graded symmetric", pth, cl[0])
            table[(w, v)] = val
    return result


def _wrap(fn, ctx, path):
    try:
        return fn()
    except FormatError:
        raise
    except (ArgumentError, ValueError) as exc:
        raise FormatError(str(exc), None, path) from None


def _ainf(doc, spaces, ctx):
    E = _space(doc, "space", spaces, ctx)
    tables = _tensor_ops(_ops_list(doc, "ops", ctx), E, ctx, "ops")
    M = _wrap(lambda: AInfinityStructure(E, {k: ComponentMap("tensor", k, 1, t)
                                             for k, t in tables.items()}), ctx, "ops")
    weights = doc.get("weights")
    if weights is not None:
        if (not isinstance(weights, dict)
                or any(not isinstance(v, int) or v < 1 for v in weights.values())):
            ctx.fail("'weights' must map generators to positive integers", "weights")
        wl = [1] * E.dim
        for g, v in weights.items():
            wl[_index(E, g, ctx, "weights")] = v
        M.weights = wl
    else:
        M.weights = None
    return M


def _linf(doc, spaces, ctx):
    V = _space(doc, "space", spaces, ctx)
    tables = _tensor_ops(_ops_list(doc, "ops", ctx), V, ctx, "ops")
    ops = {}
    for k, t in tables.items():
        ops[k] = _wrap(lambda: ComponentMap("closed", (k, 0), 1, symmetric_table(V, t, k)),
                       ctx, "ops")
    return _wrap(lambda: LInfinityStructure(V, ops), ctx, "ops")


def _pair(doc, spaces, ctx):
    Hc = _space(doc, "closed", spaces, ctx)
    Ho = _space(doc, "open", spaces, ctx)
    if Hc.name == Ho.name:
        ctx.fail("closed and open spaces must differ", "open", Ho.name)
    return _wrap(lambda: Pair(Hc, Ho), ctx, "closed")


def _ocha(doc, spaces, ctx):
    pair = _pair(doc, spaces, ctx)
    ltabs = _tensor_ops(_ops_list(doc, "l", ctx), pair.closed, ctx, "l")
    l_ops = {}
    for k, t in ltabs.items():
        l_ops[k] = _wrap(lambda: ComponentMap("closed", (k, 0), 1,
                                              symmetric_table(pair.closed, t, k)), ctx, "l")
    ntabs = _mixed_ops(_ops_list(doc, "n", ctx), pair, "open", ctx, "n")
    n_ops = {pq: ComponentMap("open", pq, 1, t) for pq, t in ntabs.items()}
    return _wrap(lambda: OchaStructure(pair, l_ops, n_ops), ctx, "n")


def _extension(doc, spaces, ctx):
    A = _space(doc, "ideal", spaces, ctx)
    B = _space(doc, "quotient", spaces, ctx)
    if set(A.names) & set(B.names):
        ctx.fail("generator names of ideal and quotient must be distinct", "quotient", B.name)
    E = direct_sum(A, B, tags=("A", "B"))
    tables = _tensor_ops(_ops_list(doc, "ops", ctx), E, ctx, "ops")
    S = _wrap(lambda: SplitAInfinity(
        A, B, AInfinityStructure(E, {k: ComponentMap("tensor", k, 1, t)
                                     for k, t in tables.items()})), ctx, "ops")
    return ExtensionSequence.from_split(S)


def _family(doc, spaces, ctx):
    degree = doc.get("degree", 1)
    if not isinstance(degree, int):
        ctx.fail("'degree' must be an integer", "degree")
    comps = []
    if "space" in doc:
        E = _space(doc, "space", spaces, ctx)
        tabs = _tensor_ops(_ops_list(doc, "components", ctx), E, ctx, "components")
        for k, t in sorted(tabs.items()):
            comps.append(ComponentMap("tensor", k, degree, t))
        carrier = E
    else:
        carrier = _pair(doc, spaces, ctx)
        raw = _ops_list(doc, "components", ctx)
        for kind in ("closed", "open"):
            sel = [op for op in raw if op.get("kind") == kind]
            tabs = _mixed_ops(sel, carrier, kind, ctx, f"components[{kind}]")
            for pq, t in sorted(tabs.items()):
                comps.append(ComponentMap(kind, pq, degree, t))
        bad = [op.get("kind") for op in raw if op.get("kind") not in ("closed", "open")]
        if bad:
            ctx.fail(f"component kind must be 'closed' or 'open', got {bad[0]!r}", "components")
    for c in comps:
        _wrap(lambda: c.validate(carrier), ctx, "components")
    return {"carrier": carrier, "degree": degree, "components": comps}


def _morphism(doc, spaces, ctx):
    src = parse_structure(doc.get("source"), ctx, expect="ocha")
    dst = parse_structure(doc.get("target"), ctx, expect="ocha")
    m = doc.get("map", {})
    parts = {}
    for name, a, b in (("g", src.closed, dst.closed), ("f01", src.open, dst.open),
                       ("f10", src.closed, dst.open)):
        raw = m.get(name, {})
        if not isinstance(raw, dict):
            ctx.fail(f"map.{name} must be an object", f"map.{name}")
        parts[name] = {_index(a, g, ctx, f"map.{name}"): _vector(v, b, ctx, f"map.{name}.{g}")
                       for g, v in raw.items()}
    phi = LinearOchaMorphism(**parts)
    _wrap(lambda: phi.check_degrees(src.pair, dst.pair), ctx, "map")
    return {"source": src, "target": dst, "map": phi}


def _universal(doc, spaces, ctx):
    S = parse_structure(doc.get("ocha"), ctx, expect="ocha")
    X = parse_structure(doc.get("extension"), ctx, expect="extension")
    m = doc.get("map", {})
    A, B = X.split.A, X.split.B
    parts = {}
    for name, a, b in (("g", S.closed, B), ("f01", S.open, A), ("f10", S.closed, A)):
        raw = m.get(name, {})
        parts[name] = {_index(a, g, ctx, f"map.{name}"): _vector(v, b, ctx, f"map.{name}.{g}")
                       for g, v in raw.items()}
    return {"ocha": S, "extension": X, "map": LinearOchaMorphism(**parts)}


_PARSERS = {
    "ainf": _ainf,
    "linf": _linf,
    "ocha": _ocha,
    "extension": _extension,
    "family": _family,
    "morphism": _morphism,
    "universal": _universal,
}


def parse_structure(doc, ctx=None, expect=None):
    """Parse an already-decoded document (or nested sub-document)."""
    ctx = ctx or _Ctx("")
    if not isinstance(doc, dict):
        ctx.fail("document must be a JSON object", "")
    schema = doc.get("schema", SCHEMA)
    if schema != SCHEMA:
        ctx.fail(f"unsupported schema {schema!r}, expected {SCHEMA!r}", "schema", schema)
    kind = doc.get("kind")
    if kind == "space":
        spaces = _spaces(doc, ctx)
        return _space(doc, "space", spaces, ctx)
    if kind not in _PARSERS:
        ctx.fail(f"unknown document kind {kind!r}", "kind", kind)
    if expect is not None and kind != expect:
        ctx.fail(f"expected a {expect!r} document, got {kind!r}", "kind", kind)
    spaces = _spaces(doc, ctx) if kind not in ("morphism", "universal") else {}
    return _PARSERS[kind](doc, spaces, ctx)


def loads_document(text):
    """Decode and parse ``text``; returns ``(raw_dict, parsed_object)``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    ctx = _Ctx(text)
    if not isinstance(doc, dict) or "schema" not in doc:
        ctx.fail("missing 'schema' field", "schema")
    return doc, parse_structure(doc, ctx)


def load_document(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None
    return loads_document(text)


def dump_document(doc):
    """Deterministic serialization (sorted keys, two-space indent)."""
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# ------------------------------------------------------------- writers

def _space_doc(space):
    return [[n, d] for n, d in zip(space.names, space.degrees)]


def _out(val, space):
    return {space.names[i]: format_fraction(c) for i, c in sorted(val.items())}


def _tensor_ops_doc(ops, space, in_space=None):
    in_space = in_space or space
    out = []
    for k in sorted(ops):
        comp = ops[k]
        entries = [{"in": [in_space.names[i] for i in key], "out": _out(val, space)}
                   for key, val in sorted(comp.table.items())]
        out.append({"arity": k, "entries": entries})
    return out


def _mixed_ops_doc(ops, pair, kind):
    target = pair.closed if kind == "closed" else pair.open
    out = []
    for pq in sorted(ops):
        comp = ops[pq]
        entries = [{"closed": [pair.closed.names[i] for i in u],
                    "open": [pair.open.names[j] for j in v],
                    "out": _out(val, target)}
                   for (u, v), val in sorted(comp.table.items())]
        out.append({"arity": list(pq), "entries": entries} if kind == "open"
                   else {"kind": kind, "arity": list(pq), "entries": entries})
    return out


def ainf_document(M, weights=None, max_weight=None):
    doc = {"schema": SCHEMA, "kind": "ainf",
           "spaces": {M.space.name: _space_doc(M.space)}, "space": M.space.name,
           "ops": _tensor_ops_doc(M.ops, M.space)}
    if weights is not None:
        doc["weights"] = {M.space.names[i]: w for i, w in enumerate(weights)}
    if max_weight is not None:
        doc["max_weight"] = max_weight
    return doc


def linf_document(L):
    ops = []
    for n in sorted(L.ops):
        entries = [{"in": [L.space.names[i] for i in u], "out": _out(val, L.space)}
                   for (u, _), val in sorted(L.ops[n].table.items())]
        ops.append({"arity": n, "entries": entries})
    return {"schema": SCHEMA, "kind": "linf",
            "spaces": {L.space.name: _space_doc(L.space)}, "space": L.space.name,
            "ops": ops}


def ocha_document(S):
    pair = S.pair
    l_ops = []
    for n in sorted(S.l):
        entries = [{"in": [pair.closed.names[i] for i in u], "out": _out(val, pair.closed)}
                   for (u, _), val in sorted(S.l[n].table.items())]
        l_ops.append({"arity": n, "entries": entries})
    return {"schema": SCHEMA, "kind": "ocha",
            "spaces": {pair.closed.name: _space_doc(pair.closed),
                       pair.open.name: _space_doc(pair.open)},
            "closed": pair.closed.name, "open": pair.open.name,
            "l": l_ops, "n": _mixed_ops_doc(S.n, pair, "open")}


def family_document(components, carrier, degree):
    if isinstance(carrier, GradedSpace):
        ops = {c.arity: c for c in components}
        return {"schema": SCHEMA, "kind": "family", "degree": degree,
                "spaces": {carrier.name: _space_doc(carrier)}, "space": carrier.name,
                "components": _tensor_ops_doc(ops, carrier)}
    comps = []
    for kind in ("closed", "open"):
        sel = {c.arity: c for c in components if c.kind == kind}
        for item in _mixed_ops_doc(sel, carrier, kind):
            item["kind"] = kind
            comps.append(item)
    return {"schema": SCHEMA, "kind": "family", "degree": degree,
            "spaces": {carrier.closed.name: _space_doc(carrier.closed),
                       carrier.open.name: _space_doc(carrier.open)},
            "closed": carrier.closed.name, "open": carrier.open.name,
            "components": comps}


def extension_document(X):
    s = X.split
    return {"schema": SCHEMA, "kind": "extension",
            "spaces": {s.A.name: _space_doc(s.A), s.B.name: _space_doc(s.B)},
            "ideal": s.A.name, "quotient": s.B.name,
            "ops": _tensor_ops_doc(s.structure.ops, s.E)}
