"""``ocha-lab``: check and construct structures stored in JSON files.

Exit status: 0 pass, 1 fail (with witness), 2 input error.
"""

import argparse
import json
import sys
import time

from .coderivations import decompose, lift_family, tabulate
from .enveloping import enveloping, induced_extension_morphism, linf_enveloping
from .errors import ArgumentError, OchaLabError, PreconditionError, UnstableTruncationError
from .extensions import (check_extension, check_ocha_constraint,
                         oc_from_extension)
from .fileformat import (SCHEMA, FormatError, ainf_document, dump_document,
                         family_document, format_fraction, linf_document,
                         load_document, ocha_document)
from .parallel import max_workers
from .spaces import GradedSpace
from .structures import (AInfinityStructure, LInfinityStructure, OchaStructure,
                         check_ainfinity, check_linear_ocha_morphism,
                         check_linfinity, check_ocha, symmetrize_ainfinity)
from .trees import free_ainfinity

CHECK_KINDS = ("ainf", "linf", "ocha", "constraint", "extension", "morphism")
CONSTRUCT_KINDS = ("symmetrize", "oc-from-extension", "envelope", "decompose", "free")
DEFAULT_WEIGHT = 4

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class Report:
    """Ordered fields rendered as text or JSON, deterministically."""

    def __init__(self, command, kind, path):
        self.fields = {"command": command, "kind": kind, "file": path}
        self.output = None

    def __setitem__(self, key, value):
        self.fields[key] = value

    def __getitem__(self, key):
        return self.fields[key]

    def render(self, fmt):
        if fmt == "json":
            doc = dict(self.fields)
            if self.output is not None:
                doc["output"] = self.output
            return json.dumps(doc, indent=2, sort_keys=True) + "\n"
        lines = []
        for key, value in self.fields.items():
            lines.extend(_text_lines(key, value))
        if self.output is not None:
            lines.append("output:")
            lines.append(dump_document(self.output).rstrip("\n"))
        return "\n".join(lines) + "\n"


def _text_lines(key, value, indent=""):
    if isinstance(value, dict):
        out = [f"{indent}{key}:"]
        for k, v in value.items():
            out.extend(_text_lines(k, v, indent + "  "))
        return out
    if isinstance(value, list) and value and isinstance(value[0], dict):
        out = [f"{indent}{key}:"]
        for item in value:
            out.append(indent + "  - " + ", ".join(f"{k}={_scalar(v)}" for k, v in item.items()))
        return out
    return [f"{indent}{key}: {_scalar(value)}"]


def _scalar(v):
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


# ------------------------------------------------------------ rendering

def _tensor_word(word, space):
    return " ".join(space.names[i] for i in word) if word else "1"


def _mixed_word(word, pair):
    u, v = word
    left = "^".join(pair.closed.names[i] for i in u)
    right = " ".join(pair.open.names[j] for j in v)
    return f"{left or '1'} ; {right or '1'}"


def _render_key(key, carrier):
    if isinstance(carrier, GradedSpace):
        if isinstance(key, int):
            return carrier.names[key]
        return _tensor_word(key, carrier)
    return _mixed_word(key, carrier)


def _render_vec(vec, carrier, keyfn=None):
    if not vec:
        return {}
    render = keyfn or (lambda k: _render_key(k, carrier))
    out = {}
    for k in sorted(vec, key=repr):
        out[render(k)] = format_fraction(vec[k])
    return dict(sorted(out.items()))


def _verdict_fields(report, v, carrier):
    report["verdict"] = "pass" if v.ok else "fail"
    if v.routes:
        report["routes"] = {name: ("pass" if r.ok else "fail") for name, r in sorted(v.routes.items())}
        report["routes_agree"] = v.agree
        if not v.agree:
            report["warning"] = "routes disagree: sign-convention fault"
    if not v.ok:
        report["witness"] = _render_key(v.witness, carrier)
        report["witness_weight"] = v.weight()
        report["relation"] = v.relation
        report["residual"] = _render_vec(v.residual, carrier)


def _extension_witness(w, X):
    """``(part, word)`` from :func:`check_extension` as ``"part: x y"``."""
    part = w[0]
    spaces = {"A": X.split.A, "B": X.split.B, "E": X.split.E,
              "inclusion": X.split.A, "projection": X.split.E}
    if len(w) < 2 or part not in spaces or not isinstance(w[1], tuple):
        return " ".join(str(x) for x in w)
    return f"{part}: {_tensor_word(w[1], spaces[part])}"


# ------------------------------------------------------------ commands

def _need(obj, cls, what, path):
    if not isinstance(obj, cls):
        raise FormatError(f"{path}: expected {what}")
    return obj


def _weight(args, raw, default=DEFAULT_WEIGHT):
    if args.max_weight is not None:
        return args.max_weight
    return raw.get("max_weight", default)


def cmd_check(args, report):
    raw, obj = load_document(args.file)
    # the universal-property check grows fast with weight
    N = _weight(args, raw, default=3 if raw.get("kind") == "universal" else DEFAULT_WEIGHT)
    report["max_weight"] = N
    kind = args.kind
    if kind == "ainf":
        M = _need(obj, AInfinityStructure, "an 'ainf' document", args.file)
        v = check_ainfinity(M, N, getattr(M, "weights", None))
        _verdict_fields(report, v, M.space)
        return v.ok
    if kind == "linf":
        L = _need(obj, LInfinityStructure, "a 'linf' document", args.file)
        v = check_linfinity(L, N)
        _verdict_fields(report, v, L.pair)
        return v.ok
    if kind == "ocha":
        S = _need(obj, OchaStructure, "an 'ocha' document", args.file)
        v = check_ocha(S, N)
        _verdict_fields(report, v, S.pair)
        return v.ok
    if kind in ("constraint", "extension"):
        if raw.get("kind") != "extension":
            raise FormatError(f"{args.file}: expected an 'extension' document")
        X = obj
        c = check_ocha_constraint(X.split, tolerant=args.tolerant)
        E = X.split.E
        cons = {"reading": "tolerant" if args.tolerant else "strict",
                "strict": "pass" if c.strict_ok else "fail",
                "tolerant": "pass" if c.tolerant_ok else "fail"}
        w = c.offending[0] if c.offending else (c.interleaved[0] if c.interleaved else None)
        if w is not None:
            cons["first_offender"] = f"m_{w[0]}({_tensor_word(w[1], E)}): {w[3]}"
        if kind == "constraint":
            report["verdict"] = "pass" if c.ok else "fail"
            report["constraint"] = cons
            if not c.ok:
                wit = c.witness()
                report["witness"] = _tensor_word(wit[1], E)
                report["witness_weight"] = len(wit[1])
            return c.ok
        v = check_extension(X, N)
        report["verdict"] = "pass" if v.ok else "fail"
        if not v.ok:
            report["relation"] = v.relation
            report["witness"] = _extension_witness(v.witness, X)
        report["constraint"] = cons
        return v.ok
    if kind == "morphism":
        if raw.get("kind") == "universal":
            r = induced_extension_morphism(obj["map"], obj["extension"], obj["ocha"], N,
                                           args.slack)
            report["verdict"] = "pass" if r.ok else "fail"
            report["checked"] = ["relations vanish", "mu_1", "iota", "morphism",
                                 "quotient square"]
            if not r.ok:
                report["relation"] = r.relation
                report["witness"] = repr(r.witness)
            return r.ok
        if raw.get("kind") != "morphism":
            raise FormatError(f"{args.file}: expected a 'morphism' document")
        v = check_linear_ocha_morphism(obj["map"], obj["source"], obj["target"], N)
        src = obj["source"].pair
        report["verdict"] = "pass" if v.ok else "fail"
        report["routes"] = {n: ("pass" if r.ok else "fail") for n, r in sorted(v.routes.items())}
        report["routes_agree"] = v.agree
        if not v.ok:
            report["witness"] = _mixed_word(v.witness, src)
            report["witness_weight"] = v.weight()
            report["relation"] = v.relation
            report["residual"] = {repr(k): format_fraction(c)
                                  for k, c in sorted(v.residual.items(), key=repr)}
        return v.ok
    raise ArgumentError(f"unknown check kind {kind!r}")


def _dims_rows(table):
    return [{"weight": w, "degree": d, "dim": n} for (w, d), n in sorted(table.items())]


def cmd_construct(args, report):
    raw, obj = load_document(args.file)
    kind = args.kind
    if kind == "symmetrize":
        M = _need(obj, AInfinityStructure, "an 'ainf' document", args.file)
        L = symmetrize_ainfinity(M)
        N = _weight(args, raw)
        v = check_linfinity(L, N)
        report["max_weight"] = N
        report["verdict"] = "pass" if v.ok else "fail"
        return v.ok, linf_document(L)
    if kind == "oc-from-extension":
        if raw.get("kind") != "extension":
            raise FormatError(f"{args.file}: expected an 'extension' document")
        N = _weight(args, raw)
        S = oc_from_extension(obj, N)
        v = check_ocha(S, N)
        report["max_weight"] = N
        report["verdict"] = "pass" if v.ok else "fail"
        return v.ok, ocha_document(S)
    if kind == "envelope":
        W = _weight(args, raw, default=3)
        if isinstance(obj, OchaStructure):
            q = enveloping(obj, W, args.slack)
        elif isinstance(obj, LInfinityStructure):
            q = linf_enveloping(obj, W, args.slack)
        else:
            raise FormatError(f"{args.file}: expected an 'ocha' or 'linf' document")
        table = q.dimension_table()
        report["max_weight"] = W
        report["slack"] = args.slack
        report["stable_slack"] = q.stable_slack
        report["verdict"] = "pass"
        report["dimensions"] = _dims_rows(table)
        basis = {}
        for (w, d), trees in sorted(q.basis.items()):
            if trees:
                basis[f"{w},{d}"] = [q.free.name(t) for t in trees]
        doc = {"schema": SCHEMA, "kind": "envelope", "max_weight": W, "slack": args.slack,
               "stable_slack": q.stable_slack, "dimensions": _dims_rows(table),
               "basis": basis}
        return True, doc
    if kind == "decompose":
        if raw.get("kind") != "family":
            raise FormatError(f"{args.file}: expected a 'family' document")
        N = _weight(args, raw)
        carrier = obj["carrier"]
        D = lift_family(obj["components"], carrier).with_degree(obj["degree"])
        fam = decompose(tabulate(D, N), N)
        comps = [fam[k] for k in sorted(fam)]
        before = {(c.kind, c.arity): c.table for c in obj["components"] if not c.is_zero()}
        after = {(c.kind, c.arity): c.table for c in comps}
        report["max_weight"] = N
        report["round_trip"] = "exact" if before == after else "differs"
        report["verdict"] = "pass" if before == after else "fail"
        return before == after, family_document(comps, carrier, obj["degree"])
    if kind == "free":
        W = _weight(args, raw, default=3)
        if isinstance(obj, GradedSpace):
            V, diff = obj, {}
        elif isinstance(obj, AInfinityStructure):
            V = obj.space
            diff = {k[0]: dict(v) for k, v in obj.m(1).table.items()}
        else:
            raise FormatError(f"{args.file}: expected a 'space' or 'ainf' document")
        F = free_ainfinity(V, W, diff)
        M, weights = F.to_structure()
        v = check_ainfinity(M, W, weights)
        report["max_weight"] = W
        report["basis_size"] = M.space.dim
        report["verdict"] = "pass" if v.ok else "fail"
        return v.ok, ainf_document(M, weights=weights, max_weight=W)
    raise ArgumentError(f"unknown construct kind {kind!r}")


def build_parser():
    p = argparse.ArgumentParser(prog="ocha-lab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name, kinds in (("check", CHECK_KINDS), ("construct", CONSTRUCT_KINDS)):
        s = sub.add_parser(name)
        s.add_argument("kind", choices=kinds)
        s.add_argument("file")
        s.add_argument("--max-weight", type=int, default=None)
        s.add_argument("--slack", type=int, default=2)
        s.add_argument("--report", choices=("text", "json"), default="text")
        s.add_argument("--timing", action="store_true",
                       help="add wall-clock timing (makes reports non-reproducible)")
        if name == "check":
            s.add_argument("--tolerant", action="store_true",
                           help="constraint: accept A-entries after B-entries")
        else:
            s.add_argument("--out", default=None)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_PASS
    report = Report(args.command, args.kind, args.file)
    start = time.perf_counter()
    try:
        max_workers()
        if args.max_weight is not None and args.max_weight < 1:
            raise ArgumentError("--max-weight must be at least 1")
        if args.slack < 0:
            raise ArgumentError("--slack must be non-negative")
        if args.command == "check":
            ok = cmd_check(args, report)
            output = None
        else:
            ok, output = cmd_construct(args, report)
    except (PreconditionError, UnstableTruncationError) as exc:
        report["verdict"] = "fail"
        report["error"] = str(exc)
        if isinstance(exc, UnstableTruncationError):
            report["advice"] = "rerun with a larger --slack"
        ok, output = False, None
    except (ArgumentError, ValueError, OchaLabError) as exc:
        sys.stderr.write(f"ocha-lab: input error: {exc}\n")
        return EXIT_INPUT
    if args.timing:
        report["timing_seconds"] = round(time.perf_counter() - start, 3)
    if output is not None:
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(dump_document(output))
            report["written"] = args.out
        else:
            report.output = output
    sys.stdout.write(report.render(args.report))
    return EXIT_PASS if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
