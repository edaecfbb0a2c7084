"""Shared helpers for the test-suite: corpus access and random families."""

from fractions import Fraction
from pathlib import Path

from ocha_lab.coalgebra import Pair
from ocha_lab.coderivations import ComponentMap
from ocha_lab.fileformat import load_document
from ocha_lab.spaces import GradedSpace, tensor_words, wedge_words

CORPUS = Path(__file__).resolve().parents[1] / "src" / "ocha_lab" / "corpus"


def corpus(name):
    return CORPUS / name


def load(name):
    return load_document(corpus(name))


def random_coeff(rng):
    c = 0
    while c == 0:
        c = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
    return c


def random_space(rng, name, prefix, dim, degrees=(-1, 0, 1)):
    return GradedSpace(name, [f"{prefix}{i + 1}" for i in range(dim)],
                       [rng.choice(degrees) for _ in range(dim)])


def random_pair(rng, dims=(2, 2), degrees=(-1, 0, 1)):
    return Pair(random_space(rng, "Hc", "c", dims[0], degrees),
                random_space(rng, "Ho", "o", dims[1], degrees))


def _inputs(carrier, kind, arity):
    if kind == "tensor":
        return tensor_words(carrier, arity)
    p, q = arity
    return [(u, v) for u in wedge_words(carrier.closed, p)
            for v in tensor_words(carrier.open, q)]


def _in_degree(carrier, kind, key):
    if kind == "tensor":
        return sum(carrier.degrees[i] for i in key)
    return carrier.degree(key)


def random_component(rng, carrier, kind, arity, degree, density=0.6):
    """A random component with the right degree shift (possibly zero)."""
    if kind == "tensor":
        out_deg = carrier.degrees
    elif kind == "closed":
        out_deg = carrier.closed.degrees
    else:
        out_deg = carrier.open.degrees
    table = {}
    for key in _inputs(carrier, kind, arity):
        target = _in_degree(carrier, kind, key) + degree
        cands = [i for i, d in enumerate(out_deg) if d == target]
        if cands and rng.random() < density:
            table[key] = {rng.choice(cands): random_coeff(rng)}
    return ComponentMap(kind, arity, degree, table)


def random_family(rng, carrier, kinds, arities, degree):
    """Nonzero components for every ``(kind, arity)`` that admits one."""
    comps = []
    for kind in kinds:
        for arity in arities:
            if kind != "tensor" and carrier is not None:
                p, q = arity
                if (p and not carrier.closed.dim) or (q and not carrier.open.dim):
                    continue
            for _ in range(6):
                c = random_component(rng, carrier, kind, arity, degree)
                if not c.is_zero():
                    comps.append(c)
                    break
    return comps


CHECK_KIND = {"ainf": "ainf", "linf": "linf", "ocha": "ocha",
              "extension": "extension", "morphism": "morphism",
              "universal": "morphism"}


def coefficient_paths(doc, path=(), inside=False):
    """Paths to every structure constant (strings under ``out`` or ``map``)."""
    if isinstance(doc, dict):
        for k in sorted(doc):
            yield from coefficient_paths(doc[k], path + (k,),
                                         inside or k in ("out", "map"))
    elif isinstance(doc, list):
        for i, x in enumerate(doc):
            yield from coefficient_paths(x, path + (i,), inside)
    elif isinstance(doc, str) and inside:
        yield path


def flip_sign(doc, path):
    """Copy of ``doc`` with the coefficient at ``path`` negated."""
    import copy
    out = copy.deepcopy(doc)
    node = out
    for k in path[:-1]:
        node = node[k]
    val = node[path[-1]]
    node[path[-1]] = val[1:] if val.startswith("-") else "-" + val
    return out


def unitriangular(rng, space, blocks=None):
    """Random degree-preserving ``psi = 1 + N`` (``N`` strictly upper
    triangular) and its exact inverse, as ``{i: {j: c}}``.  ``blocks``
    optionally lists index groups that ``psi`` must preserve."""
    n = space.dim
    group = [0] * n
    for g, idx in enumerate(blocks or [range(n)]):
        for i in idx:
            group[i] = g
    N = {}
    for i in range(n):
        for j in range(i + 1, n):
            if space.degrees[i] == space.degrees[j] and group[i] == group[j] \
                    and rng.random() < 0.5:
                N.setdefault(i, {})[j] = random_coeff(rng)

    def mul(a, b):
        out = {}
        for i, row in a.items():
            for k, c in row.items():
                for j, c2 in b.get(k, {}).items():
                    out.setdefault(i, {})
                    out[i][j] = out[i].get(j, 0) + c * c2
        return {i: {j: c for j, c in r.items() if c} for i, r in out.items()}

    psi = {i: {i: Fraction(1), **N.get(i, {})} for i in range(n)}
    inv = {i: {i: Fraction(1)} for i in range(n)}
    power, sign = dict(N), -1
    while power:
        for i, row in power.items():
            for j, c in row.items():
                inv[i][j] = inv[i].get(j, 0) + sign * c
        power, sign = mul(power, N), -sign
    return psi, inv


def relabel(M, psi, psi_inv):
    """``psi^{-1} m_k psi^{(x)k}`` for a degree-0 basis change; ``psi`` maps
    generator ``i`` to ``psi[i]``."""
    from ocha_lab.structures import AInfinityStructure
    from ocha_lab.spaces import add_term
    ops = {}
    for k, comp in M.ops.items():
        table = {}
        for w in tensor_words(M.space, k):
            terms = {(): Fraction(1)}
            for x in w:
                nxt = {}
                for pre, c in terms.items():
                    for y, c2 in psi[x].items():
                        add_term(nxt, pre + (y,), c * c2)
                terms = nxt
            val = {}
            for key, c in terms.items():
                for y, c2 in comp.table.get(key, {}).items():
                    for z, c3 in psi_inv[y].items():
                        add_term(val, z, c * c2 * c3)
            if val:
                table[w] = val
        ops[k] = ComponentMap("tensor", k, 1, table)
    return AInfinityStructure(M.space, ops)


def flip_entry(rng, comps):
    """Copy of a dict of components with one random coefficient negated."""
    keys = [(k, w, i) for k, c in comps.items() for w, v in c.table.items() for i in v]
    k, w, i = rng.choice(sorted(keys, key=repr))
    out = {}
    for key, c in comps.items():
        table = {ww: dict(v) for ww, v in c.table.items()}
        if key == k:
            table[w][i] = -table[w][i]
        out[key] = ComponentMap(c.kind, c.arity, c.degree, table)
    return out


# files where every single sign flip of a structure constant breaks the
# checked relation (elsewhere some flips are mere rescalings)
MUTATION_FILES = ["ext_constrained.json", "ext_constrained_oc.json", "ext_interleaved.json",
                  "ext_small.json", "ext_twisted.json", "morphism_identity.json",
                  "triangular_ainf.json"]


def run_cli(*argv):
    """Run the command line entry point; returns ``(exit_code, stdout, stderr)``."""
    import io
    from contextlib import redirect_stderr, redirect_stdout
    from ocha_lab.cli import main
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        rc = main([str(a) for a in argv])
    return rc, out.getvalue(), err.getvalue()
