"""Truncated universal enveloping A-infinity algebras of OCHAs.

``U(H_c, H_o)`` is the free A-infinity algebra on ``H_c (+) H_o`` modulo the
ideal generated by

* ``mu_{p+q}(Xi(c_1 ^ .. ^ c_p ; o_1 .. o_q)) - n_{p,q}(c; o)``  (``q >= 1``)
* ``mu_p(chi(c_1 ^ .. ^ c_p)) - l_p(c) - n_{p,0}(c)``          (``p >= 1``)

The ambient differential on generators is the weight-one part of the OCHA,
so the relations of weight one hold identically.  Relations mix weights, so
the ideal is only filtered: we generate it inside weight ``W + slack``,
intersect with weight ``<= W`` and report dimensions of the associated
graded pieces per ``(weight, degree)``.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product

from .coalgebra import xi
from .coderivations import ComponentMap
from .errors import PreconditionError, UnstableTruncationError
from .extensions import oc_from_extension
from .linalg import Echelon
from .parallel import pmap
from .signs import koszul_sign
from .spaces import GradedSpace, add_term, wedge_words
from .structures import (AInfinityStructure, check_linear_ocha_morphism,
                         check_ocha, weighted_words)
from .trees import (FreeAInfinity, compositions, tree_leaves, tree_weight,
                    trees_of_weight)

__all__ = [
    "EnvelopingQuotient",
    "enveloping",
    "linf_enveloping",
    "ExtensionCheck",
    "enveloping_extension_check",
    "InducedMorphism",
    "induced_extension_morphism",
    "contexts",
    "substitute",
]

HOLE = -1


@lru_cache(maxsize=None)
def contexts(dim, m):
    """Trees of weight ``m`` with exactly one leaf replaced by ``HOLE``."""
    if m == 1:
        return (HOLE,)
    out = []
    for k in range(2, m + 1):
        for parts in compositions(m, k):
            for h in range(k):
                pools = [contexts(dim, p) if a == h else trees_of_weight(dim, p)
                         for a, p in enumerate(parts)]
                for kids in product(*pools):
                    out.append(tuple(kids))
    return tuple(out)


def substitute(ctx, t):
    if isinstance(ctx, int):
        return t if ctx == HOLE else ctx
    return tuple(substitute(s, t) for s in ctx)


def _vec_weight(vec):
    return max(tree_weight(t) for t in vec)


def _graft_words(words, coeff_out):
    # tensor words of generators -> grafted corollas (or leaves)
    for w, c in words.items():
        add_term(coeff_out, w[0] if len(w) == 1 else tuple(w), c)


def _eliminate(job):
    rows = job
    ech = Echelon()
    for r in rows:
        ech.add(r)
    return ech.rows


class _Ideal:
    """Row-reduced ideal of ``free`` generated by ``relations`` (all
    contexts, truncated at ``free.max_weight``), split by degree."""

    def __init__(self, free, relations, extra_rows=()):
        self.free = free
        ids = free.ids()
        self.ids = ids
        self.trees = {i: t for t, i in ids.items()}
        M = free.max_weight
        dim = free.space.dim
        gens = []
        for s in relations:
            if s:
                gens.append(s)
                d1 = free.mu1_vector(s)
                if d1:
                    gens.append(d1)
        by_deg = {}
        for s in gens:
            ws = _vec_weight(s)
            deg_s = free.degree(next(iter(s)))
            for m in range(1, M - ws + 2):
                for ctx in contexts(dim, m):
                    row = {}
                    for t, c in s.items():
                        row[ids[substitute(ctx, t)]] = c
                    # degree of the context: vertices plus leaves except the hole
                    by_deg.setdefault(self._ctx_degree(ctx) + deg_s, []).append(row)
        for row in extra_rows:
            t = self.trees[next(iter(row))]
            by_deg.setdefault(free.degree(t), []).append(row)
        degs = sorted(by_deg)
        results = pmap(_eliminate, [by_deg[d] for d in degs])
        self.echelons = {}
        for d, rows in zip(degs, results):
            ech = Echelon()
            ech.rows = rows
            self.echelons[d] = ech

    def _ctx_degree(self, ctx):
        if isinstance(ctx, int):
            return 0 if ctx == HOLE else self.free.degrees[ctx]
        return 1 + sum(self._ctx_degree(s) for s in ctx)

    def pivot_trees(self):
        out = set()
        for ech in self.echelons.values():
            out.update(self.trees[p] for p in ech.rows)
        return out

    def rows_up_to(self, W):
        """Basis rows (as tree vectors) of the ideal within weight ``<= W``."""
        out = []
        for d in sorted(self.echelons):
            ech = self.echelons[d]
            for p in sorted(ech.rows):
                if tree_weight(self.trees[p]) <= W:
                    out.append({self.trees[c]: x for c, x in ech.rows[p].items()})
        return out

    def reduce(self, vec):
        """Normal form of a tree vector (remainder on non-pivot trees)."""
        parts = {}
        for t, c in vec.items():
            parts.setdefault(self.free.degree(t), {})[self.ids[t]] = c
        out = {}
        for d, part in parts.items():
            ech = self.echelons.get(d)
            rem = ech.reduce(part)[0] if ech is not None else part
            for i, c in rem.items():
                out[self.trees[i]] = c
        return out


@dataclass
class EnvelopingQuotient:
    """Truncated quotient ``F / I`` on weights ``<= max_weight``.

    ``dims[(w, d)]`` is the dimension of the associated graded piece and
    ``basis[(w, d)]`` the normal trees spanning it; ``ops[k]`` holds the
    induced operations on the normal basis (see :meth:`structure`).
    """

    free: FreeAInfinity
    max_weight: int
    slack: int
    dims: dict
    basis: dict
    ideal: object = field(repr=False)
    stable_slack: int = None

    def normal_trees(self):
        out = []
        for key in sorted(self.basis):
            out.extend(self.basis[key])
        return out

    def reduce(self, vec):
        return self.ideal.reduce(vec)

    def dimension_table(self):
        return {k: v for k, v in sorted(self.dims.items()) if v}

    def structure(self):
        """Induced operations as an :class:`AInfinityStructure` on the normal
        basis; returns ``(M, weights, normal_trees)``."""
        normal = self.normal_trees()
        pos = {t: i for i, t in enumerate(normal)}
        weights = [tree_weight(t) for t in normal]
        free = self.free
        space = GradedSpace("U", [free.name(t) for t in normal],
                            [free.degree(t) for t in normal])
        ops = {}
        for word in weighted_words(len(normal), self.max_weight, weights):
            k = len(word)
            args = [normal[i] for i in word]
            val = free.mu1(args[0]) if k == 1 else {free.graft(args): 1}
            red = self.reduce(val)
            if red:
                ops.setdefault(k, {})[word] = {pos[t]: c for t, c in red.items()}
        M = AInfinityStructure(space, {k: ComponentMap("tensor", k, 1, t)
                                       for k, t in ops.items()})
        return M, weights, normal


def _check_well_defined(q):
    """Products with an ideal element must reduce to zero."""
    W = q.max_weight
    free = q.free
    ideal_rows = q.ideal.rows_up_to(W)
    normal = q.normal_trees()
    # candidates: normal trees as unit vectors, ideal rows as vectors
    pool = [({t: 1}, tree_weight(t), False) for t in normal]
    pool += [(r, _vec_weight(r), True) for r in ideal_rows]
    for r in ideal_rows:
        if q.reduce(free.mu1_vector(r)):
            raise UnstableTruncationError(
                "mu_1 of an ideal element leaves the truncated ideal; "
                f"increase slack beyond {q.slack}")

    def rec(args, weight, has_ideal):
        if len(args) >= 2 and has_ideal:
            if q.reduce(free.mu(args)):
                raise UnstableTruncationError(
                    f"mu_{len(args)} is not well defined on the truncated quotient; "
                    f"increase slack beyond {q.slack}")
        for vec, w, is_ideal in pool:
            if weight + w <= W:
                rec(args + [vec], weight + w, has_ideal or is_ideal)

    rec([], 0, False)


def _quotient(free, ideal, W, slack):
    pivots = ideal.pivot_trees()
    dims, basis = {}, {}
    for w in range(1, W + 1):
        for t in trees_of_weight(free.space.dim, w):
            key = (w, free.degree(t))
            dims.setdefault(key, 0)
            basis.setdefault(key, [])
            if t not in pivots:
                dims[key] += 1
                basis[key].append(t)
    return EnvelopingQuotient(free, W, slack, dims, basis, ideal)


def _ocha_differential(S):
    pair = S.pair
    d = {}
    l1 = S.l.get(1)
    n10 = S.n.get((1, 0))
    n01 = S.n.get((0, 1))
    for i in range(pair.closed.dim):
        v = {}
        if l1 is not None:
            for j, c in l1.table.get(((i,), ()), {}).items():
                add_term(v, pair.cmap[j], c)
        if n10 is not None:
            for j, c in n10.table.get(((i,), ()), {}).items():
                add_term(v, pair.omap[j], c)
        if v:
            d[pair.cmap[i]] = v
    for i in range(pair.open.dim):
        v = {}
        if n01 is not None:
            for j, c in n01.table.get(((), (i,)), {}).items():
                add_term(v, pair.omap[j], c)
        if v:
            d[pair.omap[i]] = v
    return d


def _ocha_relations(S, M):
    pair = S.pair
    out = []
    for n in range(2, M + 1):
        for w in pair.words(n, n):
            u, o = w
            p, q = len(u), len(o)
            vec = {}
            _graft_words(xi(w, pair), vec)
            comp = S.n.get((p, q))
            if comp is not None:
                for j, c in comp.table.get(w, {}).items():
                    add_term(vec, pair.omap[j], -c)
            if q == 0 and p in S.l:
                for j, c in S.l[p].table.get((u, ()), {}).items():
                    add_term(vec, pair.cmap[j], -c)
            if vec:
                out.append(vec)
    return out


def _run(free_factory, relations_factory, W, slack, extra=None):
    M = W + slack
    free = free_factory(M)
    ideal = _Ideal(free, relations_factory(M), extra(free) if extra else ())
    q = _quotient(free, ideal, W, slack)
    _check_well_defined(q)
    return q


def _stable(run, W, slack, recheck):
    q = run(W, slack)
    if recheck:
        q2 = run(W, slack + 1)
        if q2.dims != q.dims:
            bad = sorted(k for k in q.dims if q.dims[k] != q2.dims.get(k))
            raise UnstableTruncationError(
                f"dimensions change between slack {slack} and {slack + 1} at "
                f"(weight, degree) {bad[:3]}; increase slack")
        q.stable_slack = slack
    return q


def enveloping(S, max_weight, slack=2, recheck=True, check=True):
    """The truncated enveloping algebra of the OCHA ``S``.

    Raises :class:`UnstableTruncationError` when an induced operation is
    not well defined at this slack or (with ``recheck``) when dimensions
    move between ``slack`` and ``slack + 1``.
    """
    if check:
        v = check_ocha(S, max_weight + slack)
        if not v:
            raise PreconditionError(f"not an OCHA: fails at {v.witness!r}")
    diff = _ocha_differential(S)

    def run(W, s):
        return _run(lambda M: FreeAInfinity(S.pair.total, M, diff),
                    lambda M: _ocha_relations(S, M), W, s)

    return _stable(run, max_weight, slack, recheck)


def _linf_relations(L, M):
    # mu_p(sum_sigma eps(sigma) c_sigma) - l_p(c), written out with the
    # sign engine instead of the coalgebra module
    degs = L.space.degrees
    out = []
    for p in range(2, M + 1):
        for u in wedge_words(L.space, p):
            vec = {}
            for perm in permutations(range(1, p + 1)):
                word = tuple(u[a - 1] for a in perm)
                sign = koszul_sign(perm, [degs[x] for x in u])
                add_term(vec, word, sign)
            op = L.ops.get(p)
            if op is not None:
                for j, c in op.table.get((u, ()), {}).items():
                    add_term(vec, j, -c)
            if vec:
                out.append(vec)
    return out


def linf_enveloping(L, max_weight, slack=2, recheck=True):
    """Enveloping algebra of an L-infinity algebra alone (only the
    symmetrized-product relations)."""
    l1 = L.ops.get(1)
    diff = {}
    if l1 is not None:
        for (u, _), v in l1.table.items():
            diff[u[0]] = dict(v)

    def run(W, s):
        return _run(lambda M: FreeAInfinity(L.space, M, diff),
                    lambda M: _linf_relations(L, M), W, s)

    return _stable(run, max_weight, slack, recheck)


# ------------------------------------------------------------ extension check

@dataclass
class ExtensionCheck:
    ok: bool
    full: dict
    open_part: dict
    closed_part: dict
    failures: list = field(default_factory=list)
    stable_slack: int = None

    def __bool__(self):
        return self.ok


def _open_image_dims(q, pair):
    """Associated graded dimensions of the image of open-decorated trees."""
    openset = set(pair.omap)
    free = q.free
    by_deg = {}
    for w in range(1, q.max_weight + 1):
        for t in trees_of_weight(free.space.dim, w):
            if openset.intersection(tree_leaves(t)):
                nf = q.reduce({t: 1})
                if nf:
                    by_deg.setdefault(free.degree(t), []).append(nf)
    dims = {}
    ids = free.ids()
    for d, vecs in sorted(by_deg.items()):
        ech = Echelon()
        for v in vecs:
            ech.add({ids[t]: c for t, c in v.items()})
        trees = {i: t for t, i in ids.items()}
        for p in ech.rows:
            key = (tree_weight(trees[p]), d)
            dims[key] = dims.get(key, 0) + 1
    return dims


def _to_closed(t, back):
    if isinstance(t, int):
        return back.get(t)
    kids = []
    for s in t:
        k = _to_closed(s, back)
        if k is None:
            return None
        kids.append(k)
    return tuple(kids)


def enveloping_extension_check(S, max_weight, slack=2, recheck=True):
    """Compare ``U(H_c, H_o)`` with the open image and ``U(H_c)``.

    Checks per ``(weight, degree)``: ``dim U = dim <H_o> + dim U(H_c)``; the
    projection killing open leaves is an A-infinity morphism on all normal
    words of weight ``<= max_weight``, kills ``<H_o>`` and is onto.
    """
    q = enveloping(S, max_weight, slack, recheck)
    qc = linf_enveloping(S.l_infinity(), max_weight, slack, recheck)
    pair = S.pair
    opened = _open_image_dims(q, pair)
    failures = []
    keys = sorted(set(q.dims) | set(qc.dims) | set(opened))
    for key in keys:
        a = q.dims.get(key, 0)
        b = opened.get(key, 0) + qc.dims.get(key, 0)
        if a != b:
            failures.append(("dimension", key, a, b))
    back = {t: i for i, t in enumerate(pair.cmap)}

    def proj(vec):
        out = {}
        for t, c in vec.items():
            t2 = _to_closed(t, back)
            if t2 is not None:
                add_term(out, t2, c)
        return qc.reduce(out)

    M, weights, normal = q.structure()
    # projection of a normal basis element
    pimg = [proj({t: 1}) for t in normal]
    free_c = qc.free
    for word in weighted_words(len(normal), max_weight, weights):
        k = len(word)
        lhs = {}
        for i, c in M.m(k).table.get(word, {}).items():
            for t, c2 in pimg[i].items():
                add_term(lhs, t, c * c2)
        # mu_k of projected arguments in U(H_c)
        args = [pimg[i] for i in word]
        if all(args):
            val = free_c.mu1_vector(args[0]) if k == 1 else free_c.mu(args)
            for t, c in qc.reduce(val).items():
                add_term(lhs, t, -c)
        if lhs:
            failures.append(("projection", tuple(normal[i] for i in word), lhs))
            break
    openset = set(pair.omap)
    ech = Echelon()
    ids = free_c.ids()
    for t, img in zip(normal, pimg):
        if openset.intersection(tree_leaves(t)):
            nf = q.reduce({t: 1})
            # project the class, not just the tree
            if proj(nf):
                failures.append(("open image not killed", t))
                break
        if img:
            ech.add({ids[s]: c for s, c in img.items()})
    if len(ech) != sum(qc.dims.values()):
        failures.append(("projection not onto", len(ech), sum(qc.dims.values())))
    return ExtensionCheck(not failures, q.dimension_table(), dict(sorted(opened.items())),
                          qc.dimension_table(), failures, q.stable_slack)


# ------------------------------------------------------------ universal property

@dataclass
class InducedMorphism:
    ok: bool
    table: dict
    witness: object = None
    relation: str = None

    def __bool__(self):
        return self.ok


def induced_extension_morphism(f, X, S, max_weight, slack=2):
    """Evaluate trees in ``E`` through ``f`` and verify the universal property.

    ``f`` is a :class:`~ocha_lab.structures.LinearOchaMorphism` from ``S``
    to ``(E)_OC`` (closed target ``B``, open target ``A``).  Checks that the
    evaluation vanishes on every generated relation of weight
    ``<= max_weight``, restricts to ``f`` on generators, is an A-infinity
    morphism on the quotient, and that its ``B``-component factors through
    ``U(H_c) -> B``.
    """
    EOC = oc_from_extension(X, max_weight)
    v = check_linear_ocha_morphism(f, S, EOC, max_weight)
    if not v:
        raise PreconditionError(
            f"f is not a linear OCHA-morphism into (E)_OC; witness {v.witness!r}")
    split = X.split
    Est = split.structure
    pair = S.pair
    a_of, b_of = split.a_index, split.b_index
    leaf = {}
    for i in range(pair.closed.dim):
        v_ = {}
        for j, c in f.g.get(i, {}).items():
            add_term(v_, b_of[j], c)
        for j, c in f.f10.get(i, {}).items():
            add_term(v_, a_of[j], c)
        leaf[pair.cmap[i]] = v_
    for i in range(pair.open.dim):
        v_ = {}
        for j, c in f.f01.get(i, {}).items():
            add_term(v_, a_of[j], c)
        leaf[pair.omap[i]] = v_

    def mk(ops, k, args):
        terms = {(): Fraction(1)}
        for a in args:
            nxt = {}
            for pre, c in terms.items():
                for x, c2 in a.items():
                    add_term(nxt, pre + (x,), c * c2)
            terms = nxt
        out = {}
        m = ops.get(k)
        if m is None:
            return out
        for key, c in terms.items():
            for y, c2 in m.table.get(key, {}).items():
                add_term(out, y, c * c2)
        return out

    memo = {}

    def phi(t):
        hit = memo.get(t)
        if hit is None:
            if isinstance(t, int):
                hit = leaf.get(t, {})
            else:
                hit = mk(Est.ops, len(t), [phi(s) for s in t])
            memo[t] = hit
        return hit

    def phi_vec(vec):
        out = {}
        for t, c in vec.items():
            for y, c2 in phi(t).items():
                add_term(out, y, c * c2)
        return out

    # every generated relation within weight <= max_weight
    diff = _ocha_differential(S)
    free = FreeAInfinity(pair.total, max_weight, diff)
    dim = free.space.dim
    for s in _ocha_relations(S, max_weight):
        for gen in (s, free.mu1_vector(s)):
            if not gen:
                continue
            ws = _vec_weight(gen)
            for m in range(1, max_weight - ws + 2):
                for ctx in contexts(dim, m):
                    row = {substitute(ctx, t): c for t, c in gen.items()}
                    val = phi_vec(row)
                    if val:
                        return InducedMorphism(False, {}, row, "relation")
    # phi commutes with mu_1 on trees (so it is an A-infinity map out of F)
    for t in free.basis():
        lhs = phi_vec(free.mu1(t))
        for y, c in mk(Est.ops, 1, [phi(t)]).items():
            add_term(lhs, y, -c)
        if lhs:
            return InducedMorphism(False, {}, t, "mu_1")
    q = enveloping(S, max_weight, slack)
    # restriction to generators
    for x, img in leaf.items():
        if phi_vec(q.reduce({x: 1})) != img:
            return InducedMorphism(False, {}, x, "iota")
    M, weights, normal = q.structure()
    table = {t: phi(t) for t in normal}
    for word in weighted_words(len(normal), max_weight, weights):
        lhs = {}
        for i, c in M.m(len(word)).table.get(word, {}).items():
            for y, c2 in table[normal[i]].items():
                add_term(lhs, y, c * c2)
        for y, c in mk(Est.ops, len(word), [table[normal[i]] for i in word]).items():
            add_term(lhs, y, -c)
        if lhs:
            return InducedMorphism(False, table, tuple(normal[i] for i in word), "morphism")
    # B-component factors through U(H_c): compare with evaluation in B
    OnB = X.on_B
    bpos = {e: i for i, e in enumerate(b_of)}
    cleaf = {}
    for i in range(pair.closed.dim):
        cleaf[pair.cmap[i]] = {j: c for j, c in f.g.get(i, {}).items()}
    bmemo = {}

    def phi_b(t):
        hit = bmemo.get(t)
        if hit is None:
            if isinstance(t, int):
                hit = cleaf.get(t, {})
            else:
                hit = mk(OnB.ops, len(t), [phi_b(s) for s in t])
            bmemo[t] = hit
        return hit

    for t in normal:
        lhs = {bpos[y]: c for y, c in table[t].items() if y in bpos}
        for y, c in phi_b(t).items():
            add_term(lhs, y, -c)
        if lhs:
            return InducedMorphism(False, table, t, "quotient square")
    return InducedMorphism(True, table)
