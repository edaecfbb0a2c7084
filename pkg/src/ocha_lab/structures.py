"""A-infinity, L-infinity and OCHA structures and their checkers.

All operations have degree +1.  Every checker runs two independent routes:

* the coalgebra route squares the lifted coderivation on every basis word of
  weight ``<= max_weight``;
* the multilinear route evaluates the defining relations directly.

For OCHAs the multilinear relations, with signs obtained by expanding the
square of ``l^ + n^`` once, read (``U = U' ^ U''`` an unshuffle with Koszul
sign ``eps``; ``a_1..a_m`` open inputs)::

    closed:  sum eps * l(l(U'') ^ U')                                   = 0
    open:    sum eps * n(l(U'') ^ U'; a)
           + sum (-1)^{eps + |U'| + |a_1..a_j| + |U''||a_1..a_j|}
                 n(U'; a_1..a_j, n(U''; a_{j+1}..a_{j+s}), ..., a_m)    = 0

where ``U''`` is the block fed to the inner operation.  In the first open
sum the inner bracket takes the *front* block of the unshuffle, in the
second the *back* block.  Inner brackets of every arity ``>= 1`` occur,
including ``l_1``.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .coalgebra import Pair, shuffle_product, symmetrize_chi, xi, xi_left_inverse
from .coderivations import ComponentMap, Coderivation, apply
from .errors import ArgumentError
from .signs import reorder_sign, unshuffles
from .spaces import GradedSpace, _canon_fast, add_term, wedge_words

__all__ = [
    "Verdict",
    "AInfinityStructure",
    "LInfinityStructure",
    "OchaStructure",
    "LinearOchaMorphism",
    "check_ainfinity",
    "check_linfinity",
    "check_ocha",
    "symmetrize_ainfinity",
    "check_linear_ocha_morphism",
    "coalgebra_morphism",
    "empty_space",
    "weighted_words",
]


def empty_space(name="0"):
    return GradedSpace(name, (), ())


@dataclass
class Verdict:
    """Outcome of a structure check.

    ``witness`` is the least failing basis word (enumeration order: weight,
    then bidegree, then lexicographic) and ``residual`` the nonzero value
    found there.  ``routes`` holds the per-route verdicts and ``agree`` says
    whether they coincide (a disagreement is a sign-convention fault).
    """

    ok: bool
    witness: object = None
    residual: dict = None
    relation: str = None
    routes: dict = field(default_factory=dict)
    agree: bool = True

    def __bool__(self):
        return self.ok

    def weight(self):
        w = self.witness
        if w is None:
            return None
        if w and isinstance(w[0], tuple):
            return len(w[0]) + len(w[1])
        return len(w)


def _combine(routes, authoritative):
    main = routes[authoritative]
    agree = len({r.ok for r in routes.values()}) == 1
    if agree and not main.ok:
        agree = len({r.witness for r in routes.values()}) == 1
    return Verdict(main.ok, main.witness, main.residual, main.relation,
                   routes=routes, agree=agree)


def _as_components(ops, kind):
    out = {}
    for key, comp in ops.items():
        if isinstance(comp, ComponentMap):
            out[key] = comp
        elif kind == "tensor":
            out[key] = ComponentMap("tensor", key, 1, comp)
        else:
            out[key] = ComponentMap(kind, key, 1, comp)
    return out


@dataclass
class AInfinityStructure:
    """Degree +1 operations ``m_k : E^{(x)k} -> E`` keyed by ``k``."""

    space: GradedSpace
    ops: dict = field(default_factory=dict)

    def __post_init__(self):
        self.ops = _as_components(self.ops, "tensor")
        for k, comp in self.ops.items():
            if comp.kind != "tensor" or comp.arity != k:
                raise ArgumentError(f"m_{k} has the wrong shape")
            if comp.degree != 1:
                raise ArgumentError(f"m_{k} has degree {comp.degree}, expected 1")
            comp.validate(self.space)
        self.ops = {k: c for k, c in sorted(self.ops.items()) if not c.is_zero()}

    def m(self, k):
        return self.ops.get(k) or ComponentMap("tensor", k, 1, {})

    def coderivation(self):
        return Coderivation(self.space, list(self.ops.values())).with_degree(1)


@dataclass
class LInfinityStructure:
    """Degree +1 graded-symmetric brackets ``l_n`` keyed by ``n``.

    Tables are keyed by ``(wedge, ())`` with canonical wedge; use
    :func:`symmetric_table` to import raw tuples.
    """

    space: GradedSpace
    ops: dict = field(default_factory=dict)

    def __post_init__(self):
        self.ops = _fix_closed(
            {(n if isinstance(n, int) else n[0]): c for n, c in self.ops.items()})
        self.pair = Pair(self.space, empty_space(self.space.name + "_0"))
        for n, comp in list(self.ops.items()):
            if comp.kind != "closed" or comp.arity != (n, 0) or comp.degree != 1:
                raise ArgumentError(f"l_{n} has the wrong shape or degree")
            comp.validate(self.pair)
        self.ops = {n: c for n, c in sorted(self.ops.items()) if not c.is_zero()}

    def l(self, n):
        return self.ops.get(n) or ComponentMap("closed", (n, 0), 1, {})

    def coderivation(self):
        return Coderivation(self.pair, list(self.ops.values())).with_degree(1)


def _fix_closed(ops):
    # accept {n: table} where table keys are wedge tuples or (wedge, ())
    out = {}
    for n, comp in ops.items():
        if isinstance(comp, ComponentMap):
            out[n] = comp
            continue
        table = {}
        for k, v in comp.items():
            key = k if (len(k) == 2 and isinstance(k[0], tuple)) else (tuple(k), ())
            table[key] = v
        out[n] = ComponentMap("closed", (n, 0), 1, table)
    return out


def symmetric_table(space, raw, arity):
    """Convert ``{raw input tuple: {out: c}}`` into canonical wedge keys,
    raising :class:`ArgumentError` if the values are not graded symmetric."""
    par = space.parities()
    out = {}
    for key, val in raw.items():
        if len(key) != arity:
            raise ArgumentError(f"input {key!r} does not have arity {arity}")
        s, w = _canon_fast(tuple(key), par)
        if not s:
            if any(val.values()):
                raise ArgumentError(
                    f"nonzero value on {key!r}, which is zero in the wedge power")
            continue
        val = {i: s * Fraction(c) for i, c in val.items() if c}
        if w in out and out[w] != val:
            raise ArgumentError(f"values on {key!r} are not graded symmetric")
        out[w] = val
    return {(w, ()): v for w, v in out.items()}


@dataclass
class OchaStructure:
    """``l_n : H_c^{^n} -> H_c`` keyed ``n`` and ``n_{p,q}`` keyed ``(p, q)``."""

    pair: Pair
    l: dict = field(default_factory=dict)
    n: dict = field(default_factory=dict)

    def __post_init__(self):
        self.l = _fix_closed(self.l)
        self.n = _as_components(self.n, "open")
        for k, comp in self.l.items():
            if comp.kind != "closed" or comp.arity != (k, 0) or comp.degree != 1:
                raise ArgumentError(f"l_{k} has the wrong shape or degree")
            comp.validate(self.pair)
        for k, comp in self.n.items():
            if comp.kind != "open" or comp.arity != tuple(k) or comp.degree != 1:
                raise ArgumentError(f"n_{k} has the wrong shape or degree")
            comp.validate(self.pair)
        self.l = {k: c for k, c in sorted(self.l.items()) if not c.is_zero()}
        self.n = {tuple(k): c for k, c in sorted(self.n.items()) if not c.is_zero()}

    @property
    def closed(self):
        return self.pair.closed

    @property
    def open(self):
        return self.pair.open

    def coderivation(self):
        comps = list(self.l.values()) + list(self.n.values())
        return Coderivation(self.pair, comps).with_degree(1)

    def l_infinity(self):
        ops = {k: ComponentMap("closed", (k, 0), 1, c.table) for k, c in self.l.items()}
        return LInfinityStructure(self.closed, ops)


@dataclass
class LinearOchaMorphism:
    """Degree-0 maps ``g: H_c -> H_c'``, ``f01: H_o -> H_o'``,
    ``f10: H_c -> H_o'`` as ``{source index: {target index: coeff}}``."""

    g: dict = field(default_factory=dict)
    f01: dict = field(default_factory=dict)
    f10: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("g", "f01", "f10"):
            m = getattr(self, name)
            setattr(self, name, {int(i): {int(j): Fraction(c) for j, c in row.items() if c}
                                 for i, row in m.items()})

    def check_degrees(self, src, dst):
        for name, a, b in (("g", src.closed, dst.closed),
                           ("f01", src.open, dst.open),
                           ("f10", src.closed, dst.open)):
            for i, row in getattr(self, name).items():
                if not 0 <= i < a.dim:
                    raise ArgumentError(f"{name}: bad source index {i}")
                for j in row:
                    if not 0 <= j < b.dim:
                        raise ArgumentError(f"{name}: bad target index {j}")
                    if a.degrees[i] != b.degrees[j]:
                        raise ArgumentError(f"{name} is not of degree 0 at {i}->{j}")


# ---------------------------------------------------------------- A-infinity

def weighted_words(dim, max_weight, weights=None, min_weight=1):
    """Words over ``range(dim)`` with total weight in the given range, in
    order of weight, then length, then lexicographic."""
    if weights is None:
        weights = [1] * dim
    by_weight = {}

    def rec(prefix, budget, total):
        if prefix and total >= min_weight:
            by_weight.setdefault(total, []).append(tuple(prefix))
        for x in range(dim):
            w = weights[x]
            if w <= budget:
                prefix.append(x)
                rec(prefix, budget - w, total + w)
                prefix.pop()

    rec([], max_weight, 0)
    out = []
    for w in sorted(by_weight):
        out.extend(sorted(by_weight[w], key=lambda t: (len(t), t)))
    return out


def _stasheff(M, word, deg):
    # p_1 of the square, evaluated directly from the structure constants.
    n = len(word)
    out = {}
    par = [deg[x] & 1 for x in word]
    for j, inner in M.ops.items():
        if j > n:
            continue
        outer = M.ops.get(n - j + 1)
        if outer is None:
            continue
        prefix = 0
        for i in range(n - j + 1):
            val = inner.table.get(word[i:i + j])
            if val:
                sign = -1 if prefix else 1
                for x, c in val.items():
                    key = word[:i] + (x,) + word[i + j:]
                    for y, c2 in outer.table.get(key, {}).items():
                        add_term(out, y, sign * c * c2)
            prefix ^= par[i]
    return out


def check_ainfinity(M, max_weight, weights=None):
    """Check the A-infinity relations of ``M`` on all words of weight
    ``<= max_weight`` (``weights`` gives per-generator weights, default 1)."""
    deg = M.space.degrees
    words = weighted_words(M.space.dim, max_weight, weights)
    D = M.coderivation()
    routes = {}
    res = None
    for w in words:
        sq = apply(D, D.on_word(w))
        if sq:
            res = Verdict(False, w, sq, "square")
            break
    routes["coderivation"] = res if res is not None else Verdict(True)
    res = None
    for w in words:
        val = _stasheff(M, w, deg)
        if val:
            res = Verdict(False, w, val, "stasheff")
            break
    routes["multilinear"] = res if res is not None else Verdict(True)
    return _combine(routes, "coderivation")


# ---------------------------------------------------------------- L-infinity

def _bracket_value(op, raw, par):
    # Evaluate a graded-symmetric operation on a raw (unsorted) wedge word.
    s, w = _canon_fast(raw, par)
    if not s:
        return None, {}
    return s, op.table.get((w, ()), {})


def _lie_relation(ops, u, par):
    """``sum eps * l(l(U'') ^ U')`` on a canonical wedge word ``u``."""
    n = len(u)
    upar = [par[i] for i in u]
    out = {}
    for k in range(1, n + 1):
        inner = ops.get(k)
        outer = ops.get(n - k + 1)
        if inner is None or outer is None:
            continue
        for sigma in unshuffles(k, n - k):
            order = [a - 1 for a in sigma]
            val = inner.table.get((tuple(u[a] for a in order[:k]), ()))
            if not val:
                continue
            eps = reorder_sign(order, upar)
            rest = tuple(u[a] for a in order[k:])
            for x, c in val.items():
                s, val2 = _bracket_value(outer, (x,) + rest, par)
                for y, c2 in val2.items():
                    add_term(out, y, eps * s * c * c2)
    return out


def check_linfinity(L, max_weight):
    """Check the L-infinity relations directly and via the square of
    the lifted coderivation on ``Lambda^c V``."""
    par = L.space.parities()
    routes = {}
    res = None
    for n in range(1, max_weight + 1):
        for u in wedge_words(L.space, n):
            val = _lie_relation(L.ops, u, par)
            if val:
                res = Verdict(False, (u, ()), val, "closed")
                break
        if res is not None:
            break
    routes["multilinear"] = res if res is not None else Verdict(True)
    D = L.coderivation()
    res = None
    for w in L.pair.words(max_weight):
        sq = apply(D, D.on_word(w))
        if sq:
            res = Verdict(False, w, sq, "square")
            break
    routes["coderivation"] = res if res is not None else Verdict(True)
    return _combine(routes, "coderivation")


# ---------------------------------------------------------------- OCHA

def _open_relation(S, word):
    u, a = word
    cpar, opar = S.pair.cpar, S.pair.opar
    n, m = len(u), len(a)
    upar = [cpar[i] for i in u]
    apre = [0]
    for j in a:
        apre.append(apre[-1] ^ opar[j])
    out = {}
    # l inside n
    for k, inner in S.l.items():
        if k > n:
            continue
        outer = S.n.get((n - k + 1, m))
        if outer is None:
            continue
        for sigma in unshuffles(k, n - k):
            order = [x - 1 for x in sigma]
            val = inner.table.get((tuple(u[x] for x in order[:k]), ()))
            if not val:
                continue
            eps = reorder_sign(order, upar)
            rest = tuple(u[x] for x in order[k:])
            for y, c in val.items():
                s, w = _canon_fast((y,) + rest, cpar)
                if not s:
                    continue
                for z, c2 in outer.table.get((w, a), {}).items():
                    add_term(out, z, eps * s * c * c2)
    # n inside n
    for (r, s_), inner in S.n.items():
        if r > n or s_ > m:
            continue
        for sigma in unshuffles(n - r, r):
            order = [x - 1 for x in sigma]
            front = tuple(u[x] for x in order[:n - r])
            back = tuple(u[x] for x in order[n - r:])
            outer = S.n.get((n - r, m - s_ + 1))
            if outer is None:
                continue
            eps = reorder_sign(order, upar)
            fp = 0
            for x in order[:n - r]:
                fp ^= upar[x]
            bp = 0
            for x in order[n - r:]:
                bp ^= upar[x]
            for j in range(m - s_ + 1):
                val = inner.table.get((back, a[j:j + s_]))
                if not val:
                    continue
                e = fp ^ apre[j] ^ (bp & apre[j])
                sign = -eps if e else eps
                for y, c in val.items():
                    key = (front, a[:j] + (y,) + a[j + s_:])
                    for z, c2 in outer.table.get(key, {}).items():
                        add_term(out, z, sign * c * c2)
    return out


def check_ocha(S, max_weight):
    """Check an OCHA by squaring ``l^ + n^`` (authoritative) and by the
    multilinear relations; both must agree."""
    routes = {}
    D = S.coderivation()
    words = S.pair.words(max_weight)
    res = None
    for w in words:
        sq = apply(D, D.on_word(w))
        if sq:
            res = Verdict(False, w, sq, "square")
            break
    routes["coderivation"] = res if res is not None else Verdict(True)
    res = None
    cpar = S.pair.cpar
    for w in words:
        if not w[1]:
            val = _lie_relation(S.l, w[0], cpar)
            if val:
                res = Verdict(False, w, {((k,), ()): c for k, c in val.items()}, "closed")
                break
        val = _open_relation(S, w)
        if val:
            res = Verdict(False, w, {((), (k,)): c for k, c in val.items()}, "open")
            break
    routes["multilinear"] = res if res is not None else Verdict(True)
    return _combine(routes, "coderivation")


# ---------------------------------------------------------------- symmetrization

def symmetrize_ainfinity(M):
    """``l_n(v_1 ^ ... ^ v_n) = sum_sigma eps(sigma) m_n(v_sigma(1), ...)``."""
    deg = M.space.degrees
    ops = {}
    for n, m in M.ops.items():
        table = {}
        for u in wedge_words(M.space, n):
            val = {}
            for w, c in symmetrize_chi(u, deg).items():
                for x, c2 in m.table.get(w, {}).items():
                    add_term(val, x, c * c2)
            if val:
                table[(u, ())] = val
        ops[n] = ComponentMap("closed", (n, 0), 1, table)
    return LInfinityStructure(M.space, ops)


# ---------------------------------------------------------------- morphisms

def _phi_total(phi, src, dst):
    # The linear map H_c (+) H_o -> H_c' (+) H_o' on total-space indices.
    out = {}
    for i in range(src.closed.dim):
        v = {}
        for j, c in phi.g.get(i, {}).items():
            add_term(v, dst.cmap[j], c)
        for j, c in phi.f10.get(i, {}).items():
            add_term(v, dst.omap[j], c)
        out[src.cmap[i]] = v
    for i in range(src.open.dim):
        v = {}
        for j, c in phi.f01.get(i, {}).items():
            add_term(v, dst.omap[j], c)
        out[src.omap[i]] = v
    return out


def coalgebra_morphism(phi, src, dst):
    """The coalgebra map lifting ``phi``: ``Xi'^{-1} o phi^{(x)} o Xi``.

    Returns a function on mixed words of ``src`` giving mixed combinations
    over ``dst``.
    """
    lin = _phi_total(phi, src, dst)
    memo = {}

    def f(word):
        hit = memo.get(word)
        if hit is not None:
            return hit
        image = {}
        for w, c in xi(word, src).items():
            terms = {(): c}
            for x in w:
                nxt = {}
                for pre, c1 in terms.items():
                    for y, c2 in lin.get(x, {}).items():
                        add_term(nxt, pre + (y,), c1 * c2)
                terms = nxt
            for t, c1 in terms.items():
                add_term(image, t, c1)
        n = len(word[0]) + len(word[1])
        out = xi_left_inverse(n, image, dst) if image else {}
        memo[word] = out
        return out

    return f


def _apply_map(fn, vec):
    out = {}
    for w, c in vec.items():
        for w2, c2 in fn(w).items():
            add_term(out, w2, c * c2)
    return out


def _morphism_equations(phi, D, Dp, word):
    """Residual of the componentwise linear-morphism equations at ``word``."""
    u, o = word
    p, q = len(u), len(o)
    src, dst = D.pair, Dp.pair
    cdeg = src.closed.degrees
    res = {}
    # closed: g(l_p(u)) - l'_p(g^{(x)p} u)
    if q == 0:
        for y, c in D.l.get(p, ComponentMap("closed", (p, 0), 1)).table.get((u, ()), {}).items():
            for z, c2 in phi.g.get(y, {}).items():
                add_term(res, ("closed", z), c * c2)
        lp = Dp.l.get(p)
        if lp is not None:
            # g^{(x)p} on a wedge word: expand then canonicalize
            terms = {(): Fraction(1)}
            for x in u:
                nxt = {}
                for pre, c1 in terms.items():
                    for y, c2 in phi.g.get(x, {}).items():
                        add_term(nxt, pre + (y,), c1 * c2)
                terms = nxt
            for t, c1 in terms.items():
                s, w = _canon_fast(t, dst.cpar)
                if s:
                    for z, c2 in lp.table.get((w, ()), {}).items():
                        add_term(res, ("closed", z), -s * c1 * c2)
    # open: f01(n_{p,q}) + [q=0] f10(l_p) - sum_m 1/m! n'_{m,.}(...)
    npq = D.n.get((p, q))
    if npq is not None:
        for y, c in npq.table.get((u, o), {}).items():
            for z, c2 in phi.f01.get(y, {}).items():
                add_term(res, ("open", z), c * c2)
    if q == 0 and p in D.l:
        for y, c in D.l[p].table.get((u, ()), {}).items():
            for z, c2 in phi.f10.get(y, {}).items():
                add_term(res, ("open", z), c * c2)
    fo = {(): Fraction(1)}
    for x in o:
        nxt = {}
        for pre, c1 in fo.items():
            for y, c2 in phi.f01.get(x, {}).items():
                add_term(nxt, pre + (y,), c1 * c2)
        fo = nxt
    chi = symmetrize_chi(u, cdeg)
    odeg = dst.open.degrees
    for m in range(p + 1):
        weight = Fraction(1, factorial(m))
        for w, c in chi.items():
            gpart = {(): c}
            for x in w[:m]:
                nxt = {}
                for pre, c1 in gpart.items():
                    for y, c2 in phi.g.get(x, {}).items():
                        add_term(nxt, pre + (y,), c1 * c2)
                gpart = nxt
            fpart = {(): Fraction(1)}
            for x in w[m:]:
                nxt = {}
                for pre, c1 in fpart.items():
                    for y, c2 in phi.f10.get(x, {}).items():
                        add_term(nxt, pre + (y,), c1 * c2)
                fpart = nxt
            if not gpart or not fpart or not fo:
                continue
            opens = {}
            for a, ca in fpart.items():
                for b, cb in fo.items():
                    for t, ct in shuffle_product(a, b, odeg).items():
                        add_term(opens, t, ca * cb * ct)
            for gw, cg in gpart.items():
                s, gcan = _canon_fast(gw, dst.cpar)
                if not s:
                    continue
                for t, ct in opens.items():
                    op = Dp.n.get((m, len(t)))
                    if op is None:
                        continue
                    for z, c2 in op.table.get((gcan, t), {}).items():
                        add_term(res, ("open", z), -weight * s * cg * ct * c2)
    return res


def check_linear_ocha_morphism(phi, D, Dp, max_weight):
    """Check that ``phi`` is a linear OCHA-morphism ``D -> Dp``.

    Route ``coalgebra``: lift ``phi`` to a coalgebra map and test
    ``f o D = D' o f`` on mixed words.  Route ``multilinear``: the
    componentwise equations with the ``1/m!`` weights.
    """
    phi.check_degrees(D.pair, Dp.pair)
    f = coalgebra_morphism(phi, D.pair, Dp.pair)
    Dc, Dpc = D.coderivation(), Dp.coderivation()
    words = D.pair.words(max_weight)
    routes = {}
    res = None
    for w in words:
        lhs = _apply_map(f, Dc.on_word(w))
        rhs = apply(Dpc, f(w))
        diff = dict(lhs)
        for k, c in rhs.items():
            add_term(diff, k, -c)
        if diff:
            res = Verdict(False, w, diff, "commute")
            break
    routes["coalgebra"] = res if res is not None else Verdict(True)
    res = None
    for w in words:
        val = _morphism_equations(phi, D, Dp, w)
        if val:
            res = Verdict(False, w, val, "components")
            break
    routes["multilinear"] = res if res is not None else Verdict(True)
    return _combine(routes, "coalgebra")
