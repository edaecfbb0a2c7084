"""Lifting multilinear maps to coderivations, and the coderivation calculus.

Two carriers are supported:

* a :class:`~ocha_lab.spaces.GradedSpace` ``E`` stands for the tensor
  coalgebra ``T^c E`` (words are tuples of indices);
* a :class:`~ocha_lab.coalgebra.Pair` stands for ``Lambda^c H_c (x) T^c H_o``
  (words are ``(wedge, tensor)`` with canonical wedge).

Sign conventions (all validated by :func:`is_coderivation`):

* tensor lift:  ``f`` of degree ``d`` acting after the prefix ``v_1..v_i``
  picks up ``(-1)^{d |v_1..v_i|}``;
* open lift:    ``U = U' ^ U''`` (unshuffle, Koszul sign ``eps``), ``f``
  eats ``U''`` and ``v_{j+1}..v_{j+q}``; sign
  ``eps + d(|U'| + |v_1..v_j|) + |U''| |v_1..v_j|``;
* closed lift:  ``g`` eats the front block ``U''`` of an unshuffle and is
  wedged back in front of ``U'``; sign ``eps``;
* general closed lift (``q >= 1``): additionally the block
  ``v_{i+1}..v_{i+q}`` is pulled to the front, sign
  ``(|U'| + |v_1..v_i|)|v_{i+1}..v_{i+q}|``.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .coalgebra import Pair, deconcatenate, mixed_coproduct
from .errors import ArgumentError, PreconditionError
from .signs import reorder_sign, unshuffles
from .spaces import GradedSpace, _canon_fast, add_term, tensor_words

__all__ = [
    "ComponentMap",
    "Coderivation",
    "MapTable",
    "CoderivationVerdict",
    "lift_tensor",
    "lift_open",
    "lift_closed",
    "lift_closed_general",
    "apply",
    "compose",
    "bracket",
    "is_coderivation",
    "decompose",
    "carrier_words",
    "carrier_degree",
    "tabulate",
]


@dataclass
class ComponentMap:
    """Sparse structure constants of one multilinear component.

    ``kind`` is ``"tensor"`` (``E^{(x)k} -> E``, arity ``k``), ``"closed"``
    (``H_c^{^p} (x) H_o^{(x)q} -> H_c``) or ``"open"`` (same inputs, into
    ``H_o``); mixed kinds have arity ``(p, q)``.  ``table`` maps input words
    (tuples, or ``(wedge, tensor)`` for mixed kinds) to ``{index: coeff}``.
    """

    kind: str
    arity: object
    degree: int
    table: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ("tensor", "closed", "open"):
            raise ArgumentError(f"unknown component kind {self.kind!r}")
        if self.kind == "tensor":
            if not isinstance(self.arity, int) or self.arity < 1:
                raise ArgumentError(f"bad tensor arity {self.arity!r}")
        else:
            p, q = self.arity
            if p < 0 or q < 0 or p + q < 1:
                raise ArgumentError(f"bad mixed arity {self.arity!r}")
            self.arity = (p, q)
        self.table = {k: {i: Fraction(c) for i, c in v.items() if c}
                      for k, v in self.table.items()}
        self.table = {k: v for k, v in self.table.items() if v}

    def __call__(self, key):
        return self.table.get(key, {})

    def is_zero(self):
        return not self.table

    def scaled(self, c):
        return ComponentMap(self.kind, self.arity, self.degree,
                            {k: {i: c * x for i, x in v.items()}
                             for k, v in self.table.items()})

    def validate(self, carrier):
        """Check key shapes, index ranges and the degree shift."""
        if self.kind == "tensor":
            if not isinstance(carrier, GradedSpace):
                raise ArgumentError("tensor component on a mixed carrier")
            deg = carrier.degrees
            for key, out in self.table.items():
                if len(key) != self.arity or any(
                        not 0 <= i < len(deg) for i in key):
                    raise ArgumentError(f"bad input word {key!r}")
                target = sum(deg[i] for i in key) + self.degree
                for i in out:
                    if not 0 <= i < len(deg):
                        raise ArgumentError(f"bad output index {i!r}")
                    if deg[i] != target:
                        raise ArgumentError(
                            f"m_{self.arity}{key!r} -> {i} violates degree "
                            f"shift {self.degree}")
            return
        if not isinstance(carrier, Pair):
            raise ArgumentError("mixed component on a tensor carrier")
        cdeg, odeg = carrier.closed.degrees, carrier.open.degrees
        outdeg = cdeg if self.kind == "closed" else odeg
        p, q = self.arity
        for key, out in self.table.items():
            u, v = key
            if len(u) != p or len(v) != q:
                raise ArgumentError(f"input {key!r} does not have arity {self.arity}")
            if any(not 0 <= i < len(cdeg) for i in u) or any(
                    not 0 <= j < len(odeg) for j in v):
                raise ArgumentError(f"bad input word {key!r}")
            canon = _canon_fast(u, carrier.cpar)
            if canon[1] != tuple(u) or canon[0] != 1:
                raise ArgumentError(f"wedge input {u!r} is not canonical")
            target = sum(cdeg[i] for i in u) + sum(odeg[j] for j in v) + self.degree
            for i in out:
                if not 0 <= i < len(outdeg):
                    raise ArgumentError(f"bad output index {i!r}")
                if outdeg[i] != target:
                    raise ArgumentError(
                        f"{self.kind} component {self.arity} on {key!r} -> {i} "
                        f"violates degree shift {self.degree}")


def _carrier_kind(carrier):
    if isinstance(carrier, GradedSpace):
        return "tensor"
    if isinstance(carrier, Pair):
        return "mixed"
    raise ArgumentError(f"unknown carrier {carrier!r}")


def carrier_words(carrier, max_weight, min_weight=1):
    if _carrier_kind(carrier) == "tensor":
        out = []
        for n in range(min_weight, max_weight + 1):
            out.extend(tensor_words(carrier, n))
        return out
    return carrier.words(max_weight, min_weight)


def carrier_degree(carrier, word):
    if _carrier_kind(carrier) == "tensor":
        return sum(carrier.degrees[i] for i in word)
    return carrier.degree(word)


def _weight(word):
    if word and isinstance(word[0], tuple):
        return len(word[0]) + len(word[1])
    return len(word)


def _coproduct(carrier, word):
    if _carrier_kind(carrier) == "tensor":
        return deconcatenate(word)
    return mixed_coproduct(word, carrier)


class Coderivation:
    """Sum of lifted components on a carrier.

    With ``general=True`` closed components are lifted by the general formula
    that also consumes open entries; such a map need not be a coderivation.
    """

    def __init__(self, carrier, components=(), general=False):
        self.carrier = carrier
        self.kind = _carrier_kind(carrier)
        self.components = [c for c in components if not c.is_zero()]
        self.general = general
        degrees = {c.degree for c in self.components}
        if len(degrees) > 1:
            raise ArgumentError(f"components of mixed degrees {sorted(degrees)}")
        self.degree = degrees.pop() if degrees else 0
        for c in self.components:
            if self.kind == "tensor" and c.kind != "tensor":
                raise ArgumentError("mixed component on the tensor coalgebra")
            if self.kind == "mixed" and c.kind == "tensor":
                raise ArgumentError("tensor component on the mixed coalgebra")
            if c.kind == "closed" and c.arity[1] and not general:
                raise ArgumentError(
                    "closed component with open inputs: use lift_closed_general")
        self._memo = {}

    def with_degree(self, degree):
        self.degree = degree
        return self

    def __add__(self, other):
        if other.carrier != self.carrier:
            raise ArgumentError("carrier mismatch")
        out = Coderivation(self.carrier, self.components + other.components,
                           general=self.general or other.general)
        return out

    def on_word(self, word):
        hit = self._memo.get(word)
        if hit is not None:
            return hit
        out = {}
        if self.kind == "tensor":
            for comp in self.components:
                _lift_tensor_word(comp, word, self.carrier, out)
        else:
            for comp in self.components:
                if comp.kind == "open":
                    _lift_open_word(comp, word, self.carrier, out)
                elif self.general:
                    _lift_general_closed_word(comp, word, self.carrier, out)
                else:
                    _lift_closed_word(comp, word, self.carrier, out)
        self._memo[word] = out
        return out

    def __call__(self, vec):
        return apply(self, vec)


def _lift_tensor_word(comp, word, space, out):
    k = comp.arity
    n = len(word)
    if n < k:
        return
    deg = space.degrees
    odd = comp.degree & 1
    prefix = 0
    for i in range(n - k + 1):
        val = comp.table.get(word[i:i + k])
        if val:
            sign = -1 if (odd and prefix) else 1
            head, tail = word[:i], word[i + k:]
            for x, c in val.items():
                add_term(out, head + (x,) + tail, sign * c)
        prefix ^= deg[word[i]] & 1


def _lift_open_word(comp, word, pair, out):
    p, q = comp.arity
    u, v = word
    r, s = len(u), len(v)
    if r < p or s < q:
        return
    cpar, opar = pair.cpar, pair.opar
    upar = [cpar[i] for i in u]
    vpre = [0]
    for j in v:
        vpre.append(vpre[-1] ^ opar[j])
    odd = comp.degree & 1
    table = comp.table
    for sigma in unshuffles(r - p, p):
        order = [a - 1 for a in sigma]
        eps = reorder_sign(order, upar)
        rest = tuple(u[a] for a in order[:r - p])
        fed = tuple(u[a] for a in order[r - p:])
        rest_par = 0
        for a in order[:r - p]:
            rest_par ^= upar[a]
        fed_par = 0
        for a in order[r - p:]:
            fed_par ^= upar[a]
        for j in range(s - q + 1):
            val = table.get((fed, v[j:j + q]))
            if not val:
                continue
            e = (odd & (rest_par ^ vpre[j])) ^ (fed_par & vpre[j])
            sign = -eps if e else eps
            head, tail = v[:j], v[j + q:]
            for x, c in val.items():
                add_term(out, (rest, head + (x,) + tail), sign * c)


def _wedge_front(x, rest, cpar):
    return _canon_fast((x,) + rest, cpar)


def _lift_closed_word(comp, word, pair, out):
    p, _ = comp.arity
    u, v = word
    n = len(u)
    if n < p:
        return
    cpar = pair.cpar
    upar = [cpar[i] for i in u]
    table = comp.table
    for sigma in unshuffles(p, n - p):
        order = [a - 1 for a in sigma]
        fed = tuple(u[a] for a in order[:p])
        val = table.get((fed, ()))
        if not val:
            continue
        eps = reorder_sign(order, upar)
        rest = tuple(u[a] for a in order[p:])
        for x, c in val.items():
            s, w = _wedge_front(x, rest, cpar)
            if s:
                add_term(out, (w, v), eps * s * c)


def _lift_general_closed_word(comp, word, pair, out):
    p, q = comp.arity
    u, v = word
    n, m = len(u), len(v)
    if n < p or m < q:
        return
    cpar, opar = pair.cpar, pair.opar
    upar = [cpar[i] for i in u]
    vpre = [0]
    for j in v:
        vpre.append(vpre[-1] ^ opar[j])
    table = comp.table
    positions = range(m - q + 1) if q else (0,)
    for sigma in unshuffles(p, n - p):
        order = [a - 1 for a in sigma]
        fed = tuple(u[a] for a in order[:p])
        eps = reorder_sign(order, upar)
        rest = tuple(u[a] for a in order[p:])
        rest_par = 0
        for a in order[p:]:
            rest_par ^= upar[a]
        for i in positions:
            val = table.get((fed, v[i:i + q]))
            if not val:
                continue
            block_par = vpre[i + q] ^ vpre[i]
            e = (rest_par ^ vpre[i]) & block_par
            sign = -eps if e else eps
            left = v[:i] + v[i + q:]
            for x, c in val.items():
                s, w = _wedge_front(x, rest, cpar)
                if s:
                    add_term(out, (w, left), sign * s * c)


def _single(carrier, comp, general=False):
    comp.validate(carrier)
    return Coderivation(carrier, [comp], general=general).with_degree(comp.degree)


def lift_tensor(f, space):
    """Coderivation of ``T^c E`` extending ``f : E^{(x)k} -> E``."""
    if f.kind != "tensor":
        raise ArgumentError("lift_tensor needs a tensor-kind component")
    return _single(space, f)


def lift_open(f, pair):
    """Coderivation of ``Lambda^c H_c (x) T^c H_o`` extending ``f_{p,q}``."""
    if f.kind != "open":
        raise ArgumentError("lift_open needs an open-kind component")
    return _single(pair, f)


def lift_closed(g, pair):
    """Coderivation extending ``g_{p,0} : H_c^{^p} -> H_c`` (identity on
    the tensor factor)."""
    if g.kind != "closed":
        raise ArgumentError("lift_closed needs a closed-kind component")
    if g.arity[1] != 0:
        raise ArgumentError("lift_closed needs q = 0; use lift_closed_general")
    return _single(pair, g)


def lift_closed_general(g, pair):
    """The general closed lift of ``g_{p,q}``; a coderivation only if q = 0."""
    if g.kind != "closed":
        raise ArgumentError("lift_closed_general needs a closed-kind component")
    return _single(pair, g, general=True)


class MapTable:
    """A linear self-map of a carrier tabulated on all words of weight
    ``<= max_weight``."""

    def __init__(self, carrier, degree, max_weight, table):
        self.carrier = carrier
        self.degree = degree
        self.max_weight = max_weight
        self.table = {w: dict(v) for w, v in table.items()}

    def on_word(self, word):
        if _weight(word) > self.max_weight:
            raise ArgumentError(
                f"word {word!r} beyond tabulated weight {self.max_weight}")
        return self.table.get(word, {})

    def __call__(self, vec):
        return apply(self, vec)

    def __eq__(self, other):
        if not isinstance(other, MapTable):
            return NotImplemented
        keys = set(self.table) | set(other.table)
        return all(self.table.get(k, {}) == other.table.get(k, {}) for k in keys)

    def is_zero(self):
        return not any(self.table.values())


def apply(c, vec):
    """Linear extension of ``c`` to a linear combination of carrier words."""
    out = {}
    for w, coeff in vec.items():
        for w2, c2 in c.on_word(w).items():
            add_term(out, w2, coeff * c2)
    return out


def tabulate(c, max_weight):
    """Tabulate a coderivation (or any word-wise map) up to ``max_weight``."""
    words = carrier_words(c.carrier, max_weight)
    return MapTable(c.carrier, c.degree, max_weight,
                    {w: c.on_word(w) for w in words})


def _same_carrier(a, b):
    if a.carrier != b.carrier:
        raise ArgumentError("maps live on different carriers")


def compose(a, b, max_weight):
    """Tabulate ``a o b`` on all words of weight ``<= max_weight``."""
    _same_carrier(a, b)
    table = {}
    for w in carrier_words(a.carrier, max_weight):
        table[w] = apply(a, b.on_word(w))
    return MapTable(a.carrier, a.degree + b.degree, max_weight, table)


def bracket(a, b, max_weight):
    """Graded commutator ``a o b - (-1)^{|a||b|} b o a``."""
    _same_carrier(a, b)
    ab = compose(a, b, max_weight)
    ba = compose(b, a, max_weight)
    sign = -1 if (a.degree & b.degree & 1) else 1
    table = {}
    for w in ab.table:
        v = dict(ab.table[w])
        for k, c in ba.table[w].items():
            add_term(v, k, -sign * c)
        table[w] = v
    return MapTable(a.carrier, a.degree + b.degree, max_weight, table)


@dataclass
class CoderivationVerdict:
    ok: bool
    witness: object = None
    residual: dict = None
    words_checked: int = 0

    def __bool__(self):
        return self.ok


def _tensor_square(m, coproduct, deg_of):
    # (m (x) 1 + 1 (x) m) applied to a coproduct expansion.
    out = {}
    odd = m.degree & 1
    for (x, y), c in coproduct.items():
        for x2, c2 in m.on_word(x).items() if _weight(x) else ():
            add_term(out, (x2, y), c * c2)
        if _weight(y):
            sign = -1 if (odd and deg_of(x) & 1) else 1
            for y2, c2 in m.on_word(y).items():
                add_term(out, (x, y2), sign * c * c2)
    return out


def _coproduct_vec(carrier, vec):
    out = {}
    for w, c in vec.items():
        for k, c2 in _coproduct(carrier, w).items():
            add_term(out, k, c * c2)
    return out


def is_coderivation(m, max_weight):
    """Check ``(m (x) 1 + 1 (x) m) Delta = Delta m`` and ``eps m = 0`` on every
    basis word of weight ``<= max_weight``; returns the least failing word."""
    carrier = m.carrier
    empty = () if _carrier_kind(carrier) == "tensor" else ((), ())

    def deg_of(word):
        return carrier_degree(carrier, word)

    count = 0
    for w in carrier_words(carrier, max_weight):
        count += 1
        image = m.on_word(w)
        if image.get(empty):
            return CoderivationVerdict(False, w, {(empty, empty): image[empty]}, count)
        lhs = _coproduct_vec(carrier, image)
        rhs = _tensor_square(m, _coproduct(carrier, w), deg_of)
        res = dict(lhs)
        for k, c in rhs.items():
            add_term(res, k, -c)
        if res:
            return CoderivationVerdict(False, w, res, count)
    return CoderivationVerdict(True, words_checked=count)


def decompose(m, max_weight):
    """Read off the components ``p_1 o m`` of a coderivation.

    For the mixed carrier returns ``{("closed"|"open", (p, q)): ComponentMap}``
    (only nonzero ones); for the tensor carrier ``{("tensor", k): ...}``.
    """
    verdict = is_coderivation(m, max_weight)
    if not verdict:
        raise PreconditionError(
            f"map is not a coderivation; witness {verdict.witness!r}")
    carrier = m.carrier
    tables = {}
    if _carrier_kind(carrier) == "tensor":
        for w in carrier_words(carrier, max_weight):
            for w2, c in m.on_word(w).items():
                if len(w2) == 1:
                    tables.setdefault(("tensor", len(w)), {}).setdefault(w, {})[w2[0]] = c
        return {k: ComponentMap("tensor", k[1], m.degree, t) for k, t in tables.items()}
    for w in carrier_words(carrier, max_weight):
        arity = (len(w[0]), len(w[1]))
        for (u2, v2), c in m.on_word(w).items():
            if len(u2) == 1 and not v2:
                tables.setdefault(("closed", arity), {}).setdefault(w, {})[u2[0]] = c
            elif len(v2) == 1 and not u2:
                tables.setdefault(("open", arity), {}).setdefault(w, {})[v2[0]] = c
    out = {k: ComponentMap(k[0], k[1], m.degree, t) for k, t in tables.items()}
    out = {k: v for k, v in out.items() if not v.is_zero()}
    for (kind, (p, q)) in out:
        if kind == "closed" and q:
            raise PreconditionError(
                f"closed component with open inputs at arity {(p, q)}: "
                "no coderivation has such a component")
    return out


def lift_family(family, carrier):
    """Lift a ``decompose``-style family back to a :class:`Coderivation`."""
    comps = list(family.values()) if isinstance(family, dict) else list(family)
    for c in comps:
        c.validate(carrier)
    general = any(c.kind == "closed" and c.arity[1] for c in comps)
    out = Coderivation(carrier, comps, general=general)
    return out
