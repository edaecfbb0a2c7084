"""Coproducts, shuffles, symmetrization and the embedding Xi.

``Xi : Lambda^c H_c (x) T^c H_o -> T^c(H_c (+) H_o)`` sends
``(c_1 ^ ... ^ c_p) (x) (o_1 ... o_q)`` to ``Sh(chi(c_1 ^ ... ^ c_p) | o_1 ... o_q)``.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations

from .errors import ArgumentError
from .linalg import Echelon, NotInSpanError
from .signs import reorder_sign, unshuffles
from .spaces import GradedSpace, add_term, direct_sum, mixed_words

__all__ = [
    "Pair",
    "NotInImageError",
    "deconcatenate",
    "mixed_coproduct",
    "shuffle_product",
    "symmetrize_chi",
    "xi",
    "xi_vector",
    "xi_left_inverse",
    "xi_component_rank",
]


class NotInImageError(NotInSpanError):
    """The vector is not of the form ``Xi(x)``."""


@dataclass(frozen=True)
class Pair:
    """A closed space, an open space and where they sit in a direct sum.

    ``cmap[i]`` / ``omap[j]`` are the indices of closed generator ``i`` and
    open generator ``j`` inside ``total``.  By default ``total`` is
    ``closed (+) open`` in that order.
    """

    closed: GradedSpace
    open: GradedSpace
    total: GradedSpace = None
    cmap: tuple = None
    omap: tuple = None
    cpar: tuple = field(init=False, compare=False, repr=False)
    opar: tuple = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if self.total is None:
            object.__setattr__(self, "total", direct_sum(self.closed, self.open))
        if self.cmap is None:
            object.__setattr__(self, "cmap", tuple(range(self.closed.dim)))
        if self.omap is None:
            offset = self.closed.dim
            object.__setattr__(
                self, "omap", tuple(offset + j for j in range(self.open.dim)))
        object.__setattr__(self, "cmap", tuple(self.cmap))
        object.__setattr__(self, "omap", tuple(self.omap))
        for i, t in enumerate(self.cmap):
            if self.total.degrees[t] != self.closed.degrees[i]:
                raise ArgumentError("closed embedding does not preserve degree")
        for j, t in enumerate(self.omap):
            if self.total.degrees[t] != self.open.degrees[j]:
                raise ArgumentError("open embedding does not preserve degree")
        object.__setattr__(self, "cpar", self.closed.parities())
        object.__setattr__(self, "opar", self.open.parities())

    def words(self, max_weight, min_weight=1):
        return mixed_words(self.closed, self.open, max_weight, min_weight)

    def degree(self, word):
        u, v = word
        return (sum(self.closed.degrees[i] for i in u)
                + sum(self.open.degrees[j] for j in v))


def deconcatenate(word, reduced=False):
    """All splittings ``word = left | right`` with coefficient 1."""
    word = tuple(word)
    n = len(word)
    cuts = range(1, n) if reduced else range(0, n + 1)
    return {(word[:k], word[k:]): 1 for k in cuts}


def mixed_coproduct(word, pair):
    """Coproduct of ``Lambda^c H_c (x) T^c H_o`` on a canonical mixed word.

    Keys are ``(left_word, right_word)``; the sign is the Koszul sign of the
    unshuffle on the wedge part times ``(-1)^{|right wedge| |left tensor|}``.
    """
    u, v = word
    m, n = len(u), len(v)
    cpar, opar = pair.cpar, pair.opar
    upar = [cpar[i] for i in u]
    vprefix = [0]
    for j in v:
        vprefix.append(vprefix[-1] ^ opar[j])
    out = {}
    for p in range(m + 1):
        for sigma in unshuffles(p, m - p):
            order = [s - 1 for s in sigma]
            sign = reorder_sign(order, upar)
            left = tuple(u[a] for a in order[:p])
            right = tuple(u[a] for a in order[p:])
            rpar = 0
            for a in order[p:]:
                rpar ^= upar[a]
            for q in range(n + 1):
                s = -sign if (rpar & vprefix[q]) else sign
                add_term(out, ((left, v[:q]), (right, v[q:])), s)
    return out


def shuffle_product(a, b, degrees):
    """``Sh(a | b)``: signed sum of all order-preserving interleavings."""
    a, b = tuple(a), tuple(b)
    i, j = len(a), len(b)
    apar = [degrees[x] & 1 for x in a]
    bpar = [degrees[x] & 1 for x in b]
    out = {}
    for apos in combinations(range(i + j), i):
        word = []
        sign = 0
        ai = bi = 0
        bsum = 0
        aset = set(apos)
        for pos in range(i + j):
            if pos in aset:
                word.append(a[ai])
                sign ^= apar[ai] & bsum
                ai += 1
            else:
                word.append(b[bi])
                bsum ^= bpar[bi]
                bi += 1
        add_term(out, tuple(word), -1 if sign else 1)
    return out


def shuffle_vectors(x, y, degrees):
    """Bilinear extension of :func:`shuffle_product` to linear combinations."""
    out = {}
    for wa, ca in x.items():
        for wb, cb in y.items():
            for w, c in shuffle_product(wa, wb, degrees).items():
                add_term(out, w, ca * cb * c)
    return out


def symmetrize_chi(wedge, degrees):
    """``chi(c_1 ^ ... ^ c_n) = sum_sigma eps(sigma) c_sigma(1) ... c_sigma(n)``."""
    wedge = tuple(wedge)
    par = [degrees[x] & 1 for x in wedge]
    out = {}
    for order in permutations(range(len(wedge))):
        add_term(out, tuple(wedge[a] for a in order), reorder_sign(order, par))
    return out


@lru_cache(maxsize=200000)
def xi(word, pair):
    """``Xi(word)`` as a dict of tensor words over ``pair.total``."""
    u, v = word
    deg = pair.total.degrees
    cu = tuple(pair.cmap[i] for i in u)
    ov = tuple(pair.omap[j] for j in v)
    out = {}
    for w, c in symmetrize_chi(cu, deg).items():
        for w2, c2 in shuffle_product(w, ov, deg).items():
            add_term(out, w2, c * c2)
    return out


def xi_vector(vec, pair):
    out = {}
    for w, c in vec.items():
        for w2, c2 in xi(w, pair).items():
            add_term(out, w2, c * c2)
    return out


@lru_cache(maxsize=None)
def _xi_component(pair, n):
    ech = Echelon(track=True)
    for w in pair.words(n, n):
        ech.add(xi(w, pair), label=w)
    return ech


def xi_component_rank(pair, n):
    """Rank of Xi on mixed words of weight ``n`` (equals their number when
    Xi is injective there)."""
    return len(_xi_component(pair, n))


def xi_left_inverse(n, vec, pair):
    """The unique mixed-word preimage of ``vec`` (tensor words of length n).

    Raises :class:`NotInImageError` with the residual when ``vec`` is not in
    the image of Xi.
    """
    for w in vec:
        if len(w) != n:
            raise ArgumentError(f"word {w!r} does not have length {n}")
    ech = _xi_component(pair, n)
    rem, tag = ech.reduce(vec)
    if rem:
        raise NotInImageError("vector is not in the image of Xi", rem)
    return tag
