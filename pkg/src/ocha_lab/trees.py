"""The free A-infinity algebra on a graded space, truncated by weight.

A tree is either a leaf (an ``int``, a generator index) or a tuple of at
least two subtrees (an internal vertex).  Weight is the number of leaves and
degree is the sum of leaf degrees plus one per internal vertex.  ``mu_k`` for
``k >= 2`` grafts ``k`` trees under a new root; ``mu_1`` is forced by the
A-infinity identity of the grafted word::

    mu_1(mu_n(t_1..t_n)) = - sum_{(i,j) != (0,n)} (-1)^{|t_1..t_i|}
                              mu_{n-j+1}(t_1..t_i, mu_j(t_{i+1}..t_{i+j}), ..)

with ``mu_1`` on a leaf given by the ambient differential.
"""

from functools import lru_cache
from itertools import product

from .coderivations import ComponentMap
from .errors import ArgumentError
from .spaces import GradedSpace, add_term
from .structures import AInfinityStructure

__all__ = [
    "tree_weight",
    "tree_degree",
    "tree_vertices",
    "tree_leaves",
    "tree_name",
    "trees_of_weight",
    "compositions",
    "FreeAInfinity",
    "free_ainfinity",
]


def tree_weight(t):
    if isinstance(t, int):
        return 1
    return sum(tree_weight(s) for s in t)


def tree_vertices(t):
    if isinstance(t, int):
        return 0
    return 1 + sum(tree_vertices(s) for s in t)


def tree_leaves(t):
    if isinstance(t, int):
        return (t,)
    out = ()
    for s in t:
        out += tree_leaves(s)
    return out


def tree_degree(t, degrees):
    if isinstance(t, int):
        return degrees[t]
    return 1 + sum(tree_degree(s, degrees) for s in t)


def tree_name(t, names):
    if isinstance(t, int):
        return names[t]
    return f"m{len(t)}(" + ",".join(tree_name(s, names) for s in t) + ")"


@lru_cache(maxsize=None)
def compositions(n, k):
    """Ordered ``k``-tuples of positive integers summing to ``n``."""
    if k == 1:
        return ((n,),) if n >= 1 else ()
    out = []
    for first in range(1, n - k + 2):
        for rest in compositions(n - first, k - 1):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def trees_of_weight(dim, w):
    """All trees with ``w`` leaves over ``dim`` generators, in a fixed order."""
    if w == 1:
        return tuple(range(dim))
    out = []
    for k in range(2, w + 1):
        for parts in compositions(w, k):
            for kids in product(*(trees_of_weight(dim, p) for p in parts)):
                out.append(tuple(kids))
    return tuple(out)


class FreeAInfinity:
    """``F(V)`` truncated at ``max_weight``.

    ``differential`` maps generator index to ``{generator index: coeff}``
    (degree +1, square zero).  Vectors are dicts ``{tree: coeff}``.
    """

    def __init__(self, space, max_weight, differential=None):
        if max_weight < 1:
            raise ArgumentError("max_weight must be at least 1")
        self.space = space
        self.max_weight = max_weight
        self.degrees = space.degrees
        self.differential = {i: dict(v) for i, v in (differential or {}).items() if v}
        for i, v in self.differential.items():
            for j in v:
                if self.degrees[j] != self.degrees[i] + 1:
                    raise ArgumentError("ambient differential must have degree +1")
        self._mu1 = {}
        self._deg = {}
        self._ids = None

    # -- bookkeeping
    def degree(self, t):
        d = self._deg.get(t)
        if d is None:
            d = tree_degree(t, self.degrees)
            self._deg[t] = d
        return d

    def basis(self, w=None):
        if w is not None:
            return trees_of_weight(self.space.dim, w)
        out = []
        for k in range(1, self.max_weight + 1):
            out.extend(trees_of_weight(self.space.dim, k))
        return out

    def ids(self):
        """Column ids ordered by weight descending (heaviest trees first)."""
        if self._ids is None:
            ids = {}
            for w in range(self.max_weight, 0, -1):
                for t in trees_of_weight(self.space.dim, w):
                    ids[t] = len(ids)
            self._ids = ids
        return self._ids

    def name(self, t):
        return tree_name(t, self.space.names)

    # -- operations
    def graft(self, args):
        """``mu_k`` on trees (``k >= 2``); no truncation is applied."""
        if len(args) < 2:
            raise ArgumentError("grafting needs at least two trees")
        return tuple(args)

    def mu(self, args):
        """``mu_k`` on a tuple of vectors; returns a vector."""
        if len(args) == 1:
            return self.mu1_vector(args[0])
        terms = {(): 1}
        for a in args:
            nxt = {}
            for pre, c in terms.items():
                for t, c2 in a.items():
                    add_term(nxt, pre + (t,), c * c2)
            terms = nxt
        return {tuple(k): c for k, c in terms.items()}

    def mu1_vector(self, vec):
        out = {}
        for t, c in vec.items():
            for t2, c2 in self.mu1(t).items():
                add_term(out, t2, c * c2)
        return out

    def mu1(self, t):
        hit = self._mu1.get(t)
        if hit is not None:
            return hit
        out = {}
        if isinstance(t, int):
            for j, c in self.differential.get(t, {}).items():
                add_term(out, j, c)
        else:
            n = len(t)
            prefix = [0]
            for s in t:
                prefix.append(prefix[-1] ^ (self.degree(s) & 1))
            for i in range(n):
                sign = 1 if prefix[i] else -1
                for s2, c in self.mu1(t[i]).items():
                    add_term(out, t[:i] + (s2,) + t[i + 1:], sign * c)
                for j in range(2, n - i + 1):
                    if i == 0 and j == n:
                        continue
                    add_term(out, t[:i] + (t[i:i + j],) + t[i + j:], sign)
        self._mu1[t] = out
        return out

    # -- as a finite structure
    def to_structure(self):
        """The truncation as an :class:`AInfinityStructure` on the tree basis,
        with the leaf count as generator weight; returns ``(M, weights)``."""
        basis = self.basis()
        pos = {t: i for i, t in enumerate(basis)}
        space = GradedSpace(f"F({self.space.name})", [self.name(t) for t in basis],
                            [self.degree(t) for t in basis])
        weights = [tree_weight(t) for t in basis]
        W = self.max_weight
        ops = {1: {}}
        for t in basis:
            v = self.mu1(t)
            if v:
                ops[1][(pos[t],)] = {pos[s]: c for s, c in v.items()}
        for k in range(2, W + 1):
            table = {}
            for w in range(k, W + 1):
                for parts in compositions(w, k):
                    for kids in product(*(trees_of_weight(self.space.dim, p) for p in parts)):
                        table[tuple(pos[s] for s in kids)] = {pos[tuple(kids)]: 1}
            ops[k] = table
        M = AInfinityStructure(space, {k: ComponentMap("tensor", k, 1, t)
                                       for k, t in ops.items()})
        return M, weights


def free_ainfinity(space, max_weight, differential=None):
    """Convenience constructor for :class:`FreeAInfinity`."""
    return FreeAInfinity(space, max_weight, differential)
