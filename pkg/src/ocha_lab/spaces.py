"""Graded vector spaces over Q, sparse linear combinations and basis words.

Linear combinations are plain dicts ``{key: Fraction}`` with no zero values.
Keys are basis indices, tensor words (tuples of indices) or mixed words
``(wedge, tensor)`` where ``wedge`` is a canonical (ascending) tuple of
closed indices and ``tensor`` a tuple of open indices.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, product

from .errors import ArgumentError
from .signs import reorder_sign

__all__ = [
    "GradedSpace",
    "direct_sum",
    "canonicalize_wedge",
    "wedge_words",
    "tensor_words",
    "mixed_words",
    "add_to",
    "scaled",
    "lin_add",
    "lin_sub",
    "clean",
    "word_degree",
    "mixed_degree",
]


@dataclass(frozen=True)
class GradedSpace:
    """Finite ordered basis of named generators with integer degrees.

    ``tags`` records, for direct sums, the summand each generator came from.
    """

    name: str
    names: tuple
    degrees: tuple
    tags: tuple = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "degrees", tuple(int(d) for d in self.degrees))
        if len(self.names) != len(self.degrees):
            raise ArgumentError("names and degrees differ in length")
        if len(set(self.names)) != len(self.names):
            raise ArgumentError(f"duplicate generator names in space {self.name!r}")
        if self.tags is not None:
            object.__setattr__(self, "tags", tuple(self.tags))

    @classmethod
    def from_pairs(cls, name, basis):
        basis = list(basis)
        return cls(name, [b[0] for b in basis], [b[1] for b in basis])

    @property
    def dim(self):
        return len(self.names)

    def __len__(self):
        return len(self.names)

    def index(self, generator):
        try:
            return self.names.index(generator)
        except ValueError:
            raise ArgumentError(
                f"no generator {generator!r} in space {self.name!r}") from None

    def degree(self, i):
        return self.degrees[i]

    def parities(self):
        return tuple(d & 1 for d in self.degrees)

    def indices_tagged(self, tag):
        if self.tags is None:
            raise ArgumentError(f"space {self.name!r} carries no summand tags")
        return [i for i, t in enumerate(self.tags) if t == tag]


def direct_sum(first, second, tags=("closed", "open")):
    """Tagged disjoint union ``first (+) second``; ``first`` comes first."""
    if first.name == second.name:
        raise ArgumentError(f"cannot sum two spaces both named {first.name!r}")
    clash = set(first.names) & set(second.names)
    if clash:
        names = [f"{first.name}.{n}" for n in first.names]
        names += [f"{second.name}.{n}" for n in second.names]
    else:
        names = list(first.names) + list(second.names)
    return GradedSpace(
        f"{first.name}+{second.name}",
        names,
        first.degrees + second.degrees,
        tags=(tags[0],) * first.dim + (tags[1],) * second.dim,
    )


def canonicalize_wedge(raw, space):
    """Sort a raw wedge word into ascending index order.

    Returns ``(sign, word)`` with the Koszul sign of the sorting, or ``None``
    when an odd generator repeats (the product is zero).
    """
    raw = tuple(raw)
    n = space.dim
    for i in raw:
        if not 0 <= i < n:
            raise ArgumentError(f"index {i} out of range for space {space.name!r}")
    order = sorted(range(len(raw)), key=lambda a: raw[a])
    word = tuple(raw[a] for a in order)
    degs = space.degrees
    for a in range(1, len(word)):
        if word[a] == word[a - 1] and degs[word[a]] & 1:
            return None
    parities = [degs[i] & 1 for i in raw]
    return reorder_sign(order, parities), word


def _canon_fast(raw, parities):
    # canonicalize_wedge without validation; used in inner loops.
    if len(raw) < 2:
        return 1, tuple(raw)
    order = sorted(range(len(raw)), key=raw.__getitem__)
    word = tuple(raw[a] for a in order)
    for a in range(1, len(word)):
        if word[a] == word[a - 1] and parities[word[a]]:
            return 0, None
    return reorder_sign(order, [parities[i] for i in raw]), word


def wedge_words(space, length):
    """Canonical basis words of the graded-symmetric power of ``space``."""
    par = space.parities()
    out = []
    for w in combinations_with_replacement(range(space.dim), length):
        if any(w[a] == w[a - 1] and par[w[a]] for a in range(1, len(w))):
            continue
        out.append(w)
    return out


def tensor_words(space, length):
    return list(product(range(space.dim), repeat=length))


def mixed_words(closed, open_, max_weight, min_weight=1):
    """All mixed basis words of total weight in ``[min_weight, max_weight]``,
    ordered by weight, then closed length, then lexicographically."""
    out = []
    for w in range(min_weight, max_weight + 1):
        for p in range(w, -1, -1):
            q = w - p
            if p and not closed.dim or q and not open_.dim:
                continue
            for u in wedge_words(closed, p):
                for v in tensor_words(open_, q):
                    out.append((u, v))
    return out


def word_degree(word, degrees):
    return sum(degrees[i] for i in word)


def mixed_degree(word, closed, open_):
    u, v = word
    return sum(closed.degrees[i] for i in u) + sum(open_.degrees[i] for i in v)


def add_to(acc, vec, coeff=1):
    """``acc += coeff * vec`` in place, dropping zeros."""
    if not coeff:
        return acc
    for k, c in vec.items():
        x = acc.get(k, 0) + coeff * c
        if x:
            acc[k] = x
        else:
            acc.pop(k, None)
    return acc


def add_term(acc, key, coeff):
    x = acc.get(key, 0) + coeff
    if x:
        acc[key] = x
    else:
        acc.pop(key, None)


def scaled(vec, coeff):
    if not coeff:
        return {}
    return {k: coeff * c for k, c in vec.items()}


def lin_add(a, b):
    return add_to(dict(a), b)


def lin_sub(a, b):
    return add_to(dict(a), b, -1)


def clean(vec):
    return {k: Fraction(c) for k, c in vec.items() if c}
