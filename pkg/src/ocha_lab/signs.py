"""Permutations, (un)shuffles and Koszul signs.

A permutation is a tuple of 1-based images ``(s(1), ..., s(n))``.  It acts on
a graded word by ``x_1 ... x_n -> sign * x_{s(1)} ... x_{s(n)}``, so the new
word holds at position ``a`` the old entry number ``s(a)``.  Applying ``s``
first and then ``t`` therefore gives the word indexed by ``compose(s, t)``.

Only parities of degrees matter for signs; degrees may be any integers.
"""

from functools import lru_cache
from itertools import combinations, permutations
from math import comb

from .errors import ArgumentError

__all__ = [
    "identity",
    "compose",
    "inverse",
    "is_permutation",
    "perm_sign",
    "koszul_sign",
    "chi_sign",
    "reorder_sign",
    "unshuffles",
    "shuffles",
    "all_permutations",
]


def identity(n):
    return tuple(range(1, n + 1))


def is_permutation(images):
    n = len(images)
    return sorted(images) == list(range(1, n + 1))


def _check(perm):
    if not is_permutation(perm):
        raise ArgumentError(f"not a permutation: {perm!r}")


def compose(s, t):
    """The permutation ``a -> s(t(a))`` (act by ``s`` first, then ``t``)."""
    if len(s) != len(t):
        raise ArgumentError("permutations of different sizes")
    return tuple(s[t[a] - 1] for a in range(len(t)))


def inverse(s):
    out = [0] * len(s)
    for a, image in enumerate(s, start=1):
        out[image - 1] = a
    return tuple(out)


@lru_cache(maxsize=None)
def _inversion_parity(perm, parities):
    # Bubble sort by adjacent transpositions; each swap of entries i, j
    # contributes parity(i)*parity(j) to the Koszul exponent and 1 to the
    # plain sign exponent.
    word = list(perm)
    koszul = 0
    plain = 0
    n = len(word)
    for end in range(n - 1, 0, -1):
        for a in range(end):
            if word[a] > word[a + 1]:
                koszul ^= parities[word[a] - 1] & parities[word[a + 1] - 1]
                plain ^= 1
                word[a], word[a + 1] = word[a + 1], word[a]
    return koszul, plain


def perm_sign(perm):
    """Plain sign ``(-1)^perm`` of a permutation."""
    perm = tuple(perm)
    _check(perm)
    return -1 if _inversion_parity(perm, (0,) * len(perm))[1] else 1


def koszul_sign(perm, degrees):
    """Koszul sign of ``perm`` acting on a word whose entries have ``degrees``.

    ``degrees[i]`` is the degree of the entry originally at position ``i+1``.
    """
    perm = tuple(perm)
    if len(perm) != len(degrees):
        raise ArgumentError(
            f"permutation of size {len(perm)} but {len(degrees)} degrees")
    _check(perm)
    parities = tuple(d & 1 for d in degrees)
    return -1 if _inversion_parity(perm, parities)[0] else 1


def chi_sign(perm, degrees):
    """``(-1)^chi(perm) = (-1)^perm * koszul_sign(perm, degrees)``."""
    return perm_sign(perm) * koszul_sign(perm, degrees)


def reorder_sign(order, parities):
    """Koszul sign of listing entries in ``order`` (0-based positions).

    Fast internal variant of :func:`koszul_sign`: ``parities`` is indexed by
    original position and holds 0/1; no validation is done.
    """
    sign = 0
    n = len(order)
    for a in range(n):
        pa = parities[order[a]]
        if not pa:
            continue
        oa = order[a]
        for b in range(a + 1, n):
            if order[b] < oa:
                sign ^= parities[order[b]]
    return -1 if sign else 1


@lru_cache(maxsize=None)
def _unshuffles(k, l):
    n = k + l
    out = []
    for first in combinations(range(1, n + 1), k):
        chosen = set(first)
        rest = tuple(i for i in range(1, n + 1) if i not in chosen)
        out.append(first + rest)
    return tuple(out)


def unshuffles(k, l):
    """All (k,l)-unshuffles: permutations increasing on ``1..k`` and on
    ``k+1..k+l``.  There are ``binomial(k+l, k)`` of them."""
    if k < 0 or l < 0:
        raise ArgumentError("block sizes must be non-negative")
    out = list(_unshuffles(k, l))
    assert len(out) == comb(k + l, k)
    return out


def shuffles(i, j):
    """All (i,j)-shuffles: permutations whose inverse is increasing on the
    blocks ``1..i`` and ``i+1..i+j``; these index the interleavings."""
    return [inverse(s) for s in unshuffles(i, j)]


def all_permutations(n):
    return [tuple(p) for p in permutations(range(1, n + 1))]
