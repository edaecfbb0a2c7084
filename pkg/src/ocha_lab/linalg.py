"""Exact sparse row reduction over Q.

Rows are dicts ``{column: Fraction}``.  Column priority is given by a key
function (smallest key = highest priority = pivot).  Each stored row keeps
its pivot coefficient normalised to 1 and may carry a *tag*: a linear
combination of user labels recording which input rows produced it, so that
solutions and certificates can be read back.
"""

from fractions import Fraction
import heapq

__all__ = ["Echelon", "rank", "solve_combination", "NotInSpanError"]


class NotInSpanError(ValueError):
    """Raised when a vector is not in the span of the given rows."""

    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = residual


class Echelon:
    """Incrementally built row echelon form.

    Rows are only reduced against earlier rows at insertion time (not fully
    reduced), which keeps insertion cheap; :meth:`reduce` handles the
    triangular back-substitution.
    """

    def __init__(self, key=None, track=False):
        self.key = key if key is not None else (lambda c: c)
        self.rows = {}  # pivot column -> row
        self.tags = {} if track else None

    def __len__(self):
        return len(self.rows)

    @property
    def pivots(self):
        return set(self.rows)

    def reduce(self, vec, tag=None):
        """Return ``(remainder, tag)`` of ``vec`` modulo the stored rows.

        The remainder has no entry on any pivot column.  If tracking is on,
        the returned tag satisfies ``vec - remainder = tag . inputs``.
        """
        key = self.key
        vec = dict(vec)
        track = self.tags is not None
        tag = dict(tag) if tag else {}
        heap = [(key(c), c) for c in vec if c in self.rows]
        heapq.heapify(heap)
        seen = set()
        while heap:
            _, c = heapq.heappop(heap)
            if c in seen:
                continue
            seen.add(c)
            f = vec.get(c)
            if not f:
                continue
            row = self.rows[c]
            for col, x in row.items():
                y = vec.get(col, 0) - f * x
                if y:
                    if col not in vec and col in self.rows and col not in seen:
                        heapq.heappush(heap, (key(col), col))
                    vec[col] = y
                else:
                    vec.pop(col, None)
            if track:
                for lab, x in self.tags[c].items():
                    y = tag.get(lab, 0) + f * x
                    if y:
                        tag[lab] = y
                    else:
                        tag.pop(lab, None)
        return vec, tag

    def add(self, vec, label=None):
        """Insert a row; returns its new pivot column or ``None`` if the row
        was dependent on the stored ones."""
        track = self.tags is not None
        rem, tag = self.reduce(vec)
        if not rem:
            return None
        # rem = vec - tag.inputs  =>  rem = label_row - tag.inputs
        piv = min(rem, key=self.key)
        inv = 1 / Fraction(rem[piv])
        row = {c: x * inv for c, x in rem.items()}
        self.rows[piv] = row
        if track:
            t = {lab: -x * inv for lab, x in tag.items()}
            if label is not None:
                t[label] = t.get(label, 0) + inv
            self.tags[piv] = {k: v for k, v in t.items() if v}
        return piv

    def contains(self, vec):
        rem, _ = self.reduce(vec)
        return not rem

    def express(self, vec):
        """Coefficients ``{label: c}`` with ``vec = sum c * row(label)``."""
        if self.tags is None:
            raise ValueError("Echelon was built without tracking")
        rem, tag = self.reduce(vec)
        if rem:
            raise NotInSpanError("vector not in span", rem)
        return tag


def rank(rows, key=None):
    ech = Echelon(key=key)
    for r in rows:
        ech.add(r)
    return len(ech)


def solve_combination(columns, target, key=None):
    """Solve ``sum_j x_j * columns[j] = target`` exactly.

    ``columns`` maps labels to sparse vectors.  Returns ``{label: x}``.
    Raises :class:`NotInSpanError` carrying the residual when no solution
    exists.  When columns are dependent an arbitrary solution is returned.
    """
    ech = Echelon(key=key, track=True)
    for lab, col in columns.items():
        ech.add(col, label=lab)
    return ech.express(target)
