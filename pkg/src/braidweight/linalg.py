"""Sparse exact row reduction over the rationals.

Rows are dicts mapping column index to a nonzero coefficient.  The
elimination keeps integer entries (fraction-free updates with gcd
normalization) and converts to ``Fraction`` only in the final reduced
echelon form, where every pivot is 1.  Pivots are always the leftmost
nonzero column, so the reduced form of a given row space is unique and
the quotient (non-pivot) columns are reproducible across runs.
"""

from fractions import Fraction
from math import gcd


def _normalize(row):
    g = 0
    for v in row.values():
        g = gcd(g, v)
    lead = row[min(row)]
    if g > 1:
        row = {c: v // g for c, v in row.items()}
        lead //= g
    if lead < 0:
        row = {c: -v for c, v in row.items()}
    return row


def echelon(rows):
    """Forward-eliminate integer rows; returns {pivot column: row}."""
    pivots = {}
    for row in rows:
        row = {c: v for c, v in row.items() if v}
        while row:
            lead = min(row)
            piv = pivots.get(lead)
            if piv is None:
                pivots[lead] = _normalize(row)
                break
            rl, pl = row[lead], piv[lead]
            g = gcd(rl, pl)
            a, b = pl // g, rl // g
            if a != 1:
                row = {c: v * a for c, v in row.items()}
            for c, v in piv.items():
                nv = row.get(c, 0) - b * v
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)
    return pivots


def reduced_echelon(pivots):
    """Back-substitute an echelon set into its unique RREF.

    Result maps pivot column -> {column: Fraction} with the pivot entry
    equal to 1 and zeros in every other pivot column.
    """
    cols = sorted(pivots)
    rref = {}
    for p in reversed(cols):
        row = {c: Fraction(v) for c, v in pivots[p].items()}
        lead = row[p]
        row = {c: v / lead for c, v in row.items()}
        for c in [c for c in row if c != p and c in rref]:
            f = row.pop(c)
            for cc, vv in rref[c].items():
                if cc == c:
                    continue
                nv = row.get(cc, 0) - f * vv
                if nv:
                    row[cc] = nv
                else:
                    row.pop(cc, None)
        rref[p] = row
    return rref


def reduce_vector(vec, rref):
    """Reduce {column: Fraction} modulo the row space of an RREF set.

    The result is supported on non-pivot columns only; it is zero iff
    the vector lies in the row space.
    """
    out = dict(vec)
    for p in sorted(c for c in out if c in rref):
        f = out.pop(p, None)
        if not f:
            continue
        for c, v in rref[p].items():
            if c == p:
                continue
            nv = out.get(c, 0) - f * v
            if nv:
                out[c] = nv
            else:
                out.pop(c, None)
    return out


def rank_of(rows):
    """Rank of a list of sparse integer rows."""
    return len(echelon(rows))
