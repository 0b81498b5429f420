"""Chord diagrams on labeled circles and the circle 4-term relations.

A diagram is stored as one cyclic sequence of chord labels per circle;
every label appears exactly twice in total.  Circles are labeled (their
order is fixed), but each circle may be rotated freely: the canonical
form is the lexicographically least encoding over all rotations, after
renaming chords in order of first appearance.

The local 4-term relation: fix a chord a and one endpoint e of another
chord; sliding e into the four positions adjacent to the two endpoints
of a gives

    D(after a1) - D(before a1) + D(after a2) - D(before a2) = 0,

the unique convention under which closures of the horizontal-chord ideal
land in the span (exercised by the push_forward tests).
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .algebra import EVEN
from .errors import CapacityError
from .linalg import echelon, reduced_echelon, reduce_vector

DIAGRAM_CEILING = 200_000


def _canonical_encoding(circles):
    """Lex-least relabeled encoding over independent circle rotations."""
    rotation_choices = [range(max(len(c), 1)) for c in circles]
    best = None
    for rots in itertools.product(*rotation_choices):
        rotated = [c[r:] + c[:r] for c, r in zip(circles, rots)]
        names = {}
        encoded = []
        for circle in rotated:
            row = []
            for label in circle:
                if label not in names:
                    names[label] = len(names)
                row.append(names[label])
            encoded.append(tuple(row))
        encoded = tuple(encoded)
        if best is None or encoded < best:
            best = encoded
    return best


@dataclass(frozen=True)
class CircleDiagram:
    """Canonical chord diagram on labeled circles."""

    circles: tuple

    def __post_init__(self):
        counts = {}
        for circle in self.circles:
            for label in circle:
                counts[label] = counts.get(label, 0) + 1
        if any(v != 2 for v in counts.values()):
            raise ValueError("every chord label must occur exactly twice")
        object.__setattr__(self, "circles", _canonical_encoding(self.circles))

    @property
    def circle_count(self):
        return len(self.circles)

    @property
    def chord_count(self):
        return sum(len(c) for c in self.circles) // 2

    def endpoint_lists(self):
        """Mutable copy of the label sequences."""
        return [list(c) for c in self.circles]


def closure(mono, sigma=None):
    """Close a horizontal chord monomial along a strand permutation.

    The end of strand i is glued to the start of strand sigma(i); the
    resulting circles are the cycles of sigma, each carrying its strands'
    chord endpoints in height order.  Default sigma is the n-cycle
    (1 2 ... n), which produces a diagram on a single circle.
    """
    n = mono.n
    if sigma is None:
        sigma = {i: i % n + 1 for i in range(1, n + 1)}
    elif not isinstance(sigma, dict):
        sigma = {i + 1: v for i, v in enumerate(sigma)}
    if sorted(sigma) != list(range(1, n + 1)) or \
            sorted(sigma.values()) != list(range(1, n + 1)):
        raise ValueError(f"not a permutation of 1..{n}: {sigma}")
    strand_endpoints = {i: [] for i in range(1, n + 1)}
    for height, (i, j) in enumerate(mono.chords):
        strand_endpoints[i].append(height)
        strand_endpoints[j].append(height)
    circles = []
    seen = set()
    for start in range(1, n + 1):
        if start in seen:
            continue
        circle = []
        i = start
        while i not in seen:
            seen.add(i)
            circle.extend(strand_endpoints[i])
            i = sigma[i]
        circles.append(tuple(circle))
    return CircleDiagram(tuple(circles))


def push_forward(a, sigma=None):
    """Term-by-term closure of an even-parity algebra element."""
    if a.parity != EVEN:
        raise ValueError("closure to circle diagrams is defined for even parity")
    out = {}
    for mono, c in a.terms.items():
        d = closure(mono, sigma)
        out[d] = out.get(d, Fraction(0)) + c
    return {d: c for d, c in out.items() if c}


# ----------------------------------------------------------------------
# Enumeration and the 4T span
# ----------------------------------------------------------------------

def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _matchings(slots):
    if not slots:
        yield []
        return
    first = slots[0]
    for idx in range(1, len(slots)):
        rest = slots[1:idx] + slots[idx + 1:]
        for m in _matchings(rest):
            yield [(first, slots[idx])] + m


def all_diagrams(c, k, ceiling=DIAGRAM_CEILING):
    """All canonical diagrams with k chords on c labeled circles."""
    raw = 0
    found = set()
    for sizes in _compositions(2 * k, c):
        slots = []
        for ci, size in enumerate(sizes):
            slots.extend((ci, p) for p in range(size))
        for matching in _matchings(slots):
            raw += 1
            if raw > ceiling:
                raise CapacityError(
                    f"diagram enumeration for c={c}, k={k} exceeds "
                    f"the ceiling of {ceiling}")
            circles = [[None] * size for size in sizes]
            for label, ((c1, p1), (c2, p2)) in enumerate(matching):
                circles[c1][p1] = label
                circles[c2][p2] = label
            found.add(CircleDiagram(tuple(tuple(c) for c in circles)))
    return sorted(found, key=lambda d: d.circles)


def four_term_instances(diagram):
    """All 4T combinations obtained from one diagram.

    Yields {CircleDiagram: coeff} dicts; each is +after1 - before1
    +after2 - before2 for some fixed chord a and moving endpoint e.
    """
    k = diagram.chord_count
    out = []
    for a in range(k):
        for b in range(k):
            if a == b:
                continue
            for which in range(2):
                occ = [(ci, pi)
                       for ci, circle in enumerate(diagram.circles)
                       for pi, lab in enumerate(circle) if lab == b]
                ci, pi = occ[which]
                stripped = diagram.endpoint_lists()
                del stripped[ci][pi]
                a_positions = [(cj, pj)
                               for cj, circle in enumerate(stripped)
                               for pj, lab in enumerate(circle) if lab == a]
                combo = {}
                for (cj, pj), offset, sign in (
                        (a_positions[0], 1, 1), (a_positions[0], 0, -1),
                        (a_positions[1], 1, 1), (a_positions[1], 0, -1)):
                    circles = [list(c) for c in stripped]
                    circles[cj].insert(pj + offset, b)
                    d = CircleDiagram(tuple(tuple(c) for c in circles))
                    combo[d] = combo.get(d, 0) + sign
                combo = {d: c for d, c in combo.items() if c}
                if combo:
                    out.append(combo)
    return out


@dataclass(frozen=True)
class CircleSpan:
    """Row-reduced 4T subspace inside the span of (c, k) diagrams."""

    c: int
    k: int
    diagrams: tuple
    rows: dict
    quotient: tuple

    @property
    def rank(self):
        return len(self.rows)

    @property
    def quotient_dim(self):
        return len(self.quotient)

    def quotient_diagrams(self):
        return [self.diagrams[i] for i in self.quotient]

    def reduce(self, combo):
        """Reduce {CircleDiagram: coeff} into the quotient basis."""
        index = {d: i for i, d in enumerate(self.diagrams)}
        vec = {}
        for d, c in combo.items():
            if d.circle_count != self.c or d.chord_count != self.k:
                raise ValueError(
                    f"diagram with {d.circle_count} circles / {d.chord_count} "
                    f"chords does not live in the (c={self.c}, k={self.k}) span")
            vec[index[d]] = Fraction(c)
        reduced = reduce_vector(vec, self.rows)
        return {self.diagrams[i]: c for i, c in reduced.items()}


_SPAN_MEMO = {}


def circle_4t_span(c, k, ceiling=DIAGRAM_CEILING):
    """Diagram basis and row-reduced 4T span for k chords on c circles."""
    key = (c, k)
    if key in _SPAN_MEMO:
        return _SPAN_MEMO[key]
    diagrams = all_diagrams(c, k, ceiling)
    index = {d: i for i, d in enumerate(diagrams)}
    rows = []
    for d in diagrams:
        for combo in four_term_instances(d):
            rows.append({index[dd]: cc for dd, cc in combo.items()})
    rref = reduced_echelon(echelon(rows))
    quotient = tuple(i for i in range(len(diagrams)) if i not in rref)
    span = CircleSpan(c, k, tuple(diagrams), rref, quotient)
    _SPAN_MEMO[key] = span
    return span


def weight_pairing(span, w, combo):
    """Evaluate a weight functional after reduction into the quotient.

    ``w`` maps quotient-basis diagrams to rational values; diagrams it
    omits count as zero.  Vanishes on anything in the 4T span.
    """
    quotient = set(span.quotient_diagrams())
    for d in w:
        if d not in quotient:
            raise ValueError("functional must be given on quotient-basis diagrams")
    reduced = span.reduce(combo)
    total = Fraction(0)
    for d, c in reduced.items():
        total += Fraction(w.get(d, 0)) * c
    return total


# ----------------------------------------------------------------------
# Interchange format
# ----------------------------------------------------------------------

def format_diagram(diagram):
    """Text form: one `circle <id>: ...` line per circle (endpoint ids in
    cyclic order), then one `chord: eA eB` line per chord."""
    lines = []
    next_id = 1
    chord_ends = {}
    for ci, circle in enumerate(diagram.circles, start=1):
        ids = []
        for label in circle:
            ids.append(next_id)
            chord_ends.setdefault(label, []).append(next_id)
            next_id += 1
        lines.append(f"circle {ci}:" + ("" if not ids else " " + " ".join(map(str, ids))))
    for label in sorted(chord_ends):
        a, b = chord_ends[label]
        lines.append(f"chord: {a} {b}")
    return "\n".join(lines)


def parse_diagram(text):
    """Inverse of format_diagram."""
    circle_of = {}
    circles = []
    pairs = []
    for line in text.strip().splitlines():
        line = line.strip()
        if not line:
            continue
        head, _, rest = line.partition(":")
        ids = [int(tok) for tok in rest.split()]
        if head.startswith("circle"):
            for e in ids:
                circle_of[e] = (len(circles), e)
            circles.append(ids)
        elif head == "chord":
            pairs.append(tuple(ids))
        else:
            raise ValueError(f"unrecognized line: {line!r}")
    label_of = {}
    for label, (a, b) in enumerate(pairs):
        label_of[a] = label
        label_of[b] = label
    return CircleDiagram(tuple(
        tuple(label_of[e] for e in circle) for circle in circles))
