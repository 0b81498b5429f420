"""Horizontal chord diagrams decorated by free-group elements.

Chords carry words in a rank-r free group (the fundamental group of a
punctured surface).  Generators X_{ij,gamma} satisfy the flip rule
X_{ji,gamma} = X_{ij,gamma^-1} (no sign; this algebra is ungraded), the
conjugation action of the strandwise group-ring factors, and the
decorated 4-term relations

    [X_{ij,g}, X_{kl,d}] = 0                       (i, j, k, l distinct)
    [X_{ij,g}, X_{jk,d} + X_{ik,g*d}] = 0          (i, j, k distinct)

Words serialize as strings over a..z with uppercase inverses, so "abA"
is g1 g2 g1^-1 and "e" (or "") is the identity.

Quotient computations are truncated: inputs of total decoration length
at most L are reduced against the span of all relation instances whose
every term fits within decoration length 2L.  Conjugation by words
within the bound stays inside that instance family (conjugating a
relation instance yields another instance with modified words), so the
truncated span is closed under the group action it needs.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import CapacityError
from .linalg import echelon, reduced_echelon, reduce_vector

DECORATED_CEILING = 200_000


# ----------------------------------------------------------------------
# Free-group words
# ----------------------------------------------------------------------

def reduce_word(letters):
    """Freely reduce a sequence of nonzero integers (sign = inversion)."""
    stack = []
    for x in letters:
        if x == 0:
            raise ValueError("0 is not a letter")
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


def word_mul(u, v):
    return reduce_word(u + v)


def word_inv(u):
    return tuple(-x for x in reversed(u))


def parse_word(text):
    """'abA' -> (1, 2, -1); 'e' or '' is the identity."""
    if text in ("", "e"):
        return ()
    letters = []
    for ch in text:
        if "a" <= ch <= "z":
            letters.append(ord(ch) - ord("a") + 1)
        elif "A" <= ch <= "Z":
            letters.append(-(ord(ch) - ord("A") + 1))
        else:
            raise ValueError(f"bad word character {ch!r}")
    return reduce_word(letters)


def format_word(word):
    if not word:
        return "e"
    out = []
    for x in word:
        if x > 0:
            out.append(chr(ord("a") + x - 1))
        else:
            out.append(chr(ord("A") - x - 1))
    return "".join(out)


def words_up_to(rank, length):
    """All freely reduced words of length <= length, rank generators."""
    out = [()]
    frontier = [()]
    for _ in range(length):
        nxt = []
        for w in frontier:
            for g in range(1, rank + 1):
                for s in (g, -g):
                    if w and w[-1] == -s:
                        continue
                    nxt.append(w + (s,))
        out.extend(nxt)
        frontier = nxt
    return out


def canonicalize_decorated(i, j, gamma):
    """Order the strand pair; flipping inverts the decoration (no sign)."""
    if i == j:
        raise ValueError(f"diagonal chord ({i},{i}) is not a generator")
    gamma = reduce_word(gamma)
    if i < j:
        return (i, j, gamma)
    return (j, i, word_inv(gamma))


@dataclass(frozen=True)
class DecoratedMonomial:
    n: int
    chords: tuple  # of (i, j, word) with i < j

    def __post_init__(self):
        for (i, j, w) in self.chords:
            if not (1 <= i < j <= self.n):
                raise ValueError(f"chord ({i},{j}) not canonical for n={self.n}")
            if reduce_word(w) != w:
                raise ValueError("decoration must be freely reduced")

    @property
    def degree(self):
        return len(self.chords)

    @property
    def decoration_length(self):
        return sum(len(w) for (_, _, w) in self.chords)

    def __mul__(self, other):
        if self.n != other.n:
            raise ValueError("strand count mismatch")
        return DecoratedMonomial(self.n, self.chords + other.chords)


def _sort_key(mono):
    # high decoration first, then lex; keeps quotient bases short-worded
    return (-mono.decoration_length, mono.chords)


class DecoratedElement:
    """Rational linear combination of decorated monomials."""

    __slots__ = ("n", "rank", "terms")

    def __init__(self, n, rank, terms=None):
        if n < 2:
            raise ValueError("strand count must be at least 2")
        if rank < 0:
            raise ValueError("free-group rank must be nonnegative")
        self.n = n
        self.rank = rank
        self.terms = {}
        for mono, c in (terms or {}).items():
            if mono.n != n:
                raise ValueError("monomial strand count mismatch")
            for (_, _, w) in mono.chords:
                if any(abs(x) > rank for x in w):
                    raise ValueError(f"decoration uses letters beyond rank {rank}")
            c = Fraction(c)
            if c:
                self.terms[mono] = c

    @classmethod
    def zero(cls, n, rank):
        return cls(n, rank, {})

    @classmethod
    def unit(cls, n, rank):
        return cls(n, rank, {DecoratedMonomial(n, ()): Fraction(1)})

    @classmethod
    def generator(cls, n, rank, i, j, gamma=()):
        if isinstance(gamma, str):
            gamma = parse_word(gamma)
        triple = canonicalize_decorated(i, j, gamma)
        return cls(n, rank, {DecoratedMonomial(n, (triple,)): Fraction(1)})

    def _check(self, other):
        if self.n != other.n or self.rank != other.rank:
            raise ValueError("mismatched strand count or rank")

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, Fraction(0)) + c
        return DecoratedElement(self.n, self.rank, terms)

    def __sub__(self, other):
        return self + (-1) * other

    def __rmul__(self, scalar):
        c = Fraction(scalar)
        return DecoratedElement(self.n, self.rank,
                                {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.__rmul__(other)
        self._check(other)
        terms = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1 * m2
                terms[m] = terms.get(m, Fraction(0)) + c1 * c2
        return DecoratedElement(self.n, self.rank, terms)

    def __eq__(self, other):
        return (isinstance(other, DecoratedElement) and self.n == other.n
                and self.rank == other.rank and self.terms == other.terms)

    def is_zero(self):
        return not self.terms

    def degrees(self):
        return sorted({m.degree for m in self.terms})

    def degree_part(self, k):
        return DecoratedElement(
            self.n, self.rank,
            {m: c for m, c in self.terms.items() if m.degree == k})

    def decoration_length(self):
        return max((m.decoration_length for m in self.terms), default=0)

    def __repr__(self):
        return f"DecoratedElement(n={self.n}, r={self.rank}, {format_decorated(self)})"


def commutator(a, b):
    return a * b - b * a


def conjugation_action(l, mu, a):
    """Conjugate by the strand-l group element mu.

    On generators: decorations of chords not touching strand l are fixed;
    an (l, j) chord maps gamma -> mu*gamma, and an (i, l) chord maps
    gamma -> gamma*mu^-1 (the flip of the first rule).  Extended as an
    algebra automorphism.
    """
    if not (1 <= l <= a.n):
        raise ValueError(f"strand {l} out of range for n={a.n}")
    if isinstance(mu, str):
        mu = parse_word(mu)
    mu = reduce_word(mu)
    terms = {}
    for mono, c in a.terms.items():
        chords = []
        for (i, j, w) in mono.chords:
            if l == i:
                w = word_mul(mu, w)
            elif l == j:
                w = word_mul(w, word_inv(mu))
            chords.append((i, j, w))
        m = DecoratedMonomial(mono.n, tuple(chords))
        terms[m] = terms.get(m, Fraction(0)) + c
    return DecoratedElement(a.n, a.rank, terms)


# ----------------------------------------------------------------------
# Relations and truncated normal forms
# ----------------------------------------------------------------------

def _relation_term_dicts(n, rank, budget):
    """Raw relation instances as {chord tuple: coeff} dicts.

    Yields every decorated 4T instance all of whose terms have total
    decoration length <= budget; instances with any oversized term are
    excluded whole (a truncated instance would not lie in the ideal).
    """
    words = words_up_to(rank, budget)
    by_len = {}
    for w in words:
        by_len.setdefault(len(w), []).append(w)
    for (i, j, k) in itertools.permutations(range(1, n + 1), 3):
        for lg in sorted(by_len):
            for ld in range(budget - lg + 1):
                for g in by_len[lg]:
                    a = canonicalize_decorated(i, j, g)
                    for d in by_len.get(ld, ()):
                        gd = word_mul(g, d)
                        if lg + len(gd) > budget:
                            continue
                        b = canonicalize_decorated(j, k, d)
                        c = canonicalize_decorated(i, k, gd)
                        row = {}
                        for key, v in (((a, b), 1), ((b, a), -1),
                                       ((a, c), 1), ((c, a), -1)):
                            row[key] = row.get(key, 0) + v
                        row = {key: v for key, v in row.items() if v}
                        if row:
                            yield row
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    for (i, j), (k, l) in itertools.combinations(pairs, 2):
        if len({i, j, k, l}) == 4:
            for lg in sorted(by_len):
                for g in by_len[lg]:
                    a = (i, j, g)
                    for ld in range(budget - lg + 1):
                        for d in by_len.get(ld, ()):
                            b = (k, l, d)
                            yield {(a, b): 1, (b, a): -1}


def decorated_relation_generators(n, rank, max_word_len):
    """All decorated 4T instances with |gamma|, |delta| <= max_word_len.

    Triples run over ordered (i, j, k); the flip rule makes reversed
    roles genuinely different relations once decorations are nontrivial.
    """
    words = words_up_to(rank, max_word_len)
    gen = lambda i, j, w: DecoratedElement.generator(n, rank, i, j, w)
    out = []
    for (i, j, k) in itertools.permutations(range(1, n + 1), 3):
        for g in words:
            for d in words:
                out.append(commutator(
                    gen(i, j, g), gen(j, k, d) + gen(i, k, word_mul(g, d))))
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    for (i, j), (k, l) in itertools.combinations(pairs, 2):
        if len({i, j, k, l}) == 4:
            for g in words:
                for d in words:
                    out.append(commutator(gen(i, j, g), gen(k, l, d)))
    return out


def _monomials_within(n, rank, k, max_dec, ceiling=None):
    """Degree-k monomials with total decoration length <= max_dec."""
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    words_by_len = {}
    for w in words_up_to(rank, max_dec):
        words_by_len.setdefault(len(w), []).append(w)

    def chords_rec(remaining, budget):
        if remaining == 0:
            yield ()
            return
        for (i, j) in pairs:
            for ln in range(budget + 1):
                for w in words_by_len.get(ln, []):
                    for rest in chords_rec(remaining - 1, budget - ln):
                        yield ((i, j, w),) + rest

    out = []
    for ch in chords_rec(k, max_dec):
        out.append(DecoratedMonomial(n, ch))
        if ceiling is not None and len(out) > ceiling:
            raise CapacityError(
                f"decorated slice (n={n}, r={rank}, k={k}, dec<={max_dec}) "
                f"exceeds the ceiling of {ceiling} monomials")
    return out


@dataclass(frozen=True)
class DecoratedSpan:
    n: int
    rank: int
    k: int
    bound: int  # decoration budget 2L of the ambient slice
    monomials: tuple
    rows: dict
    quotient: tuple

    def reduce(self, element):
        index = {m: i for i, m in enumerate(self.monomials)}
        out = {}
        for k_part in element.degrees():
            if k_part != self.k:
                raise ValueError("element degree does not match span degree")
        vec = {}
        for m, c in element.terms.items():
            if m not in index:
                raise ValueError(
                    f"monomial decoration length {m.decoration_length} exceeds "
                    f"the span budget {self.bound}")
            vec[index[m]] = c
        for col, c in reduce_vector(vec, self.rows).items():
            out[self.monomials[col]] = c
        return DecoratedElement(element.n, element.rank, out)


_DECORATED_MEMO = {}


def decorated_span(n, rank, k, L, ceiling=DECORATED_CEILING):
    """Row-reduced truncated relation span for degree k, input bound L."""
    key = (n, rank, k, L)
    if key in _DECORATED_MEMO:
        return _DECORATED_MEMO[key]
    bound = 2 * L
    monomials = _monomials_within(n, rank, k, bound, ceiling)
    monomials.sort(key=_sort_key)
    index = {m.chords: i for i, m in enumerate(monomials)}
    rows = []
    if k >= 2:
        rels = list(_relation_term_dicts(n, rank, bound))
        paddings = {
            d: _monomials_within(n, rank, d, bound)
            for d in {split for split in range(k - 1)}
            | {k - 2 - split for split in range(k - 1)}}
        for split in range(k - 1):
            for m1 in paddings[split]:
                for m2 in paddings[k - 2 - split]:
                    pad_dec = m1.decoration_length + m2.decoration_length
                    for rel in rels:
                        row = {}
                        fits = True
                        for (c1, c2), c in rel.items():
                            full = m1.chords + (c1, c2) + m2.chords
                            dec = pad_dec + len(c1[2]) + len(c2[2])
                            if dec > bound:
                                fits = False
                                break
                            col = index[full]
                            row[col] = row.get(col, 0) + c
                        if fits and row:
                            rows.append({c: v for c, v in row.items() if v})
    rref = reduced_echelon(echelon(rows))
    quotient = tuple(i for i in range(len(monomials)) if i not in rref)
    span = DecoratedSpan(n, rank, k, bound, tuple(monomials), rref, quotient)
    _DECORATED_MEMO[key] = span
    return span


def decorated_normal_form(a, L=None, ceiling=DECORATED_CEILING):
    """Reduce against the truncated relation span.

    ``L`` bounds the total decoration length of the input (defaults to
    the input's own maximum); the reduction happens inside the ambient
    decoration-length 2L slice, and the result is supported on quotient
    monomials of that slice.  Idempotent for a fixed L.
    """
    if L is None:
        L = a.decoration_length()
    if a.decoration_length() > L:
        raise ValueError(
            f"input decoration length {a.decoration_length()} exceeds L={L}")
    out = DecoratedElement.zero(a.n, a.rank)
    for k in a.degrees():
        span = decorated_span(a.n, a.rank, k, L, ceiling)
        out = out + span.reduce(a.degree_part(k))
    return out


def format_decorated(a):
    if not a.terms:
        return "0"
    parts = []
    for mono in sorted(a.terms, key=lambda m: (m.degree, _sort_key(m))):
        c = a.terms[mono]
        if mono.chords:
            body = "*".join(f"X{i}{j}:{format_word(w)}" for (i, j, w) in mono.chords)
        else:
            body = "1"
        if c == 1:
            parts.append(body)
        elif c == -1:
            parts.append(f"-{body}")
        else:
            parts.append(f"{c}*{body}")
    return " + ".join(parts).replace("+ -", "- ")
