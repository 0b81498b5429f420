"""The algebra of horizontal chord diagrams modulo graded 4-term relations.

Generators X_ij (one horizontal chord joining strands i and j) multiply by
concatenation; the quotient by the two bracket families

    [X_ij, X_ik + X_jk]   and   [X_ij + X_ik, X_jk]   for i < j < k,
    [X_ij, X_kl]          for i, j, k, l distinct,

is the universal enveloping algebra of the graded infinitesimal-braid Lie
algebra.  The generator degree is even or odd according to ``parity``; the
flip X_ji = (+/-)X_ij is absorbed at construction time, so only pairs with
i < j ever appear in stored monomials.

All coefficients are exact ``Fraction`` values.  Monomials of degree k are
ordered lexicographically on their pair sequences (order id "lex-pairs-v1");
row reduction always pivots on the leftmost monomial, which makes quotient
bases unique and reproducible.
"""

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction

from .errors import CapacityError
from .linalg import echelon, reduced_echelon, reduce_vector

EVEN = "even"
ODD = "odd"

#: refuse degree slices with more monomials than this (configurable per call)
DEFAULT_MONOMIAL_CEILING = 5_000_000

MONOMIAL_ORDER_ID = "lex-pairs-v1"


def check_parity(parity):
    if parity not in (EVEN, ODD):
        raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")
    return parity


def flip_sign(parity):
    """Sign acquired by writing X_ji as a multiple of X_ij (i < j)."""
    return 1 if parity == EVEN else -1


def koszul_sign(parity, p, q):
    """Koszul sign between homogeneous elements of chord degrees p and q."""
    if parity == EVEN:
        return 1
    return -1 if (p * q) % 2 else 1


def canonicalize_generator(i, j, n, parity):
    """Return ((min, max), sign) for the generator X_ij on n strands."""
    check_parity(parity)
    if i == j:
        raise ValueError(f"diagonal chord ({i},{i}) is not a generator")
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValueError(f"strand index out of range for n={n}: ({i},{j})")
    if i < j:
        return (i, j), 1
    return (j, i), flip_sign(parity)


@dataclass(frozen=True)
class ChordMonomial:
    """An ordered sequence of chords (i, j), i < j, on n strands."""

    n: int
    chords: tuple

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("strand count must be at least 2")
        for (i, j) in self.chords:
            if not (1 <= i < j <= self.n):
                raise ValueError(f"chord ({i},{j}) not canonical for n={self.n}")

    @property
    def degree(self):
        return len(self.chords)

    def __mul__(self, other):
        if self.n != other.n:
            raise ValueError("strand count mismatch")
        return ChordMonomial(self.n, self.chords + other.chords)


class AlgebraElement:
    """Finite rational linear combination of chord monomials.

    Instances are immutable by convention; all operations return new
    elements.  Terms with coefficient zero are never stored.
    """

    __slots__ = ("n", "parity", "terms")

    def __init__(self, n, parity, terms=None):
        check_parity(parity)
        if n < 2:
            raise ValueError("strand count must be at least 2")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "parity", parity)
        clean = {}
        for mono, c in (terms or {}).items():
            if mono.n != n:
                raise ValueError("monomial strand count mismatch")
            c = Fraction(c)
            if c:
                clean[mono] = c
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("AlgebraElement is immutable")

    # -- constructors ------------------------------------------------

    @classmethod
    def zero(cls, n, parity):
        return cls(n, parity, {})

    @classmethod
    def unit(cls, n, parity):
        return cls(n, parity, {ChordMonomial(n, ()): Fraction(1)})

    @classmethod
    def generator(cls, n, parity, i, j):
        pair, sign = canonicalize_generator(i, j, n, parity)
        return cls(n, parity, {ChordMonomial(n, (pair,)): Fraction(sign)})

    # -- structure ---------------------------------------------------

    def is_zero(self):
        return not self.terms

    def degrees(self):
        return sorted({m.degree for m in self.terms})

    def is_homogeneous(self):
        return len(self.degrees()) <= 1

    def degree_part(self, k):
        return AlgebraElement(
            self.n, self.parity,
            {m: c for m, c in self.terms.items() if m.degree == k})

    def counit(self):
        """Coefficient of the unit monomial."""
        return self.terms.get(ChordMonomial(self.n, ()), Fraction(0))

    def _check_compatible(self, other):
        if not isinstance(other, AlgebraElement):
            raise TypeError("expected an AlgebraElement")
        if self.n != other.n:
            raise ValueError("strand count mismatch")
        if self.parity != other.parity:
            raise ValueError("parity mismatch")

    # -- arithmetic --------------------------------------------------

    def __add__(self, other):
        self._check_compatible(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, Fraction(0)) + c
        return AlgebraElement(self.n, self.parity, terms)

    def __sub__(self, other):
        return self + (-1) * other

    def __neg__(self):
        return (-1) * self

    def __rmul__(self, scalar):
        c = Fraction(scalar)
        return AlgebraElement(
            self.n, self.parity, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.__rmul__(other)
        self._check_compatible(other)
        terms = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1 * m2
                terms[m] = terms.get(m, Fraction(0)) + c1 * c2
        return AlgebraElement(self.n, self.parity, terms)

    def __eq__(self, other):
        return (isinstance(other, AlgebraElement)
                and self.n == other.n and self.parity == other.parity
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.n, self.parity, frozenset(self.terms.items())))

    def __repr__(self):
        return f"AlgebraElement(n={self.n}, {self.parity}, {format_element(self)})"


def multiply(a, b):
    """Concatenation product, bilinear in both arguments."""
    return a * b


def bracket(a, b):
    """Graded bracket ab - (Koszul sign) ba of homogeneous elements."""
    a._check_compatible(b)
    if not a.is_homogeneous() or not b.is_homogeneous():
        raise ValueError("bracket requires homogeneous arguments")
    if a.is_zero() or b.is_zero():
        return AlgebraElement.zero(a.n, a.parity)
    p, q = a.degrees()[0], b.degrees()[0]
    return a * b - koszul_sign(a.parity, p, q) * (b * a)


def symmetric_action(sigma, a):
    """Relabel strands by a permutation of {1..n}, with flip signs.

    ``sigma`` maps old strand labels to new ones; accepted as a dict or a
    sequence of length n listing images of 1..n.
    """
    n = a.n
    if not isinstance(sigma, dict):
        sigma = {i + 1: v for i, v in enumerate(sigma)}
    if sorted(sigma) != list(range(1, n + 1)) or sorted(sigma.values()) != list(range(1, n + 1)):
        raise ValueError(f"not a permutation of 1..{n}: {sigma}")
    terms = {}
    for mono, c in a.terms.items():
        sign = 1
        chords = []
        for (i, j) in mono.chords:
            pair, s = canonicalize_generator(sigma[i], sigma[j], n, a.parity)
            sign *= s
            chords.append(pair)
        m = ChordMonomial(n, tuple(chords))
        terms[m] = terms.get(m, Fraction(0)) + sign * c
    return AlgebraElement(n, a.parity, terms)


# ----------------------------------------------------------------------
# Relation ideal and normal forms
# ----------------------------------------------------------------------

def strand_pairs(n):
    """All canonical pairs (i, j), i < j, in lexicographic order."""
    return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]


def relation_generators(n, parity, max_degree=None):
    """Degree-2 generators of the 4T ideal: two brackets per triple plus
    one commutator per disjoint pair of chords.  Flip relations do not
    appear; they are absorbed by generator canonicalization."""
    check_parity(parity)
    if max_degree is not None and max_degree < 2:
        return []
    gen = lambda i, j: AlgebraElement.generator(n, parity, i, j)
    rels = []
    for i, j, k in itertools.combinations(range(1, n + 1), 3):
        rels.append(bracket(gen(i, j), gen(i, k) + gen(j, k)))
        rels.append(bracket(gen(i, j) + gen(i, k), gen(j, k)))
    for (i, j), (k, l) in itertools.combinations(strand_pairs(n), 2):
        if len({i, j, k, l}) == 4:
            rels.append(bracket(gen(i, j), gen(k, l)))
    return rels


def monomial_count(n, k):
    return len(strand_pairs(n)) ** k


def enumerate_monomials(n, k):
    """Degree-k monomials in the canonical lex-pairs-v1 order."""
    return [ChordMonomial(n, chords)
            for chords in itertools.product(strand_pairs(n), repeat=k)]


@dataclass(frozen=True)
class RelationBasis:
    """Row-reduced degree-k slice of the 4T ideal, plus the quotient basis.

    ``rows`` maps pivot column -> {column: Fraction} in reduced echelon
    form over the lex-pairs-v1 monomial enumeration; ``quotient`` lists
    the non-pivot column indices in increasing order.
    """

    n: int
    parity: str
    k: int
    monomials: tuple
    rows: dict
    quotient: tuple

    @property
    def rank(self):
        return len(self.rows)

    def quotient_monomials(self):
        return [self.monomials[c] for c in self.quotient]


def check_capacity(n, k, ceiling):
    count = monomial_count(n, k)
    if count > ceiling:
        raise CapacityError(
            f"degree-{k} slice on n={n} strands has {count} monomials, "
            f"exceeding the ceiling of {ceiling}")


def _ideal_slice_rows(n, parity, k, mono_index):
    """Sparse integer rows spanning the degree-k slice of the ideal:
    every m1 * r * m2 with r a relation generator."""
    rels = []
    for r in relation_generators(n, parity):
        rels.append({m.chords: int(c) for m, c in r.terms.items()})
    pairs = strand_pairs(n)
    rows = []
    for d1 in range(k - 1):
        d2 = k - 2 - d1
        for left in itertools.product(pairs, repeat=d1):
            for right in itertools.product(pairs, repeat=d2):
                for rel in rels:
                    rows.append({
                        mono_index[left + chords + right]: c
                        for chords, c in rel.items()})
    return rows


# one in-memory basis per (n, parity, k); disk caching layers on top
_BASIS_MEMO = {}


def build_relation_basis(n, parity, k, cache_dir=None,
                         ceiling=DEFAULT_MONOMIAL_CEILING):
    """Build (or load from cache) the RelationBasis for (n, parity, k).

    When ``cache_dir`` is given the result is read from / written to
    ``<cache_dir>/rel_n{n}_{parity}_k{k}.basis``.  Within a process,
    results are memoized regardless of disk caching.
    """
    check_parity(parity)
    if k < 0:
        raise ValueError("degree must be nonnegative")
    check_capacity(n, k, ceiling)
    key = (n, parity, k)
    basis = _BASIS_MEMO.get(key)
    if basis is not None:
        return basis
    if cache_dir is not None:
        from .basis_cache import load_basis, store_basis
        basis = load_basis(cache_dir, n, parity, k)
        if basis is None:
            basis = _compute_relation_basis(n, parity, k)
            store_basis(cache_dir, basis)
    else:
        basis = _compute_relation_basis(n, parity, k)
    _BASIS_MEMO[key] = basis
    return basis


def _compute_relation_basis(n, parity, k):
    monomials = enumerate_monomials(n, k)
    mono_index = {m.chords: i for i, m in enumerate(monomials)}
    if k < 2:
        rows = {}
    else:
        rows = reduced_echelon(echelon(_ideal_slice_rows(n, parity, k, mono_index)))
    quotient = tuple(c for c in range(len(monomials)) if c not in rows)
    return RelationBasis(n, parity, k, tuple(monomials), rows, quotient)


def dim_quotient(n, parity, k, cache_dir=None, ceiling=DEFAULT_MONOMIAL_CEILING):
    """Rank of the degree-k quotient algebra slice."""
    return len(build_relation_basis(n, parity, k, cache_dir, ceiling).quotient)


def normal_form(a, cache_dir=None, ceiling=DEFAULT_MONOMIAL_CEILING):
    """Reduce an element to its canonical representative modulo the ideal.

    The result is supported on quotient-basis monomials; it is zero iff
    the element lies in the ideal.  Idempotent and linear.
    """
    out = {}
    for k in a.degrees():
        basis = build_relation_basis(a.n, a.parity, k, cache_dir, ceiling)
        index = {m: i for i, m in enumerate(basis.monomials)}
        vec = {index[m]: c for m, c in a.degree_part(k).terms.items()}
        for col, c in reduce_vector(vec, basis.rows).items():
            out[basis.monomials[col]] = c
    return AlgebraElement(a.n, a.parity, out)


# ----------------------------------------------------------------------
# Coproduct
# ----------------------------------------------------------------------

class TensorElement:
    """Element of the two-fold tensor square, for coproduct computations."""

    __slots__ = ("n", "parity", "terms")

    def __init__(self, n, parity, terms=None):
        check_parity(parity)
        self.n = n
        self.parity = parity
        self.terms = {}
        for (m1, m2), c in (terms or {}).items():
            c = Fraction(c)
            if c:
                self.terms[(m1, m2)] = c

    def __add__(self, other):
        terms = dict(self.terms)
        for key, c in other.terms.items():
            terms[key] = terms.get(key, Fraction(0)) + c
        return TensorElement(self.n, self.parity, terms)

    def __sub__(self, other):
        return self + (-1) * other

    def __rmul__(self, scalar):
        c = Fraction(scalar)
        return TensorElement(self.n, self.parity,
                             {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other):
        """Graded tensor-square product: (a@b)(c@d) = sign * ac @ bd."""
        if isinstance(other, (int, Fraction)):
            return self.__rmul__(other)
        terms = {}
        for (a, b), c1 in self.terms.items():
            for (cc, d), c2 in other.terms.items():
                sign = koszul_sign(self.parity, b.degree, cc.degree)
                key = (a * cc, b * d)
                terms[key] = terms.get(key, Fraction(0)) + sign * c1 * c2
        return TensorElement(self.n, self.parity, terms)

    def __eq__(self, other):
        return (isinstance(other, TensorElement) and self.n == other.n
                and self.parity == other.parity and self.terms == other.terms)

    def __repr__(self):
        parts = [f"{c}*{format_monomial(a)}(x){format_monomial(b)}"
                 for (a, b), c in sorted(
                     self.terms.items(),
                     key=lambda kv: (kv[0][0].chords, kv[0][1].chords))]
        return " + ".join(parts) or "0"


def _split_signs(chords, parity):
    """All (sign, left chords, right chords) splittings of a monomial's
    chords into the two tensor slots, with the Koszul sign of the shuffle."""
    k = len(chords)
    for mask in range(1 << k):
        left, right = [], []
        inversions = 0
        for pos in range(k):
            if mask >> pos & 1:
                left.append(chords[pos])
                # count earlier chords already sent right
                inversions += pos - (len(left) - 1)
            else:
                right.append(chords[pos])
        sign = -1 if (parity == ODD and inversions % 2) else 1
        yield sign, tuple(left), tuple(right)


def coproduct(a):
    """Algebra-map coproduct with every generator primitive."""
    out = TensorElement(a.n, a.parity)
    terms = {}
    for mono, c in a.terms.items():
        for sign, left, right in _split_signs(mono.chords, a.parity):
            key = (ChordMonomial(a.n, left), ChordMonomial(a.n, right))
            terms[key] = terms.get(key, Fraction(0)) + sign * c
    return out + TensorElement(a.n, a.parity, terms)


# ----------------------------------------------------------------------
# Rendering
# ----------------------------------------------------------------------

def format_monomial(mono):
    if not mono.chords:
        return "1"
    return "*".join(f"X{i}{j}" for i, j in mono.chords)


def format_element(a):
    if not a.terms:
        return "0"
    parts = []
    for mono in sorted(a.terms, key=lambda m: (m.degree, m.chords)):
        c = a.terms[mono]
        body = format_monomial(mono)
        if c == 1:
            parts.append(body)
        elif c == -1:
            parts.append(f"-{body}")
        elif c.denominator == 1:
            parts.append(f"{c}*{body}")
        else:
            parts.append(f"({c})*{body}")
    text = " + ".join(parts)
    return text.replace("+ -", "- ")
