import random
from fractions import Fraction

import pytest

from braidweight import (
    AlgebraElement,
    ChordMonomial,
    bracket,
    build_relation_basis,
    canonicalize_generator,
    coproduct,
    dim_quotient,
    normal_form,
    relation_generators,
    symmetric_action,
)
from braidweight.algebra import (
    TensorElement,
    enumerate_monomials,
    format_element,
    koszul_sign,
    strand_pairs,
)
from braidweight.errors import CapacityError

X = AlgebraElement.generator
unit = AlgebraElement.unit


def random_element(rng, n, parity, degree, nterms=4):
    pairs = strand_pairs(n)
    terms = {}
    for _ in range(nterms):
        chords = tuple(rng.choice(pairs) for _ in range(degree))
        terms[ChordMonomial(n, chords)] = Fraction(rng.randint(-4, 4))
    return AlgebraElement(n, parity, terms)


# ---------------------------------------------------------------- generators

def test_canonicalize_generator():
    assert canonicalize_generator(2, 1, 3, "even") == ((1, 2), 1)
    assert canonicalize_generator(2, 1, 3, "odd") == ((1, 2), -1)
    assert canonicalize_generator(1, 2, 3, "odd") == ((1, 2), 1)


def test_canonicalize_generator_rejects_diagonal_and_range():
    with pytest.raises(ValueError):
        canonicalize_generator(2, 2, 3, "even")
    with pytest.raises(ValueError):
        canonicalize_generator(0, 1, 3, "even")
    with pytest.raises(ValueError):
        canonicalize_generator(1, 4, 3, "even")


# ---------------------------------------------------------------- product

def test_multiply_concatenates():
    a = X(3, "even", 1, 2) * X(3, "even", 1, 3)
    assert a.terms == {ChordMonomial(3, ((1, 2), (1, 3))): Fraction(1)}


def test_unit_is_identity():
    rng = random.Random(7)
    a = random_element(rng, 3, "even", 2)
    assert unit(3, "even") * a == a
    assert a * unit(3, "even") == a


def test_multiply_bilinear():
    a = (X(3, "even", 1, 2) + X(3, "even", 1, 3)) * X(3, "even", 2, 3)
    expected = X(3, "even", 1, 2) * X(3, "even", 2, 3) \
        + X(3, "even", 1, 3) * X(3, "even", 2, 3)
    assert a == expected


def test_multiply_associative_random():
    rng = random.Random(11)
    for _ in range(20):
        a = random_element(rng, 3, "odd", rng.randint(0, 2))
        b = random_element(rng, 3, "odd", rng.randint(0, 2))
        c = random_element(rng, 3, "odd", rng.randint(0, 2))
        assert (a * b) * c == a * (b * c)


def test_multiply_rejects_mismatch():
    with pytest.raises(ValueError):
        X(3, "even", 1, 2) * X(4, "even", 1, 2)
    with pytest.raises(ValueError):
        X(3, "even", 1, 2) * X(3, "odd", 1, 2)


# ---------------------------------------------------------------- bracket

def test_bracket_even_self_commutator_vanishes():
    a = X(3, "even", 1, 2)
    assert bracket(a, a).is_zero()


def test_bracket_odd_self_bracket_doubles():
    a = X(2, "odd", 1, 2)
    sq = ChordMonomial(2, ((1, 2), (1, 2)))
    assert bracket(a, a).terms == {sq: Fraction(2)}


def test_bracket_graded_antisymmetry_and_jacobi():
    rng = random.Random(5)
    for parity in ("even", "odd"):
        for _ in range(15):
            p, q, r = (rng.randint(1, 2) for _ in range(3))
            a = random_element(rng, 3, parity, p, 3)
            b = random_element(rng, 3, parity, q, 3)
            c = random_element(rng, 3, parity, r, 3)
            s = koszul_sign(parity, p, q)
            assert bracket(a, b) == (-s) * bracket(b, a)
            # graded Jacobi: [a,[b,c]] = [[a,b],c] + (-1)^{pq} [b,[a,c]]
            lhs = bracket(a, bracket(b, c))
            rhs = bracket(bracket(a, b), c) + s * bracket(b, bracket(a, c))
            assert lhs == rhs


def test_bracket_rejects_inhomogeneous():
    a = X(3, "even", 1, 2) + unit(3, "even")
    with pytest.raises(ValueError):
        bracket(a, a)


# ---------------------------------------------------------------- relations

def test_relation_generators_n2_empty():
    assert relation_generators(2, "even") == []
    assert relation_generators(2, "odd") == []


def test_relation_generators_n3_rank_two():
    from braidweight.linalg import rank_of
    monos = {m.chords: i for i, m in enumerate(enumerate_monomials(3, 2))}
    rows = [{monos[m.chords]: int(c) for m, c in r.terms.items()}
            for r in relation_generators(3, "even")]
    assert len(rows) == 2
    assert rank_of(rows) == 2


def test_relation_generators_n4_rank_eleven():
    from braidweight.linalg import rank_of
    monos = {m.chords: i for i, m in enumerate(enumerate_monomials(4, 2))}
    gens = relation_generators(4, "even")
    assert len(gens) == 8 + 3
    rows = [{monos[m.chords]: int(c) for m, c in r.terms.items()} for r in gens]
    assert rank_of(rows) == 11


# ---------------------------------------------------------------- basis & dims

def test_basis_n2_polynomial_algebra():
    basis = build_relation_basis(2, "even", 5)
    assert basis.rank == 0
    assert len(basis.quotient) == 1


def test_basis_n3_k2():
    basis = build_relation_basis(3, "even", 2)
    assert basis.rank == 2
    assert len(basis.quotient) == 7


def test_basis_n3_k3():
    assert dim_quotient(3, "even", 3) == 15


def test_dims_table():
    assert [dim_quotient(3, "even", k) for k in range(4)] == [1, 3, 7, 15]
    assert [dim_quotient(4, "even", k) for k in range(3)] == [1, 6, 25]
    for parity in ("even", "odd"):
        assert all(dim_quotient(2, parity, k) == 1 for k in range(7))


def test_capacity_guard():
    with pytest.raises(CapacityError) as err:
        build_relation_basis(6, "even", 9, ceiling=1000)
    assert "1000" in str(err.value)


# ---------------------------------------------------------------- normal form

def test_normal_form_kills_defining_relations():
    r = bracket(X(3, "even", 1, 2), X(3, "even", 1, 3) + X(3, "even", 2, 3))
    assert normal_form(r).is_zero()
    d = bracket(X(4, "even", 1, 2), X(4, "even", 3, 4))
    assert normal_form(d).is_zero()


def test_normal_form_fixes_n2():
    a = X(2, "even", 1, 2) * X(2, "even", 1, 2)
    assert normal_form(a) == a


def test_normal_form_idempotent_linear():
    rng = random.Random(23)
    for parity in ("even", "odd"):
        for _ in range(10):
            a = random_element(rng, 3, parity, rng.randint(1, 3))
            b = random_element(rng, 3, parity, a.degrees()[0] if a.degrees() else 1)
            nf = normal_form(a)
            assert normal_form(nf) == nf
            assert normal_form(a + b) == normal_form(a) + normal_form(b)


def test_normal_form_kills_random_padded_products():
    rng = random.Random(31)
    for parity in ("even", "odd"):
        gens = relation_generators(4, parity)
        pairs = strand_pairs(4)
        for _ in range(50):
            r = rng.choice(gens)
            d1 = rng.randint(0, 2)
            d2 = rng.randint(0, 2 - d1)
            m1 = AlgebraElement(4, parity, {
                ChordMonomial(4, tuple(rng.choice(pairs) for _ in range(d1))): 1})
            m2 = AlgebraElement(4, parity, {
                ChordMonomial(4, tuple(rng.choice(pairs) for _ in range(d2))): 1})
            assert normal_form(m1 * r * m2).is_zero()


def test_quotient_dims_match_oracle_small():
    from _oracle import brute_force_quotient_dim
    for parity in ("even", "odd"):
        for n in (2, 3):
            for k in range(4):
                assert dim_quotient(n, parity, k) == \
                    brute_force_quotient_dim(n, parity, k), (n, parity, k)


# ---------------------------------------------------------------- coproduct

def test_coproduct_primitive_generator():
    a = X(3, "even", 1, 2)
    delta = coproduct(a)
    one = ChordMonomial(3, ())
    x12 = ChordMonomial(3, ((1, 2),))
    assert delta.terms == {(x12, one): Fraction(1), (one, x12): Fraction(1)}


def test_coproduct_unit():
    delta = coproduct(unit(3, "even"))
    one = ChordMonomial(3, ())
    assert delta.terms == {(one, one): Fraction(1)}


def test_coproduct_of_product_of_primitives():
    for parity, midsign in (("even", 1), ("odd", -1)):
        a = X(3, parity, 1, 2) * X(3, parity, 1, 3)
        delta = coproduct(a)
        one = ChordMonomial(3, ())
        x12 = ChordMonomial(3, ((1, 2),))
        x13 = ChordMonomial(3, ((1, 3),))
        both = ChordMonomial(3, ((1, 2), (1, 3)))
        assert delta.terms == {
            (both, one): Fraction(1),
            (x12, x13): Fraction(1),
            (x13, x12): Fraction(midsign),
            (one, both): Fraction(1),
        }


def _triple_left(delta, n, parity):
    """Apply the coproduct to the left tensor slot."""
    out = {}
    for (a, b), c in delta.terms.items():
        inner = coproduct(AlgebraElement(n, parity, {a: c}))
        for (a1, a2), c2 in inner.terms.items():
            key = (a1, a2, b)
            out[key] = out.get(key, Fraction(0)) + c2
    return {k: v for k, v in out.items() if v}


def _triple_right(delta, n, parity):
    out = {}
    for (a, b), c in delta.terms.items():
        inner = coproduct(AlgebraElement(n, parity, {b: c}))
        for (b1, b2), c2 in inner.terms.items():
            key = (a, b1, b2)
            out[key] = out.get(key, Fraction(0)) + c2
    return {k: v for k, v in out.items() if v}


def test_coproduct_coassociative_and_counit():
    rng = random.Random(41)
    one = ChordMonomial(3, ())
    for parity in ("even", "odd"):
        for _ in range(15):
            a = random_element(rng, 3, parity, rng.randint(0, 3))
            delta = coproduct(a)
            assert _triple_left(delta, 3, parity) == _triple_right(delta, 3, parity)
            # counit axiom: (eps x id) Delta = id
            left = {}
            for (u, v), c in delta.terms.items():
                if u == one:
                    left[v] = left.get(v, Fraction(0)) + c
            assert AlgebraElement(3, parity, left) == a


def test_coproduct_is_algebra_map():
    rng = random.Random(43)
    for parity in ("even", "odd"):
        for _ in range(15):
            a = random_element(rng, 3, parity, rng.randint(0, 2), 3)
            b = random_element(rng, 3, parity, rng.randint(0, 2), 3)
            assert coproduct(a * b) == coproduct(a) * coproduct(b)


# ---------------------------------------------------------------- S_n action

def test_symmetric_action_examples():
    swap23 = {1: 1, 2: 3, 3: 2}
    assert symmetric_action(swap23, X(3, "even", 1, 2)) == X(3, "even", 1, 3)
    swap12 = {1: 2, 2: 1, 3: 3}
    assert symmetric_action(swap12, X(3, "even", 1, 2)) == X(3, "even", 1, 2)
    assert symmetric_action(swap12, X(3, "odd", 1, 2)) == (-1) * X(3, "odd", 1, 2)


def test_symmetric_action_rejects_bad_permutation():
    with pytest.raises(ValueError):
        symmetric_action({1: 1, 2: 1, 3: 3}, X(3, "even", 1, 2))


def test_symmetric_action_is_homomorphism_and_commutes_with_nf():
    rng = random.Random(59)
    for parity in ("even", "odd"):
        for _ in range(10):
            perm1 = list(range(1, 4))
            perm2 = list(range(1, 4))
            rng.shuffle(perm1)
            rng.shuffle(perm2)
            s1 = {i + 1: v for i, v in enumerate(perm1)}
            s2 = {i + 1: v for i, v in enumerate(perm2)}
            comp = {i: s1[s2[i]] for i in s2}
            a = random_element(rng, 3, parity, rng.randint(1, 3))
            assert symmetric_action(comp, a) == \
                symmetric_action(s1, symmetric_action(s2, a))
            # the action preserves the ideal, so it descends to the quotient
            # (the fixed lex quotient basis itself is not S_n-equivariant)
            assert normal_form(symmetric_action(s1, a)) == \
                normal_form(symmetric_action(s1, normal_form(a)))
            assert symmetric_action(s1, a * a) == \
                symmetric_action(s1, a) * symmetric_action(s1, a)


# ---------------------------------------------------------------- rendering

def test_format_element():
    a = X(3, "even", 1, 2) - 2 * X(3, "even", 1, 3)
    assert format_element(a) == "X12 - 2*X13"
    assert format_element(AlgebraElement.zero(3, "even")) == "0"
