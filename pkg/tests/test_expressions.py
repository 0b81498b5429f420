from fractions import Fraction

import pytest

from braidweight.algebra import AlgebraElement, bracket, normal_form
from braidweight.decorated import DecoratedElement, commutator, parse_word
from braidweight.expressions import parse_decorated_element, parse_element

X = AlgebraElement.generator


def test_parse_generator_and_products():
    assert parse_element("X12", 3, "even") == X(3, "even", 1, 2)
    assert parse_element("X12*X13", 3, "even") == X(3, "even", 1, 2) * X(3, "even", 1, 3)


def test_parse_sums_scalars_rationals():
    a = parse_element("2*X12 - X13 + 1/2*X23", 3, "even")
    expected = 2 * X(3, "even", 1, 2) - X(3, "even", 1, 3) \
        + Fraction(1, 2) * X(3, "even", 2, 3)
    assert a == expected
    assert parse_element("3", 3, "even") == 3 * AlgebraElement.unit(3, "even")


def test_parse_brackets_and_parens():
    a = parse_element("[X12, X13+X23]", 3, "even")
    assert a == bracket(X(3, "even", 1, 2), X(3, "even", 1, 3) + X(3, "even", 2, 3))
    b = parse_element("-(X12 + X13)*X23", 3, "even")
    assert b == (-1) * ((X(3, "even", 1, 2) + X(3, "even", 1, 3)) * X(3, "even", 2, 3))


def test_parse_flip_uses_parity():
    assert parse_element("X21", 3, "odd") == (-1) * X(3, "odd", 1, 2)
    assert parse_element("X21", 3, "even") == X(3, "even", 1, 2)


def test_nf_of_parsed_relation_is_zero():
    assert normal_form(parse_element("[X12, X13+X23]", 3, "even")).is_zero()
    assert normal_form(parse_element("[X12, X34]", 4, "even")).is_zero()


def test_parse_errors_report_position():
    with pytest.raises(ValueError, match="position 5"):
        parse_element("X12 ++ X13", 3, "even")
    with pytest.raises(ValueError, match="position"):
        parse_element("X1", 3, "even")
    with pytest.raises(ValueError, match="position"):
        parse_element("[X12, X13", 3, "even")
    with pytest.raises(ValueError, match="position"):
        parse_element("X12:ab", 3, "even")  # decoration in plain mode
    with pytest.raises(ValueError, match="position"):
        parse_element("X44", 3, "even")  # out of range


def test_parse_decorated():
    a = parse_decorated_element("X12:ab", 3, 2)
    assert a == DecoratedElement.generator(3, 2, 1, 2, parse_word("ab"))
    b = parse_decorated_element("[X12:a, X23:A + X13]", 3, 1)
    g = DecoratedElement.generator
    expected = commutator(
        g(3, 1, 1, 2, (1,)), g(3, 1, 2, 3, (-1,)) + g(3, 1, 1, 3, ()))
    assert b == expected
    # flip inverts the word
    assert parse_decorated_element("X21:a", 3, 1) == g(3, 1, 1, 2, (-1,))
