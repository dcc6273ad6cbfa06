import pytest

from gorhom.polyparse import (NotHomogeneousError, ParseError, Polynomial, UnknownIdentifierError,
                              monomial_str, monomials_of_degree, parse, serialize)
from gorhom.scalar import GF, QQ

NAMES = ["x1", "x2", "x3"]


def test_parse_alpha_substitution():
    p = parse("a*x1*x3 + x2*x3", NAMES, QQ, alpha=QQ(2))
    assert p.terms == {(1, 0, 1): 2, (0, 1, 1): 1}
    assert p.is_homogeneous()


def test_parameter_exponents():
    p = parse("a^i*x3", NAMES, QQ, alpha=QQ(2), params={"i": -2})
    assert p.terms == {(0, 0, 1): QQ("1/4")}
    p = parse("x1 - a^(q-1)*x3", NAMES, GF(5), alpha=GF(5)(2), params={"q": 3})
    assert p.terms[(0, 0, 1)] == GF(5)(-4)


def test_leading_term_revlex():
    p = parse("x1*x3 + x2*x3", NAMES, QQ)
    assert p.leading()[0] == (0, 1, 1)


def test_errors_carry_positions():
    with pytest.raises(UnknownIdentifierError):
        parse("x1 + y", NAMES, QQ)
    with pytest.raises(NotHomogeneousError):
        parse("x1^2 + x2", NAMES, QQ, homogeneous=True)
    with pytest.raises(ParseError) as e:
        parse("x1 + * x2", NAMES, QQ)
    assert e.value.pos is not None
    with pytest.raises(ParseError):
        parse("x1^-1", NAMES, QQ)
    with pytest.raises(ParseError):
        parse("a*x1", NAMES, QQ)  # no value for a


def test_roundtrip_serialize():
    p = parse("3*x1^2*x2 - 1/2*x3^3 + x2^3", NAMES, QQ)
    assert parse(serialize(p), NAMES, QQ) == p


def test_arithmetic():
    f = QQ
    x = Polynomial.variable(f, NAMES, 0)
    y = Polynomial.variable(f, NAMES, 1)
    assert (x + y) ** 2 == x * x + 2 * x * y + y * y
    assert (x - x).is_zero()


def test_monomials_of_degree():
    assert len(monomials_of_degree(5, 2)) == 15
    assert monomial_str((1, 0, 2), NAMES) == "x1*x3^2"
    assert monomial_str((0, 0, 0), NAMES) == "1"
