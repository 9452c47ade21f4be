import pytest

from qdbar.algebra import parse_element
from qdbar.parsing import ParseError, parse_expression
from qdbar.scalars import QScalar, qint


def test_arithmetic():
    assert parse_expression("(q + 1/q)", {}) == qint(2)
    assert parse_expression("2*q^(-1/2)", {}) == QScalar.rpow(-1, 2)


@pytest.mark.parametrize("text,pos", [("", 0), ("q +", 3), ("(q", 2), ("q ** 2", 3)])
def test_errors_have_positions(text, pos):
    with pytest.raises(ParseError) as info:
        parse_expression(text, {})
    assert info.value.pos == pos


def test_unknown_name():
    with pytest.raises(ParseError):
        parse_element("a*b")
