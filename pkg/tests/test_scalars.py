from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qdbar.scalars import (SYMBOLIC, DomainError, ExactRing, FloatRing, QScalar, evaluate,
                           format_qscalar, parse_qscalar, qint, ring_for)

laurent = st.dictionaries(st.integers(-6, 6), st.fractions(max_denominator=5).filter(bool), max_size=4).map(QScalar)


def test_qint_frozen():
    assert format_qscalar(qint(2)) == "q^(-1) + q"
    assert format_qscalar(qint(3)) == "q^(-2) + 1 + q^2"
    assert qint(1) == QScalar.const(1)


def test_parse_roundtrip():
    assert parse_qscalar("q+q^-1") == qint(2)
    assert parse_qscalar("q^(1/2)") == QScalar.rpow(1)
    assert parse_qscalar("r^2") == QScalar.qpow(1)


def test_exact_div():
    x = QScalar.qpow(1) - QScalar.qpow(-1)
    assert (x * qint(3)).exact_div(x) == qint(3)
    with pytest.raises(ArithmeticError):
        QScalar.const(1).exact_div(qint(2))


def test_evaluate_exact_and_float():
    assert Fraction(evaluate(qint(2), Fraction(1, 2)).value) == Fraction(17, 4)
    assert abs(float(evaluate(qint(2), 0.5)) - 4.25) < 1e-15


def test_ring_embedding():
    assert ExactRing(Fraction(1, 2)).embed(QScalar.rpow(1)) == Fraction(1, 2)
    assert FloatRing.from_q(0.25).embed(QScalar.qpow(1)) == pytest.approx(0.25)
    assert SYMBOLIC.embed(qint(2)) == qint(2)


@pytest.mark.parametrize("r", [0, 1, -1, Fraction(3, 2)])
def test_domain_errors(r):
    with pytest.raises(DomainError):
        ExactRing(Fraction(r))


def test_ring_for_default():
    assert ring_for() is SYMBOLIC


@given(laurent, laurent, laurent)
def test_ring_axioms(x, y, z):
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x
    assert x - x == QScalar()


@given(laurent, laurent)
def test_evaluation_is_homomorphism(x, y):
    r = Fraction(2, 3)
    ev = lambda s: Fraction(evaluate(s, r, exact=True).value)
    assert ev(x * y) == ev(x) * ev(y)
    assert ev(x + y) == ev(x) + ev(y)


@given(laurent)
def test_format_parse_roundtrip(x):
    assert parse_qscalar(format_qscalar(x)) == x
