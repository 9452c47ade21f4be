import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qdbar.algebra import format_element, parse_element, star
from qdbar.calculus import NoPreimage, dbar, dbar_block_rank, del_, graph_norm, integral
from qdbar.podles import B0, Bm, Bp, NotHomogeneous, project_H
from qdbar.representation import TruncationParams
from qdbar.sampling import random_element
from qdbar.scalars import SYMBOLIC, ExactRing, FloatRing, QScalar

P = parse_element
seeds = st.integers(0, 10**6)
EXACT = ExactRing(Fraction(1, 2))


def test_dbar_frozen():
    assert format_element(dbar(B0())) == "-q^(-2)*a*c"
    assert format_element(dbar(Bm())) == "-q^(-1)*a^2"
    assert format_element(dbar(Bp())) == "c^2"
    assert format_element(dbar(P("as*c"))) == "q^(-1)*c^2"
    assert format_element(del_(B0())) == "q*as*cs"


def test_integral_frozen():
    assert format_element(integral(P("a*c"))) == "-q^2*c*cs"
    assert format_element(integral(P("q^(-1)*c^2"))) == "as*c"
    assert integral(dbar(B0())) == B0()


def test_integral_requires_grade():
    with pytest.raises(NotHomogeneous):
        integral(P("a*c*c"))


@pytest.mark.parametrize("length", range(0, 9, 2))
def test_blocks_full_rank(length):
    rank, size = dbar_block_rank(SYMBOLIC, length)
    assert rank == size


def test_graph_norm_of_B0():
    g = graph_norm(B0(FloatRing.from_q(0.5)), TruncationParams())
    # |B0| = 1 and |dbar B0| = q^(-2)|ac| = 4 * sqrt(3)/8
    want = 1 + 3 ** 0.5 / 2 * 2
    assert g.lower - 1e-9 <= want <= g.upper + 1e-9 and g.upper - g.lower < 1e-6


@given(seeds)
def test_integral_inverts_dbar_exact(seed):
    x = random_element(random.Random(seed), EXACT, 6, 4, grade=0)
    assert integral(dbar(x)) == project_H(x)


@given(seeds)
def test_integral_inverts_dbar_symbolic(seed):
    x = random_element(random.Random(seed), SYMBOLIC, 4, 3, grade=0)
    assert integral(dbar(x)) == project_H(x)


@given(seeds)
def test_leibniz(seed):
    rng = random.Random(seed)
    x, y = (random_element(rng, EXACT, 4, 3, grade=0) for _ in range(2))
    assert dbar(x * y) == dbar(x) * y + x * dbar(y)
    assert del_(x * y) == del_(x) * y + x * del_(y)


@given(seeds)
def test_conjugation_relation(seed):
    x = random_element(random.Random(seed), SYMBOLIC, 4, 3, grade=0)
    assert star(del_(x)) == dbar(star(x)).scale(QScalar.qpow(2, -1))


@given(seeds)
def test_dbar_kills_scalars_and_integral_is_linear(seed):
    rng = random.Random(seed)
    x, y = (random_element(rng, EXACT, 4, 3, grade=0) for _ in range(2))
    assert dbar(P("5", EXACT)).is_zero()
    assert integral(dbar(x) + dbar(y)) == integral(dbar(x)) + integral(dbar(y))
