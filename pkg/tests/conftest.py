from fractions import Fraction

import pytest
from hypothesis import settings

from qdbar.scalars import ExactRing, FloatRing

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture
def exact():
    return ExactRing(Fraction(1, 2))


@pytest.fixture
def flt():
    return FloatRing.from_q(0.5)
