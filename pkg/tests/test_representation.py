import math
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qdbar.algebra import parse_element, star
from qdbar.podles import B0
from qdbar.representation import (NormEstimate, TruncationParams, graded_op_norm, invertibility_margin,
                                  op_norm, quantum_integral_bound, rep_matrix, weighted_l1)
from qdbar.sampling import random_element
from qdbar.scalars import FloatRing

RING = FloatRing.from_q(0.5)
TR = TruncationParams(N=64, theta_grid=32)
seeds = st.integers(0, 10**6)


def P(text):
    return parse_element(text, RING)


@pytest.mark.parametrize("text,value", [
    ("a", 1.0), ("as", 1.0), ("c", 1.0), ("cs", 1.0), ("B0", 1.0),
    ("a*c", max(0.5 ** n * math.sqrt(1 - 0.25 ** n) for n in range(100))),
    ("3", 3.0),
])
def test_norm_oracles(text, value):
    est = op_norm(P(text), TR)
    assert est.contains(value)
    assert est.width <= 1e-6


def test_M_bound_frozen():
    assert quantum_integral_bound(0.5).M_bound == pytest.approx(6.928203230275509, abs=1e-12)


def test_params_validated():
    with pytest.raises(ValueError):
        TruncationParams(N=2)
    with pytest.raises(ValueError):
        NormEstimate(2.0, 1.0, 8, 1)


def test_symbolic_rejected():
    with pytest.raises(TypeError):
        op_norm(parse_element("a"))


def test_csv_export(tmp_path):
    path = tmp_path / "m.csv"
    rep_matrix(P("a"), 0.0, TruncationParams(N=8)).to_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "row,col,re,im" and len(lines) == 9


def test_invertibility_margin():
    m = invertibility_margin(P("1 + 0.1*B0"), TR)
    assert m.lower == pytest.approx(0.9, abs=1e-9)
    assert m.evidence >= m.lower - 1e-12


def test_graded_norm_requires_homogeneous():
    assert graded_op_norm(P("a*c"), -2, TR).contains(op_norm(P("a*c"), TR).lower)
    with pytest.raises(ValueError):
        graded_op_norm(P("a + c*cs"))


def _rand(seed, length=3):
    return random_element(random.Random(seed), RING, length, 3)


@given(seeds)
def test_star_compression_is_adjoint(seed):
    x = _rand(seed)
    A = rep_matrix(x, 0.3, TR).matrix
    B = rep_matrix(star(x), 0.3, TR).matrix
    assert np.allclose(A.conj().T, B, atol=1e-12)


@given(seeds)
def test_interval_properties(seed):
    x, y = _rand(seed), _rand(seed + 1)
    nx, ny, nxy = op_norm(x, TR), op_norm(y, TR), op_norm(x * y, TR)
    assert nx.lower <= weighted_l1(x) + 1e-12
    assert nxy.lower <= nx.upper * ny.upper + 1e-9
    ns = op_norm(star(x), TR)
    assert ns.lower <= nx.upper + 1e-9 and nx.lower <= ns.upper + 1e-9


@given(seeds)
def test_c_star_identity(seed):
    x = _rand(seed, 2)
    nx, nxx = op_norm(x, TR), op_norm(star(x) * x, TR)
    assert nxx.lower <= nx.upper ** 2 + 1e-9
    assert nx.lower ** 2 <= nxx.upper + 1e-9
