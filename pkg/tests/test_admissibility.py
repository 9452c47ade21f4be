import numpy as np
import pytest

from qdbar.admissibility import (absorption_check, range_model, scaled_family, separating_functional,
                                 separating_functional_trace)
from qdbar.algebra import AlgebraElement, parse_element
from qdbar.gauge import GaugePair, L_apply, beta
from qdbar.podles import B0
from qdbar.scalars import FloatRing

RING = FloatRing.from_q(0.5)


def P(text):
    return parse_element(text, RING)


@pytest.fixture(scope="module")
def strong_pair():
    return GaugePair(P("0"), P("3*B0 + 2*B0*B0"))


def test_functional_annihilates_range(strong_pair):
    sf = separating_functional(strong_pair, 6)
    if sf is None:
        pytest.skip("beta lies in the truncated range at this cap")
    model = range_model(strong_pair, 6)
    assert np.abs(sf.vector.conj() @ model.basis).max() <= 1e-10
    assert abs(sf.value) == pytest.approx(sf.margin, rel=1e-10)
    assert abs(sf(beta(strong_pair))) == pytest.approx(sf.margin, rel=1e-10)
    for m in model.system.basis[:10]:
        img = L_apply(model.system.pair, AlgebraElement.from_mono(m, 1, RING))
        assert abs(sf(img)) <= 1e-9


def test_small_pair_is_not_separated():
    pair = GaugePair(P("0"), P("0.01*B0"))
    assert separating_functional(pair, 8) is None
    trace = separating_functional_trace(pair, 8)
    assert trace.verdict == "not-separable-at-cap" and trace.caps == [8, 10]


def test_scalar_difference_rejected():
    with pytest.raises(ValueError):
        separating_functional(GaugePair(P("B0"), P("B0 + 1")), 6)


def test_absorption_structure():
    out = absorption_check(B0(RING), 4)
    assert out["caps"] == [4, 6]
    assert len(out["A1"]) == len(out["A2"]) == 2
    assert out["verdict"] in {"holds-at-cap", "fails-at-cap"}
    with pytest.raises(ValueError):
        absorption_check(P("2"), 4)


def test_scaled_family(tmp_path):
    mat = scaled_family(B0(RING), [0.5, 1.0, 2.0], 4)
    m = mat.margins()
    assert np.isnan(np.diag(m)).all()
    assert np.all(m[~np.isnan(m)] >= 0)
    path = tmp_path / "ev.csv"
    mat.to_csv(path)
    assert path.read_text().splitlines()[0] == "alpha_i,alpha_j,margin,verdict"
    with pytest.raises(ValueError):
        scaled_family(B0(RING), [1.0, 1.0], 4)


def test_range_model_distance_zero_on_images():
    pair = GaugePair(P("0"), P("B0"))
    model = range_model(pair, 4)
    img = L_apply(model.system.pair, B0(RING) * B0(RING))
    assert model.distance(model.system.vector(img)) <= 1e-10
