import pytest

from qdbar.algebra import format_element, parse_element
from qdbar.podles import (B0, Bm, Bp, LineBundleElement, NotHomogeneous, PodlesElement, from_B_polynomial,
                          is_scalar, project_H, psi_infty)
from qdbar.scalars import QScalar


def test_generators_frozen():
    assert format_element(B0()) == "c*cs"
    assert format_element(Bm()) == "a*cs"
    assert format_element(Bp()) == "q*as*c"


def test_products_frozen():
    assert format_element(from_B_polynomial("B0*Bm")) == "q^(-2)*a*c*cs^2"
    assert format_element(from_B_polynomial("Bp*Bm")) == "c*cs - c^2*cs^2"


def test_psi_and_projection():
    x = parse_element("2 + B0")
    assert psi_infty(x) == QScalar.const(2)
    assert format_element(project_H(x)) == "c*cs"
    assert psi_infty(B0()) == QScalar()
    assert is_scalar(parse_element("3")) and not is_scalar(B0())


def test_grade_enforced():
    with pytest.raises(NotHomogeneous):
        psi_infty(parse_element("a"))
    with pytest.raises(NotHomogeneous):
        PodlesElement(parse_element("c"))
    with pytest.raises(NotHomogeneous):
        LineBundleElement(parse_element("a + as"), -1)


def test_line_bundle_product_grades():
    x = LineBundleElement(parse_element("a"), -1) * LineBundleElement(parse_element("cs"), 1)
    assert x.grade == 0
