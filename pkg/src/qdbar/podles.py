"""The Podles sphere inside O(SU_q(2)): generators, line bundles, and the character psi_infinity."""
from __future__ import annotations

from dataclasses import dataclass

from .algebra import UNIT, AlgebraElement
from .scalars import SYMBOLIC, Ring


class NotHomogeneous(ValueError):
    """Raised when an element has the wrong U(1) grade."""


def B0(ring: Ring = SYMBOLIC) -> AlgebraElement:
    c, cs = AlgebraElement.gen("c", ring), AlgebraElement.gen("cs", ring)
    return c * cs


def Bm(ring: Ring = SYMBOLIC) -> AlgebraElement:
    return AlgebraElement.gen("a", ring) * AlgebraElement.gen("cs", ring)


def Bp(ring: Ring = SYMBOLIC) -> AlgebraElement:
    return AlgebraElement.gen("c", ring) * AlgebraElement.gen("as", ring)


def require_grade(x: AlgebraElement, n: int, what: str = "element") -> None:
    bad = sorted(g for g in x.grades() if g != n)
    if bad:
        raise NotHomogeneous(f"{what} must have grade {n}; found grades {sorted(x.grades())}")


@dataclass(frozen=True)
class LineBundleElement:
    """Element of the line bundle L_n, validated once at construction."""

    element: AlgebraElement
    grade: int

    def __post_init__(self):
        require_grade(self.element, self.grade)

    def __mul__(self, other: "LineBundleElement") -> "LineBundleElement":
        return LineBundleElement(self.element * other.element, self.grade + other.grade)


class PodlesElement(LineBundleElement):
    def __init__(self, element: AlgebraElement):
        super().__init__(element, 0)


def from_B_polynomial(text: str, ring: Ring = SYMBOLIC) -> AlgebraElement:
    """Evaluate a polynomial in B0, Bp, Bm (and q) inside O(SU_q(2))."""
    from .parsing import parse_expression

    ns = {"B0": B0(), "Bp": Bp(), "Bm": Bm()}
    val = parse_expression(text, ns)
    if not isinstance(val, AlgebraElement):
        val = AlgebraElement.scalar(val)
    return val.specialize(ring)


def psi_infty(x: AlgebraElement):
    """Constant term of a grade 0 element: the character killing the compact part."""
    require_grade(x, 0, "psi_infty argument")
    return x.constant_term()


def is_scalar(x: AlgebraElement) -> bool:
    return all(m == UNIT for m in x.terms)


def project_H(x: AlgebraElement) -> AlgebraElement:
    """x - psi_infty(x), the component in the kernel of psi_infty."""
    require_grade(x, 0, "project_H argument")
    return AlgebraElement({m: c for m, c in x.terms.items() if m != UNIT}, x.ring)
