"""Exact and certified-numeric computation with holomorphic structures on the quantum projective line."""
__version__ = "0.1.0"

from .algebra import (AlgebraElement, Mono, UqWord, act_left, act_partial, act_right, antipode,
                      format_element, grade_decompose, m_grade_decompose, multiply, parse_element, star)
from .calculus import NoPreimage, dbar, del_, graph_norm, integral
from .podles import (B0, Bm, Bp, LineBundleElement, NotHomogeneous, PodlesElement, from_B_polynomial,
                     is_scalar, project_H, psi_infty)
from .representation import (NormEstimate, TruncationParams, graded_op_norm, invertibility_margin,
                             op_norm, quantum_integral_bound, rep_matrix)
from .scalars import SYMBOLIC, DomainError, ExactRing, FloatRing, QScalar, evaluate, qint

__all__ = [
    "AlgebraElement", "Mono", "UqWord", "act_left", "act_partial", "act_right", "antipode",
    "format_element", "grade_decompose", "m_grade_decompose", "multiply", "parse_element", "star",
    "NoPreimage", "dbar", "del_", "graph_norm", "integral", "B0", "Bm", "Bp", "LineBundleElement",
    "NotHomogeneous", "PodlesElement", "from_B_polynomial", "is_scalar", "project_H", "psi_infty",
    "NormEstimate", "TruncationParams", "graded_op_norm", "invertibility_margin", "op_norm",
    "quantum_integral_bound", "rep_matrix", "SYMBOLIC", "DomainError", "ExactRing", "FloatRing",
    "QScalar", "evaluate", "qint",
]
