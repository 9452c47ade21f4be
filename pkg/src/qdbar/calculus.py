"""Holomorphic and anti-holomorphic differentials on line bundles and the quantum integral.

A (0,1)-form is stored as its grade -2 coefficient (the frame form is dropped);
``dbar`` sends grade n to grade n-2 and ``del_`` sends grade n to n+2.

The integral inverts ``dbar`` on grade 0 elements with zero constant term.  Because
F|> never lengthens a normal word, the matrix of ``dbar`` is block upper triangular
by word length with square diagonal blocks, so the solve runs block by block from
the longest words down.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .algebra import AlgebraElement, Mono, act_left, monomials
from .podles import NotHomogeneous, require_grade
from .scalars import QScalar, Ring


class NoPreimage(ArithmeticError):
    """The form is not dbar of a polynomial of the allowed word length."""


def dbar(x: AlgebraElement) -> AlgebraElement:
    """q^(-1/2) F|>x."""
    return act_left("F", x).scale(x.ring.embed(QScalar.rpow(-1)))


def del_(x: AlgebraElement) -> AlgebraElement:
    """q^(1/2) E|>x."""
    return act_left("E", x).scale(x.ring.embed(QScalar.rpow(1)))


# ---------------------------------------------------------------------------
# block solver


@lru_cache(maxsize=None)
def _block_basis(length: int) -> tuple[tuple[Mono, ...], tuple[Mono, ...]]:
    src = tuple(m for m in monomials(length, 0) if m.length == length)
    dst = tuple(m for m in monomials(length, -2) if m.length == length)
    return src, dst


def _block_matrix(ring: Ring, length: int) -> list[list]:
    src, dst = _block_basis(length)
    row = {m: i for i, m in enumerate(dst)}
    mat = [[ring.zero] * len(src) for _ in dst]
    for j, m in enumerate(src):
        for mm, c in dbar(AlgebraElement.from_mono(m, 1, ring)).terms.items():
            if mm.length == length:
                mat[row[mm]][j] = c
    return mat


def _gauss_jordan_inverse(mat: list[list[Fraction]]) -> list[list[Fraction]] | None:
    n = len(mat)
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(mat)]
    for k in range(n):
        piv = next((i for i in range(k, n) if aug[i][k] != 0), None)
        if piv is None:
            return None
        aug[k], aug[piv] = aug[piv], aug[k]
        p = aug[k][k]
        aug[k] = [v / p for v in aug[k]]
        for i in range(n):
            if i != k and aug[i][k] != 0:
                f = aug[i][k]
                aug[i] = [v - f * w for v, w in zip(aug[i], aug[k])]
    return [r[n:] for r in aug]


def _bareiss_adjugate(mat: list[list[QScalar]]) -> tuple[list[list[QScalar]], QScalar] | None:
    """Fraction-free Gauss-Jordan on [A | I]; returns (d * A^-1, d) with d = +-det A."""
    n = len(mat)
    one, zero = QScalar.const(1), QScalar()
    aug = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(mat)]
    prev = one
    for k in range(n):
        piv = next((i for i in range(k, n) if not aug[i][k].is_zero()), None)
        if piv is None:
            return None
        aug[k], aug[piv] = aug[piv], aug[k]
        pk = aug[k][k]
        for i in range(n):
            if i == k:
                continue
            f = aug[i][k]
            aug[i] = [(pk * v - f * w).exact_div(prev) for v, w in zip(aug[i], aug[k])]
        prev = pk
    return [r[n:] for r in aug], prev


_BLOCK_SOLVERS: dict = {}


def _block_solver(ring: Ring, length: int):
    key = (ring, length)
    hit = _BLOCK_SOLVERS.get(key)
    if hit is not None:
        return hit
    mat = _block_matrix(ring, length)
    if ring.kind == "exact":
        inv = _gauss_jordan_inverse(mat)
        solver = None if inv is None else ("exact", inv)
    elif ring.kind == "float":
        arr = np.array(mat, dtype=float)
        if np.linalg.matrix_rank(arr) < arr.shape[0]:
            solver = None
        else:
            solver = ("float", np.linalg.inv(arr))
    else:
        res = _bareiss_adjugate(mat)
        solver = None if res is None else ("symbolic", res)
    _BLOCK_SOLVERS[key] = solver
    return solver


def dbar_block_rank(ring: Ring, length: int) -> tuple[int, int]:
    """(rank, size) of the diagonal block at a given even word length."""
    mat = _block_matrix(ring, length)
    if ring.kind == "symbolic":
        return (len(mat) if _bareiss_adjugate(mat) is not None else -1), len(mat)
    if ring.kind == "exact":
        return (len(mat) if _gauss_jordan_inverse(mat) is not None else -1), len(mat)
    return int(np.linalg.matrix_rank(np.array(mat, dtype=float))), len(mat)


def _solve_block(ring: Ring, length: int, rhs: dict[Mono, object]) -> AlgebraElement:
    src, dst = _block_basis(length)
    solver = _block_solver(ring, length)
    if solver is None:
        raise NoPreimage(f"dbar is singular on grade 0 words of length {length}")
    b = [rhs.get(m, ring.zero) for m in dst]
    kind, data = solver
    if kind == "exact":
        x = [sum((r * v for r, v in zip(row, b)), Fraction(0)) for row in data]
    elif kind == "float":
        x = list(data @ np.array(b, dtype=complex if any(isinstance(v, complex) for v in b) else float))
        x = [complex(v) if isinstance(v, complex) else float(v) for v in x]
        x = [v.real if isinstance(v, complex) and v.imag == 0 else v for v in x]
    else:
        adj, det = data
        x = []
        for row in adj:
            num = QScalar()
            for r, v in zip(row, b):
                num = num + r * v
            try:
                x.append(num.exact_div(det))
            except ArithmeticError as exc:
                raise NoPreimage("preimage has coefficients outside Laurent polynomials in q^(1/2)") from exc
    return AlgebraElement(dict(zip(src, x)), ring)


def integral(omega: AlgebraElement, degree_cap: int | None = None) -> AlgebraElement:
    """The unique x with dbar(x) = omega and zero constant term.

    ``degree_cap`` bounds the word length of the preimage; it is raised to the word
    length of ``omega`` when smaller (dbar never lengthens words).
    """
    require_grade(omega, -2, "integral argument")
    ring = omega.ring
    cap = max(degree_cap or 0, omega.word_length())
    x = AlgebraElement.zero(ring)
    residual = omega
    while not residual.is_zero():
        length = residual.word_length()
        if length > cap:
            raise NoPreimage(f"residual of word length {length} exceeds cap {cap}")
        top = {m: c for m, c in residual.terms.items() if m.length == length}
        piece = _solve_block(ring, length, top)
        x = x + piece
        residual = residual - dbar(piece)
        # the top block is cancelled exactly up to rounding in float mode
        residual = AlgebraElement({m: c for m, c in residual.terms.items() if m.length < length}, ring)
    if ring.kind != "float" and dbar(x) != omega:
        raise NoPreimage("integral failed its dbar check")
    return x


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GraphNormed:
    element: AlgebraElement
    norm_S: "object"
    norm_dbar: "object"

    @property
    def lower(self) -> float:
        return self.norm_S.lower + self.norm_dbar.lower

    @property
    def upper(self) -> float:
        return self.norm_S.upper + self.norm_dbar.upper

    def to_dict(self) -> dict:
        return {"S": self.norm_S.to_dict(), "dbar": self.norm_dbar.to_dict(),
                "Gr": {"lower": self.lower, "upper": self.upper}}


def graph_norm(x: AlgebraElement, trunc=None) -> GraphNormed:
    """||x||_S + ||dbar x||_op, each as a certified interval."""
    from .representation import TruncationParams, op_norm

    require_grade(x, 0, "graph_norm argument")
    trunc = trunc or TruncationParams()
    return GraphNormed(x, op_norm(x, trunc), op_norm(dbar(x), trunc))


__all__ = ["dbar", "del_", "integral", "graph_norm", "GraphNormed", "NoPreimage",
           "NotHomogeneous", "dbar_block_rank"]
