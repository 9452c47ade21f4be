"""Weighted-shift model of C(SU_q(2)) and certified operator-norm intervals.

On l^2(N) with basis e_n and a phase theta::

    a e_n  = sqrt(1 - q^(2n)) e_(n-1)        as e_n = sqrt(1 - q^(2n+2)) e_(n+1)
    c e_n  = e^(i theta) q^n e_n            cs e_n = e^(-i theta) q^n e_n

The C*-norm is the supremum over theta of the operator norm.  Lower bounds come
from the compression to e_0..e_N on a theta grid; upper bounds add a Lipschitz
correction in theta and an explicit bound on what the compression discards.
"""
from __future__ import annotations

import csv
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .algebra import AlgebraElement, Mono
from .scalars import integral_bound


@dataclass(frozen=True)
class TruncationParams:
    N: int = 64
    theta_grid: int = 16
    degree_cap: int = 12
    tol: float = 1e-10

    def __post_init__(self):
        if self.N < 8:
            raise ValueError("N must be at least 8")
        if self.theta_grid < 1:
            raise ValueError("theta_grid must be at least 1")
        if not self.tol > 0:
            raise ValueError("tol must be positive")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class NormEstimate:
    lower: float
    upper: float
    N: int
    theta_grid: int
    method: str = "shift-model"
    evidence: float | None = None

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError(f"lower bound {self.lower} exceeds upper bound {self.upper}")

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, value: float, slack: float = 0.0) -> bool:
        return self.lower - slack <= value <= self.upper + slack

    def to_dict(self) -> dict:
        out = {"lower": self.lower, "upper": self.upper, "N": self.N, "grid": self.theta_grid}
        if self.evidence is not None:
            out["evidence"] = self.evidence
        return out


@dataclass(frozen=True)
class QuantumIntegralBound:
    q: float
    M_bound: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "M_bound", integral_bound(self.q))


@dataclass(frozen=True)
class OperatorMatrix:
    matrix: np.ndarray
    theta: float
    bandwidth: int

    @property
    def N(self) -> int:
        return self.matrix.shape[0] - 1

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["row", "col", "re", "im"])
            rows, cols = np.nonzero(self.matrix)
            for i, j in zip(rows, cols):
                v = self.matrix[i, j]
                w.writerow([i, j, repr(float(v.real)), repr(float(v.imag))])


def mono_norm_bound(m: Mono, q: float) -> float:
    """Upper bound on the norm of a monomial: a^i c^j cs^k vanishes on e_n for n < i."""
    if m.star or m.i == 0:
        return 1.0
    return q ** (m.i * (m.j + m.k))


def weighted_l1(x: AlgebraElement) -> float:
    """Sum of |c| times the monomial norm bound; an upper bound on the C*-norm."""
    q = _q_of(x)
    return float(sum(abs(x.ring.to_complex(c)) * mono_norm_bound(m, q) for m, c in x.terms.items()))


def _q_of(x: AlgebraElement) -> float:
    if x.ring.kind == "symbolic":
        raise TypeError("norms need a numeric q; specialize the element to an exact or float ring")
    return float(x.ring.q_value())


def _mono_matrix(m: Mono, q: float, N: int) -> np.ndarray:
    """Compression of the monomial at theta = 0."""
    n = np.arange(N + 1)
    diag = q ** (n * (m.j + m.k)) if (m.j + m.k) else np.ones(N + 1)
    out = np.zeros((N + 1, N + 1))
    if m.i == 0:
        out[n, n] = diag
        return out
    if not m.star:
        w = np.ones(N + 1)
        for t in range(m.i):
            w = w * np.sqrt(np.clip(1.0 - q ** (2 * (n - t)), 0.0, None))
        cols = n[n >= m.i]
        out[cols - m.i, cols] = (w * diag)[cols]
        return out
    w = np.ones(N + 1)
    for t in range(1, m.i + 1):
        w = w * np.sqrt(1.0 - q ** (2 * (n + t)))
    cols = n[n + m.i <= N]
    out[cols + m.i, cols] = (w * diag)[cols]
    return out


def _phase_blocks(x: AlgebraElement, q: float, N: int) -> dict[int, np.ndarray]:
    """T(theta) = sum_p e^(i p theta) A_p with p = j - k."""
    blocks: dict[int, np.ndarray] = {}
    for m, c in x.terms.items():
        p = m.j - m.k
        term = complex(x.ring.to_complex(c)) * _mono_matrix(m, q, N)
        blocks[p] = blocks[p] + term if p in blocks else term.astype(complex)
    return blocks


def rep_matrix(x: AlgebraElement, theta: float = 0.0, trunc: TruncationParams | None = None) -> OperatorMatrix:
    trunc = trunc or TruncationParams()
    q = _q_of(x)
    mat = np.zeros((trunc.N + 1, trunc.N + 1), dtype=complex)
    for p, a in _phase_blocks(x, q, trunc.N).items():
        mat += np.exp(1j * p * theta) * a
    band = max((m.i for m in x.terms), default=0)
    return OperatorMatrix(mat, theta, band)


def _grid(G: int) -> np.ndarray:
    return 2 * math.pi * np.arange(G) / G


def _stack(x: AlgebraElement, trunc: TruncationParams, thetas) -> np.ndarray:
    q = _q_of(x)
    blocks = _phase_blocks(x, q, trunc.N)
    out = np.zeros((len(thetas), trunc.N + 1, trunc.N + 1), dtype=complex)
    for p, a in blocks.items():
        out += np.exp(1j * p * np.asarray(thetas))[:, None, None] * a[None]
    return out


def _theta_independent(x: AlgebraElement) -> bool:
    # homogeneous elements are conjugated by diag(e^(i n theta)) as theta varies
    return x.is_homogeneous()


def _tail_bound(x: AlgebraElement, q: float, N: int) -> float:
    """Bound on ||T - P T P|| summed over monomials."""
    total = 0.0
    for m, c in x.terms.items():
        s = m.j + m.k
        if s == 0:
            sup = 1.0 if m.i > 0 else 0.0
        else:
            start = N + 1 - m.i if m.star else N + 1
            sup = q ** (max(start, 0) * s)
        total += abs(x.ring.to_complex(c)) * sup
    return total


def _lipschitz(x: AlgebraElement) -> float:
    return sum(abs(x.ring.to_complex(c)) * abs(m.j - m.k) for m, c in x.terms.items())


def op_norm(x: AlgebraElement, trunc: TruncationParams | None = None) -> NormEstimate:
    """Certified interval for the C*-norm of x."""
    trunc = trunc or TruncationParams()
    if x.is_zero():
        return NormEstimate(0.0, 0.0, trunc.N, trunc.theta_grid, "zero")
    q = _q_of(x)
    if _theta_independent(x):
        thetas, corr = np.zeros(1), 0.0
    else:
        thetas, corr = _grid(trunc.theta_grid), math.pi / trunc.theta_grid * _lipschitz(x)
    sv = np.linalg.svd(_stack(x, trunc, thetas), compute_uv=False)
    lower = float(sv[:, 0].max())
    upper = lower + corr + _tail_bound(x, q, trunc.N)
    # singular values carry rounding of order eps * size * scale
    rounding = 8 * (trunc.N + 1) * np.finfo(float).eps * lower
    upper = min(upper, weighted_l1(x)) + rounding
    lower = max(0.0, lower - rounding)
    return NormEstimate(lower, upper, trunc.N, trunc.theta_grid, "shift-model")


def graded_op_norm(omega: AlgebraElement, source_grade: int = 0,
                   trunc: TruncationParams | None = None) -> NormEstimate:
    """Norm of a homogeneous form coefficient as a multiplication operator.

    Every vector of the shift model carries the same grade structure, so the
    compression used for the lower bound already respects the source grade.
    """
    if not omega.is_homogeneous():
        raise ValueError("graded_op_norm needs a homogeneous element")
    est = op_norm(omega, trunc)
    return NormEstimate(est.lower, est.upper, est.N, est.theta_grid, f"graded:{source_grade}")


def invertibility_margin(x: AlgebraElement, trunc: TruncationParams | None = None) -> NormEstimate:
    """Lower bound on the smallest singular value of x.

    ``lower`` is the sound Neumann bound |s| - ||x - s|| with s the constant term;
    ``evidence`` is the smallest compressed singular value over the theta grid, which
    is reported as invertibility evidence only.
    """
    trunc = trunc or TruncationParams()
    ring = x.ring
    s = abs(ring.to_complex(x.constant_term())) if not x.is_zero() else 0.0
    rest = AlgebraElement({m: c for m, c in x.terms.items() if not m.is_unit()}, ring)
    neumann = max(0.0, s - op_norm(rest, trunc).upper)
    if x.is_zero():
        evidence = 0.0
    else:
        thetas = np.zeros(1) if _theta_independent(x) else _grid(trunc.theta_grid)
        sv = np.linalg.svd(_stack(x, trunc, thetas), compute_uv=False)
        evidence = float(sv[:, -1].min())
    return NormEstimate(neumann, max(neumann, evidence), trunc.N, trunc.theta_grid,
                        "neumann+compression", evidence)


def quantum_integral_bound(q: float) -> QuantumIntegralBound:
    return QuantumIntegralBound(float(q))


__all__ = ["TruncationParams", "NormEstimate", "QuantumIntegralBound", "OperatorMatrix",
           "rep_matrix", "op_norm", "graded_op_norm", "invertibility_margin",
           "quantum_integral_bound", "mono_norm_bound", "weighted_l1"]
