"""Truncated range analysis of L on H: separating functionals, absorption, scaled families.

Everything here lives in coefficient space with the monomials declared orthogonal,
each scaled by its operator-norm bound (see ``gauge.LinearSystem``).  That inner
product is a proxy for the operator-norm geometry, so every verdict is
evidence at a finite cap, never a proof of non-equivalence.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .algebra import AlgebraElement
from .calculus import dbar
from .gauge import GaugePair, LinearSystem, H_basis, beta, build_system
from .podles import is_scalar
from .representation import TruncationParams


@dataclass
class RangeModel:
    system: LinearSystem
    basis: np.ndarray
    singular_values: np.ndarray

    @property
    def rank(self) -> int:
        return self.basis.shape[1]

    def distance(self, vec: np.ndarray) -> float:
        return float(np.linalg.norm(vec - self.basis @ (self.basis.conj().T @ vec)))


@dataclass
class SeparatingFunctional:
    vector: np.ndarray
    rows: dict
    weights: np.ndarray
    value: complex
    margin: float
    cap: int
    soundness: float

    def __call__(self, form: AlgebraElement) -> complex:
        out = 0j
        for m, c in form.terms.items():
            if m in self.rows:
                i = self.rows[m]
                out += np.conj(self.vector[i]) * self.weights[i] * complex(form.ring.to_complex(c))
        return complex(out)


@dataclass
class AdmissibilityReport:
    caps: list
    margins: list
    verdict: str
    functional: SeparatingFunctional | None = None

    def to_dict(self) -> dict:
        return {"caps": self.caps, "margins": self.margins, "verdict": self.verdict}


def range_model(pair: GaugePair, cap: int, trunc: TruncationParams | None = None,
                extra_forms=()) -> RangeModel:
    system = build_system(pair, cap, extra_forms)
    return RangeModel(system, system.range_basis, system.s)


def separating_functional(pair: GaugePair, cap: int, trunc: TruncationParams | None = None,
                          tol: float | None = None) -> SeparatingFunctional | None:
    """Normalized component of beta orthogonal to the truncated range, if it exceeds tol."""
    if pair.is_scalar_difference:
        raise ValueError("h - f is a scalar: no functional can separate")
    trunc = trunc or TruncationParams()
    tol = trunc.tol if tol is None else tol
    model = range_model(pair, cap, trunc)
    sysm = model.system
    b = sysm.vector(beta(sysm.pair))
    comp = b - model.basis @ (model.basis.conj().T @ b)
    margin = float(np.linalg.norm(comp))
    if margin <= tol:
        return None
    ell = comp / margin
    # independent recheck against the raw columns
    cols = np.linalg.norm(sysm.A, axis=0)
    sound = float(np.max(np.abs(ell.conj() @ sysm.A) / np.maximum(cols, 1.0))) if sysm.A.size else 0.0
    return SeparatingFunctional(ell, dict(sysm.rows), sysm.weights, complex(ell.conj() @ b), margin, cap, sound)


def separating_functional_trace(pair: GaugePair, cap: int, trunc: TruncationParams | None = None,
                                tol: float | None = None) -> AdmissibilityReport:
    """Margins at cap and cap + 2; evidence needs both above tol with less than halving decay."""
    trunc = trunc or TruncationParams()
    tol = trunc.tol if tol is None else tol
    caps, margins, last = [cap, cap + 2], [], None
    for k in caps:
        sf = separating_functional(pair, k, trunc, tol)
        margins.append(0.0 if sf is None else sf.margin)
        last = sf
    ok = all(m > tol for m in margins) and margins[1] >= margins[0] / 2
    return AdmissibilityReport(caps, margins, "evidence-admissible" if ok else "not-separable-at-cap", last)


def absorption_check(f: AlgebraElement, cap: int, trunc: TruncationParams | None = None,
                     tol: float | None = None) -> dict:
    """Distances of u.v_i and v_i.u (u = dbar f) to the truncated range of L_(f,0)."""
    if is_scalar(f) and not f.is_zero():
        raise ValueError("f must be non-scalar")
    trunc = trunc or TruncationParams()
    tol = trunc.tol if tol is None else tol
    ring = f.ring.numeric() if f.ring.kind != "float" else f.ring
    fn = f.specialize(ring)
    zero = AlgebraElement.zero(ring)
    out = {"caps": [], "A1": [], "A2": []}
    for k in (cap, cap + 2):
        u = dbar(fn)
        vs = [AlgebraElement.from_mono(m, 1, ring) for m in H_basis(k)]
        left = [u * v for v in vs]
        right = [v * u for v in vs]
        model = range_model(GaugePair(fn, zero), k, trunc, extra_forms=left + right)
        vec = model.system.vector
        out["caps"].append(k)
        out["A1"].append(max((model.distance(vec(x)) for x in left), default=0.0))
        out["A2"].append(max((model.distance(vec(x)) for x in right), default=0.0))
    holds = out["A1"][-1] <= tol and out["A2"][-1] <= tol
    out["verdict"] = "holds-at-cap" if holds else "fails-at-cap"
    return out


@dataclass
class EvidenceMatrix:
    alphas: list
    entries: list = field(default_factory=list)
    reused: bool = False

    def margins(self) -> np.ndarray:
        n = len(self.alphas)
        out = np.full((n, n), np.nan)
        for i in range(n):
            for j in range(n):
                e = self.entries[i][j]
                if e is not None:
                    out[i, j] = e["margin"]
        return out

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["alpha_i", "alpha_j", "margin", "verdict"])
            for i, a in enumerate(self.alphas):
                for j, b in enumerate(self.alphas):
                    e = self.entries[i][j]
                    if e is not None:
                        w.writerow([a, b, repr(e["margin"]), e["verdict"]])


def scaled_family(f: AlgebraElement, alphas, cap: int, trunc: TruncationParams | None = None,
                  tol: float | None = None) -> EvidenceMatrix:
    """Pairwise evidence for (alpha f, alpha' f), reusing one functional when absorption holds."""
    trunc = trunc or TruncationParams()
    tol = trunc.tol if tol is None else tol
    alphas = list(alphas)
    if len(set(alphas)) != len(alphas):
        raise ValueError("alphas must be distinct")
    ring = f.ring.numeric() if f.ring.kind != "float" else f.ring
    fn = f.specialize(ring)
    zero = AlgebraElement.zero(ring)
    base = separating_functional(GaugePair(fn, zero), cap, trunc, tol)
    n = len(alphas)
    mat = EvidenceMatrix(alphas, [[None] * n for _ in range(n)])
    if base is None:
        for i in range(n):
            for j in range(n):
                if i != j:
                    mat.entries[i][j] = {"margin": 0.0, "verdict": "not-separable-at-cap"}
        return mat
    absorb = absorption_check(fn, cap, trunc, tol)
    reuse = absorb["verdict"] == "holds-at-cap"
    mat.reused = reuse
    lu = abs(base(dbar(fn)))
    for i, a in enumerate(alphas):
        for j, b in enumerate(alphas):
            if i == j:
                continue
            if reuse:
                margin = abs(b - a) * lu
            else:
                sf = separating_functional(GaugePair(fn.scale(a), fn.scale(b)), cap, trunc, tol)
                margin = 0.0 if sf is None else sf.margin
            mat.entries[i][j] = {"margin": margin,
                                 "verdict": "evidence-admissible" if margin > tol else "not-separable-at-cap"}
    return mat


__all__ = ["RangeModel", "SeparatingFunctional", "AdmissibilityReport", "range_model",
           "separating_functional", "separating_functional_trace", "absorption_check",
           "scaled_family", "EvidenceMatrix"]
