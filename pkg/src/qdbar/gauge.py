"""Gauge equations for flat dbar-connections and the decision procedures built on them.

For grade 0 elements f, h the mixed gauge equation for g is

    dbar g = g dbar f - dbar h . g.

Writing g = v - lambda with v in H (zero constant term) turns it into the linear
equation L(v) = lambda * beta with

    L(v) = dbar v - v dbar f + dbar h . v,     beta = dbar(h - f),

whose solutions are exactly the fixed points of Phi_lambda(v) = int(v dbar f - dbar h . v + lambda beta).
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np

from .algebra import AlgebraElement, Mono, format_element, monomials
from .calculus import GraphNormed, dbar, graph_norm, integral
from .podles import is_scalar, project_H, require_grade
from .representation import (NormEstimate, TruncationParams, graded_op_norm, invertibility_margin,
                             mono_norm_bound, op_norm, quantum_integral_bound, weighted_l1)

SCHEMA_VERSION = 1

EQUIVALENT = "EquivalentCertified"
NOT_EQUIVALENT = "NotEquivalentEvidence"
INCONCLUSIVE = "Inconclusive"


class NonConvergence(RuntimeError):
    """Fixed-point iteration did not contract."""


class TruncationOverflow(RuntimeError):
    """Coefficient mass dropped by the word-length cap exceeded the tolerance."""


class PreconditionError(ValueError):
    """The inputs fall outside the hypotheses of the requested check."""


@dataclass(frozen=True)
class GaugePair:
    f: AlgebraElement
    h: AlgebraElement

    def __post_init__(self):
        if self.f.ring != self.h.ring:
            raise ValueError("f and h must share a coefficient ring")
        require_grade(self.f, 0, "f")
        require_grade(self.h, 0, "h")

    @cached_property
    def is_scalar_difference(self) -> bool:
        return is_scalar(self.h - self.f)

    @property
    def ring(self):
        return self.f.ring

    def numeric(self) -> "GaugePair":
        ring = self.ring.numeric()
        return GaugePair(self.f.specialize(ring), self.h.specialize(ring))

    def to_dict(self) -> dict:
        return {"f": format_element(self.f), "h": format_element(self.h)}


def default_lambda_grid(radii=(0.25, 0.5, 0.75, 0.9), angles: int = 8) -> list[complex]:
    return [r * complex(math.cos(2 * math.pi * k / angles), math.sin(2 * math.pi * k / angles))
            for r in radii for k in range(angles)]


@dataclass(frozen=True)
class SolveConfig:
    degree_cap: int = 12
    max_iter: int = 200
    tol_residual: float = 1e-10
    tol_debt: float | None = None
    lambda_radii: tuple = (0.25, 0.5, 0.75, 0.9)
    lambda_angles: int = 8
    trunc: TruncationParams = field(default_factory=TruncationParams)

    def __post_init__(self):
        if self.degree_cap < 2 or self.max_iter < 1 or not self.tol_residual > 0:
            raise ValueError("degree_cap >= 2, max_iter >= 1 and tol_residual > 0 are required")

    @property
    def debt_tol(self) -> float:
        return self.tol_debt if self.tol_debt is not None else self.tol_residual

    def lambda_grid(self) -> list[complex]:
        return default_lambda_grid(self.lambda_radii, self.lambda_angles)

    def to_dict(self) -> dict:
        return {"degree_cap": self.degree_cap, "max_iter": self.max_iter,
                "tol_residual": self.tol_residual, "tol_debt": self.debt_tol,
                "lambda_radii": list(self.lambda_radii), "lambda_angles": self.lambda_angles,
                "trunc": self.trunc.to_dict()}


@dataclass
class SolutionRecord:
    v: AlgebraElement
    residual: NormEstimate
    coeff_residual: float
    lam: complex
    norm_Gr: GraphNormed
    iterations: int
    method: str
    truncation_debt: float = 0.0
    contraction_ratio: float | None = None
    kernel: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"v": format_element(self.v), "residual": self.residual.to_dict(),
                "coeff_residual": self.coeff_residual, "lambda": _cjson(self.lam),
                "norm_Gr": self.norm_Gr.to_dict(), "iterations": self.iterations,
                "method": self.method, "truncation_debt": self.truncation_debt,
                "contraction_ratio": self.contraction_ratio,
                "kernel_dim": len(self.kernel)}


@dataclass
class GaugeReport:
    decision: str
    grade: str
    witness: AlgebraElement | None = None
    margins: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)
    pair: dict = field(default_factory=dict)
    solution: SolutionRecord | None = None
    truncation_debt: float = 0.0

    def to_dict(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "decision": self.decision, "grade": self.grade,
                "witness": None if self.witness is None else format_element(self.witness),
                "margins": self.margins, "diagnostics": self.diagnostics,
                "config": self.config, "pair": self.pair,
                "solution": None if self.solution is None else self.solution.to_dict(),
                "truncation_debt": self.truncation_debt}

    def to_json(self) -> str:
        return json.dumps(_jsonable(self.to_dict()), sort_keys=True, indent=2)


def _cjson(z) -> object:
    z = complex(z)
    return z.real if z.imag == 0 else [z.real, z.imag]


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, complex):
        return _cjson(obj)
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


# ---------------------------------------------------------------------------
# operators


def beta(pair: GaugePair) -> AlgebraElement:
    return dbar(pair.h - pair.f)


def L_apply(pair: GaugePair, v: AlgebraElement) -> AlgebraElement:
    require_grade(v, 0, "v")
    return dbar(v) - v * dbar(pair.f) + dbar(pair.h) * v


def phi_apply(pair: GaugePair, lam, v: AlgebraElement, degree_cap: int | None = None) -> AlgebraElement:
    """int(v dbar f - dbar h . v + lambda beta)."""
    require_grade(v, 0, "v")
    if v.constant_term() != v.ring.zero:
        raise ValueError("phi_apply needs v with zero constant term")
    form = v * dbar(pair.f) - dbar(pair.h) * v + beta(pair).scale(lam)
    return integral(form, degree_cap)


def _numeric_pair(pair: GaugePair) -> GaugePair:
    return pair if pair.ring.kind == "float" else pair.numeric()


def _upper(x: AlgebraElement, trunc) -> float:
    return graded_op_norm(x, 0, trunc).upper if not x.is_zero() else 0.0


def _M(pair: GaugePair) -> float:
    return quantum_integral_bound(float(pair.ring.q_value())).M_bound


def coeff_norm(x: AlgebraElement) -> float:
    """l2 norm in the weighted coefficient inner product (weights = monomial norm bounds)."""
    q = float(x.ring.q_value())
    return math.sqrt(sum((abs(x.ring.to_complex(c)) * mono_norm_bound(m, q)) ** 2
                         for m, c in x.terms.items()))


def _residual(pair: GaugePair, v: AlgebraElement, lam, trunc) -> tuple[NormEstimate, float]:
    r = L_apply(pair, v) - beta(pair).scale(lam)
    return graded_op_norm(r, 0, trunc), coeff_norm(r)


# ---------------------------------------------------------------------------
# solvers


def solve_fixed_point(pair: GaugePair, lam, cfg: SolveConfig | None = None) -> SolutionRecord:
    """Banach iteration v_(k+1) = Phi_lambda(v_k) from v_0 = 0 under a word-length cap."""
    cfg = cfg or SolveConfig()
    pair = _numeric_pair(pair)
    ring, trunc = pair.ring, cfg.trunc
    lam = complex(lam)
    lam_c = lam.real if lam.imag == 0 else lam
    dbf, dbh, b = dbar(pair.f), dbar(pair.h), beta(pair)
    M = _M(pair)
    advisory = M * (_upper(dbf, trunc) + _upper(dbh, trunc))
    if advisory >= 1:
        warnings.warn(f"contraction not verified: M*(|dbar f|+|dbar h|) = {advisory:.4g} >= 1",
                      RuntimeWarning, stacklevel=2)
    forcing = b.scale(lam_c)
    v = AlgebraElement.zero(ring)
    prev_step = None
    ratios: list[float] = []
    bad = 0
    it = 0
    converged = False
    for it in range(1, cfg.max_iter + 1):
        form = v * dbf - dbh * v + forcing
        kept, _ = form.truncate(cfg.degree_cap)
        v_new = integral(kept, cfg.degree_cap)
        step = v_new - v
        step_norm = graph_norm(step, trunc).upper if not step.is_zero() else 0.0
        v = v_new
        if prev_step is not None and prev_step > 1e3 * cfg.tol_residual:
            ratio = step_norm / prev_step
            ratios.append(ratio)
            bad = bad + 1 if ratio >= 1 else 0
            if bad >= 5:
                raise NonConvergence(f"contraction ratio stayed >= 1 (last {ratio:.4g})")
        prev_step = step_norm
        if step_norm < cfg.tol_residual:
            converged = True
            break
    if not converged:
        raise NonConvergence(f"no convergence within {cfg.max_iter} iterations")
    # norm bound on what the cap removes from Phi at the final iterate
    debt = weighted_l1((v * dbf - dbh * v + forcing).truncate(cfg.degree_cap)[1])
    if debt > cfg.debt_tol:
        raise TruncationOverflow(f"truncation debt {debt:.3g} exceeds {cfg.debt_tol:.3g}")
    res, cres = _residual(pair, v, lam_c, trunc)
    return SolutionRecord(v=v, residual=res, coeff_residual=cres, lam=lam, norm_Gr=graph_norm(v, trunc),
                          iterations=it, method="fixed-point", truncation_debt=debt,
                          contraction_ratio=max(ratios) if ratios else 0.0)


def H_basis(cap: int) -> list[Mono]:
    return [m for m in monomials(cap, 0) if not m.is_unit()]


@dataclass
class LinearSystem:
    """Matrix of L on the truncated H basis with a shared row index for forms.

    Row m is scaled by the norm bound of the monomial m, so coefficient distances
    track operator sizes instead of raw coefficients of nearly compact words.
    """

    pair: GaugePair
    cap: int
    basis: list
    rows: dict
    weights: np.ndarray
    A: np.ndarray
    col_scale: np.ndarray
    U: np.ndarray
    s: np.ndarray
    Vh: np.ndarray
    rank: int

    def vector(self, form: AlgebraElement) -> np.ndarray:
        """Coefficient vector of a form; raises if it has rows outside the index."""
        out = np.zeros(len(self.rows), dtype=complex)
        for m, c in form.terms.items():
            if m not in self.rows:
                raise KeyError(m)
            out[self.rows[m]] = complex(form.ring.to_complex(c))
        return out * self.weights

    def element(self, coeffs) -> AlgebraElement:
        ring = self.pair.ring
        terms = {}
        for m, c in zip(self.basis, coeffs):
            c = complex(c)
            if c != 0:
                terms[m] = c.real if c.imag == 0 else c
        return AlgebraElement(terms, ring)

    @property
    def range_basis(self) -> np.ndarray:
        return self.U[:, :self.rank]

    def kernel(self) -> list[np.ndarray]:
        out = []
        for i in range(self.rank, self.Vh.shape[0]):
            k = self.Vh[i].conj() / self.col_scale
            out.append(k / np.linalg.norm(k))
        return out


def build_system(pair: GaugePair, cap: int, extra_forms=()) -> LinearSystem:
    pair = _numeric_pair(pair)
    basis = H_basis(cap)
    images = [L_apply(pair, AlgebraElement.from_mono(m, 1, pair.ring)) for m in basis]
    rows: dict = {}
    for form in list(images) + [beta(pair)] + list(extra_forms):
        for m in form.terms:
            rows.setdefault(m, len(rows))
    q = float(pair.ring.q_value())
    weights = np.ones(max(len(rows), 1))
    for m, i in rows.items():
        weights[i] = mono_norm_bound(m, q)
    A = np.zeros((max(len(rows), 1), len(basis)), dtype=complex)
    for j, img in enumerate(images):
        for m, c in img.terms.items():
            A[rows[m], j] = complex(pair.ring.to_complex(c))
    A *= weights[:, None]
    # column equilibration: same range, far better conditioning
    col_scale = np.linalg.norm(A, axis=0)
    col_scale[col_scale == 0] = 1.0
    U, s, Vh = np.linalg.svd(A / col_scale, full_matrices=True)
    cutoff = max(A.shape) * np.finfo(float).eps * (s[0] if s.size else 0.0)
    rank = int((s > max(cutoff, 1e-13)).sum())
    return LinearSystem(pair, cap, basis, rows, weights, A, col_scale, U, s, Vh, rank)


def _lstsq(system: LinearSystem, rhs: np.ndarray) -> np.ndarray:
    r = system.rank
    y = (system.U[:, :r].conj().T @ rhs) / system.s[:r]
    return (system.Vh[:r].conj().T @ y) / system.col_scale


def solve_linear(pair: GaugePair, lam, cfg: SolveConfig | None = None,
                 target: AlgebraElement | None = None) -> SolutionRecord:
    """Minimum-norm least-squares solution of L(v) = lambda*beta (or = target) on the truncated H."""
    cfg = cfg or SolveConfig()
    pair = _numeric_pair(pair)
    lam = complex(lam)
    lam_c = lam.real if lam.imag == 0 else lam
    if target is not None:
        target = target.specialize(pair.ring)
    system = build_system(pair, cfg.degree_cap, () if target is None else (target,))
    rhs_form = beta(pair).scale(lam_c) if target is None else target
    x = _lstsq(system, system.vector(rhs_form))
    v = system.element(x)
    r = L_apply(pair, v) - rhs_form
    res, cres = graded_op_norm(r, 0, cfg.trunc), coeff_norm(r)
    kernel = [system.element(k) for k in system.kernel()]
    return SolutionRecord(v=v, residual=res, coeff_residual=cres, lam=lam,
                          norm_Gr=graph_norm(v, cfg.trunc), iterations=0, method="linear",
                          kernel=kernel)


# ---------------------------------------------------------------------------
# checks


def _report(decision, grade, pair, cfg, **kw) -> GaugeReport:
    return GaugeReport(decision=decision, grade=grade, pair=pair.to_dict(),
                       config={"solve": cfg.to_dict(), "ring": pair.ring.describe()}, **kw)


def _accept(sol: SolutionRecord, cfg: SolveConfig) -> bool:
    return sol.residual.upper <= cfg.tol_residual and sol.norm_Gr.upper < 1


def check_sufficient_single(f: AlgebraElement, cfg: SolveConfig | None = None) -> GaugeReport:
    """Small-|dbar f| criterion against the standard connection: witness g = 1 - v."""
    cfg = cfg or SolveConfig()
    if is_scalar(f):
        raise PreconditionError("f is a scalar: dbar f = 0 and the connection is already standard")
    pair = GaugePair(f.specialize(f.ring) * 0, f)
    npair = _numeric_pair(pair)
    M = _M(npair)
    u = _upper(dbar(npair.h), cfg.trunc)
    margins = {"upper_dbar_f": u, "M_bound": M, "threshold": 1 / (3 * M), "lhs": 3 * M * u}
    if 3 * M * u >= 1:
        return _report(INCONCLUSIVE, "none", pair, cfg, margins=margins,
                       diagnostics={"reason": "3*M*|dbar f| >= 1"})
    sol = solve_fixed_point(npair, 1, cfg)
    witness = AlgebraElement.one(npair.ring) - sol.v
    margins["norm_Gr_v_upper"] = sol.norm_Gr.upper
    ok = _accept(sol, cfg)
    return _report(EQUIVALENT if ok else INCONCLUSIVE, "certified" if ok else "none", pair, cfg,
                   witness=witness if ok else None, margins=margins, solution=sol,
                   truncation_debt=sol.truncation_debt,
                   diagnostics={} if ok else {"reason": "solution failed residual or norm check"})


def check_no_solution_H(f: AlgebraElement, cfg: SolveConfig | None = None) -> dict:
    """dbar g = -dbar f . g has no nonzero solution in H when M*|dbar f| < 1."""
    cfg = cfg or SolveConfig()
    fn = f.specialize(f.ring.numeric()) if f.ring.kind != "float" else f
    M = quantum_integral_bound(float(fn.ring.q_value())).M_bound
    u = _upper(dbar(fn), cfg.trunc)
    return {"certified": M * u < 1, "upper_dbar_f": u, "M_bound": M, "product": M * u}


def check_sufficient_pair(pair: GaugePair, cfg: SolveConfig | None = None) -> GaugeReport:
    """Mixed small-norm criterion; witness g = v - 1 from the fixed point at lambda = 1."""
    cfg = cfg or SolveConfig()
    if pair.is_scalar_difference:
        raise PreconditionError("h - f is a scalar: the two connections coincide")
    npair = _numeric_pair(pair)
    M = _M(npair)
    uf, uh = _upper(dbar(npair.f), cfg.trunc), _upper(dbar(npair.h), cfg.trunc)
    w = project_H(npair.h - npair.f)
    uw = op_norm(w, cfg.trunc).upper
    rhs = min(1 / 3, (1 - 2 * uw) / M)
    margins = {"upper_dbar_f": uf, "upper_dbar_h": uh, "upper_w": uw, "M_bound": M,
               "lhs": uf + uh, "rhs": rhs}
    if not uf + uh < rhs:
        return _report(INCONCLUSIVE, "none", pair, cfg, margins=margins,
                       diagnostics={"reason": "|dbar f| + |dbar h| exceeds the threshold"})
    sol = solve_fixed_point(npair, 1, cfg)
    margins["norm_Gr_v_upper"] = sol.norm_Gr.upper
    ok = _accept(sol, cfg)
    return _report(EQUIVALENT if ok else INCONCLUSIVE, "certified" if ok else "none", pair, cfg,
                   witness=(sol.v - 1) if ok else None, margins=margins, solution=sol,
                   truncation_debt=sol.truncation_debt,
                   diagnostics={} if ok else {"reason": "solution failed residual or norm check"})


def decide_equivalence(pair: GaugePair, cfg: SolveConfig | None = None) -> GaugeReport:
    """Sufficient check, then the lambda search over linear solutions, then admissibility evidence."""
    cfg = cfg or SolveConfig()
    if pair.is_scalar_difference:
        return _report(EQUIVALENT, "certified", pair, cfg,
                       witness=AlgebraElement.one(pair.ring),
                       diagnostics={"reason": "h - f is a scalar; the connections coincide"})
    diagnostics: dict = {}
    try:
        rep = check_sufficient_pair(pair, cfg)
        if rep.decision == EQUIVALENT:
            rep.diagnostics["route"] = "sufficient-pair"
            return rep
        diagnostics["sufficient_pair"] = rep.margins
    except (NonConvergence, TruncationOverflow) as exc:
        diagnostics["sufficient_pair_error"] = str(exc)

    npair = _numeric_pair(pair)
    sol = solve_linear(npair, 1, cfg)
    diagnostics["linear"] = {"residual_upper": sol.residual.upper,
                             "coeff_residual": sol.coeff_residual,
                             "norm_Gr_v1_upper": sol.norm_Gr.upper,
                             "kernel_dim": len(sol.kernel)}
    if sol.residual.upper <= cfg.tol_residual:
        v1 = sol.v
        gr = sol.norm_Gr.upper
        for lam in cfg.lambda_grid():
            if abs(lam) * gr >= 1:
                continue
            lam_c = lam.real if lam.imag == 0 else lam
            witness = (AlgebraElement.one(npair.ring) - v1).scale(lam_c)
            margins = {"lambda": lam, "norm_Gr_xi_upper": abs(lam) * gr,
                       "norm_Gr_v1_upper": gr, "residual_upper": sol.residual.upper}
            if gr < 1:
                return _report(EQUIVALENT, "certified", pair, cfg, witness=witness, margins=margins,
                               solution=sol, diagnostics={**diagnostics, "route": "lambda-search"})
            margin = invertibility_margin(AlgebraElement.one(npair.ring) - v1, cfg.trunc)
            ev = abs(lam) * (margin.evidence or 0.0)
            if ev > cfg.trunc.tol:
                margins["invertibility_evidence"] = ev
                return _report(INCONCLUSIVE, "evidence", pair, cfg, witness=witness, margins=margins,
                               solution=sol, diagnostics={
                                   **diagnostics, "route": "lambda-search",
                                   "reason": "fixed point found; invertibility of lambda - xi "
                                             "supported numerically only"})
        diagnostics["lambda_search"] = "no grid point with |lambda*v1|_Gr < 1"

    from .admissibility import separating_functional_trace

    trace = separating_functional_trace(npair, cfg.degree_cap, cfg.trunc)
    diagnostics["admissibility"] = trace.to_dict()
    if trace.verdict == "evidence-admissible":
        return _report(NOT_EQUIVALENT, "evidence", pair, cfg, margins={"margin": trace.margins[-1]},
                       diagnostics=diagnostics)
    return _report(INCONCLUSIVE, "none", pair, cfg, diagnostics=diagnostics)


def fixed_point_lower_bound(pair: GaugePair, cfg: SolveConfig | None = None) -> float:
    """rho = |w|_Gr / ((M+1) |L|) with the sound side of each bound."""
    cfg = cfg or SolveConfig()
    if pair.is_scalar_difference:
        return 0.0
    npair = _numeric_pair(pair)
    w = project_H(npair.h - npair.f)
    wl = graph_norm(w, cfg.trunc).lower
    M = _M(npair)
    L_up = 1 + _upper(dbar(npair.f), cfg.trunc) + _upper(dbar(npair.h), cfg.trunc)
    return wl / ((M + 1) * L_up)


def L_norm_bounds(pair: GaugePair, cfg: SolveConfig | None = None) -> NormEstimate:
    """Interval for |L| as an operator from the graph-normed H to forms."""
    cfg = cfg or SolveConfig()
    npair = _numeric_pair(pair)
    trunc = cfg.trunc
    uf, uh = _upper(dbar(npair.f), trunc), _upper(dbar(npair.h), trunc)
    b0 = AlgebraElement.from_mono(Mono(False, 0, 1, 1), 1, npair.ring)
    nb = op_norm(dbar(b0), trunc)
    sandwich = (nb.lower - uf - uh) / (1 + nb.upper)
    test = graded_op_norm(L_apply(npair, b0), 0, trunc).lower / graph_norm(b0, trunc).upper
    upper = 1 + uf + uh
    lower = max(0.0, sandwich, test)
    return NormEstimate(lower, max(lower, upper), trunc.N, trunc.theta_grid, "sandwich+test-vector",
                        evidence=sandwich)


__all__ = ["GaugePair", "SolveConfig", "SolutionRecord", "GaugeReport", "L_apply", "beta",
           "phi_apply", "solve_fixed_point", "solve_linear", "check_sufficient_single",
           "check_no_solution_H", "check_sufficient_pair", "decide_equivalence",
           "fixed_point_lower_bound", "L_norm_bounds", "NonConvergence", "TruncationOverflow",
           "PreconditionError", "build_system", "LinearSystem", "H_basis", "EQUIVALENT",
           "NOT_EQUIVALENT", "INCONCLUSIVE", "default_lambda_grid", "coeff_norm"]
