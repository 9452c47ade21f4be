"""The twelve acceptance criteria as callable checks.

Each check returns a ``CriterionResult``; ``run_all`` evaluates them in order.  The
same functions back the ``selftest`` command and ``tests/test_acceptance.py``.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .admissibility import separating_functional
from .algebra import (AlgebraElement, act_left, adjoint_matrix, antipode, defining_matrix,
                      matmul2, monomials, parse_element)
from .calculus import dbar, integral
from .gauge import (GaugePair, SolveConfig, L_apply, L_norm_bounds, check_sufficient_single, coeff_norm,
                    fixed_point_lower_bound, solve_fixed_point, solve_linear)
from .podles import B0, project_H, psi_infty
from .representation import TruncationParams, op_norm, quantum_integral_bound
from .sampling import random_element, random_small_pair
from .scalars import SYMBOLIC, ExactRing, FloatRing, QScalar


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:2d} {self.name}: {self.detail} ({self.seconds:.2f}s)"

    def to_dict(self) -> dict:
        return {"number": self.number, "name": self.name, "passed": self.passed,
                "detail": self.detail, "seconds": self.seconds}


@dataclass(frozen=True)
class AcceptanceConfig:
    seed: int = 2024
    tol: float = 1e-10
    q_float: float = 0.5
    r_exact: Fraction = Fraction(1, 2)


def _exact(cfg):
    return ExactRing(cfg.r_exact)


def _float(cfg):
    return FloatRing.from_q(cfg.q_float)


def c01_integral_identity(cfg):
    ring, rng = _exact(cfg), random.Random(cfg.seed)
    bad = 0
    for _ in range(100):
        x = random_element(rng, ring, 6, 4, grade=0)
        if integral(dbar(x)) != project_H(x):
            bad += 1
    return bad == 0, f"{100 - bad}/100 exact identities"


def c02_leibniz(cfg):
    ring, rng = _exact(cfg), random.Random(cfg.seed + 1)
    bad = 0
    for _ in range(300):
        x = random_element(rng, ring, 4, 3, grade=0)
        y = random_element(rng, ring, 4, 3, grade=0)
        if dbar(x * y) != dbar(x) * y + x * dbar(y):
            bad += 1
        x = random_element(rng, ring, 3, 2)
        y = random_element(rng, ring, 3, 2)
        h = rng.choice("EFK")
        if h == "K":
            rhs = act_left("K", x) * act_left("K", y)
        else:
            rhs = act_left(h, x) * act_left("K", y) + act_left("Ki", x) * act_left(h, y)
        if act_left(h, x * y) != rhs:
            bad += 1
    return bad == 0, f"{600 - bad}/600 exact laws"


def c03_algebra(cfg):
    u = defining_matrix(SYMBOLIC)
    ident = [[AlgebraElement.one() if i == j else AlgebraElement.zero() for j in range(2)] for i in range(2)]
    unitary = matmul2(u, adjoint_matrix(u)) == ident and matmul2(adjoint_matrix(u), u) == ident
    rng = random.Random(cfg.seed + 2)
    pool = monomials(4)
    assoc = 0
    for _ in range(500):
        x, y, z = (AlgebraElement.from_mono(rng.choice(pool)) for _ in range(3))
        assoc += (x * y) * z == x * (y * z)
    flip = 0
    mons = monomials(5)
    for m in mons:
        s = antipode(AlgebraElement.from_mono(m))
        flip += all(mm.mgrade == -m.grade for mm in s.terms)
    ok = unitary and assoc == 500 and flip == len(mons)
    return ok, f"unitary={unitary} assoc={assoc}/500 grade-flip={flip}/{len(mons)}"


def c04_fixtures(cfg):
    b = B0()
    want = parse_element("-q^(-2)*a*c")
    d = dbar(b)
    ok = d == want and psi_infty(b) == QScalar() and integral(d) == b
    return ok, f"dbar(B0) = {d}; psi(B0) = {psi_infty(b)}; int(dbar B0) = {integral(d)}"


def c05_norms(cfg):
    ring = FloatRing.from_q(0.5)
    trunc = TruncationParams(N=64, theta_grid=32)
    nb = op_norm(B0(ring), trunc)
    nac = op_norm(parse_element("a*c", ring), trunc)
    target = max(0.5 ** n * np.sqrt(1 - 0.25 ** n) for n in range(200))
    ok = (nb.contains(1.0) and nb.width <= 1e-6 and nac.contains(target) and nac.width <= 1e-6)
    return ok, f"|B0| in [{nb.lower:.10f}, {nb.upper:.10f}], |ac| in [{nac.lower:.10f}, {nac.upper:.10f}]"


def c06_contraction(cfg):
    ring = _float(cfg)
    M = quantum_integral_bound(cfg.q_float).M_bound
    trunc = TruncationParams()
    u1 = op_norm(dbar(B0(ring)), trunc).upper
    t = 0.5 / (M * u1) * 0.96
    f = B0(ring).scale(t)
    kappa = M * op_norm(dbar(f), trunc).upper
    sol = solve_fixed_point(GaugePair(AlgebraElement.zero(ring), f), 1, SolveConfig(trunc=trunc))
    vn = op_norm(sol.v, trunc).upper
    ok = (kappa <= 0.5 and sol.contraction_ratio <= kappa + 1e-3 and sol.residual.upper <= cfg.tol
          and vn <= kappa / (1 - kappa))
    return ok, (f"t={t:.4g} kappa={kappa:.4f} ratio={sol.contraction_ratio:.4g} "
                f"residual={sol.residual.upper:.2e} |v|={vn:.4g} <= {kappa / (1 - kappa):.4g}")


def c07_thresholds(cfg):
    ring = FloatRing.from_q(0.5)
    M = quantum_integral_bound(0.5).M_bound
    small = check_sufficient_single(B0(ring).scale(0.01))
    big = check_sufficient_single(B0(ring))
    ok = abs(M - 6.9282) < 1e-4 and small.decision == "EquivalentCertified" and big.decision == "Inconclusive"
    return ok, f"M={M:.4f} 0.01*B0 -> {small.decision}, B0 -> {big.decision}"


def c08_homogeneity(cfg):
    ring, rng = _float(cfg), random.Random(cfg.seed + 8)
    scfg = SolveConfig()
    worst = 0.0
    for _ in range(10):
        pair = random_small_pair(rng, ring)
        v1 = solve_linear(pair, 1, scfg).v
        for lam in (0.5, 2.0):
            vl = solve_linear(pair, lam, scfg).v
            worst = max(worst, (vl - v1.scale(lam)).l1())
    return worst <= 1e-10, f"max l1 distance |v_lambda - lambda v_1| = {worst:.2e}"


def c09_manufactured(cfg):
    ring, rng = _float(cfg), random.Random(cfg.seed + 9)
    scfg = SolveConfig()
    worst = 0.0
    for _ in range(10):
        pair = random_small_pair(rng, ring)
        vd = random_element(rng, ring, 4, 4, grade=0, include_unit=False)
        sol = solve_linear(pair, 1, scfg, target=L_apply(pair, vd))
        worst = max(worst, sol.residual.upper)
    return worst <= 1e-10, f"max residual upper = {worst:.2e}"


def c10_lower_bound(cfg):
    ring, rng = _float(cfg), random.Random(cfg.seed + 10)
    scfg = SolveConfig()
    viol, sandwich_bad = 0, 0
    for _ in range(20):
        pair = random_small_pair(rng, ring, max_length=2, strength=rng.choice([0.05, 0.1, 0.3]))
        sol = solve_fixed_point(pair, 1, scfg)
        rho = fixed_point_lower_bound(pair, scfg)
        if sol.residual.upper <= cfg.tol and sol.norm_Gr.upper < rho - 1e-6:
            viol += 1
        b = L_norm_bounds(pair, scfg)
        sandwich_bad += not (b.lower <= b.upper)
    return viol == 0 and sandwich_bad == 0, f"rho violations={viol}, sandwich violations={sandwich_bad}"


def c11_exclusivity(cfg):
    ring, rng = _float(cfg), random.Random(cfg.seed + 11)
    scfg = SolveConfig(degree_cap=8)
    both = 0
    for i in range(20):
        strength = [0.1, 1.0, 5.0, 20.0][i % 4]
        pair = random_small_pair(rng, ring, strength=strength)
        sol = solve_linear(pair, 1, scfg)
        sf = separating_functional(pair, scfg.degree_cap, scfg.trunc, cfg.tol)
        margin = 0.0 if sf is None else sf.margin
        both += sol.coeff_residual <= cfg.tol and margin > 2 * cfg.tol
    return both == 0, f"{both} simultaneous solvable-and-separated verdicts in 20"


def c12_routes(cfg):
    ring, rng = _float(cfg), random.Random(cfg.seed + 12)
    scfg = SolveConfig(degree_cap=16)
    worst = 0.0
    for _ in range(5):
        pair = random_small_pair(rng, ring, strength=0.01)
        a = solve_fixed_point(pair, 1, scfg).v
        b = solve_linear(pair, 1, scfg).v
        worst = max(worst, coeff_norm(a - b))
    return worst <= 1e-8, f"max weighted coefficient distance = {worst:.2e}"


CRITERIA: list[tuple[int, str, Callable, float]] = [
    (1, "integral identity (exact)", c01_integral_identity, 30),
    (2, "Leibniz and module-algebra laws", c02_leibniz, 30),
    (3, "algebra soundness", c03_algebra, 60),
    (4, "fixture values", c04_fixtures, 60),
    (5, "norm certification", c05_norms, 60),
    (6, "contraction behavior", c06_contraction, 120),
    (7, "threshold arithmetic", c07_thresholds, 120),
    (8, "lambda-homogeneity", c08_homogeneity, 120),
    (9, "manufactured-solution recovery", c09_manufactured, 120),
    (10, "lower-bound consistency", c10_lower_bound, 120),
    (11, "exclusivity", c11_exclusivity, 120),
    (12, "route agreement", c12_routes, 120),
]


def run_criterion(number: int, cfg: AcceptanceConfig | None = None) -> CriterionResult:
    cfg = cfg or AcceptanceConfig()
    num, name, fn, limit = CRITERIA[number - 1]
    t0 = time.perf_counter()
    try:
        ok, detail = fn(cfg)
    except Exception as exc:  # reported as a failure line, not a crash
        ok, detail = False, f"error: {type(exc).__name__}: {exc}"
    dt = time.perf_counter() - t0
    if dt > limit:
        ok, detail = False, f"{detail}; exceeded {limit}s"
    return CriterionResult(num, name, bool(ok), detail, dt)


def run_all(cfg: AcceptanceConfig | None = None) -> list[CriterionResult]:
    return [run_criterion(n, cfg) for n in range(1, len(CRITERIA) + 1)]
