import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from qdbar.algebra import AlgebraElement, parse_element
from qdbar.calculus import dbar
from qdbar.gauge import (EQUIVALENT, INCONCLUSIVE, GaugePair, NonConvergence, PreconditionError, SolveConfig, TruncationOverflow,
                         L_apply, L_norm_bounds, beta, check_no_solution_H, check_sufficient_pair,
                         check_sufficient_single, coeff_norm, decide_equivalence, fixed_point_lower_bound,
                         phi_apply, solve_fixed_point, solve_linear)
from qdbar.podles import B0, NotHomogeneous
from qdbar.representation import op_norm
from qdbar.sampling import random_element, random_small_pair
from qdbar.scalars import FloatRing

RING = FloatRing.from_q(0.5)
seeds = st.integers(0, 10**6)


def P(text):
    return parse_element(text, RING)


def test_pair_validation():
    with pytest.raises(NotHomogeneous):
        GaugePair(P("a"), P("0"))
    assert GaugePair(P("1"), P("3")).is_scalar_difference


def test_single_threshold_frozen():
    small = check_sufficient_single(B0(RING).scale(0.01))
    assert small.decision == EQUIVALENT and small.grade == "certified"
    g, f = small.witness, small.pair
    # gauge relation against the standard connection: dbar g = -dbar f . g
    rel = dbar(g) + dbar(B0(RING).scale(0.01)) * g
    assert op_norm(rel).upper <= 1e-9
    big = check_sufficient_single(B0(RING))
    assert big.decision == INCONCLUSIVE and big.margins["lhs"] >= 1
    with pytest.raises(PreconditionError):
        check_sufficient_single(P("2"))


def test_no_solution_certificate():
    assert check_no_solution_H(B0(RING).scale(0.05))["certified"]
    assert not check_no_solution_H(B0(RING))["certified"]


def test_phi_rejects_constant_term():
    pair = GaugePair(P("0"), P("0.01*B0"))
    with pytest.raises(ValueError):
        phi_apply(pair, 1, P("1 + B0"))


def test_large_forcing_is_refused():
    pair = GaugePair(P("0"), P("40*B0"))
    with pytest.warns(RuntimeWarning):
        with pytest.raises((NonConvergence, TruncationOverflow)):
            solve_fixed_point(pair, 1, SolveConfig(degree_cap=8, max_iter=60))


def test_report_json_is_deterministic():
    pair = GaugePair(P("0"), P("0.01*B0"))
    a = decide_equivalence(pair).to_json()
    b = decide_equivalence(pair).to_json()
    assert a == b
    doc = json.loads(a)
    assert doc["decision"] == EQUIVALENT and doc["schema_version"] == 1


def test_scalar_difference_shortcut():
    rep = decide_equivalence(GaugePair(P("B0"), P("B0 + 2")))
    assert rep.decision == EQUIVALENT and rep.witness == AlgebraElement.one(RING)


@settings(max_examples=10)
@given(seeds)
def test_pair_witness_satisfies_gauge_relation(seed):
    pair = random_small_pair(random.Random(seed), RING, max_length=2, strength=0.05)
    if pair.is_scalar_difference:
        return
    rep = check_sufficient_pair(pair)
    assert rep.decision == EQUIVALENT
    g = rep.witness
    rel = dbar(g) - g * dbar(pair.f) + dbar(pair.h) * g
    assert op_norm(rel).upper <= 1e-9


@settings(max_examples=10)
@given(seeds)
def test_linear_solution_residual_and_homogeneity(seed):
    rng = random.Random(seed)
    pair = random_small_pair(rng, RING)
    s1 = solve_linear(pair, 1)
    s2 = solve_linear(pair, 2)
    # least squares never does worse than v = 0 in the weighted norm
    assert coeff_norm(L_apply(pair, s1.v) - beta(pair)) <= coeff_norm(beta(pair)) + 1e-12
    assert (s2.v - s1.v.scale(2)).l1() <= 1e-10


@settings(max_examples=10)
@given(seeds)
def test_manufactured_solution(seed):
    rng = random.Random(seed)
    pair = random_small_pair(rng, RING)
    vd = random_element(rng, RING, 4, 4, grade=0, include_unit=False)
    sol = solve_linear(pair, 1, target=L_apply(pair, vd))
    assert coeff_norm(L_apply(pair, sol.v) - L_apply(pair, vd)) <= 1e-10


@settings(max_examples=10)
@given(seeds)
def test_bounds_are_ordered(seed):
    pair = random_small_pair(random.Random(seed), RING, max_length=2)
    b = L_norm_bounds(pair)
    assert 0 <= b.lower <= b.upper
    assert fixed_point_lower_bound(pair) >= 0


def test_beta_frozen():
    pair = GaugePair(P("0"), P("B0"))
    assert beta(pair) == dbar(B0(RING))
