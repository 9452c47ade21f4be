"""Seeded random elements for property checks and the acceptance suite."""
from __future__ import annotations

import random
from fractions import Fraction

from .algebra import AlgebraElement, Mono, monomials
from .calculus import dbar
from .gauge import GaugePair
from .scalars import QScalar, Ring, integral_bound


def random_mono(rng: random.Random, max_length: int, grade: int | None = None) -> Mono:
    return rng.choice(monomials(max_length, grade))


def random_coeff(rng: random.Random, ring: Ring):
    if ring.kind == "symbolic":
        return QScalar.rpow(rng.randint(-3, 3), Fraction(rng.randint(-5, 5) or 1, rng.randint(1, 4)))
    if ring.kind == "exact":
        return Fraction(rng.randint(-9, 9) or 1, rng.randint(1, 6))
    return rng.uniform(-1, 1)


def random_element(rng: random.Random, ring: Ring, max_length: int = 4, terms: int = 3,
                   grade: int | None = None, include_unit: bool = True) -> AlgebraElement:
    pool = [m for m in monomials(max_length, grade) if include_unit or not m.is_unit()]
    out = {}
    for m in rng.sample(pool, min(terms, len(pool))):
        out[m] = random_coeff(rng, ring)
    return AlgebraElement(out, ring)


def random_small_pair(rng: random.Random, ring: Ring, max_length: int = 4, terms: int = 3,
                      strength: float = 0.1) -> GaugePair:
    """Random grade 0 pair scaled so that M * (l1|dbar f| + l1|dbar h|) = strength."""
    f = random_element(rng, ring, max_length, terms, 0, include_unit=False)
    h = random_element(rng, ring, max_length, terms, 0, include_unit=False)
    if f == h:
        h = h + AlgebraElement.from_mono(Mono(False, 0, 1, 1), 1, ring)
    M = integral_bound(float(ring.q_value()))
    size = dbar(f).l1() + dbar(h).l1()
    t = strength / (M * size)
    return GaugePair(f.scale(t), h.scale(t))
