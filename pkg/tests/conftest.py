"""Shared test helpers: seeded random polynomial corpora."""

from __future__ import annotations

import random
from fractions import Fraction

from residua.polyring import Polynomial, PolynomialRing


def random_poly(rng: random.Random, ring: PolynomialRing, max_deg=3, max_terms=5) -> Polynomial:
    """Random polynomial with small integer coefficients in [-9, 9]."""
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        mono = tuple(rng.randint(0, max_deg) for _ in range(ring.n))
        if sum(mono) > max_deg:
            continue
        c = rng.randint(-9, 9)
        if c:
            terms[mono] = Fraction(c)
    return Polynomial(ring, terms)


def random_nonzero_poly(rng, ring, max_deg=3, max_terms=5) -> Polynomial:
    while True:
        p = random_poly(rng, ring, max_deg, max_terms)
        if not p.is_zero():
            return p
