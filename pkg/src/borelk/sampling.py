"""Seeded pseudo-random inputs for property checks."""

from __future__ import annotations

import random

from .laurent import LaurentPoly
from .rootdata import RootDatum


def random_laurent(rng: random.Random, rank: int, terms: int = 4, exp: int = 3,
                   coeff: int = 9) -> LaurentPoly:
    out = {}
    for _ in range(rng.randint(0, terms)):
        mono = tuple(rng.randint(-exp, exp) for _ in range(rank))
        out[mono] = rng.randint(-coeff, coeff)
    return LaurentPoly(rank, out)


def random_invariant(rng: random.Random, rd: RootDatum, max_degree: int = 4,
                     coeff: int = 9, terms: int = 4) -> LaurentPoly:
    """Integer combination of words of length ``<= max_degree`` in the invariant generators."""
    gens = rd.invariant_generators
    out = LaurentPoly.zero(rd.rank)
    for _ in range(rng.randint(1, terms)):
        word = LaurentPoly.one(rd.rank)
        for _ in range(rng.randint(0, max_degree)):
            word = word * rng.choice(gens)
        out = out + word * rng.randint(-coeff, coeff)
    return out
