"""Seeded corpus of random linear families for the brute-force property checks."""

import random

from idealclose.family import FamilyTerm, ParametricFamily, param_ring
from idealclose.polyring import Polynomial, RingContext

VARIABLES = ("x", "y", "z")


def random_coefficient(rnd, P, max_degree):
    """Non-zero integer polynomial of total degree <= max_degree."""
    p = P.dimension
    while True:
        terms = {}
        for _ in range(rnd.randint(1, 2)):
            deg = rnd.randint(0, max_degree)
            split = [0] * p
            for _ in range(deg):
                split[rnd.randrange(p)] += 1
            terms[tuple(split)] = rnd.choice([-2, -1, 1, 2, 3])
        c = Polynomial(P, terms)
        if c:
            return c


def random_family(rnd, max_params=2, max_terms=3, max_degree=3):
    p = rnd.randint(1, max_params)
    n_terms = rnd.randint(1, max_terms)
    r = rnd.randint(2, 3)
    names = ("n", "m")[:p]
    P = param_ring(names)
    R = RingContext(VARIABLES[:r])
    terms = []
    for _ in range(n_terms):
        coeff = random_coefficient(rnd, P, max_degree)
        matrix = [[rnd.randint(0, 2) for _ in range(p)] for _ in range(r)]
        offset = [rnd.randint(0, 2) for _ in range(r)]
        offset[rnd.randrange(r)] += 1  # keep every member free of constant terms
        terms.append(FamilyTerm(coeff, matrix, offset))
    return ParametricFamily(R, names, terms)


def corpus(seed=2024, size=20, **kwargs):
    rnd = random.Random(seed)
    return [random_family(rnd, **kwargs) for _ in range(size)]
