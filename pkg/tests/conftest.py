import random
from fractions import Fraction

import pytest

from perturbalg import (
    ExactPolynomial,
    GaussianRational,
    PerturbedPolynomial,
    TruncatedSeries,
    univariate_ring,
)


@pytest.fixture
def ring():
    return univariate_ring(8)


@pytest.fixture
def t(ring):
    return ring.generator("t")


def random_scalar(rng, span=5, denominators=5):
    return GaussianRational(
        Fraction(rng.randint(-span, span), rng.randint(1, denominators))
    )


def random_series(rng, ring, max_degree=None, min_valuation=0, span=5):
    """Random series with integer-ish rational coefficients."""
    max_degree = ring.truncation if max_degree is None else max_degree
    width = len(ring.generators)
    terms = {}
    for _ in range(rng.randint(1, 6)):
        while True:
            index = tuple(rng.randint(0, max_degree) for _ in range(width))
            if min_valuation <= sum(index) <= max_degree:
                break
        terms[index] = random_scalar(rng, span)
    return TruncatedSeries(ring, terms)


def random_unit(rng, ring):
    series = random_series(rng, ring)
    offset = GaussianRational(rng.randint(1, 5))
    return series + (offset - series.standard_part())


def random_infinitesimal(rng, ring, max_valuation=4):
    series = random_series(rng, ring, min_valuation=1)
    if series.is_zero() or series.valuation() > max_valuation:
        gen = ring.generator(ring.generators[rng.randrange(len(ring.generators))])
        series = series + gen ** rng.randint(1, max_valuation)
    return series


def random_exact_poly(rng, max_degree=4, span=5, var="X"):
    degree = rng.randint(0, max_degree)
    coeffs = [random_scalar(rng, span) for _ in range(degree + 1)]
    if not coeffs[-1]:
        coeffs[-1] = GaussianRational(1)
    return ExactPolynomial(coeffs, var)


def random_perturbed_poly(rng, ring, max_degree=4, unit_lead=True, var="X"):
    degree = rng.randint(0, max_degree)
    coeffs = [random_series(rng, ring, max_degree=2) for _ in range(degree + 1)]
    if unit_lead and not coeffs[-1].is_unit():
        coeffs[-1] = coeffs[-1] + 1
    elif coeffs[-1].is_zero():
        coeffs[-1] = ring.one()
    return PerturbedPolynomial(ring, coeffs, var)


def seeded(seed):
    return random.Random(seed)
