import random
from fractions import Fraction

import pytest

from parablocks.weights import ParabolicWeight, WeightClass, classify_linearization


def F(p, q=1):
    return Fraction(p, q)


@pytest.fixture
def rng():
    return random.Random(20260810)


def random_weight(rng, n, max_den=8):
    return ParabolicWeight(tuple(Fraction(rng.randint(1, max_den - 1), max_den) for _ in range(n)))


def random_general_weight(rng, n, max_den=8, total_below=None):
    """Rejection-sample an effective general weight, optionally with small total."""
    while True:
        den = rng.choice([5, 7, 8, 9, 11])
        if total_below is not None:
            entries = tuple(Fraction(rng.randint(1, den // 3 + 1), den) for _ in range(n))
        else:
            entries = tuple(Fraction(rng.randint(1, den - 1), den) for _ in range(n))
        try:
            w = ParabolicWeight(entries)
        except ValueError:
            continue
        if total_below is not None and w.total >= total_below:
            continue
        cls, _ = classify_linearization(w)
        if cls is WeightClass.GENERAL:
            return w
