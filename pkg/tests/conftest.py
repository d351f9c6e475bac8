import random
from fractions import Fraction

import pytest


@pytest.fixture
def rational_rng():
    return random.Random(20240817)


def random_fraction(rng, lo=-3, hi=3, max_den=12):
    den = rng.randint(1, max_den)
    num = rng.randint(lo * den, hi * den)
    return Fraction(num, den)
