import math
import random
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from pyjama.config import Configuration, UnitVector, primitive_triples
from pyjama.exactnum import QuadElem

settings.register_profile("pyjama", deadline=None, max_examples=60, derandomize=True)
settings.load_profile("pyjama")

RADICANDS = [1, 2, 3, 5, 6, 7, 10, 15]

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=60)
nonzero_ints = st.integers(-9, 9).filter(bool)


@st.composite
def quad_elems(draw, max_terms=3):
    rads = draw(st.lists(st.sampled_from(RADICANDS), max_size=max_terms, unique=True))
    return QuadElem({r: draw(rationals) for r in rads})


def pythagorean_directions(max_hyp):
    """Every direction (m/n, k/n) from primitive triples up to ``max_hyp``, axes included."""
    dirs = [UnitVector.of(1, 0), UnitVector.of(0, 1)]
    for a, b, c in primitive_triples(max_hyp):
        for p, q in ((a, b), (b, a), (-a, b), (-b, a)):
            dirs.append(UnitVector.of(Fraction(p, c), Fraction(q, c)))
    return dirs


def random_pythagorean(rng: random.Random, max_hyp=50, max_vectors=8, min_vectors=2) -> Configuration:
    pool = pythagorean_directions(max_hyp)
    k = rng.randint(min_vectors, min(max_vectors, len(pool)))
    return Configuration.from_vectors(rng.sample(pool, k), "random_pythagorean")


@pytest.fixture
def rng():
    return random.Random(20261016)


def sqrt3_directions(max_den):
    """Directions (m/n, k sqrt3/n) with m^2 + 3k^2 = n^2 and n <= ``max_den``, plus (1, 0)."""
    out = [UnitVector.of(1, 0)]
    for n in range(2, max_den + 1):
        for k in range(1, n):
            m2 = n * n - 3 * k * k
            m = math.isqrt(max(m2, 0))
            if m2 >= 0 and m * m == m2:
                for s in (1, -1):
                    out.append(UnitVector(QuadElem.rational(Fraction(s * m, n)), QuadElem.sqrt(3, Fraction(k, n))))
    return list(Configuration.from_vectors(out).vectors)


CONFIGS_DIR = Path(__file__).resolve().parent.parent / "configs"
