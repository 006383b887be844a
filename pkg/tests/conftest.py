import numpy as np
import pytest

from qentro.operators import PositiveOperator
from qentro.sampling import random_complex, rng_for


@pytest.fixture
def rng():
    return rng_for(20240917)


def bell_state() -> PositiveOperator:
    return PositiveOperator.pure(np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2.0))


def plus_state() -> PositiveOperator:
    return PositiveOperator.pure(np.array([1.0, 1.0]) / np.sqrt(2.0))


def random_density(rng, dim, rank=None) -> PositiveOperator:
    r = dim if rank is None else rank
    g = random_complex(rng, dim, r)
    m = g @ g.conj().T
    return PositiveOperator.from_matrix(m / np.trace(m).real)
