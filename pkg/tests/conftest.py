import functools

import pytest

from rtile.corpus import sweep_corpus, equivalence_corpus
from rtile.reduction import reduce


@functools.lru_cache(maxsize=None)
def reduced_sweep():
    return [(f, *reduce(f)) for f in sweep_corpus()]


@functools.lru_cache(maxsize=None)
def reduced_equivalence():
    sat_side, unsat_side = equivalence_corpus()
    return [(f, *reduce(f)) for f in sat_side + unsat_side]


@pytest.fixture(scope="session")
def sweep():
    return reduced_sweep()


@pytest.fixture(scope="session")
def equivalence_cases():
    return reduced_equivalence()
