from __future__ import annotations

import pytest

from kummer3.arith import sieve_spf
from kummer3.census import CensusConfig, run_census


@pytest.fixture(scope="session")
def sieve_1e5():
    return sieve_spf(10**5)


@pytest.fixture(scope="session")
def census_1e5(sieve_1e5):
    return run_census(CensusConfig(max_d=10**5), sieve_1e5)
