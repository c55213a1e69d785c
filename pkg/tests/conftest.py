import pytest

from factorgaps import build_prime_table


@pytest.fixture(scope="session")
def table_small():
    return build_prime_table(10_000)


@pytest.fixture(scope="session")
def table_1e6():
    return build_prime_table(1_000_000)
