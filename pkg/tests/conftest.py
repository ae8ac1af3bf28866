import pytest

from fatpoints import FieldConfig, Prover


@pytest.fixture(scope="session")
def cfg():
    return FieldConfig()


@pytest.fixture(scope="session")
def prover():
    # shared so memoized subgoals carry across tests
    return Prover(FieldConfig())
