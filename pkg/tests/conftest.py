import pytest
from hypothesis import settings

from nibbletape import aca, machine

settings.register_profile("suite", deadline=None, max_examples=200)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def spec():
    return machine.wolfram23_spec()


@pytest.fixture(scope="session")
def genome(spec):
    return machine.arithmetize_spec(spec)


@pytest.fixture(scope="session")
def rule(genome):
    return machine.expand_rule(genome, machine.EXACT_BIT3)


@pytest.fixture(scope="session")
def rule_literal(genome):
    return machine.expand_rule(genome, machine.LITERAL_EQ3)


@pytest.fixture(scope="session")
def deltas(rule):
    return aca.delta_table(rule)
