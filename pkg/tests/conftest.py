import pytest

import bonusmalus as bm

RULES = bm.ScaleRules(levels=4, penalties=(1, 2, 3, 3))
LAMBDA = 0.1


@pytest.fixture(scope="session")
def model():
    return bm.ExponentialSeverity(mu=2.0)


@pytest.fixture(scope="session")
def partition_a(model):
    return bm.type_probabilities(model, (1.0, 2.0, 4.0))


@pytest.fixture(scope="session")
def partition_b(model):
    return bm.type_probabilities(model, (0.3, 1.2, 2.8))


@pytest.fixture(scope="session")
def rules():
    return RULES


@pytest.fixture(scope="session")
def profile_a(partition_a, rules):
    return bm.steady_state_profile(LAMBDA, rules, partition_a, bm.ExponentialUnitMixing())


@pytest.fixture(scope="session")
def profile_b(partition_b, rules):
    return bm.steady_state_profile(LAMBDA, rules, partition_b, bm.ExponentialUnitMixing())
