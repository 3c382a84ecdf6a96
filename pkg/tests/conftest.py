import functools

import pytest

from tickbound import vehicle
from tickbound.automaton import product, trim
from tickbound.oracles import InstanceParams, random_case


@pytest.fixture(scope="session")
def plant():
    return vehicle.plant()


@pytest.fixture(scope="session")
def sup(plant):
    return vehicle.nonblocking_supervisor(plant)


@pytest.fixture(scope="session")
def cover():
    return vehicle.cover()


@functools.lru_cache(maxsize=None)
def case(seed, max_activities=8):
    inst = random_case(InstanceParams(seed=seed, activities=(2, max_activities)))
    k = trim(product(inst.plant, inst.spec))
    return inst, k


def cases(n, start=0):
    return [case(s) for s in range(start, start + n)]
