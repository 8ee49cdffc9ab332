import random

import pytest

from persistgrid import Field


@pytest.fixture
def Q():
    return Field.rationals()


@pytest.fixture
def F2():
    return Field.prime(2)


@pytest.fixture
def F3():
    return Field.prime(3)


@pytest.fixture
def rng():
    return random.Random(20260823)
