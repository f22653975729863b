import random

import pytest

from delegov.elgamal import enc_keygen
from delegov.group import DEFAULT_GROUP


@pytest.fixture
def group():
    return DEFAULT_GROUP


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)


@pytest.fixture
def keys(group, rng):
    return enc_keygen(group, rng)
