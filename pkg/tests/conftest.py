import os
import random
import sys

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from adeltors.adelic import AdelicCube          # noqa: E402
from adeltors.localize import Site              # noqa: E402

SEED = int(os.environ.get("TTG_SEED", "20260801"))


@pytest.fixture
def rng():
    return random.Random(SEED)


@pytest.fixture(scope="session")
def zsite():
    return Site("zint", T=(2, 3))


@pytest.fixture(scope="session")
def zsite5():
    return Site("zint", T=(2, 3, 5))


@pytest.fixture(scope="session")
def vsite():
    return Site("valrank2")


@pytest.fixture(scope="session")
def zcube(zsite):
    return AdelicCube(zsite)


@pytest.fixture(scope="session")
def vcube(vsite):
    return AdelicCube(vsite)
