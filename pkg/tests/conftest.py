import math
import random

import pytest

from hausnorm import PowerMap, from_hardy_littlewood
from hausnorm.bounds import BoundConfig, SlotParams
from hausnorm.exponents import Constant


@pytest.fixture(scope="session")
def hardy_op():
    return from_hardy_littlewood(PowerMap(1.0, 0.0))


@pytest.fixture(scope="session")
def hardy_cfg(hardy_op):
    return BoundConfig(hardy_op, (SlotParams(q=Constant(2.0)),))


def midpoint_radial(fn, r_lo, r_hi, n_steps=20000):
    """Midpoint rule for integral of fn(r) dr on [r_lo, r_hi]; test oracle."""
    h = (r_hi - r_lo) / n_steps
    return h * math.fsum(fn(r_lo + (i + 0.5) * h) for i in range(n_steps))


def seeded(seed):
    return random.Random(seed)
