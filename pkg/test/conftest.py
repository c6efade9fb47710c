# -*- mode: python; indent-tabs-mode: nil -*-

import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from radial.grid import make_grid  # noqa: E402
from choquard.energy import build_kernel  # noqa: E402
from choquard.params import ProblemParams  # noqa: E402


@pytest.fixture(scope='session')
def case1():
    """N=3, alpha=1, s=0, p=2, q=4, lambda=mu=1 on the unit ball."""
    return ProblemParams(3, 1.0, 0.0, 2.0, 4.0, 1.0, 1.0)


@pytest.fixture(scope='session')
def small_grid():
    return make_grid(1.0, 64, 2.0, 3)


@pytest.fixture(scope='session')
def small_kernel(small_grid):
    return build_kernel(small_grid, 1.0)
