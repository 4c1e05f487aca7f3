"""Shared fixtures.

The level-2 tower over C(Z/2) shows up in most of the dynamical tests, so
it is built once per session. Everything else is cheap enough to build
inline.
"""

import pytest

from hopfcheck.hopf import build_function_algebra, build_group_algebra, cyclic_table
from hopfcheck.tower import build_tower, rohlin_report


@pytest.fixture(scope="session")
def f2():
    return build_function_algebra(cyclic_table(2), label="C(Z2)")


@pytest.fixture(scope="session")
def g3():
    return build_group_algebra(cyclic_table(3), label="C[Z3]")


@pytest.fixture(scope="session")
def tower_f2(f2):
    return build_tower(f2, 3)


@pytest.fixture(scope="session")
def level2_f2(tower_f2):
    """(level, rohlin witness, dual-side witness, report) at level 2."""
    lv = tower_f2[1]
    rw, wit, report = rohlin_report(lv)
    return lv, rw, wit, report
