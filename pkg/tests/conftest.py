import math
import sys

import pytest

from nashcover import ExplicitFamily, Instance, Solution


@pytest.fixture
def small_instance():
    """n=3, T=2 with rounds {{0,1},{2}} and {{0},{1,2}}; optimum ({0,1},{1,2})."""
    return Instance(3, 2, (ExplicitFamily(((0, 1), (2,))), ExplicitFamily(((0,), (1, 2)))))


@pytest.fixture
def small_start():
    return Solution([(2,), (0,)])


CUBE_ROOT_12 = 12 ** (1 / 3)
LN2 = math.log(2)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
