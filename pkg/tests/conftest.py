import pytest
from hypothesis import settings

from kvcert.fields import field_of_order
from kvcert.polyring import parse_poly

# oracle comparisons (sympy) are slow; timing is not under test
settings.register_profile("kvcert", deadline=None)
settings.load_profile("kvcert")


@pytest.fixture(scope="session")
def F3():
    return field_of_order(3)


@pytest.fixture(scope="session")
def F4():
    return field_of_order(4)


@pytest.fixture(scope="session")
def F5():
    return field_of_order(5)


@pytest.fixture(scope="session")
def P3(F3):
    """The cubic prime T^3 - T^2 + 1 over F_3."""
    return parse_poly("T^3-T^2+1", F3)


@pytest.fixture(scope="session")
def P4(F4):
    """The quintic prime over F_4 used in the characteristic-2 worked example."""
    return parse_poly("T^5+a^2*T^4+T^3+a*T^2+a^2", F4)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
