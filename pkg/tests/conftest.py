import pytest

from fgdyn import collect_attracting_points, cyclic_permutation, fibonacci, identity, invert, tribonacci
from helpers import ACCEPTANCE


@pytest.fixture
def trib():
    return tribonacci()


@pytest.fixture
def fib():
    return fibonacci()


@pytest.fixture
def ident():
    return identity(3)


@pytest.fixture
def perm():
    return cyclic_permutation(3)


@pytest.fixture(scope="session")
def trib_inv():
    return invert(tribonacci()).inverse()


@pytest.fixture(scope="session")
def trib_points():
    return collect_attracting_points(tribonacci(), 2)


@pytest.fixture(scope="session")
def trib_inv_points(trib_inv):
    return collect_attracting_points(trib_inv, 2)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")
