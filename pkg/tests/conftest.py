import pytest

from tzitzeica.diffpoly import DiffPoly
from tzitzeica.jets import SystemParams
from tzitzeica.linsolve import kernel_basis
from tzitzeica.recursion import P_step


@pytest.fixture(scope="session")
def params():
    return SystemParams(-1)


@pytest.fixture(scope="session")
def gen5(params):
    return kernel_basis(params, 5)[0]


@pytest.fixture(scope="session")
def gen7(params):
    return kernel_basis(params, 7)[0]


@pytest.fixture(scope="session")
def trace_u0(params):
    return P_step(params, DiffPoly.u(0))
