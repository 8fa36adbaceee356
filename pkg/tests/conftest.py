import pytest

import rsm2d
from rsm2d import BasisSpec, assemble, potentials, solve

L_SHO_22 = 11.97
L_QCD_42 = 15.53


@pytest.fixture(scope="session")
def sho22():
    op = assemble(BasisSpec.square(22, L_SHO_22), potentials.sho(L_SHO_22))
    return op, solve(op)


@pytest.fixture(scope="session")
def sho_curve():
    return rsm2d.build_curve([6, 10, 14, 18, 22], potentials.sho)


@pytest.fixture(scope="session")
def qcd42():
    op = assemble(BasisSpec.square(42, L_QCD_42), potentials.qcd(L_QCD_42))
    return op, solve(op)


@pytest.fixture(scope="session")
def qcd_curve():
    return rsm2d.build_curve([30, 36, 42], potentials.qcd, bracket=(8, 25))


# acceptance summary: one line per criterion, printed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
