from __future__ import annotations

import pytest

from inclusion_rh.params import ModelParams
from inclusion_rh.solver import solve

# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES: list[str] = []

# a parameter set away from the degenerate stress ratio tau1 = kappa * tau1_inf
GENERIC = ModelParams(m=2.0, tau1_hat=-0.5, N0_star=0.4, b0=0.3)


@pytest.fixture(scope="session")
def default_state():
    return solve(ModelParams())


@pytest.fixture(scope="session")
def generic_state():
    return solve(GENERIC)


@pytest.fixture(scope="session")
def lower_state():
    """Contour in the lower half-plane (|tau1| > |tau1_inf|)."""
    return solve(ModelParams(m=2.0, tau1_hat=-3.0, N0_star=-0.3, b0=-0.5))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
