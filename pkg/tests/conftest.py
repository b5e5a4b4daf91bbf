import numpy as np
import pytest

import aaals


@pytest.fixture(scope="session")
def starfish():
    return aaals.make_curve("starfish")


@pytest.fixture(scope="session")
def circle():
    return aaals.make_curve("circle")


@pytest.fixture(scope="session")
def starfish_fit_loose(starfish):
    """Starfish (Re z)^2 fit at tol 1e-6, shared across tests."""
    return aaals.aaazp(lambda z: np.real(z) ** 2, starfish, tol=1e-6)


@pytest.fixture(scope="session")
def starfish_map(starfish):
    return aaals.fit_map(starfish)


@pytest.fixture(scope="session")
def disk_solve_k10(circle):
    problem = aaals.ScatteringProblem(circle, aaals.IncidentField(k=10.0))
    return aaals.solve_scattering(problem)
