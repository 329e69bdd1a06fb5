import numpy as np
import pytest

from imexrbf import DomainSpec, GaussianSourceProblem, SourceParams, generate_disk_nodes


@pytest.fixture(scope="session")
def small_nodes():
    """Coarse disk, a few hundred nodes; enough structure for module tests."""
    return generate_disk_nodes(DomainSpec(radius=1.0, spacing=0.1, seed=7))


@pytest.fixture(scope="session")
def medium_nodes():
    """Finer disk used where discretization quality matters."""
    return generate_disk_nodes(DomainSpec(radius=1.0, spacing=0.05, seed=3))


@pytest.fixture(scope="session")
def mild_problem():
    return GaussianSourceProblem(SourceParams(np.array([0.5, 0.5]), 100.0))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
