import numpy as np
import pytest

from src.quantum import DensityMatrix, Hamiltonian
from src.timing import SamplerConfig


@pytest.fixture
def two_level():
    """H = diag(0, 1) and the equal superposition, R01 = 0.5."""
    H = Hamiltonian.from_energies([0.0, 1.0])
    return H, DensityMatrix.pure([1.0, 1.0])


@pytest.fixture
def three_level():
    H = Hamiltonian.from_energies([0.0, 1.0, 2.5])
    return H, DensityMatrix.pure(np.array([1.0, 1.0j, 0.5]))


@pytest.fixture
def sampler():
    return SamplerConfig(seed=12345, n_samples=200_000, n_jobs=1)
