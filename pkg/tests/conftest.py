import math

import numpy as np
import pytest
from click.testing import CliRunner

from app import create_cli
from src.models import Effect, Scenario
from src.utils.qcore import project_to_effect


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def cli():
    return create_cli()


@pytest.fixture
def pi8_scenario():
    return Scenario(math.pi / 8, 0.1, 0.9)


@pytest.fixture
def random_effect(rng):
    """Efecto complejo aleatorio con espectro dentro de [0, 1]"""
    def make():
        raw = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        hermitian = 0.5 * (raw + raw.conj().T)
        values, vectors = np.linalg.eigh(hermitian)
        spread = rng.uniform(0.0, 1.0, size=4)
        return Effect(project_to_effect((vectors * spread) @ vectors.conj().T))
    return make


def discrete_twirl(matrix: np.ndarray, phases: int = 64) -> np.ndarray:
    """Promedio numerico sobre U_phi (x) U_-phi, el swap y la conjugacion"""
    total = np.zeros((4, 4), dtype=complex)
    for k in range(phases):
        phi = 2 * math.pi * k / phases
        local = np.diag([1.0, np.exp(-1j * phi), np.exp(1j * phi), 1.0])
        total += local @ matrix @ local.conj().T
    twirled = total / phases
    swap = np.eye(4)[[0, 2, 1, 3]]
    swapped = 0.5 * (twirled + swap @ twirled @ swap.T)
    return 0.5 * (swapped + swapped.conj())


@pytest.fixture
def twirl_oracle():
    return discrete_twirl
