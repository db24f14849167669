"""Shared fixtures for the default thermal setup used throughout the suite."""

import numpy as np
import pytest

from mpembasim import (
    ThermalEnvironment,
    build_heat_exchange,
    decompose,
    extract_generator,
    qubit_hamiltonian,
)

COUPLING_HZ = 215.1
HOT_T_KHZ = 4.77
COLD_T_KHZ = 2.38


@pytest.fixture
def hot_env():
    return ThermalEnvironment(temperature=HOT_T_KHZ, gap_frequency=2.0)


@pytest.fixture
def cold_env():
    return ThermalEnvironment(temperature=COLD_T_KHZ, gap_frequency=1.0)


@pytest.fixture
def rho0():
    # weights 0.3 / 0.7 on the sigma_x eigenstates
    return np.array([[0.5, -0.2], [-0.2, 0.5]], dtype=complex)


@pytest.fixture
def h_hot():
    return qubit_hamiltonian(2.0, axis="z")


@pytest.fixture
def unit_decomposition(hot_env):
    channel = build_heat_exchange(hot_env, COUPLING_HZ, 1.0)
    return decompose(extract_generator(channel, 1.0))


@pytest.fixture
def rng():
    return np.random.default_rng(20260822)


@pytest.fixture
def random_density(rng):
    def make():
        a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        rho = a @ a.conj().T
        return rho / np.trace(rho).real

    return make
