import numpy as np
import pytest

from polyion.core.config import load_setup, load_species
from polyion.data import species_path, trap_path
from polyion.molspec import j_max_for_cutoff, solve_levels
from polyion.trapdyn import TrapConfig


def solve(species, cutoff):
    return solve_levels(species, j_max_for_cutoff(species, cutoff), cutoff)


@pytest.fixture(scope="session")
def generic76():
    return load_species(species_path("generic76"))


@pytest.fixture(scope="session")
def propanediol():
    return load_species(species_path("propanediol-like"))


@pytest.fixture(scope="session")
def co_like():
    return load_species(species_path("co-like"))


@pytest.fixture(scope="session")
def sr_setup():
    return load_setup(trap_path("sr88-1050nm"))


@pytest.fixture(scope="session")
def generic_table(generic76, sr_setup):
    return solve(generic76, sr_setup.levels.cutoff)


@pytest.fixture(scope="session")
def propanediol_table(propanediol, sr_setup):
    return solve(propanediol, sr_setup.levels.cutoff)


@pytest.fixture(scope="session")
def co_table(co_like, sr_setup):
    return solve(co_like, sr_setup.levels.cutoff)


@pytest.fixture(scope="session")
def sr_trap(sr_setup, generic76):
    return sr_setup.trap_for(generic76)


@pytest.fixture
def slow_trap():
    """Low-frequency trap used where long, cheap integrations are needed"""
    return TrapConfig(secular_freqs=(2 * np.pi * 50e3, 2 * np.pi * 50e3, 2 * np.pi * 20e3))
