"""Shared fixtures: the paper-parameter level table and the N=1 sector
eigensystem are cheap enough to build once per session; the N=2 sector
eigensystem is expensive (minutes) and therefore built lazily by the few
tests that need it.
"""

import numpy as np
import pytest

from jtcavity import (CavityParams, ModelParams, assemble_hamiltonian,
                      brightest_transition_energy, diagonalize_molecule,
                      eig_dense, enumerate_sector_basis)
from jtcavity.collective import required_v_list


@pytest.fixture(scope="session")
def params18():
    return ModelParams()  # omega 0.08196, epsilon 7, kappa 2.2*omega, n_max 18


@pytest.fixture(scope="session")
def table18(params18):
    v_list = required_v_list(2, 1, -1, params18.n_max)
    return diagonalize_molecule(params18, v_list)


@pytest.fixture(scope="session")
def levels18(table18):
    return table18[0]


@pytest.fixture(scope="session")
def couplings18(table18):
    return table18[1]


@pytest.fixture(scope="session")
def omega_c(levels18):
    return brightest_transition_energy(levels18)


@pytest.fixture(scope="session")
def cavity1(omega_c):
    return CavityParams(omega_c=omega_c, Omega=0.1 * omega_c, N=1)


@pytest.fixture(scope="session")
def cavity2(omega_c):
    return CavityParams(omega_c=omega_c, Omega=0.1 * omega_c, N=2)


@pytest.fixture(scope="session")
def basis1(levels18):
    return enumerate_sector_basis(1, 1, -1, levels18)


@pytest.fixture(scope="session")
def h1(basis1, levels18, couplings18, cavity1):
    return assemble_hamiltonian(basis1, levels18, couplings18, cavity1)


@pytest.fixture(scope="session")
def eig1(h1):
    return eig_dense(h1, want_vectors=True)


@pytest.fixture(scope="session")
def basis2(levels18):
    return enumerate_sector_basis(2, 1, -1, levels18)


@pytest.fixture(scope="session")
def h2(basis2, levels18, couplings18, cavity2):
    return assemble_hamiltonian(basis2, levels18, couplings18, cavity2)


@pytest.fixture(scope="session")
def eig2(h2):
    # full dense solve of the 11664 sector: takes a few minutes
    return eig_dense(h2, want_vectors=True)


def random_state(dim, seed=0):
    rng = np.random.default_rng(seed)
    psi = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return psi / np.linalg.norm(psi)
