"""Shared fixtures: expensive shooting results are computed once."""
import pytest

from qnmrecover.geometry import BlackHoleParams
from qnmrecover.spectrum import lattice_point, qnm_near


@pytest.fixture(scope="session")
def params_std():
    return BlackHoleParams(1.0, 0.04)


@pytest.fixture(scope="session")
def shooting_zeros(params_std):
    """k = 0 shooting zeros for l in {8, 10, 12}, seeded from the lattice."""
    out = {}
    for l in (8, 10, 12):
        mu = lattice_point(params_std, l, 0, +1).mu
        out[l] = qnm_near(params_std, l, mu)
    return out


@pytest.fixture(scope="session")
def lam_star(shooting_zeros):
    """Synthetic single-mode observation: the (l=10, k=0) zero at m = 1."""
    return shooting_zeros[10].location
