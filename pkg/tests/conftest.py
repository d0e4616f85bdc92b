import numpy as np
import pytest

from dtrw import boundary as bc
from dtrw.force import burgers, diffusion
from dtrw.lattice import TimeGrid, make_lattice
from dtrw.stepper import SchemeConfig


@pytest.fixture
def rng():
    return np.random.default_rng(20161)


def ring_config(n_sites=16, dx=0.25, nu=0.45, force=None, split=False, quadrature="two"):
    lat = make_lattice(0.0, n_sites * dx, dx, "cell")
    force = burgers(nu) if force is None else force
    return SchemeConfig(lat, TimeGrid.for_lattice(lat, nu), force, bc.periodic(), quadrature, split)


def zero_flux_config(n_sites=40, dx=0.5, diffusivity=0.5, force=None):
    lat = make_lattice(0.0, n_sites * dx, dx, "cell")
    force = diffusion() if force is None else force
    return SchemeConfig(
        lat, TimeGrid.for_lattice(lat, diffusivity), force, (bc.zero_flux("left"), bc.zero_flux("right"))
    )
