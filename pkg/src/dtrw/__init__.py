"""Discrete-time random walk schemes for 1-D nonlinear advection-diffusion."""

from .boundary import BoundaryCondition, dirichlet, neumann, periodic, zero_flux
from .force import ForceSpec, burgers, diffusion, prescribed
from .lattice import Field, Lattice, SignedField, TimeGrid, make_lattice, steps_to_time, time_step_for
from .oracle import ErrorRecord, TanhSolution, convergence_order, l1_error
from .stepper import SchemeConfig, evolve, rescale_initial, step, step_split

__version__ = "0.1.0"
