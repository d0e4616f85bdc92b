"""Space-time grid and field containers.

The time step is never chosen independently: it is locked to the spatial
spacing through ``dt = dx**2 / (2 D)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .errors import NonCommensurateDomain, TimeNotReachable

Offset = Literal["node", "cell"]

_COMMENSURATE_RTOL = 1e-9


@dataclass(frozen=True)
class Lattice:
    """Uniform 1-D lattice.

    ``offset="node"`` puts site ``i`` at ``x_min + i*dx`` (both endpoints are
    sites); ``offset="cell"`` puts it at ``x_min + (i + 1/2)*dx`` so the
    domain edges fall halfway between sites. The 0-based index here
    corresponds to the 1-based ``i - 1/2`` convention for cell-centred grids.
    """

    x_min: float
    x_max: float
    dx: float
    n_sites: int
    offset: Offset = "node"

    def __post_init__(self):
        if not self.dx > 0:
            raise ValueError(f"dx must be positive, got {self.dx}")
        if self.n_sites < 3:
            raise ValueError(f"need at least 3 sites, got {self.n_sites}")
        if self.offset not in ("node", "cell"):
            raise ValueError(f"unknown offset {self.offset!r}")
        intervals = self.n_sites - 1 if self.offset == "node" else self.n_sites
        end = self.x_min + intervals * self.dx
        if abs(end - self.x_max) > 1e-12 * max(abs(self.x_max), abs(self.x_min), self.dx):
            raise NonCommensurateDomain(
                f"{intervals} intervals of {self.dx} from {self.x_min} end at {end}, not {self.x_max}"
            )

    @property
    def x(self) -> np.ndarray:
        shift = 0.0 if self.offset == "node" else 0.5
        return self.x_min + (np.arange(self.n_sites) + shift) * self.dx

    @property
    def length(self) -> float:
        return self.x_max - self.x_min


def make_lattice(x_min: float, x_max: float, dx: float, offset: Offset = "node") -> Lattice:
    """Build a lattice whose spacing divides ``[x_min, x_max]`` exactly.

    Raises NonCommensurateDomain when ``(x_max - x_min)/dx`` is not an integer
    to within a relative tolerance of 1e-9.
    """
    if not x_max > x_min:
        raise ValueError("x_max must exceed x_min")
    if not dx > 0:
        raise ValueError("dx must be positive")
    ratio = (x_max - x_min) / dx
    intervals = round(ratio)
    if intervals < 1 or abs(ratio - intervals) > _COMMENSURATE_RTOL * max(ratio, 1.0):
        raise NonCommensurateDomain(f"dx={dx} does not divide [{x_min}, {x_max}]")
    n_sites = intervals + 1 if offset == "node" else intervals
    # Snap x_max to the lattice so the Lattice invariant holds at 1e-12.
    return Lattice(x_min, x_min + intervals * dx, dx, n_sites, offset)


def time_step_for(dx: float, diffusivity: float) -> float:
    if not (dx > 0 and diffusivity > 0):
        raise ValueError("dx and diffusivity must be positive")
    return dx * dx / (2.0 * diffusivity)


def steps_to_time(target_t: float, dt: float, snap: bool = False) -> tuple[int, float]:
    """Number of steps reaching ``target_t`` and the time actually realised.

    Without ``snap`` the target must be an integer multiple of ``dt`` (relative
    tolerance 1e-9), otherwise TimeNotReachable is raised.
    """
    if target_t < 0 or not dt > 0:
        raise ValueError("need target_t >= 0 and dt > 0")
    ratio = target_t / dt
    n = round(ratio)
    if abs(ratio - n) <= 1e-9 * max(ratio, 1.0):
        return n, n * dt
    if not snap:
        raise TimeNotReachable(f"t={target_t} is {ratio} steps of dt={dt}")
    return n, n * dt


@dataclass(frozen=True)
class TimeGrid:
    dt: float
    diffusivity: float
    n_steps: int = 0

    @classmethod
    def for_lattice(cls, lattice: Lattice, diffusivity: float, n_steps: int = 0) -> TimeGrid:
        return cls(time_step_for(lattice.dx, diffusivity), diffusivity, n_steps)

    def consistent_with(self, dx: float) -> bool:
        return abs(self.dt * 2.0 * self.diffusivity - dx * dx) <= 1e-15 * dx * dx


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Field:
    """Non-negative density on the lattice sites at one time level."""

    values: np.ndarray
    time_index: int = 0

    def __post_init__(self):
        arr = _frozen(self.values)
        if arr.ndim != 1:
            raise ValueError("field values must be one-dimensional")
        if not np.all(np.isfinite(arr)):
            raise ValueError("field values must be finite")
        if np.any(arr < 0):
            raise ValueError("field values must be non-negative; use SignedField")
        object.__setattr__(self, "values", arr)

    @property
    def mass(self) -> float:
        return float(self.values.sum())

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class SignedField:
    """Mixed-sign data held as the difference of two non-negative fields."""

    plus: Field
    minus: Field = field(default=None)

    def __post_init__(self):
        if self.minus is None:
            object.__setattr__(self, "minus", Field(np.zeros(len(self.plus)), self.plus.time_index))
        if len(self.plus) != len(self.minus):
            raise ValueError("plus and minus must share the lattice")
        if self.plus.time_index != self.minus.time_index:
            raise ValueError("plus and minus must share the time index")

    @property
    def values(self) -> np.ndarray:
        return self.plus.values - self.minus.values

    @property
    def time_index(self) -> int:
        return self.plus.time_index

    def __len__(self):
        return len(self.plus)
