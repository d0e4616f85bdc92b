"""Boundary conditions that keep the underlying walk well defined.

Dirichlet sides pin the edge lattice site. Neumann and zero-flux sides add one
ghost site outside the lattice whose value (and force) feed the update of the
edge site. Periodic sides close the lattice into a ring.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Literal, Optional

import numpy as np

from .errors import ConfigInvalid, DegenerateGhost, NegativeDirichletOnUnsplitRun
from .lattice import Field

Side = Literal["left", "right"]
Kind = Literal["dirichlet", "neumann-fd", "neumann-exp", "periodic", "zero-flux"]

KINDS = ("dirichlet", "neumann-fd", "neumann-exp", "periodic", "zero-flux")
GHOST_FLOOR = 1e-300


@dataclass(frozen=True)
class BoundaryCondition:
    """``value_fn`` is ``a(t)`` for Dirichlet and ``b(t) = du/dx`` for Neumann."""

    side: Side
    kind: Kind
    value_fn: Optional[Callable[[float], float]] = None

    def __post_init__(self):
        if self.side not in ("left", "right"):
            raise ConfigInvalid(f"side must be 'left' or 'right', got {self.side!r}")
        if self.kind not in KINDS:
            raise ConfigInvalid(f"unknown boundary kind {self.kind!r}")
        if self.kind in ("dirichlet", "neumann-fd", "neumann-exp") and self.value_fn is None:
            raise ConfigInvalid(f"{self.kind} boundary on the {self.side} needs a value function")

    @property
    def ghosted(self) -> bool:
        return self.kind in ("neumann-fd", "neumann-exp", "zero-flux")

    @property
    def is_neumann(self) -> bool:
        return self.kind.startswith("neumann")

    def value(self, t: float) -> float:
        v = float(self.value_fn(t))
        if not math.isfinite(v):
            raise ConfigInvalid(f"{self.side} boundary value is non-finite at t={t}")
        return v


def check_pair(left: BoundaryCondition, right: BoundaryCondition) -> None:
    if left.side != "left" or right.side != "right":
        raise ConfigInvalid("boundaries must be given as (left, right)")
    if (left.kind == "periodic") != (right.kind == "periodic"):
        raise ConfigInvalid("periodic must be specified on both sides or neither")


def dirichlet(side: Side, a: Callable[[float], float]) -> BoundaryCondition:
    return BoundaryCondition(side, "dirichlet", a)


def neumann(side: Side, b: Callable[[float], float], ghost: str = "exp") -> BoundaryCondition:
    if ghost not in ("fd", "exp"):
        raise ConfigInvalid(f"ghost rule must be 'fd' or 'exp', got {ghost!r}")
    return BoundaryCondition(side, f"neumann-{ghost}", b)


def zero_flux(side: Side) -> BoundaryCondition:
    return BoundaryCondition(side, "zero-flux")


def periodic() -> tuple[BoundaryCondition, BoundaryCondition]:
    return BoundaryCondition("left", "periodic"), BoundaryCondition("right", "periodic")


# Dirichlet -----------------------------------------------------------------


def dirichlet_apply(field, side: Side, a_t: float, split: bool = False):
    """Pin the edge site on ``side`` to ``a_t``.

    Works on a Field (returning a new Field) or on a raw array (returning a
    copy). Negative data is only allowed for signed arrays in split runs.
    """
    if a_t < 0 and not split:
        raise NegativeDirichletOnUnsplitRun(f"a(t)={a_t} on the {side} of a non-negative run")
    values = np.array(getattr(field, "values", field), dtype=np.float64)
    values[0 if side == "left" else -1] = a_t
    if isinstance(field, Field):
        return Field(values, field.time_index)
    return values


def dirichlet_split(a_t: float) -> tuple[float, float]:
    return max(a_t, 0.0), max(-a_t, 0.0)


# Neumann ghosts --------------------------------------------------------------


def neumann_ghost_fd(boundary_value: float, b_t: float, dx: float, side: Side) -> float:
    """Finite-difference ghost; may come out negative for large ``dx``."""
    if side == "right":
        return boundary_value + dx * b_t
    return boundary_value - dx * b_t


def neumann_ghost_exp(boundary_value: float, b_t: float, dx: float, side: Side) -> float:
    """Multiplicative ghost ``U exp(+-dx b / U)``, strictly positive.

    Raises DegenerateGhost when ``boundary_value`` is at or below the ghost
    floor, or when the exponential overflows. Exponents below about -745
    underflow to a zero ghost.
    """
    if not boundary_value > GHOST_FLOOR:
        raise DegenerateGhost(f"boundary value {boundary_value} at or below the ghost floor")
    sign = 1.0 if side == "right" else -1.0
    exponent = sign * dx * b_t / boundary_value
    if exponent > 709.0:
        raise DegenerateGhost(f"ghost exponent {exponent} overflows")
    return boundary_value * math.exp(exponent)


def neumann_ghost(kind: Kind, boundary_value: float, b_t: float, dx: float, side: Side) -> tuple[float, Optional[str]]:
    """Ghost value for a Neumann side plus the name of any fallback taken.

    The exponential rule falls back to ``max(fd ghost, 0)`` when degenerate.
    """
    if kind == "neumann-fd":
        return neumann_ghost_fd(boundary_value, b_t, dx, side), None
    try:
        return neumann_ghost_exp(boundary_value, b_t, dx, side), None
    except DegenerateGhost:
        return max(neumann_ghost_fd(boundary_value, b_t, dx, side), 0.0), "exp_ghost_fallback"


# Zero flux -----------------------------------------------------------------


def zero_flux_ghosts(field, probs) -> tuple[float, float]:
    """Ghost values that make the boundary fluxes cancel exactly.

    ``field`` holds the ``M`` lattice values; ``probs`` covers the extended
    array of ``M + 2`` sites with the ghosts at both ends.
    """
    u = np.asarray(getattr(field, "values", field), dtype=np.float64)
    p_r = np.asarray(getattr(probs, "p_right", probs))
    if len(p_r) != len(u) + 2:
        raise ValueError("probabilities must include both ghost sites")
    return zero_flux_ghost(u, p_r, "left"), zero_flux_ghost(u, p_r, "right")


def zero_flux_ghost(u, p_right, side: Side) -> float:
    """One zero-flux ghost; ``p_right`` has the ghost at its end on ``side``.

    Infinite when the ghost's return probability saturates to zero. The
    stepper therefore uses the equivalent return flux instead of this value.
    """
    if side == "left":
        return float((1.0 - p_right[1]) / p_right[0] * u[0])
    return float(p_right[-2] / (1.0 - p_right[-1]) * u[-1])


# Periodic ------------------------------------------------------------------


def periodic_wrap(field) -> tuple[np.ndarray, np.ndarray]:
    """Left and right neighbour values of every site on the ring."""
    u = np.asarray(getattr(field, "values", field), dtype=np.float64)
    return np.roll(u, 1), np.roll(u, -1)


def periodic_neighbor(i: int, n_sites: int, direction: Side) -> int:
    return (i + (1 if direction == "right" else -1)) % n_sites
