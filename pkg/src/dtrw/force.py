"""Drift terms and the potential increments feeding the jump weights.

A PDE ``u_t = D u_xx - 2 beta D (F u)_x`` is described here by the pair
``(beta, F)``; the diffusivity ``D`` lives on the time grid.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Literal, Optional

import numpy as np

from .errors import NonFiniteForce, StencilOutOfRange
from .lattice import Lattice

Kind = Literal["prescribed", "state-dependent"]
Rule = Literal["single", "two"]

SINGLE: Rule = "single"
TWO: Rule = "two"


@dataclass(frozen=True)
class ForceSpec:
    """Force ``F(x, t, u)`` with its inverse temperature ``beta``.

    ``evaluate`` is called with numpy arrays ``x`` and ``u`` (same shape) and a
    scalar ``t``; prescribed forces ignore ``u``. ``flux_speed`` optionally
    maps ``(x, t, u)`` to the characteristic speed ``d(2 beta D F u)/du``
    divided by ``2 beta D``; when omitted it is estimated numerically.
    """

    kind: Kind
    evaluate: Callable[[np.ndarray, float, np.ndarray], np.ndarray]
    beta: float
    description: str = ""
    flux_speed: Optional[Callable[[np.ndarray, float, np.ndarray], np.ndarray]] = None

    def __post_init__(self):
        if self.kind not in ("prescribed", "state-dependent"):
            raise ValueError(f"unknown force kind {self.kind!r}")
        if not self.beta > 0:
            raise ValueError("beta must be positive")

    def __call__(self, x, t, u):
        x = np.asarray(x, dtype=np.float64)
        u = np.asarray(u, dtype=np.float64)
        out = np.broadcast_to(np.asarray(self.evaluate(x, t, u), dtype=np.float64), np.broadcast(x, u).shape)
        if not np.all(np.isfinite(out)):
            raise NonFiniteForce(f"{self.description or 'force'} is non-finite at t={t}")
        return np.array(out)

    def characteristic_speed(self, x, t, u, diffusivity: float) -> np.ndarray:
        """Local advective speed ``|2 beta D d(F u)/du|`` used by the CFL monitor."""
        x = np.asarray(x, dtype=np.float64)
        u = np.asarray(u, dtype=np.float64)
        if self.flux_speed is not None:
            g = self.flux_speed(x, t, u)
        elif self.kind == "prescribed":
            g = self(x, t, u)
        else:
            h = 1e-6 * np.maximum(1.0, np.abs(u))
            g = ((u + h) * self(x, t, u + h) - (u - h) * self(x, t, u - h)) / (2 * h)
        return np.abs(2.0 * self.beta * diffusivity * np.asarray(g, dtype=np.float64))


def force_on_lattice(spec: ForceSpec, lattice: Lattice, t: float, values) -> np.ndarray:
    """Sample ``F(x_i, t, U_i)`` at every lattice site."""
    values = np.asarray(getattr(values, "values", values), dtype=np.float64)
    if len(values) != lattice.n_sites:
        raise ValueError("field is not defined on this lattice")
    return spec(lattice.x, t, values)


def potential_increment(force_values, i: int, direction: str, dx: float, rule: Rule) -> float:
    """Quadrature of ``F`` over the bond from site ``i`` towards ``direction``."""
    f = np.asarray(force_values, dtype=np.float64)
    n = len(f)
    if not 0 <= i < n:
        raise StencilOutOfRange(f"site {i} outside 0..{n - 1}")
    if rule == SINGLE:
        return dx * f[i]
    if rule != TWO:
        raise ValueError(f"unknown quadrature rule {rule!r}")
    if direction not in ("left", "right"):
        raise ValueError(f"unknown direction {direction!r}")
    j = i + 1 if direction == "right" else i - 1
    if not 0 <= j < n:
        raise StencilOutOfRange(f"two-point rule at site {i} needs site {j}")
    return 0.5 * dx * (f[i] + f[j])


# Presets -------------------------------------------------------------------


def burgers(nu: float) -> ForceSpec:
    """``u_t = nu u_xx - u u_x``: D = nu, beta = 1/(4 nu), F = u."""
    if not nu > 0:
        raise ValueError("nu must be positive")
    return ForceSpec(
        kind="state-dependent",
        evaluate=lambda x, t, u: u,
        beta=1.0 / (4.0 * nu),
        description=f"burgers(nu={nu})",
        flux_speed=lambda x, t, u: 2.0 * u,
    )


def diffusion(beta: float = 1.0) -> ForceSpec:
    return ForceSpec(
        kind="prescribed",
        evaluate=lambda x, t, u: np.zeros(np.broadcast(x, u).shape),
        beta=beta,
        description="diffusion",
    )


def prescribed(fn: Callable[[np.ndarray, float], np.ndarray], beta: float, description: str = "") -> ForceSpec:
    """Wrap a state-independent ``F(x, t)``."""
    return ForceSpec(
        kind="prescribed",
        evaluate=lambda x, t, u: fn(x, t),
        beta=beta,
        description=description or getattr(fn, "__name__", "prescribed"),
    )


PRESETS = {"burgers": burgers, "diffusion": diffusion}
