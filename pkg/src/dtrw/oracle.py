"""Exact solutions, error norms and convergence-order estimation."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DegenerateFit, LengthMismatch, NonPositivePhi
from .lattice import Lattice


@dataclass(frozen=True)
class TanhSolution:
    """Travelling-front Burgers solution

    u(x, t) = (C2 + 2 nu C1^2 tanh(C2 t - C1 x + C3)) / C1

    With ``C1 = C2 = 1`` and ``C3 = c`` this is ``1 + 2 nu tanh(c + t - x)``.
    """

    C1: float = 1.0
    C2: float = 1.0
    C3: float = -3.0
    nu: float = 0.45

    def __post_init__(self):
        if self.C1 == 0:
            raise ValueError("C1 must be non-zero")
        if not self.nu > 0:
            raise ValueError("nu must be positive")

    @classmethod
    def front(cls, nu: float, c: float) -> TanhSolution:
        return cls(1.0, 1.0, c, nu)

    def __call__(self, x, t):
        return tanh_solution_eval(self, x, t)

    def dudx(self, x, t):
        """Analytic spatial derivative (the Neumann data of the front)."""
        arg = t * self.C2 - np.asarray(x, dtype=np.float64) * self.C1 + self.C3
        return -2.0 * self.nu * self.C1**2 / np.cosh(arg) ** 2

    def bounds(self) -> tuple[float, float]:
        mid, amp = self.C2 / self.C1, 2.0 * self.nu * abs(self.C1)
        return mid - amp, mid + amp

    def heat_phi(self, x, t):
        """Positive heat-equation solution mapped onto this front by Hopf-Cole.

        Sum of two exponential modes ``exp(a x + nu a^2 t)`` whose Hopf-Cole
        image has limits ``C2/C1 +- 2 nu C1``.
        """
        x = np.asarray(x, dtype=np.float64)
        nu, c1, c2, c3 = self.nu, self.C1, self.C2, self.C3
        a1 = -(c2 / c1 + 2.0 * nu * c1) / (2.0 * nu)
        a2 = -(c2 / c1 - 2.0 * nu * c1) / (2.0 * nu)
        # Mode difference (a1 - a2) x + nu (a1^2 - a2^2) t = 2 (C2 t - C1 x).
        return np.exp(c3 + a1 * x + nu * a1 * a1 * t) + np.exp(-c3 + a2 * x + nu * a2 * a2 * t)


def tanh_solution_eval(sol: TanhSolution, x, t):
    arg = t * sol.C2 - np.asarray(x, dtype=np.float64) * sol.C1 + sol.C3
    out = (sol.C2 + 2.0 * sol.nu * sol.C1**2 * np.tanh(arg)) / sol.C1
    return out if np.ndim(out) else float(out)


@dataclass(frozen=True)
class HeatGaussian:
    """Spreading Gaussian of total mass ``mass`` solving ``u_t = D u_xx``."""

    diffusivity: float
    x0: float = 0.0
    t0: float = 1.0
    mass: float = 1.0

    def __call__(self, x, t):
        s = 4.0 * self.diffusivity * (t + self.t0)
        return self.mass / math.sqrt(math.pi * s) * np.exp(-((np.asarray(x, dtype=np.float64) - self.x0) ** 2) / s)


def _d1(f, h):
    return (f(-2) - 8 * f(-1) + 8 * f(1) - f(2)) / (12 * h)


def _d2(f, h):
    return (-f(-2) + 16 * f(-1) - 30 * f(0) + 16 * f(1) - f(2)) / (12 * h * h)


def burgers_residual(u: Callable, nu: float, xs, t: float, h: float = 1e-3) -> np.ndarray:
    """``|u_t - nu u_xx + u u_x|`` at ``xs`` by fourth-order central differences."""
    xs = np.asarray(xs, dtype=np.float64)
    ut = _d1(lambda k: u(xs, t + k * h), h)
    ux = _d1(lambda k: u(xs + k * h, t), h)
    uxx = _d2(lambda k: u(xs + k * h, t), h)
    return np.abs(ut - nu * uxx + u(xs, t) * ux)


def residual_check(sol, sample_grid, t: float, h: float = 1e-3, nu: float | None = None) -> float:
    """Maximum Burgers residual of ``sol`` over the grid's sites.

    ``sol`` is a TanhSolution or any callable ``u(x, t)`` (then ``nu`` is
    required).
    """
    xs = sample_grid.x if isinstance(sample_grid, Lattice) else np.asarray(sample_grid)
    nu = sol.nu if nu is None else nu
    return float(burgers_residual(sol, nu, xs, t, h).max())


def hopf_cole_transform(phi_values, dx: float, nu: float) -> np.ndarray:
    """``u = -2 nu phi_x / phi``; central differences inside, one-sided
    second-order differences at the two ends."""
    phi = np.asarray(phi_values, dtype=np.float64)
    if np.any(~(phi > 0)):
        raise NonPositivePhi("phi must be strictly positive")
    return -2.0 * nu * np.gradient(phi, dx, edge_order=2) / phi


def l1_error(numeric, exact_at_sites, dx: float) -> float:
    u = np.asarray(getattr(numeric, "values", numeric), dtype=np.float64)
    v = np.asarray(exact_at_sites, dtype=np.float64)
    if u.shape != v.shape:
        raise LengthMismatch(f"{u.shape} vs {v.shape}")
    return float(dx * np.abs(u - v).sum())


@dataclass(frozen=True)
class ErrorRecord:
    dx: float
    dt: float
    t: float
    l1_error: float

    def __post_init__(self):
        if not (self.l1_error >= 0 and math.isfinite(self.l1_error)):
            raise ValueError(f"invalid l1 error {self.l1_error}")


def convergence_order(records: Sequence[ErrorRecord], finest: int | None = None) -> float:
    """Least-squares slope of log(error) against log(dx).

    With ``finest`` only the that many smallest-dx records are fitted.
    """
    recs = sorted(records, key=lambda r: r.dx)
    if finest is not None:
        recs = recs[:finest]
    dxs = np.array([r.dx for r in recs])
    if len(recs) < 3:
        raise DegenerateFit("need at least three records")
    if len(np.unique(dxs)) != len(dxs):
        raise DegenerateFit("dx values must be distinct")
    errs = np.array([r.l1_error for r in recs])
    if np.any(errs <= 0):
        raise DegenerateFit("errors must be positive to fit a power law")
    slope, _ = np.polyfit(np.log(dxs), np.log(errs), 1)
    return float(slope)


PRESETS = {"burgers-tanh": TanhSolution, "heat-gaussian": HeatGaussian}
