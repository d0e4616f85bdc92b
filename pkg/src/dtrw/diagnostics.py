"""Run-time observers: mass, positivity, CFL and jump-probability saturation."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

DEFAULT_MARGIN = 1e-4


@dataclass
class RunReport:
    mass_trace: list = field(default_factory=list)
    min_value_trace: list = field(default_factory=list)
    negative_steps: list = field(default_factory=list)
    cfl_violated: bool = False
    cfl_first_violation_step: Optional[int] = None
    prob_extrema: tuple = (1.0, 0.0)
    saturated: bool = False
    fallback_events: Counter = field(default_factory=Counter)
    error_trace: list = field(default_factory=list)
    realized_time: float = 0.0
    n_steps: int = 0
    aborted: Optional[str] = None

    @property
    def mass_initial(self) -> float:
        return self.mass_trace[0] if self.mass_trace else float("nan")

    @property
    def mass_final(self) -> float:
        return self.mass_trace[-1] if self.mass_trace else float("nan")

    def mass_drift(self) -> float:
        """Largest relative departure of the mass from its initial value."""
        m = np.asarray(self.mass_trace)
        if len(m) == 0 or m[0] == 0:
            return 0.0
        return float(np.max(np.abs(m - m[0])) / abs(m[0]))


def cfl_check(values, dx: float, dt: float, speed=None) -> bool:
    """True when the advective speed exceeds the grid speed ``dx/dt``.

    ``speed`` defaults to ``|U|``, the Burgers characteristic speed.
    """
    if not (dx > 0 and dt > 0):
        raise ValueError("dx and dt must be positive")
    s = np.abs(np.asarray(getattr(values, "values", values) if speed is None else speed, dtype=np.float64))
    if s.size == 0:
        return False
    return bool(s.max() * dt / dx > 1.0)


def cfl_static_estimate(initial, boundary_sup: float, dx: float, dt: float) -> bool:
    """Pre-run verdict from the initial supremum and the boundary-data supremum."""
    u0 = np.abs(np.asarray(getattr(initial, "values", initial), dtype=np.float64))
    vmax = max(float(u0.max()) if u0.size else 0.0, abs(boundary_sup))
    return vmax * dt / dx > 1.0


def prob_saturation(probs, margin: float = DEFAULT_MARGIN) -> bool:
    if not 0 < margin < 0.5:
        raise ValueError("margin must lie in (0, 1/2)")
    p = np.asarray(getattr(probs, "p_right", probs))
    return bool(np.any((p < margin) | (p > 1.0 - margin)))


def mass_and_positivity_observe(values, report: RunReport, n: Optional[int] = None) -> RunReport:
    u = np.asarray(getattr(values, "values", values), dtype=np.float64)
    report.mass_trace.append(float(u.sum()))
    low = float(u.min())
    report.min_value_trace.append(low)
    if low < 0:
        report.negative_steps.append(len(report.mass_trace) - 1 if n is None else n)
    return report


# Observers -----------------------------------------------------------------
#
# Each observer is called as ``obs(n, state, probs, report)`` after step n,
# with ``state`` a list of component arrays ([U] or [U+, U-]) and ``probs``
# the JumpProbabilities used to reach it (None at n = 0).


def _signed(state) -> np.ndarray:
    return state[0] if len(state) == 1 else state[0] - state[1]


class MassTracker:
    def __call__(self, n, state, probs, report):
        report.mass_trace.append(float(_signed(state).sum()))
        low = min(float(c.min()) for c in state)
        report.min_value_trace.append(low)
        if low < 0:
            report.negative_steps.append(n)


class ProbabilityTracker:
    def __init__(self, margin: float = DEFAULT_MARGIN):
        self.margin = margin

    def __call__(self, n, state, probs, report):
        if probs is None:
            return
        p = probs.p_right
        lo, hi = report.prob_extrema
        report.prob_extrema = (min(lo, float(p.min())), max(hi, float(p.max())))
        if not report.saturated and prob_saturation(p, self.margin):
            report.saturated = True


class CFLMonitor:
    """Flags the first step whose field exceeds the grid speed."""

    def __init__(self, force, x, diffusivity: float, dx: float, dt: float):
        self.force, self.x, self.diffusivity, self.dx, self.dt = force, x, diffusivity, dx, dt

    def __call__(self, n, state, probs, report):
        if report.cfl_violated:
            return
        u = _signed(state)
        speed = self.force.characteristic_speed(self.x, n * self.dt, u, self.diffusivity)
        if cfl_check(u, self.dx, self.dt, speed=speed):
            report.cfl_violated = True
            report.cfl_first_violation_step = n


class ErrorRecorder:
    """Appends ``(t, l1 error)`` against ``exact(x, t)`` every ``every`` steps."""

    def __init__(self, exact: Callable, x, dx: float, dt: float, every: int = 1):
        self.exact, self.x, self.dx, self.dt, self.every = exact, np.asarray(x), dx, dt, max(1, every)

    def __call__(self, n, state, probs, report):
        if n % self.every:
            return
        t = n * self.dt
        err = self.dx * float(np.abs(_signed(state) - self.exact(self.x, t)).sum())
        report.error_trace.append((t, err))
