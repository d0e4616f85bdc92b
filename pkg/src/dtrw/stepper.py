"""Master-equation time stepping.

One step maps the field at level ``n - 1`` to level ``n``::

    U(i, n) = P_r(i-1, n-1) U(i-1, n-1) + P_l(i+1, n-1) U(i+1, n-1)

with all jump probabilities built from the level ``n - 1`` field. Non-periodic
runs work on an *extended* array: the lattice plus one ghost site on every
Neumann or zero-flux side. The two end sites of the extended array always use
single-point weights; every other site uses the configured quadrature.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import boundary as bc
from .diagnostics import MassTracker, ProbabilityTracker, RunReport
from .errors import ConfigInvalid, DTRWError, NegativeDirichletOnUnsplitRun, NonFiniteField
from .force import SINGLE, TWO, ForceSpec, Rule
from .lattice import Field, Lattice, SignedField, TimeGrid
from .weights import JumpProbabilities, build_jump_probabilities

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SchemeConfig:
    lattice: Lattice
    time_grid: TimeGrid
    force: ForceSpec
    boundaries: tuple
    quadrature: Rule = TWO
    split: bool = False
    weight: str = "boltzmann"

    def __post_init__(self):
        if not self.time_grid.consistent_with(self.lattice.dx):
            raise ConfigInvalid("time_grid.dt must equal dx**2 / (2 D)")
        left, right = self.boundaries
        bc.check_pair(left, right)
        if self.quadrature not in (SINGLE, TWO):
            raise ConfigInvalid(f"unknown quadrature {self.quadrature!r}")
        if self.weight not in ("boltzmann", "naive"):
            raise ConfigInvalid(f"unknown weight {self.weight!r}")
        for side in self.boundaries:
            if side.is_neumann and self.lattice.offset != "cell":
                raise ConfigInvalid("Neumann boundaries need a cell-centred lattice")
            if side.kind == "dirichlet" and self.lattice.offset != "node":
                raise ConfigInvalid("Dirichlet boundaries need a node-centred lattice")

    @property
    def periodic(self) -> bool:
        return self.boundaries[0].kind == "periodic"

    @property
    def dx(self) -> float:
        return self.lattice.dx

    @property
    def dt(self) -> float:
        return self.time_grid.dt

    @property
    def beta(self) -> float:
        return self.force.beta

    def site_rules(self, n_ext: int) -> np.ndarray:
        """Static per-site quadrature layout of the extended array."""
        rules = np.full(n_ext, self.quadrature, dtype=object)
        if not self.periodic:
            rules[0] = rules[-1] = SINGLE
        return rules


def _probabilities(config: SchemeConfig, force_values, rules, periodic=False) -> JumpProbabilities:
    return build_jump_probabilities(
        force_values, config.dx, config.beta, rules.astype(str), weight=config.weight, periodic=periodic
    )


def _master(p_right: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Apply the master equation at every interior site of ``u``."""
    return p_right[:-2] * u[:-2] + (1.0 - p_right[2:]) * u[2:]


def advance(state: Sequence[np.ndarray], config: SchemeConfig, n: int, events: Optional[Counter] = None):
    """Advance the component arrays from level ``n - 1`` to ``n``.

    ``state`` is ``[U]`` for ordinary runs or ``[U+, U-]`` for split runs; the
    force always sees the signed sum. Returns the new components and the jump
    probabilities used. Components are not checked for sign, so a single
    signed array may be stepped directly.
    """
    if n < 1:
        raise ValueError("step index n must be >= 1")
    events = Counter() if events is None else events
    comps = [np.asarray(c, dtype=np.float64) for c in state]
    split = len(comps) == 2
    u = comps[0] - comps[1] if split else comps[0]
    lat, dx = config.lattice, config.dx
    t_old, t_new = (n - 1) * config.dt, n * config.dt
    x = lat.x

    if config.periodic:
        f = config.force(x, t_old, u)
        probs = _probabilities(config, f, config.site_rules(len(u)), periodic=True)
        p = probs.p_right
        new = [np.roll(p * c, 1) + np.roll((1.0 - p) * c, -1) for c in comps]
        return _finite(new, n), probs

    left, right = config.boundaries
    ghost_vals = {}

    # Neumann ghosts need their values before the force can be evaluated.
    for side in (left, right):
        if not side.is_neumann:
            continue
        k = 0 if side.side == "left" else -1
        b_t = side.value(t_old)
        g, fallback = bc.neumann_ghost(side.kind, float(u[k]), b_t, dx, side.side)
        if fallback:
            events[fallback] += 1
        if split:
            delta = g - u[k]
            ghost_vals[side.side] = [comps[0][k] + max(delta, 0.0), comps[1][k] + max(-delta, 0.0)]
        else:
            if g < 0:
                events["negative_fd_ghost_clamped"] += 1
                log.warning("negative fd ghost %.3g clamped to 0 at step %d", g, n)
                g = 0.0
            ghost_vals[side.side] = [g]

    x_left, x_right = x[0] - dx, x[-1] + dx
    f = config.force(x, t_old, u)
    f_parts = [f]
    for side, xg, k in ((left, x_left, 0), (right, x_right, -1)):
        if not side.ghosted:
            continue
        if side.is_neumann:
            gv = ghost_vals[side.side]
            g_signed = gv[0] - gv[1] if split else gv[0]
            fg = config.force(np.array([xg]), t_old, np.array([g_signed]))
        elif config.force.kind == "prescribed":
            fg = config.force(np.array([xg]), t_old, np.zeros(1))
        else:
            # Zero-flux ghost force lags to the adjacent site to stay explicit.
            fg = f[[k]]
        if side.side == "left":
            f_parts.insert(0, fg)
        else:
            f_parts.append(fg)
    f_ext = np.concatenate(f_parts)
    probs = _probabilities(config, f_ext, config.site_rules(len(f_ext)))
    p = probs.p_right

    # Zero-flux ghosts only ever enter through their return flux, which equals
    # the outgoing flux of the edge site; it is patched in below rather than
    # divided out, so a saturated wall probability cannot produce inf * 0.
    for side in (left, right):
        if side.kind == "zero-flux":
            ghost_vals[side.side] = [0.0 for _ in comps]

    pad_left = 1 if left.ghosted else 0
    new = []
    for j, c in enumerate(comps):
        parts = [c]
        if left.ghosted:
            parts.insert(0, [ghost_vals["left"][j]])
        if right.ghosted:
            parts.append([ghost_vals["right"][j]])
        e = np.concatenate(parts)
        upd = _master(p, e)
        if left.kind == "zero-flux":
            upd[0] = (1.0 - p[1]) * e[1] + (1.0 - p[2]) * e[2]
        if right.kind == "zero-flux":
            upd[-1] = p[-3] * e[-3] + p[-2] * e[-2]
        out = np.empty_like(c)
        lo = 1 - pad_left  # first lattice index updated by the master equation
        out[lo : lo + len(upd)] = upd
        new.append(out)

    for side in (left, right):
        if side.kind != "dirichlet":
            continue
        k = 0 if side.side == "left" else -1
        a = side.value(t_new)
        if split:
            new[0][k], new[1][k] = bc.dirichlet_split(a)
        else:
            if a < 0 and not config.split:
                raise NegativeDirichletOnUnsplitRun(f"a(t)={a} at t={t_new} on the {side.side}")
            new[0][k] = a
    return _finite(new, n), probs


def _finite(new, n):
    for c in new:
        if not np.all(np.isfinite(c)):
            raise NonFiniteField(f"non-finite values after step {n}")
    return new


def step_values(values, config: SchemeConfig, n: int, events: Optional[Counter] = None) -> np.ndarray:
    """One step on a raw array (no sign checks); used for signed comparisons."""
    new, _ = advance([values], config, n, events)
    return new[0]


def step(field: Field, config: SchemeConfig, n: int) -> Field:
    new, _ = advance([field.values], config, n)
    return Field(new[0], n)


def step_split(sf: SignedField, config: SchemeConfig, n: int) -> SignedField:
    new, _ = advance([sf.plus.values, sf.minus.values], config, n)
    return SignedField(Field(new[0], n), Field(new[1], n))


def rescale_initial(raw) -> tuple[Field | SignedField, float]:
    """Wrap raw initial data; mixed-sign data is split into its positive parts.

    Non-negative data is not normalised, so the returned scale is always 1.
    """
    raw = np.asarray(raw, dtype=np.float64)
    if not np.all(np.isfinite(raw)):
        raise ValueError("initial data must be finite")
    if np.all(raw >= 0):
        return Field(raw, 0), 1.0
    return SignedField(Field(np.maximum(raw, 0.0), 0), Field(np.maximum(-raw, 0.0), 0)), 1.0


def evolve(initial, config: SchemeConfig, n_steps: int, observers=None):
    """Run ``n_steps`` steps, calling every observer after each one.

    Returns ``(final_state, report)``. A solver error stops the run early;
    the partial report carries the reason in ``report.aborted`` and the final
    state is the last one successfully reached.
    """
    if n_steps < 0:
        raise ValueError("n_steps must be >= 0")
    split = isinstance(initial, SignedField)
    if split and not config.split:
        raise ConfigInvalid("signed initial data needs a split configuration")
    state = [initial.plus.values, initial.minus.values] if split else [initial.values]
    n0 = initial.time_index
    observers = [MassTracker(), ProbabilityTracker()] if observers is None else list(observers)
    report = RunReport()
    for obs in observers:
        obs(n0, state, None, report)
    done = 0
    for k in range(1, n_steps + 1):
        n = n0 + k
        try:
            state, probs = advance(state, config, n, report.fallback_events)
        except DTRWError as exc:
            report.aborted = f"{type(exc).__name__}: {exc}"
            log.error("run aborted at step %d: %s", n, report.aborted)
            break
        done = k
        for obs in observers:
            obs(n, state, probs, report)
    report.n_steps = done
    report.realized_time = (n0 + done) * config.dt
    if split:
        final = SignedField(Field(state[0], n0 + done), Field(state[1], n0 + done))
    else:
        final = Field(state[0], n0 + done)
    return final, report
