"""Particle simulation of the walk itself, used to validate the master equation.

Each particle jumps right with the same ``P_r(i, n)`` the deterministic scheme
uses, so the master-equation density is the exact law of the ensemble. Random
numbers come from a counter-based generator: the uniform for particle ``k`` at
step ``n`` is a fixed hash of ``(seed, k, n)``, so any partition of the
particles over workers reproduces the serial result bit for bit.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .boundary import periodic
from .errors import ConfigInvalid, LengthMismatch
from .force import TWO, ForceSpec, Rule, prescribed
from .lattice import Field, Lattice, TimeGrid, make_lattice
from .stepper import SchemeConfig, evolve
from .weights import build_jump_probabilities

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_STEP = np.uint64(0xD1B54A32D192ED03)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


def _mix64(z: np.ndarray) -> np.ndarray:
    # SplitMix64 finaliser; uint64 arithmetic wraps modulo 2**64.
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def counter_uniform(seed: int, streams, counter: int) -> np.ndarray:
    """Uniforms in [0, 1) for each stream id at the given counter value."""
    streams = np.asarray(streams, dtype=np.uint64)
    with np.errstate(over="ignore"):
        key = _mix64(np.array([seed & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64) + _GOLDEN)
        h = _mix64(key + streams * _GOLDEN)
        h = _mix64(h + np.array([counter + 1], dtype=np.uint64) * _STEP)
    return (h >> np.uint64(11)).astype(np.float64) * (1.0 / 9007199254740992.0)


@dataclass(frozen=True)
class EnsembleConfig:
    lattice: Lattice
    force: ForceSpec
    time_grid: TimeGrid
    n_particles: int
    n_steps: int
    seed: int = 0
    quadrature: Rule = TWO

    def __post_init__(self):
        if self.n_particles < 1:
            raise ConfigInvalid("need at least one particle")
        if self.n_steps < 0:
            raise ConfigInvalid("n_steps must be >= 0")
        if self.force.kind != "prescribed":
            raise ConfigInvalid("the particle walk only supports prescribed forces")

    @property
    def beta(self) -> float:
        return self.force.beta

    def p_right(self, n: int) -> np.ndarray:
        """Ring jump probabilities used for the move from level n to n + 1."""
        lat = self.lattice
        f = self.force(lat.x, n * self.time_grid.dt, np.zeros(lat.n_sites))
        return build_jump_probabilities(f, lat.dx, self.beta, self.quadrature, periodic=True).p_right


def _walk(config: EnsembleConfig, initial_site: int, ids: np.ndarray, probs) -> np.ndarray:
    L = config.lattice.n_sites
    pos = np.full(len(ids), initial_site, dtype=np.int64)
    for n, p in enumerate(probs):
        u = counter_uniform(config.seed, ids, n)
        pos += np.where(u < p[pos], 1, -1)
        pos %= L
    return np.bincount(pos, minlength=L)


def simulate_ensemble(config: EnsembleConfig, initial_site: int, workers: int | None = None, chunk: int = 1 << 16) -> np.ndarray:
    """Empirical site-occupation frequencies after ``n_steps`` jumps."""
    L = config.lattice.n_sites
    if not 0 <= initial_site < L:
        raise ValueError(f"initial site {initial_site} not on the ring")
    probs = [config.p_right(n) for n in range(config.n_steps)]
    bounds = [(a, min(a + chunk, config.n_particles)) for a in range(0, config.n_particles, chunk)]
    workers = workers or int(os.environ.get("DTRW_THREADS", "1"))

    def run(b):
        return _walk(config, initial_site, np.arange(b[0], b[1], dtype=np.uint64), probs)

    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(run, bounds))
    else:
        counts = [run(b) for b in bounds]
    total = np.sum(counts, axis=0)
    return total / config.n_particles


def master_density(config: EnsembleConfig, initial_site: int) -> np.ndarray:
    """Deterministic master-equation density from a unit mass at ``initial_site``."""
    u0 = np.zeros(config.lattice.n_sites)
    u0[initial_site] = 1.0
    scheme = SchemeConfig(config.lattice, config.time_grid, config.force, periodic(), quadrature=config.quadrature)
    final, report = evolve(Field(u0), scheme, config.n_steps, observers=[])
    return final.values


def tv_distance(p, q) -> float:
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape:
        raise LengthMismatch(f"{p.shape} vs {q.shape}")
    sp, sq = p.sum(), q.sum()
    if abs(sp - sq) > 1e-9 * max(abs(sp), abs(sq), 1.0):
        raise ValueError(f"totals differ: {sp} vs {sq}")
    return 0.5 * float(np.abs(p / sp - q / sq).sum())


def sine_ring(n_sites: int = 32, amplitude: float = 1.0, beta: float = 1.0, diffusivity: float = 0.5) -> tuple[Lattice, ForceSpec, TimeGrid]:
    """Unit-spaced ring with the commensurate force ``A sin(2 pi x / L)``."""
    lat = make_lattice(0.0, float(n_sites), 1.0, offset="cell")
    length = lat.length
    force = prescribed(lambda x, t: amplitude * np.sin(2 * np.pi * x / length), beta, f"{amplitude}*sin(2 pi x/{length})")
    return lat, force, TimeGrid.for_lattice(lat, diffusivity)
