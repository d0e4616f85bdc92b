"""Burgers front experiments, custom runs and their CSV outputs.

The ``example1-dirichlet`` preset pins both ends of ``[0, 100]`` to the
travelling front; ``example2-neumann`` prescribes its slope through ghost sites on a cell-centred grid. Both run
from the front's initial profile to ``t = 6250/81``, which every ladder
spacing reaches in a whole number of steps.
"""

from __future__ import annotations

import csv
import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from . import boundary as bc
from .diagnostics import CFLMonitor, ErrorRecorder, MassTracker, ProbabilityTracker, RunReport, cfl_static_estimate
from .errors import ConfigInvalid, DTRWError
from .force import SINGLE, TWO, burgers, diffusion
from .lattice import Field, make_lattice, steps_to_time, TimeGrid
from .oracle import ErrorRecord, HeatGaussian, TanhSolution, l1_error
from .stepper import SchemeConfig, evolve, rescale_initial

log = logging.getLogger(__name__)

DX_LADDER = ("25/3", "25/12", "25/27", "25/48", "1/3", "25/108", "25/147", "25/192", "25/243", "1/12")
TARGET_T = 6250 / 81
PRESETS = ("example1-dirichlet", "example2-neumann", "custom")
WEIGHTS = {"boltzmann1": ("boltzmann", SINGLE), "boltzmann2": ("boltzmann", TWO), "naive": ("naive", SINGLE)}

SUMMARY_COLUMNS = (
    "dx", "dt", "n_steps", "realized_t", "l1_error", "mass_initial", "mass_final",
    "cfl_violated", "prob_min", "prob_max", "fallback_events", "status",
)


def parse_number(v) -> float:
    """Accept floats, ints and fraction strings such as ``"25/3"``."""
    if isinstance(v, str):
        return float(Fraction(v.strip()))
    return float(v)


@dataclass
class ExperimentConfig:
    preset: str = "example1-dirichlet"
    nu: float = 0.45
    c: float = -3.0
    dx_list: list = field(default_factory=lambda: list(DX_LADDER))
    target_t: float = TARGET_T
    weights: str = "boltzmann2"
    ghost: str = "exp"
    output_dir: Optional[str] = None
    snap: bool = False
    seed: int = 0
    trace_error: bool = False
    # custom preset only
    force: str = "burgers"
    diffusivity: Optional[float] = None
    beta: float = 1.0
    domain: tuple = (0.0, 100.0)
    offset: Optional[str] = None
    bc_left: str = "dirichlet:front"
    bc_right: str = "dirichlet:front"
    initial: str = "front"
    initial_params: dict = field(default_factory=dict)
    oracle: Optional[str] = None
    n_steps: Optional[int] = None

    def __post_init__(self):
        errors = []
        if self.preset not in PRESETS:
            errors.append(f"preset: unknown {self.preset!r}")
        if not self.nu > 0:
            errors.append("nu: must be positive")
        try:
            self.dx_list = [parse_number(d) for d in self.dx_list]
        except (ValueError, ZeroDivisionError) as exc:
            errors.append(f"dx_list: {exc}")
        else:
            if not self.dx_list or any(not d > 0 for d in self.dx_list):
                errors.append("dx_list: must be non-empty and positive")
        self.target_t = parse_number(self.target_t)
        if self.weights not in WEIGHTS:
            errors.append(f"weights: unknown {self.weights!r}")
        if self.ghost not in ("fd", "exp"):
            errors.append(f"ghost: unknown {self.ghost!r}")
        if self.force not in ("burgers", "diffusion"):
            errors.append(f"force: unknown {self.force!r}")
        if errors:
            raise ConfigInvalid("; ".join(errors))
        self.domain = tuple(float(v) for v in self.domain)

    @classmethod
    def from_json(cls, path, **overrides) -> ExperimentConfig:
        data = json.loads(Path(path).read_text())
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigInvalid(f"unknown config keys: {sorted(unknown)}")
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**data)


@dataclass
class RunResult:
    dx: float
    x: np.ndarray
    u_numeric: np.ndarray
    u_exact: Optional[np.ndarray]
    record: Optional[ErrorRecord]
    report: RunReport
    cfl_static: bool
    dt: float

    @property
    def ok(self) -> bool:
        return self.report.aborted is None


@dataclass
class RunSetup:
    scheme: SchemeConfig
    initial: object
    exact: Optional[Callable]
    boundary_sup: float


def _scheme(cfg: ExperimentConfig, lattice, force, diffusivity, boundaries, split=False) -> SchemeConfig:
    weight, quad = WEIGHTS[cfg.weights]
    return SchemeConfig(lattice, TimeGrid.for_lattice(lattice, diffusivity), force, boundaries, quad, split, weight)


def _boundary_sup(exact, x_edges, dt, n_steps) -> float:
    t = np.arange(n_steps + 1) * dt
    return float(max(np.abs(exact(xe, t)).max() for xe in x_edges))


def setup_example1(cfg: ExperimentConfig, dx: float) -> RunSetup:
    sol = TanhSolution.front(cfg.nu, cfg.c)
    lat = make_lattice(0.0, 100.0, dx, "node")
    boundaries = (bc.dirichlet("left", lambda t: sol(0.0, t)), bc.dirichlet("right", lambda t: sol(100.0, t)))
    scheme = _scheme(cfg, lat, burgers(cfg.nu), cfg.nu, boundaries)
    n, _ = steps_to_time(cfg.target_t, scheme.dt, cfg.snap)
    return RunSetup(scheme, Field(sol(lat.x, 0.0)), sol, _boundary_sup(sol, (0.0, 100.0), scheme.dt, n))


def setup_example2(cfg: ExperimentConfig, dx: float) -> RunSetup:
    sol = TanhSolution.front(cfg.nu, cfg.c)
    lat = make_lattice(0.0, 100.0, dx, "cell")
    boundaries = (
        bc.neumann("left", lambda t: sol.dudx(0.0, t), cfg.ghost),
        bc.neumann("right", lambda t: sol.dudx(100.0, t), cfg.ghost),
    )
    scheme = _scheme(cfg, lat, burgers(cfg.nu), cfg.nu, boundaries)
    n, _ = steps_to_time(cfg.target_t, scheme.dt, cfg.snap)
    return RunSetup(scheme, Field(sol(lat.x, 0.0)), sol, _boundary_sup(sol, (0.0, 100.0), scheme.dt, n))


# Custom runs ---------------------------------------------------------------


def _time_function(name: str, cfg: ExperimentConfig, x_edge: float, slope: bool) -> Callable[[float], float]:
    """Named boundary-data presets: ``front``, ``zero`` or a constant like ``0.5``."""
    if name == "front":
        sol = TanhSolution.front(cfg.nu, cfg.c)
        return (lambda t: float(sol.dudx(x_edge, t))) if slope else (lambda t: sol(x_edge, t))
    if name == "zero":
        return lambda t: 0.0
    try:
        value = float(name)
    except ValueError:
        raise ConfigInvalid(f"bc: unknown time function {name!r}") from None
    return lambda t: value


def _boundary(spec: str, side: str, cfg: ExperimentConfig, x_edge: float) -> bc.BoundaryCondition:
    kind, _, fn = spec.partition(":")
    if kind == "dirichlet":
        return bc.dirichlet(side, _time_function(fn or "front", cfg, x_edge, slope=False))
    if kind == "neumann":
        return bc.neumann(side, _time_function(fn or "front", cfg, x_edge, slope=True), cfg.ghost)
    if kind in ("zero-flux", "periodic"):
        return bc.BoundaryCondition(side, kind)
    raise ConfigInvalid(f"bc_{side}: unknown kind {kind!r}")


def _initial(cfg: ExperimentConfig, x: np.ndarray) -> np.ndarray:
    p = cfg.initial_params
    if cfg.initial == "front":
        return TanhSolution.front(cfg.nu, cfg.c)(x, 0.0)
    if cfg.initial == "constant":
        return np.full_like(x, float(p.get("value", 1.0)))
    if cfg.initial == "gaussian":
        center = float(p.get("center", 0.5 * (x[0] + x[-1])))
        width = float(p.get("width", 0.1 * (x[-1] - x[0])))
        return float(p.get("mass", 1.0)) * np.exp(-0.5 * ((x - center) / width) ** 2)
    if cfg.initial == "sine":
        length = x[-1] - x[0] + (x[1] - x[0])
        return float(p.get("amplitude", 1.0)) * np.sin(2 * np.pi * (x - x[0]) / length)
    raise ConfigInvalid(f"initial: unknown profile {cfg.initial!r}")


def setup_custom(cfg: ExperimentConfig, dx: float) -> RunSetup:
    kinds = (cfg.bc_left.partition(":")[0], cfg.bc_right.partition(":")[0])
    offset = cfg.offset or ("cell" if "neumann" in kinds else "node")
    lat = make_lattice(cfg.domain[0], cfg.domain[1], dx, offset)
    left = _boundary(cfg.bc_left, "left", cfg, cfg.domain[0])
    right = _boundary(cfg.bc_right, "right", cfg, cfg.domain[1])
    if cfg.force == "burgers":
        force, diff = burgers(cfg.nu), cfg.nu
    else:
        force, diff = diffusion(cfg.beta), cfg.diffusivity or cfg.nu
    raw = _initial(cfg, lat.x)
    initial, _ = rescale_initial(raw)
    split = not isinstance(initial, Field)
    scheme = _scheme(cfg, lat, force, diff, (left, right), split=split)
    exact = None
    if cfg.oracle == "burgers-tanh":
        exact = TanhSolution.front(cfg.nu, cfg.c)
    elif cfg.oracle == "heat-gaussian":
        p = cfg.initial_params
        exact = HeatGaussian(diff, float(p.get("center", 0.0)), float(p.get("t0", 1.0)), float(p.get("mass", 1.0)))
    elif cfg.oracle is not None:
        raise ConfigInvalid(f"oracle: unknown {cfg.oracle!r}")
    return RunSetup(scheme, initial, exact, 0.0)


SETUPS = {"example1-dirichlet": setup_example1, "example2-neumann": setup_example2, "custom": setup_custom}


def run_one(cfg: ExperimentConfig, dx: float) -> RunResult:
    """Run one lattice spacing; solver errors end up in ``report.aborted``."""
    s = SETUPS[cfg.preset](cfg, dx)
    scheme = s.scheme
    if cfg.n_steps is not None and cfg.preset == "custom":
        n_steps = cfg.n_steps
    else:
        n_steps, _ = steps_to_time(cfg.target_t, scheme.dt, cfg.snap)
    x = scheme.lattice.x
    observers = [MassTracker(), ProbabilityTracker(), CFLMonitor(scheme.force, x, scheme.time_grid.diffusivity, dx, scheme.dt)]
    if cfg.trace_error and s.exact is not None:
        observers.append(ErrorRecorder(s.exact, x, dx, scheme.dt))
    static = cfl_static_estimate(s.initial.values, s.boundary_sup, dx, scheme.dt)
    final, report = evolve(s.initial, scheme, n_steps, observers)
    u = final.values
    exact = record = None
    if s.exact is not None:
        exact = np.asarray(s.exact(x, report.realized_time), dtype=np.float64)
        if report.aborted is None:
            record = ErrorRecord(dx, scheme.dt, report.realized_time, l1_error(u, exact, dx))
    return RunResult(dx, x, np.array(u), exact, record, report, static, scheme.dt)


def run_ladder(cfg: ExperimentConfig, workers: Optional[int] = None) -> list[RunResult]:
    """Run every spacing in ``cfg.dx_list``; results keep the list order."""
    workers = workers or int(os.environ.get("DTRW_THREADS", "1"))

    def one(dx):
        try:
            return run_one(cfg, dx)
        except DTRWError as exc:
            log.error("dx=%s failed during setup: %s", dx, exc)
            report = RunReport(aborted=f"{type(exc).__name__}: {exc}")
            return RunResult(dx, np.empty(0), np.empty(0), None, None, report, False, float("nan"))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, cfg.dx_list))
    else:
        results = [one(dx) for dx in cfg.dx_list]
    if cfg.output_dir:
        write_outputs(cfg, results)
    return results


def run_example1(cfg: ExperimentConfig, workers=None) -> list[RunResult]:
    return run_ladder(replace(cfg, preset="example1-dirichlet"), workers)


def run_example2(cfg: ExperimentConfig, workers=None) -> list[RunResult]:
    return run_ladder(replace(cfg, preset="example2-neumann"), workers)


def run_custom(cfg: ExperimentConfig, workers=None) -> list[RunResult]:
    return run_ladder(replace(cfg, preset="custom"), workers)


# Output --------------------------------------------------------------------


def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if v is None:
        return ""
    return format(float(v), ".17g")


def summary_row(r: RunResult) -> dict:
    rep = r.report
    return {
        "dx": fmt(r.dx),
        "dt": fmt(r.dt),
        "n_steps": fmt(rep.n_steps),
        "realized_t": fmt(rep.realized_time),
        "l1_error": fmt(r.record.l1_error) if r.record else "",
        "mass_initial": fmt(rep.mass_initial),
        "mass_final": fmt(rep.mass_final),
        "cfl_violated": fmt(r.cfl_static or rep.cfl_violated),
        "prob_min": fmt(rep.prob_extrema[0]) if rep.n_steps else "",
        "prob_max": fmt(rep.prob_extrema[1]) if rep.n_steps else "",
        "fallback_events": fmt(sum(rep.fallback_events.values())),
        "status": "ok" if r.ok else rep.aborted,
    }


def solution_filename(preset: str, dx: float) -> str:
    return f"solution_{preset}_dx_{dx:.10g}.csv"


def write_outputs(cfg: ExperimentConfig, results: list[RunResult]) -> Path:
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    summary = out / f"summary_{cfg.preset}.csv"
    with summary.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=SUMMARY_COLUMNS, lineterminator="\n")
        w.writeheader()
        for r in results:
            w.writerow(summary_row(r))
    for r in results:
        if len(r.x) == 0:
            continue
        with (out / solution_filename(cfg.preset, r.dx)).open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(("x", "u_numeric", "u_exact", "abs_error"))
            exact = r.u_exact if r.u_exact is not None else np.full_like(r.x, np.nan)
            for xi, ui, ei in zip(r.x, r.u_numeric, exact):
                w.writerow((fmt(xi), fmt(ui), fmt(ei), fmt(abs(ui - ei))))
        if cfg.trace_error and r.report.error_trace:
            with (out / f"error_trace_{cfg.preset}_dx_{r.dx:.10g}.csv").open("w", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(("t", "l1_error"))
                for t, e in r.report.error_trace:
                    w.writerow((fmt(t), fmt(e)))
        if cfg.preset == "custom":
            with (out / f"mass_trace_{cfg.preset}_dx_{r.dx:.10g}.csv").open("w", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(("n", "mass", "min_value"))
                for n, (m, lo) in enumerate(zip(r.report.mass_trace, r.report.min_value_trace)):
                    w.writerow((n, fmt(m), fmt(lo)))
    return summary


def read_summary(path) -> list[ErrorRecord]:
    recs = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            if row.get("l1_error"):
                recs.append(ErrorRecord(float(row["dx"]), float(row["dt"]), float(row["realized_t"]), float(row["l1_error"])))
    return recs


def config_dict(cfg: ExperimentConfig) -> dict:
    return asdict(cfg)
