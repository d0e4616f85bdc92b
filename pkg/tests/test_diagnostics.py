import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import ring_config
from dtrw.diagnostics import (
    CFLMonitor,
    ErrorRecorder,
    RunReport,
    cfl_check,
    cfl_static_estimate,
    mass_and_positivity_observe,
    prob_saturation,
)
from dtrw.force import burgers
from dtrw.lattice import Field, time_step_for
from dtrw.stepper import evolve
from dtrw.weights import build_jump_probabilities

NU = 0.45
LADDER = [Fraction(25, k) for k in (3, 12, 27, 48, 75, 108, 147, 192, 243, 300)]


def test_cfl_examples():
    dx = 25 / 48
    assert cfl_check(np.array([1.9, 0.1]), dx, time_step_for(dx, NU))
    assert not cfl_check(np.array([1.9, 0.1]), 1 / 3, time_step_for(1 / 3, NU))


def test_cfl_ladder_flags_exactly_the_coarse_spacings():
    flagged = set()
    for dx in LADDER:
        d = float(dx)
        # grid speed dx/dt = 2 nu / dx against the front maximum 1.9
        expect = 2 * NU / d < 1.9
        got = cfl_static_estimate(np.array([1.9]), 0.1, d, time_step_for(d, NU))
        assert got == expect
        if got:
            flagged.add(dx)
    assert flagged == {Fraction(25, 3), Fraction(25, 12), Fraction(25, 27), Fraction(25, 48)}


def test_cfl_uses_boundary_sup():
    dx = 1.0
    assert not cfl_static_estimate(np.zeros(4), 0.0, dx, time_step_for(dx, NU))
    assert cfl_static_estimate(np.zeros(4), 1.0, dx, time_step_for(dx, NU))


def test_cfl_explicit_speed():
    assert cfl_check(np.zeros(3), 1.0, 1.0, speed=[0.0, 2.0, 0.0])
    with pytest.raises(ValueError):
        cfl_check([1.0], 0.0, 1.0)


def _max_prob_burgers(dx, u=1.9):
    return build_jump_probabilities(np.array([u, u, u]), dx, 1 / (4 * NU), "single").p_right.max()


def test_saturation_examples():
    p = _max_prob_burgers(25 / 3)
    # 1 - p = 1 / (1 + exp(z)), z = 2 beta dx u
    assert 1 - p == pytest.approx(1 / (1 + math.exp(2 * (25 / 3) * 1.9 / (4 * NU))), rel=1e-6)
    assert prob_saturation([p])
    assert not prob_saturation([_max_prob_burgers(1 / 3)])


@given(st.floats(0.01, 20), st.floats(0.01, 20))
def test_saturation_is_monotone_in_dx(a, b):
    lo, hi = sorted((a, b))
    if prob_saturation([_max_prob_burgers(lo)]):
        assert prob_saturation([_max_prob_burgers(hi)])


def test_saturation_margin_validated():
    with pytest.raises(ValueError):
        prob_saturation([0.5], margin=0.6)
    assert prob_saturation([0.3], margin=0.31)


def test_mass_and_positivity_observe():
    r = RunReport()
    mass_and_positivity_observe(np.array([1.0, 2.0]), r, 0)
    mass_and_positivity_observe(np.array([-1.0, 4.0]), r, 1)
    assert r.mass_trace == [3.0, 3.0] and r.min_value_trace == [1.0, -1.0]
    assert r.negative_steps == [1] and r.mass_drift() == 0
    assert r.mass_initial == 3.0 and r.mass_final == 3.0


def test_report_defaults():
    r = RunReport()
    assert math.isnan(r.mass_initial) and r.mass_drift() == 0.0
    assert r.prob_extrema == (1.0, 0.0)


def test_observers_inside_evolve():
    cfg = ring_config(n_sites=8, dx=3.0)
    x = cfg.lattice.x
    obs = [CFLMonitor(cfg.force, x, NU, cfg.dx, cfg.dt), ErrorRecorder(lambda x, t: np.ones_like(x), x, cfg.dx, cfg.dt, every=2)]
    _, report = evolve(Field(np.full(8, 1.0)), cfg, 4, observers=obs)
    # speed 1 against grid speed 2 nu / dx = 0.3
    assert report.cfl_violated and report.cfl_first_violation_step == 0
    assert [t for t, _ in report.error_trace] == pytest.approx([0, 2 * cfg.dt, 4 * cfg.dt])
    assert max(e for _, e in report.error_trace) < 1e-13
