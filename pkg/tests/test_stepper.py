import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import ring_config, zero_flux_config
from dtrw import boundary as bc
from dtrw.errors import ConfigInvalid, NegativeDirichletOnUnsplitRun
from dtrw.force import burgers, diffusion, prescribed
from dtrw.lattice import Field, SignedField, TimeGrid, make_lattice
from dtrw.stepper import SchemeConfig, advance, evolve, rescale_initial, step, step_split, step_values


def test_delta_splits_in_half():
    cfg = ring_config(force=diffusion())
    u = np.zeros(16)
    u[5] = 1.0
    out = step(Field(u), cfg, 1).values
    expected = np.zeros(16)
    expected[[4, 6]] = 0.5
    np.testing.assert_array_equal(out, expected)


def test_constant_ring_is_steady():
    cfg = ring_config(force=diffusion())
    np.testing.assert_array_equal(step(Field(np.full(16, 3.0)), cfg, 1).values, 3.0)


@pytest.mark.parametrize("n_sites", [5, 16, 33])
def test_burgers_constant_state_is_fixed_point(n_sites):
    cfg = ring_config(n_sites=n_sites, nu=0.2)
    final, _ = evolve(Field(np.ones(n_sites)), cfg, 200)
    np.testing.assert_allclose(final.values, 1.0, rtol=0, atol=1e-13)


def _dirichlet_config(dx=0.5, nu=0.45, a=lambda t: 1.7, b=lambda t: 0.2, split=False):
    lat = make_lattice(0.0, 4.0, dx, "node")
    return SchemeConfig(lat, TimeGrid.for_lattice(lat, nu), burgers(nu), (bc.dirichlet("left", a), bc.dirichlet("right", b)), split=split)


def test_dirichlet_update_matches_explicit_boundary_equations():
    nu, dx = 0.45, 0.5
    cfg = _dirichlet_config(dx, nu)
    U = np.random.default_rng(1).uniform(0.1, 1.9, 9)
    out = step(Field(U), cfg, 1).values
    L = len(U) - 1
    e = math.exp
    u1 = U[0] / (1 + e(-dx / (2 * nu) * U[0])) + U[2] / (1 + e(dx / (8 * nu) * (U[3] + 2 * U[2] + U[1])))
    uLm1 = U[L - 2] / (1 + e(-dx / (8 * nu) * (U[L - 3] + 2 * U[L - 2] + U[L - 1]))) + U[L] / (1 + e(dx / (2 * nu) * U[L]))
    i = 4
    ui = U[i - 1] / (1 + e(-dx / (8 * nu) * (U[i - 2] + 2 * U[i - 1] + U[i]))) + U[i + 1] / (
        1 + e(dx / (8 * nu) * (U[i + 2] + 2 * U[i + 1] + U[i]))
    )
    assert out[1] == pytest.approx(u1, rel=1e-14)
    assert out[L - 1] == pytest.approx(uLm1, rel=1e-14)
    assert out[i] == pytest.approx(ui, rel=1e-14)
    assert out[0] == 1.7 and out[L] == 0.2


def test_neumann_update_uses_ghost_with_single_point_weights():
    nu, dx, c = 0.45, 0.5, -3.0
    sech2 = lambda s: 1 / math.cosh(s) ** 2
    lat = make_lattice(0.0, 4.0, dx, "cell")
    left = bc.neumann("left", lambda t: -2 * nu * sech2(t + c), "fd")
    right = bc.neumann("right", lambda t: -2 * nu * sech2(t - 4 + c), "fd")
    cfg = SchemeConfig(lat, TimeGrid.for_lattice(lat, nu), burgers(nu), (left, right))
    U = np.random.default_rng(2).uniform(0.1, 1.9, lat.n_sites)
    n = 3
    t = (n - 1) * cfg.dt
    g0 = U[0] + 2 * dx * nu * sech2(t + c)
    out = step_values(U, cfg, n)
    e = math.exp
    u1 = g0 / (1 + e(-dx / (2 * nu) * g0)) + U[1] / (1 + e(dx / (8 * nu) * (U[2] + 2 * U[1] + U[0])))
    assert out[0] == pytest.approx(u1, rel=1e-14)
    gL = U[-1] - 2 * dx * nu * sech2(t - 4 + c)
    uL = U[-2] / (1 + e(-dx / (8 * nu) * (U[-3] + 2 * U[-2] + U[-1]))) + gL / (1 + e(dx / (2 * nu) * gL))
    assert out[-1] == pytest.approx(uL, rel=1e-14)


def test_negative_dirichlet_rejected_on_unsplit_run():
    cfg = _dirichlet_config(a=lambda t: -1.0)
    with pytest.raises(NegativeDirichletOnUnsplitRun):
        step(Field(np.ones(9)), cfg, 1)


def test_neumann_requires_cell_grid():
    lat = make_lattice(0.0, 4.0, 0.5, "node")
    with pytest.raises(ConfigInvalid):
        SchemeConfig(lat, TimeGrid.for_lattice(lat, 1.0), diffusion(), (bc.neumann("left", lambda t: 0.0), bc.zero_flux("right")))


def test_time_grid_must_match_lattice():
    lat = make_lattice(0.0, 4.0, 0.5, "node")
    with pytest.raises(ConfigInvalid):
        SchemeConfig(lat, TimeGrid(0.1, 1.0), diffusion(), (bc.zero_flux("left"), bc.zero_flux("right")))


def test_split_with_zero_minus_reduces_to_plain_step():
    cfg = ring_config(split=True)
    u = np.random.default_rng(4).uniform(0, 2, 16)
    sf = step_split(SignedField(Field(u), Field(np.zeros(16))), cfg, 1)
    np.testing.assert_array_equal(sf.plus.values, step(Field(u), cfg, 1).values)
    np.testing.assert_array_equal(sf.minus.values, 0.0)


def test_split_equal_parts_stay_cancelled():
    cfg = ring_config(split=True)
    u = np.random.default_rng(5).uniform(0, 2, 16)
    state = SignedField(Field(u), Field(u))
    for n in range(1, 20):
        state = step_split(state, cfg, n)
    np.testing.assert_array_equal(state.values, 0.0)


@pytest.mark.parametrize("config", ["ring", "dirichlet"])
def test_split_matches_direct_signed_step(config):
    rng = np.random.default_rng(6)
    if config == "ring":
        cfg = ring_config(split=True)
        raw = rng.uniform(-1, 1, 16)
    else:
        cfg = _dirichlet_config(a=lambda t: -0.4, b=lambda t: 0.9, split=True)
        raw = rng.uniform(-1, 1, 9)
    sf, _ = rescale_initial(raw)
    direct = raw
    for n in range(1, 30):
        sf = step_split(sf, cfg, n)
        direct = step_values(direct, cfg, n)
    assert np.all(sf.plus.values >= 0) and np.all(sf.minus.values >= 0)
    np.testing.assert_allclose(sf.values, direct, rtol=0, atol=1e-14)


def test_evolve_zero_steps_returns_initial():
    cfg = ring_config()
    u = Field(np.linspace(0, 1, 16))
    final, report = evolve(u, cfg, 0)
    np.testing.assert_array_equal(final.values, u.values)
    assert report.mass_trace == [u.mass] and report.n_steps == 0


def test_zero_flux_diffusion_conserves_mass():
    cfg = zero_flux_config()
    u0 = np.random.default_rng(7).uniform(0, 1, 40)
    final, report = evolve(Field(u0), cfg, 1000)
    assert report.mass_drift() <= 1e-12
    assert min(report.min_value_trace) >= 0


def test_zero_flux_with_prescribed_and_state_dependent_force():
    drift = prescribed(lambda x, t: np.cos(x) + 0.3, beta=0.8)
    for force in (drift, burgers(0.3)):
        cfg = zero_flux_config(force=force, diffusivity=0.3)
        u0 = np.random.default_rng(8).uniform(0, 1.5, 40)
        _, report = evolve(Field(u0), cfg, 1000)
        assert report.mass_drift() <= 1e-12


def test_interior_step_preserves_mass():
    cfg = _dirichlet_config(a=lambda t: 0.0, b=lambda t: 0.0)
    u = np.zeros(9)
    u[3:6] = [0.5, 1.0, 0.25]
    out = step(Field(u), cfg, 1)
    assert out.mass == pytest.approx(u.sum(), rel=1e-15)


def test_naive_weights_abort_with_partial_report():
    lat = make_lattice(0.0, 16 * 3.0, 3.0, "cell")
    cfg = SchemeConfig(lat, TimeGrid.for_lattice(lat, 0.45), burgers(0.45), bc.periodic(), "single", weight="naive")
    final, report = evolve(Field(np.full(16, 1.9)), cfg, 10)
    assert report.aborted.startswith("ProbabilityOutOfRange")
    assert report.n_steps == 0 and final.time_index == 0


def test_evolve_is_deterministic():
    cfg = _dirichlet_config()
    u = Field(np.random.default_rng(9).uniform(0, 2, 9))
    a, _ = evolve(u, cfg, 50)
    b, _ = evolve(u, cfg, 50)
    assert a.values.tobytes() == b.values.tobytes()


def test_rescale_initial():
    f, s = rescale_initial([1, 2, 3])
    assert isinstance(f, Field) and s == 1.0
    np.testing.assert_array_equal(f.values, [1, 2, 3])
    sf, _ = rescale_initial([1, -2])
    np.testing.assert_array_equal(sf.plus.values, [1, 0])
    np.testing.assert_array_equal(sf.minus.values, [0, 2])
    z, _ = rescale_initial(np.zeros(4))
    assert isinstance(z, Field) and z.mass == 0


def test_signed_initial_needs_split_config():
    sf, _ = rescale_initial([1.0, -1.0] * 8)
    with pytest.raises(ConfigInvalid):
        evolve(sf, ring_config(), 1)


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.floats(0, 5), min_size=9, max_size=9),
    st.floats(0.05, 3.0),
    st.sampled_from(["ring", "dirichlet", "zero-flux"]),
)
def test_non_negativity_preserved(values, dx, kind):
    u = np.array(values)
    if kind == "ring":
        cfg = ring_config(n_sites=9, dx=dx)
    elif kind == "dirichlet":
        lat = make_lattice(0.0, 8 * dx, dx, "node")
        cfg = SchemeConfig(lat, TimeGrid.for_lattice(lat, 0.45), burgers(0.45), (bc.dirichlet("left", lambda t: 1.0), bc.dirichlet("right", lambda t: 0.0)))
    else:
        cfg = zero_flux_config(n_sites=9, dx=dx, force=burgers(0.45), diffusivity=0.45)
    state = [u]
    for n in range(1, 30):
        state, _ = advance(state, cfg, n)
        assert np.all(state[0] >= 0)


def test_zero_flux_wall_survives_saturated_probabilities():
    cfg = zero_flux_config(n_sites=9, dx=3.0, force=burgers(0.45), diffusivity=0.45)
    u0 = np.array([0, 0, 0, 0, 0, 0, 2.0, 5.0, 5.0])
    final, report = evolve(Field(u0), cfg, 200)
    assert report.aborted is None
    assert report.mass_drift() <= 1e-12
    assert report.saturated
