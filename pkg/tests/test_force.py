import numpy as np
import pytest
from hypothesis import given, strategies as st

from dtrw.errors import NonFiniteForce, StencilOutOfRange
from dtrw.force import burgers, diffusion, force_on_lattice, potential_increment, prescribed
from dtrw.lattice import make_lattice

finite = st.floats(-1e3, 1e3)


def test_burgers_force_is_the_field():
    lat = make_lattice(0, 2, 1.0)
    np.testing.assert_array_equal(force_on_lattice(burgers(0.45), lat, 0.0, [0.1, 0.5, 1.9]), [0.1, 0.5, 1.9])


def test_burgers_parameters():
    f = burgers(0.45)
    assert f.beta == pytest.approx(5 / 9)
    assert f.kind == "state-dependent"


def test_zero_and_identity_forces():
    lat = make_lattice(0, 2, 1.0)
    np.testing.assert_array_equal(force_on_lattice(diffusion(), lat, 3.0, [5.0, 1.0, 2.0]), 0.0)
    ident = prescribed(lambda x, t: x, beta=1.0)
    np.testing.assert_array_equal(force_on_lattice(ident, lat, 0.0, [9.0, 9.0, 9.0]), [0.0, 1.0, 2.0])


def test_non_finite_force_raises():
    bad = prescribed(lambda x, t: 1.0 / (x - 1.0), beta=1.0)
    with pytest.raises(NonFiniteForce):
        with np.errstate(divide="ignore"):
            force_on_lattice(bad, make_lattice(0, 2, 1.0), 0.0, np.zeros(3))


def test_potential_increment_examples():
    assert potential_increment([1, 1, 1], 1, "right", 0.5, "two") == 0.5
    assert potential_increment([0, 2, 4], 1, "right", 1.0, "two") == 3.0
    assert potential_increment([0, 2, 4], 1, "right", 1.0, "single") == 2.0
    assert potential_increment([0, 2, 4], 1, "left", 1.0, "two") == 1.0


def test_potential_increment_stencil():
    with pytest.raises(StencilOutOfRange):
        potential_increment([0, 2, 4], 2, "right", 1.0, "two")
    with pytest.raises(StencilOutOfRange):
        potential_increment([0, 2, 4], 0, "left", 1.0, "two")


@given(finite, st.floats(1e-6, 1e3), st.sampled_from(["left", "right"]))
def test_constant_force_rules_agree(f0, dx, direction):
    F = [f0] * 3
    a = potential_increment(F, 1, direction, dx, "single")
    b = potential_increment(F, 1, direction, dx, "two")
    assert a == pytest.approx(b, rel=1e-15, abs=1e-300)
    assert potential_increment(F, 1, direction, dx / 2, "single") == pytest.approx(a / 2, rel=1e-15, abs=1e-300)


@given(st.lists(finite, min_size=3, max_size=3), st.lists(finite, min_size=3, max_size=3), st.floats(-5, 5))
def test_increment_linear_in_force(f, g, a):
    f, g = np.array(f), np.array(g)
    lhs = potential_increment(a * f + g, 1, "right", 0.7, "two")
    rhs = a * potential_increment(f, 1, "right", 0.7, "two") + potential_increment(g, 1, "right", 0.7, "two")
    assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-9)


def test_characteristic_speed_burgers_is_u():
    f = burgers(0.45)
    u = np.array([0.1, -1.9, 1.0])
    np.testing.assert_allclose(f.characteristic_speed(np.zeros(3), 0.0, u, 0.45), np.abs(u), rtol=1e-14)


def test_characteristic_speed_numeric_matches_analytic():
    analytic = burgers(0.3)
    numeric = type(analytic)("state-dependent", analytic.evaluate, analytic.beta)
    u = np.linspace(-2, 2, 9)
    np.testing.assert_allclose(
        numeric.characteristic_speed(u, 0.0, u, 0.3), analytic.characteristic_speed(u, 0.0, u, 0.3), atol=1e-8
    )
