import numpy as np
import pytest
from numpy.testing import assert_allclose

from edsim import (
    Grid1D,
    HydroState,
    NodeError,
    PhysicalParams,
    WaveFunction,
    coherent_state,
    current_velocity,
    entropy_field,
    free_gaussian,
    from_hydro,
    plane_wave,
    to_hydro,
)


def grid():
    return Grid1D(-8.0, 8.0, 128)


def test_grid_geometry():
    g = grid()
    assert g.dx == pytest.approx(0.125)
    assert g.length == pytest.approx(16.0)
    assert len(g.cells) == g.n
    # cell centers: first at x_min + dx/2
    assert g.cells[0] == pytest.approx(-8.0 + 0.0625)
    assert np.allclose(np.diff(g.cells), g.dx)


def test_grid_validation():
    with pytest.raises(ValueError):
        Grid1D(0.0, 1.0, 4)
    with pytest.raises(ValueError):
        Grid1D(1.0, 1.0, 64)


def test_wavefunction_normalization():
    g = grid()
    psi = WaveFunction(g, 3.0 * free_gaussian(g.cells))
    assert psi.norm() == pytest.approx(3.0)
    normed = psi.normalized()
    assert normed.norm() == pytest.approx(1.0, abs=1e-12)
    assert_allclose(normed.density(), np.abs(normed.amplitudes) ** 2)


def test_hydrostate_validation():
    g = grid()
    rho = np.abs(free_gaussian(g.cells)) ** 2
    rho /= rho.sum() * g.dx
    HydroState(g, rho, np.zeros(g.n))
    with pytest.raises(ValueError):
        HydroState(g, -rho, np.zeros(g.n))
    with pytest.raises(ValueError):
        HydroState(g, 2.0 * rho, np.zeros(g.n))


def test_hydro_round_trip_preserves_state():
    """to_hydro keeps the global phase, so from_hydro inverts it exactly."""
    g = grid()
    psi = WaveFunction(g, coherent_state(g.cells, x0=1.0, k0=2.0)).normalized()
    back = from_hydro(to_hydro(psi, node_floor=0.0))
    assert np.max(np.abs(back.amplitudes - psi.amplitudes)) < 1e-12


def test_to_hydro_unwraps_phase():
    g = Grid1D(0.0, 10.0, 64)
    psi = plane_wave(g, 2)
    h = to_hydro(psi)
    k = 4.0 * np.pi / 10.0
    # cumulative unwrapping recovers the linear phase, no 2 pi jumps
    slope = np.diff(h.phi) / g.dx
    assert_allclose(slope, k, atol=1e-9)


def test_to_hydro_node_floor():
    g = grid()
    amps = free_gaussian(g.cells).astype(complex)
    amps[5] = 1e-13
    psi = WaveFunction(g, amps).normalized()
    with pytest.raises(NodeError):
        to_hydro(psi, node_floor=1e-12)
    to_hydro(psi, node_floor=0.0)  # disabled floor admits the near-node


def test_entropy_field_definition():
    g = grid()
    h = to_hydro(WaveFunction(g, free_gaussian(g.cells)).normalized(), node_floor=0.0)
    s = entropy_field(h)
    assert_allclose(s, h.phi + 0.5 * np.log(h.rho), atol=1e-12)


def test_entropy_field_rejects_vacuum():
    g = grid()
    rho = np.zeros(g.n)
    rho[0] = 1.0 / g.dx
    with pytest.raises(NodeError):
        entropy_field(HydroState(g, rho, np.zeros(g.n)))


def test_current_velocity_plane_wave():
    g = Grid1D(0.0, 10.0, 64)
    h = to_hydro(plane_wave(g, 3))
    k = 6.0 * np.pi / 10.0
    v = current_velocity(h, PhysicalParams(hbar=1.0, m=2.0))
    assert_allclose(v, k / 2.0, atol=1e-9)


def test_physical_params_potential():
    g = grid()
    p = PhysicalParams(potential=lambda x: x**2)
    assert_allclose(p.potential_on(g), g.cells**2)
    free = PhysicalParams()
    assert_allclose(free.potential_on(g), 0.0)
    with pytest.raises(ValueError):
        PhysicalParams(potential=lambda x: np.full_like(x, np.inf)).potential_on(g)
