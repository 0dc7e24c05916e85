import numpy as np
import pytest
from numpy.testing import assert_allclose

from edsim import (
    EvolutionConfig,
    Grid1D,
    PhysicalParams,
    WaveFunction,
    discrete_ground_state,
    evolve,
    free_gaussian,
    l1_distance,
    schrodinger_step,
)


def packet(grid):
    return WaveFunction(
        grid, free_gaussian(grid.cells, sigma0=1.0, k0=1.0, x0=-1.0)
    ).normalized()


def test_norm_preserved():
    g = Grid1D(-15.0, 15.0, 256)
    p = PhysicalParams()
    psi = packet(g)
    for _ in range(500):
        psi = schrodinger_step(psi, p, 1e-3)
    assert psi.norm() == pytest.approx(1.0, abs=1e-12)


def test_matches_closed_form_free_packet():
    g = Grid1D(-20.0, 20.0, 1024)
    p = PhysicalParams()
    tr = evolve(
        packet(g),
        p,
        EvolutionConfig(dt=1e-3, t_final=1.0, engine="schrodinger", snapshot_stride=1000),
    )
    num = tr.snapshots[-1][1].density()
    exact = np.abs(free_gaussian(g.cells, t=1.0, sigma0=1.0, k0=1.0, x0=-1.0)) ** 2
    assert l1_distance(num, exact, g.dx) < 1e-3


def test_time_reversal():
    """Conjugate, step, conjugate undoes a step: the scheme is unitary and
    time-symmetric."""
    g = Grid1D(-15.0, 15.0, 512)
    p = PhysicalParams(potential=lambda x: 0.1 * x**2)
    psi = packet(g)
    fwd = schrodinger_step(psi, p, 1e-3)
    back = schrodinger_step(WaveFunction(g, fwd.amplitudes.conj()), p, 1e-3)
    assert np.max(np.abs(back.amplitudes.conj() - psi.amplitudes)) < 1e-12


def test_hardwall_discrete_ground_state_stationary():
    g = Grid1D(-3.5, 3.5, 256)
    p = PhysicalParams(potential=lambda x: 0.5 * x**2)
    e0, psi0 = discrete_ground_state(g, p, "hardwall")
    tr = evolve(
        psi0,
        p,
        EvolutionConfig(dt=1e-3, t_final=1.0, engine="schrodinger",
                        snapshot_stride=1000, boundary="hardwall"),
    )
    psi_t = tr.snapshots[-1][1]
    assert np.max(np.abs(psi_t.density() - psi0.density())) < 1e-10
    # evolution only rotates the global phase, by -e0 t / hbar
    overlap = np.vdot(psi0.amplitudes, psi_t.amplitudes) * g.dx
    assert abs(overlap) == pytest.approx(1.0, abs=1e-10)
    assert np.angle(overlap) == pytest.approx(-e0, abs=1e-6)  # e0 t/hbar < pi here


def test_snapshot_schedule():
    g = Grid1D(-15.0, 15.0, 256)
    tr = evolve(
        packet(g),
        PhysicalParams(),
        EvolutionConfig(dt=1e-3, t_final=0.01, engine="schrodinger", snapshot_stride=4),
    )
    assert_allclose(tr.times(), [0.0, 0.004, 0.008, 0.01], atol=1e-12)
    assert len(tr.diagnostics) == 4
    assert all(d.norm == pytest.approx(1.0, abs=1e-12) for d in tr.diagnostics)


def test_non_integer_steps_rejected():
    g = Grid1D(-15.0, 15.0, 256)
    with pytest.raises(ValueError):
        evolve(
            packet(g),
            PhysicalParams(),
            EvolutionConfig(dt=3e-3, t_final=0.01, engine="schrodinger"),
        )


def test_config_validation():
    with pytest.raises(ValueError):
        EvolutionConfig(dt=-1e-3, t_final=1.0)
    with pytest.raises(ValueError):
        EvolutionConfig(dt=1e-3, t_final=1.0, engine="spectral")
    with pytest.raises(ValueError):
        EvolutionConfig(dt=1e-3, t_final=1.0, snapshot_stride=0)
    with pytest.raises(ValueError):
        EvolutionConfig(dt=1e-3, t_final=1.0, boundary="absorbing")
