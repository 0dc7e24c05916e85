import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import stats as sps

from edsim import (
    BasisError,
    CellError,
    ContinuumDevice,
    Grid1D,
    MonotonicityError,
    WaveFunction,
    apply_device,
    born_probabilities,
    build_device,
    check_normal,
    collapse_update,
    continuum_pdf,
    device_state,
    draw_outcomes,
    fourier_device,
    free_gaussian,
    identity_device,
    observable_matrix,
    simulate_measurement,
)
from edsim.seeding import stream_rng


def random_state(dim, seed=0):
    rng = stream_rng(seed, "state")
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def test_identity_device():
    dev = identity_device(4)
    assert_allclose(dev.unitary, np.eye(4), atol=1e-14)
    psi = random_state(4)
    assert_allclose(born_probabilities(dev, psi), np.abs(psi) ** 2, atol=1e-14)


def test_fourier_device_maps_modes_to_cells():
    dev = fourier_device(8)
    for k in (0, 3, 7):
        out = apply_device(dev, dev.basis[k])
        expect = np.zeros(8, dtype=complex)
        expect[k] = 1.0
        # up to the mode's global phase
        assert abs(abs(out[k]) - 1.0) < 1e-12
        assert np.max(np.abs(np.abs(out) - np.abs(expect))) < 1e-12


def test_fourier_born_is_fft():
    dev = fourier_device(16)
    psi = random_state(16, seed=3)
    probs = born_probabilities(dev, psi)
    ref = np.abs(np.fft.fft(psi) / 4.0) ** 2
    assert_allclose(probs, ref, atol=1e-12)
    assert probs.sum() == pytest.approx(1.0, abs=1e-12)


def test_build_device_rejects_bad_basis():
    rows = np.eye(4, dtype=complex)
    rows[0, 0] = 2.0  # not unit norm
    with pytest.raises(BasisError):
        build_device(rows, np.arange(4))
    dep = np.ones((4, 4), dtype=complex) / 2.0  # rank one
    with pytest.raises(BasisError):
        build_device(dep, np.arange(4))


def test_build_device_rejects_bad_cells():
    rows = np.eye(4, dtype=complex)
    with pytest.raises(CellError):
        build_device(rows, np.array([0, 1, 2]))
    with pytest.raises(CellError):
        build_device(rows, np.array([0, 1, 2, 2]))


def test_default_eigenvalues_are_indices():
    dev = build_device(np.eye(3, dtype=complex), np.arange(3))
    assert_allclose(dev.eigenvalues, np.arange(3).astype(complex))


def test_observable_matrix_identity_basis():
    lam = np.array([2.0, -1.0, 0.5j])
    dev = build_device(np.eye(3, dtype=complex), np.arange(3), lam)
    assert_allclose(observable_matrix(dev), np.diag(lam), atol=1e-14)


def test_observable_matrix_normal_for_any_device():
    dev = fourier_device(6)
    assert check_normal(observable_matrix(dev))


def test_check_normal():
    herm = np.array([[1.0, 2.0 - 1j], [2.0 + 1j, -1.0]])
    assert check_normal(herm)
    assert not check_normal(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(ValueError):
        check_normal(np.zeros((2, 3)))


def test_device_state_embeds_grid_state():
    g = Grid1D(-8.0, 8.0, 64)
    psi = WaveFunction(g, free_gaussian(g.cells)).normalized()
    vec = device_state(psi)
    assert np.linalg.norm(vec) == pytest.approx(1.0, abs=1e-12)
    assert_allclose(np.abs(vec) ** 2, psi.density() * g.dx, atol=1e-14)


def test_draw_outcomes_reproducible():
    dev = fourier_device(8)
    psi = random_state(8, seed=1)
    a = draw_outcomes(dev, psi, 1000, seed=5)
    b = draw_outcomes(dev, psi, 1000, seed=5)
    c = draw_outcomes(dev, psi, 1000, seed=6)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


@pytest.mark.parametrize("method", ["categorical", "positions"])
def test_draw_outcomes_follow_born(method):
    dev = fourier_device(8)
    psi = random_state(8, seed=2)
    probs = born_probabilities(dev, psi)
    outcomes = draw_outcomes(dev, psi, 50000, seed=11, method=method)
    counts = np.bincount(outcomes, minlength=8)
    ref = sps.chisquare(counts, probs * 50000)
    assert ref.pvalue > 1e-3


def test_draw_outcomes_unknown_method():
    dev = identity_device(4)
    with pytest.raises(ValueError):
        draw_outcomes(dev, random_state(4), 10, seed=0, method="metropolis")


def test_simulate_measurement_tallies():
    dev = fourier_device(8)
    psi = random_state(8, seed=4)
    records = simulate_measurement(dev, psi, 2000, seed=9)
    assert sum(r.count for r in records) == 2000
    for r in records:
        assert r.eigenvalue == dev.eigenvalues[r.index]
        assert r.detected_cell == dev.target_cells[r.index]


def test_collapse_update():
    dev = fourier_device(8)
    idx, post = collapse_update(dev, observed_cell=3)
    assert idx == 3
    assert_allclose(post, dev.basis[3])
    with pytest.raises(CellError):
        collapse_update(dev, observed_cell=12)


def test_continuum_pdf_linear_map():
    g = Grid1D(0.0, 2.0, 256)
    psi = WaveFunction(g, free_gaussian(g.cells, sigma0=0.2, x0=1.0)).normalized()
    dev = ContinuumDevice(lambda x: 2.0 * x + 1.0, lambda x: np.full_like(x, 2.0))
    a, rho_a = continuum_pdf(dev, psi)
    assert_allclose(a, 2.0 * g.cells + 1.0)
    assert_allclose(rho_a, psi.density() / 2.0, rtol=1e-9)


def test_continuum_pdf_rejects_folds():
    g = Grid1D(-1.0, 1.0, 128)
    psi = WaveFunction(g, free_gaussian(g.cells, sigma0=0.3)).normalized()
    with pytest.raises(MonotonicityError):
        continuum_pdf(psi=psi, cdev=ContinuumDevice(lambda x: x**2, lambda x: 2.0 * x))
    flat = ContinuumDevice(lambda x: np.ones_like(x), lambda x: np.zeros_like(x))
    with pytest.raises(MonotonicityError):
        continuum_pdf(flat, psi)


def test_continuum_pdf_decreasing_map_allowed():
    g = Grid1D(0.5, 2.5, 256)
    psi = WaveFunction(g, free_gaussian(g.cells, sigma0=0.2, x0=1.5)).normalized()
    dev = ContinuumDevice(lambda x: -x, lambda x: np.full_like(x, -1.0))
    a, rho_a = continuum_pdf(dev, psi)
    assert_allclose(rho_a, psi.density(), rtol=1e-9)
