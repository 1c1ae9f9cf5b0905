import math

import numpy as np
import pytest

from ecs_sensing import oracle
from ecs_sensing.ecs import EcsParams, amplitude_for_mean_photon
from ecs_sensing.intensity import optimal_phase_error, phase_error, sz_statistics
from ecs_sensing.lossy import LOSSLESS, LossChannel, qfi_lossy

PHI_GRID = np.linspace(0, np.pi, 721)[1:-1]


def at_nbar(n_bar, k):
    return EcsParams(amplitude_for_mean_photon(n_bar, k), k)


@pytest.mark.parametrize("k,r", [(1, 0), (2, 0.3), (5, 0.6)])
def test_zero_phase_has_zero_mean(k, r):
    assert sz_statistics(EcsParams(0.9, k), LossChannel.from_loss(r), 0.0).mean == 0


def test_balanced_lossless_against_oracle():
    p = EcsParams(1, 1)
    st = sz_statistics(p, LOSSLESS, math.pi / 2)
    mean, _ = oracle.observable_moments_numeric(oracle.build_density_matrix(p, LOSSLESS, math.pi / 2))
    assert st.mean == pytest.approx(mean, abs=1e-9)
    assert st.mean == pytest.approx(-math.tanh(2), rel=1e-13)


def test_lossy_against_oracle():
    p, ch = EcsParams(1, 2), LossChannel.from_loss(0.3)
    st = sz_statistics(p, ch, 0.7)
    mean, second = oracle.observable_moments_numeric(oracle.build_density_matrix(p, ch, 0.7))
    assert st.mean == pytest.approx(mean, rel=1e-8)
    assert st.second_moment == pytest.approx(second, rel=1e-8)
    assert (mean, second) == pytest.approx((-0.901822873023, 1.68835275367), rel=1e-10)


def test_random_draws_against_oracle():
    rng = np.random.default_rng(7)
    for _ in range(10):
        k = rng.uniform(1, 5)
        a2 = rng.uniform(0.02, min(2.0, 8 / (1 + k * k)))
        p = EcsParams(math.sqrt(a2) * np.exp(1j * rng.uniform(0, 2 * np.pi)), k)
        ch = LossChannel.from_loss(rng.uniform(0, 0.6))
        phi = rng.uniform(0.01, np.pi - 0.01)
        st = sz_statistics(p, ch, phi)
        mean, second = oracle.observable_moments_numeric(oracle.build_density_matrix(p, ch, phi))
        assert st.mean == pytest.approx(mean, rel=1e-7)
        assert st.second_moment == pytest.approx(second, rel=1e-7)


@pytest.mark.parametrize("phi", [0.1, 0.6, 1.2, 2.0, 2.9])
@pytest.mark.parametrize("k,r", [(1, 0), (2, 0.3), (4, 0.5)])
def test_slope_matches_finite_difference(phi, k, r):
    p, ch, h = EcsParams(0.8, k), LossChannel.from_loss(r), 1e-5
    st = sz_statistics(p, ch, phi)
    fd = (sz_statistics(p, ch, phi + h).mean - sz_statistics(p, ch, phi - h).mean) / (2 * h)
    if abs(st.slope) > 1e-3:
        assert st.slope == pytest.approx(fd, rel=1e-6)


@pytest.mark.parametrize("phi", [0.3, 1.0, 2.5])
def test_parity_in_phase(phi):
    p, ch = EcsParams(1.1, 2.5), LossChannel.from_loss(0.2)
    a, b = sz_statistics(p, ch, phi), sz_statistics(p, ch, -phi)
    assert b.mean == pytest.approx(-a.mean, rel=1e-12)
    assert b.second_moment == pytest.approx(a.second_moment, rel=1e-12)
    assert a.variance >= -1e-10


def test_vanishing_slope_is_flagged():
    pe = phase_error(EcsParams(1, 1), LOSSLESS, math.pi / 2)
    assert pe.degenerate and math.isinf(pe.delta_phi)


def test_vacuum_is_degenerate():
    assert phase_error(EcsParams(0, 2), LOSSLESS, 0.5).degenerate


@pytest.mark.parametrize("k,r", [(1, 0), (2, 0), (5, 0), (2, 0.3), (5, 0.6)])
def test_cramer_rao_ordering(k, r):
    p, ch = at_nbar(2, k), LossChannel.from_loss(r)
    crb = qfi_lossy(p, ch).delta_phi_min
    for phi in PHI_GRID[::20]:
        pe = phase_error(p, ch, phi)
        assert pe.crb == pytest.approx(crb)
        if not pe.degenerate:
            assert pe.delta_phi >= pe.crb - 1e-9


class TestOptimal:
    def test_all_degenerate(self):
        with pytest.raises(ValueError):
            optimal_phase_error(EcsParams(1, 1), LOSSLESS, [math.pi / 2])

    def test_empty_grid(self):
        with pytest.raises(ValueError):
            optimal_phase_error(EcsParams(1, 1), LOSSLESS, [])

    def test_tie_break_prefers_smaller_phi(self):
        phi, _ = optimal_phase_error(EcsParams(1, 2), LossChannel.from_loss(0.2), [0.4, -0.4])
        assert phi == -0.4

    def test_grid_search_asymmetric_lossless(self):
        p = at_nbar(2, 5)
        phi, delta = optimal_phase_error(p, LOSSLESS, PHI_GRID)
        crb = qfi_lossy(p, LOSSLESS).delta_phi_min
        assert phi == PHI_GRID[0]
        assert delta >= crb
        assert delta == pytest.approx(1.83849547607, rel=1e-9)

    def test_optimum_sits_near_zero_phase(self):
        # delta_phi grows monotonically away from phi = 0 on (0, pi/2)
        p, ch = at_nbar(2, 2), LossChannel.from_loss(0.3)
        values = [phase_error(p, ch, phi).delta_phi for phi in PHI_GRID[:300]]
        assert all(b >= a for a, b in zip(values, values[1:]))
