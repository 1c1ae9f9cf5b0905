import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ecs_sensing import oracle
from ecs_sensing.ecs import EcsParams, amplitude_for_mean_photon
from ecs_sensing.lossless import asymptotic_bound, qfi_at_mean_photon, qfi_pure
from ecs_sensing.lossy import LOSSLESS


def test_vacuum_has_no_information():
    r = qfi_pure(EcsParams(0, 1))
    assert r.qfi == 0 and math.isinf(r.delta_phi_min)


def test_symmetric_unit_amplitude():
    t = math.tanh(2)
    r = qfi_pure(EcsParams(1, 1))
    assert r.qfi == pytest.approx(4 * (1 + t - t * t), rel=1e-14)
    assert r.qfi == pytest.approx(4.13871361971593, rel=1e-13)
    assert r.delta_phi_min == pytest.approx(r.qfi ** -0.5)


def test_asymmetric_unit_photon():
    r = qfi_pure(EcsParams(math.sqrt(0.0118780063391855), 10))
    assert r.qfi == pytest.approx(5.68269322573, rel=1e-10)
    assert r.n_bar == pytest.approx(1.0, rel=1e-12)


@given(st.floats(0, 3), st.floats(0.1, 10))
def test_dual_formula_agreement(a, k):
    r = qfi_pure(EcsParams(a, k))
    c = r.components
    assert c["total_number_form"] == pytest.approx(c["variance_form"], rel=1e-12, abs=1e-300)


@given(st.floats(0, 3), st.floats(0.1, 10))
def test_even_in_k(a, k):
    assert qfi_pure(EcsParams(a, k)).qfi == qfi_pure(EcsParams(a, -k)).qfi


@pytest.mark.parametrize("a2,k", [(0.2, 1.0), (1.0, 1.0), (0.3, 2.0), (4.0, 1.0), (0.15, 4.0)])
def test_matches_oracle_sld(a2, k):
    params = EcsParams(math.sqrt(a2), k)
    numeric = oracle.qfi_numeric(lambda phi: oracle.build_density_matrix(params, LOSSLESS, phi), 0.3)
    assert qfi_pure(params).qfi == pytest.approx(numeric, rel=1e-8)


class TestAtMeanPhoton:
    def test_table_point(self):
        assert qfi_at_mean_photon(2, 10).qfi == pytest.approx(9.05, rel=0.05)

    def test_heisenberg_region(self):
        r = qfi_at_mean_photon(4, 10)
        assert r.qfi > 16 or r.qfi == pytest.approx(16, rel=0.05)
        assert r.heisenberg_qfi == 16 and r.sql_qfi == 4

    def test_zero(self):
        assert qfi_at_mean_photon(0, 3).qfi == 0

    @pytest.mark.parametrize("k", [1, 2, 5, 10])
    def test_monotone_in_nbar(self, k):
        values = [qfi_at_mean_photon(n, k).qfi for n in np.linspace(0, 6, 61)]
        assert all(b > a for a, b in zip(values, values[1:]))

    @pytest.mark.parametrize("n_bar", np.linspace(0.5, 5, 10))
    def test_asymmetry_advantage(self, n_bar):
        f = [qfi_at_mean_photon(n_bar, k).qfi for k in (1, 2, 10)]
        assert f[0] <= f[1] <= f[2]


class TestAsymptoticBound:
    def test_vacuum_sentinel(self):
        assert math.isinf(asymptotic_bound(EcsParams(0, 10)))

    def test_against_fock_moments(self):
        params = EcsParams(1, 10)
        # |k alpha|^2 = 100 needs a cutoff well past the default clamp
        psi = oracle.ecs_vector(params, cutoff=200)
        prob = np.abs(psi.amplitudes) ** 2
        n = np.arange(200)[:, None] + np.arange(200)[None, :]
        mean = (prob * n).sum()
        var = (prob * n * n).sum() - mean ** 2
        assert asymptotic_bound(params) == pytest.approx(10 / (2 * math.sqrt(mean + 100 * var)), rel=1e-10)

    @pytest.mark.parametrize("k", [5, 10, 20])
    @pytest.mark.parametrize("a2", [0.1, 0.5, 1, 2, 4])
    def test_ratio_to_delta_phi(self, k, a2):
        # delta_phi_min / bound = (1 + k^2) / k^2: the bound is approached from above
        params = EcsParams(math.sqrt(a2), k)
        ratio = qfi_pure(params).delta_phi_min / asymptotic_bound(params)
        assert ratio == pytest.approx(1 + 1 / k ** 2, rel=1e-12)
        assert ratio > 1
