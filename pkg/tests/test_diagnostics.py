import numpy as np
import pytest
from scipy.special import ndtri

from csmri.diagnostics import (
    NMSE_FLOOR_DB,
    gaussianity_stats,
    nmse_db,
    normal_quantile,
    qq_data,
    subband_nmse,
)
from csmri.wavelet import SubbandLayout, WaveletCoeffs


class TestNmse:
    def test_exact_equality_floors(self):
        x = np.ones((8, 8))
        assert nmse_db(x, x) == NMSE_FLOOR_DB

    def test_zero_estimate(self):
        x = np.ones((8, 8))
        assert nmse_db(np.zeros_like(x), x) == pytest.approx(0.0)

    def test_minus_twenty(self):
        x0 = np.ones(100)
        e = np.zeros(100)
        e[0] = 1.0  # ||e||^2 = 1 = 0.01 ||x0||^2
        assert nmse_db(x0 + e, x0) == pytest.approx(-20.0)

    def test_zero_reference_rejected(self):
        with pytest.raises(ValueError):
            nmse_db(np.ones(4), np.zeros(4))

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            nmse_db(np.ones(4), np.ones(5))


class TestSubbandNmse:
    def layout_coeffs(self, rng):
        layout = SubbandLayout.create(32, 32, 2)
        w0 = WaveletCoeffs(rng.normal(size=layout.size) + 0j, layout)
        return layout, w0

    def test_equal_inputs_floor(self):
        rng = np.random.default_rng(0)
        _, w0 = self.layout_coeffs(rng)
        out = subband_nmse(w0, w0)
        assert np.all(out.values == NMSE_FLOOR_DB)

    def test_noise_in_one_subband_only(self):
        rng = np.random.default_rng(1)
        layout, w0 = self.layout_coeffs(rng)
        r = w0.copy()
        r.subband(3)[:] += 0.1
        out = subband_nmse(r, w0)
        for j in range(layout.n_subbands):
            if j == 3:
                assert out.values[j] > NMSE_FLOOR_DB
            else:
                assert out.values[j] == NMSE_FLOOR_DB

    def test_matches_whole_vector_recomputation(self):
        rng = np.random.default_rng(2)
        layout, w0 = self.layout_coeffs(rng)
        r = WaveletCoeffs(w0.values + rng.normal(size=layout.size) * 0.1, layout)
        out = subband_nmse(r, w0)
        err = np.abs(r.values - w0.values) ** 2
        ref = np.abs(w0.values) ** 2
        for j, band in enumerate(layout.subbands):
            m = np.zeros(layout.size)
            m[band.offset : band.offset + band.length] = 1.0
            direct = 10 * np.log10(np.sum(err * m) / np.sum(ref * m))
            assert out.values[j] == pytest.approx(direct)

    def test_zero_energy_sentinel(self):
        layout = SubbandLayout.create(16, 16, 2)
        w0 = WaveletCoeffs(np.zeros(layout.size, dtype=complex), layout)
        r = WaveletCoeffs(np.ones(layout.size, dtype=complex), layout)
        assert np.all(np.isnan(subband_nmse(r, w0).values))


class TestNormalQuantile:
    def test_against_reference(self):
        p = np.concatenate((
            np.linspace(1e-9, 0.02, 50),
            np.linspace(0.021, 0.979, 200),
            np.linspace(0.98, 1 - 1e-9, 50),
        ))
        ours = normal_quantile(p)
        ref = ndtri(p)
        assert np.max(np.abs(ours - ref) / np.maximum(np.abs(ref), 1.0)) < 1e-8

    def test_symmetry(self):
        p = np.array([0.2, 0.4])
        assert np.allclose(normal_quantile(p), -normal_quantile(1 - p))

    def test_rejects_boundary(self):
        with pytest.raises(ValueError):
            normal_quantile(np.array([0.0]))


class TestQQData:
    def test_gaussian_sample_correlates(self):
        rng = np.random.default_rng(3)
        resid = rng.normal(size=65536) + 1j * rng.normal(size=65536)
        qre, qim = qq_data(resid)
        assert qre.correlation >= 0.999
        assert qim.correlation >= 0.999
        assert qre.component == "real" and qim.component == "imag"

    def test_two_point_sample_fails(self):
        resid = np.concatenate((np.ones(500), -np.ones(500))).astype(complex)
        resid += 1j * np.concatenate((-np.ones(500), np.ones(500)))
        qre, _ = qq_data(resid)
        assert qre.correlation < 0.99

    def test_standardization_invariance(self):
        rng = np.random.default_rng(4)
        x = rng.normal(size=4096) + 1j * rng.normal(size=4096)
        base, _ = qq_data(x)
        scaled, _ = qq_data(3.0 * x + (2.0 + 5.0j))
        assert np.allclose(base.q_empirical, scaled.q_empirical)
        assert np.allclose(base.q_theory, scaled.q_theory)

    def test_sorted_theory_axis(self):
        rng = np.random.default_rng(5)
        q, _ = qq_data(rng.normal(size=1000) + 1j * rng.normal(size=1000))
        assert np.all(np.diff(q.q_theory) > 0)

    def test_input_validation(self):
        rng = np.random.default_rng(6)
        with pytest.raises(ValueError):
            qq_data(rng.normal(size=50) + 0j, 100)
        with pytest.raises(ValueError):
            qq_data(rng.normal(size=50) + 0j, 5)
        with pytest.raises(ValueError):
            qq_data(np.ones(200, dtype=complex))  # zero variance


class TestGaussianityStats:
    def test_gaussian_sample(self):
        rng = np.random.default_rng(7)
        resid = rng.normal(size=65536) + 1j * rng.normal(size=65536)
        stats = gaussianity_stats(resid)
        assert abs(stats.excess_kurtosis_real) <= 0.05
        assert abs(stats.excess_kurtosis_imag) <= 0.05
        assert abs(stats.real_imag_correlation) <= 3.0 / np.sqrt(65536)

    def test_uniform_kurtosis(self):
        rng = np.random.default_rng(8)
        resid = rng.uniform(-1, 1, 65536) * (1 + 1j)
        stats = gaussianity_stats(resid)
        assert stats.excess_kurtosis_real == pytest.approx(-1.2, abs=0.05)

    def test_needs_enough_samples(self):
        with pytest.raises(ValueError):
            gaussianity_stats(np.ones(50, dtype=complex))
