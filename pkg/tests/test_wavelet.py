import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from csmri.wavelet import (
    DimensionError,
    SubbandLayout,
    WaveletCoeffs,
    coeff_mosaic,
    dwt,
    idwt,
    subband_view,
)


def random_image(rng, h, w):
    return rng.normal(size=(h, w)) + 1j * rng.normal(size=(h, w))


class TestLayout:
    def test_counts_and_lengths(self):
        layout = SubbandLayout.create(512, 512, 4)
        assert layout.n_subbands == 1 + 3 * 4
        # scale-1 diagonal subband covers a 256x256 grid
        diag1 = [b for b in layout.subbands if b.scale == 1 and b.orientation == "diagonal"]
        assert len(diag1) == 1 and diag1[0].length == 256 * 256

    def test_lengths_cover_vector(self):
        layout = SubbandLayout.create(64, 32, 3)
        assert int(layout.subband_lengths().sum()) == 64 * 32

    def test_divisibility_error(self):
        with pytest.raises(DimensionError):
            SubbandLayout.create(100, 100, 4)

    def test_scale_major_order(self):
        layout = SubbandLayout.create(16, 16, 2)
        assert layout.subbands[0].orientation == "approx"
        scales = [b.scale for b in layout.subbands]
        assert scales == [2, 2, 2, 2, 1, 1, 1]


class TestDwt:
    def test_2x2_ones(self):
        # Against the explicit 4x4 orthonormal Haar matrix: a constant image
        # maps to a single approx coefficient carrying all the energy.
        coeffs = dwt(np.ones((2, 2)), 1)
        assert coeffs.values[0] == pytest.approx(2.0)
        assert np.allclose(coeffs.values[1:], 0.0)

    def test_norm_preserved(self):
        rng = np.random.default_rng(1)
        x = random_image(rng, 32, 32)
        assert np.linalg.norm(dwt(x, 1).values) == pytest.approx(np.linalg.norm(x))

    def test_zero_image(self):
        assert np.all(dwt(np.zeros((16, 16)), 2).values == 0)

    def test_rejects_non_2d(self):
        with pytest.raises(DimensionError):
            dwt(np.zeros(16), 1)


class TestIdwt:
    def test_round_trip(self):
        rng = np.random.default_rng(2)
        x = random_image(rng, 64, 64)
        back = idwt(dwt(x, 4))
        assert np.linalg.norm(back - x) <= 1e-12 * np.linalg.norm(x)

    def test_unit_approx_coefficient(self):
        layout = SubbandLayout.create(2, 2, 1)
        values = np.zeros(4, dtype=np.complex128)
        values[0] = 1.0
        img = idwt(WaveletCoeffs(values, layout))
        assert np.allclose(img, 0.5)

    def test_zero_coeffs(self):
        layout = SubbandLayout.create(8, 8, 1)
        img = idwt(WaveletCoeffs(np.zeros(64, dtype=np.complex128), layout))
        assert np.all(img == 0)


class TestSubbandView:
    def test_lengths_sum_to_n(self):
        rng = np.random.default_rng(3)
        coeffs = dwt(random_image(rng, 64, 64), 4)
        total = sum(len(subband_view(coeffs, j)) for j in range(coeffs.layout.n_subbands))
        assert total == 64 * 64

    def test_views_disjoint(self):
        layout = SubbandLayout.create(16, 16, 2)
        coeffs = WaveletCoeffs(np.zeros(256, dtype=np.complex128), layout)
        subband_view(coeffs, 1)[:] = 7.0
        for j in range(layout.n_subbands):
            if j != 1:
                assert np.all(subband_view(coeffs, j) == 0)

    def test_index_out_of_range(self):
        layout = SubbandLayout.create(16, 16, 2)
        coeffs = WaveletCoeffs(np.zeros(256, dtype=np.complex128), layout)
        with pytest.raises(IndexError):
            subband_view(coeffs, layout.n_subbands)


class TestMosaic:
    def test_round_trips_through_layout(self):
        rng = np.random.default_rng(4)
        coeffs = dwt(random_image(rng, 32, 32), 3)
        mosaic = coeff_mosaic(coeffs)
        assert mosaic.shape == (32, 32)
        # approx block lands in the top-left corner
        top = coeffs.layout.subbands[0]
        assert np.array_equal(mosaic[: top.shape[0], : top.shape[1]],
                              coeffs.subband(0).reshape(top.shape))
        # the mosaic is a permutation: same multiset of values
        assert np.isclose(np.sort(np.abs(mosaic).ravel()),
                          np.sort(np.abs(coeffs.values))).all()


@st.composite
def images(draw, max_log=5):
    log_h = draw(st.integers(min_value=2, max_value=max_log))
    log_w = draw(st.integers(min_value=2, max_value=max_log))
    seed = draw(st.integers(min_value=0, max_value=2**31))
    rng = np.random.default_rng(seed)
    return random_image(rng, 2**log_h, 2**log_w)


@settings(max_examples=25, deadline=None)
@given(images(), st.integers(min_value=1, max_value=2))
def test_parseval(x, scales):
    w = dwt(x, scales)
    nx = np.linalg.norm(x) ** 2
    assert abs(np.linalg.norm(w.values) ** 2 - nx) <= 1e-10 * max(nx, 1.0)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=2**31), st.integers(min_value=1, max_value=3))
def test_adjoint_identity(seed, scales):
    rng = np.random.default_rng(seed)
    x = random_image(rng, 32, 32)
    layout = SubbandLayout.create(32, 32, scales)
    w = WaveletCoeffs(rng.normal(size=layout.size) + 1j * rng.normal(size=layout.size), layout)
    lhs = np.vdot(w.values, dwt(x, scales).values)
    rhs = np.vdot(idwt(w), x)
    assert abs(lhs - rhs) <= 1e-10 * np.linalg.norm(x) * np.linalg.norm(w.values)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=2**31),
       st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
       st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False))
def test_linearity(seed, a, b):
    rng = np.random.default_rng(seed)
    x, y = random_image(rng, 16, 16), random_image(rng, 16, 16)
    combined = dwt(a * x + b * y, 2).values
    separate = a * dwt(x, 2).values + b * dwt(y, 2).values
    scale = max(np.abs(separate).max(), 1.0)
    assert np.abs(combined - separate).max() <= 1e-12 * scale
