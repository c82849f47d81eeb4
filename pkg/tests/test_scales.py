import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from percepbank.errors import DomainError
from percepbank.scales import BARK_SUPREMUM, bark_to_hz, hz_to_bark, hz_to_mel, mel_to_hz

# mpmath at 40 digits
MEL_700 = 781.1728387480312
BARK_1000 = 8.510531510721993
BARK_500 = 4.73646658243365


def bark_oracle(f):
    mpmath.mp.dps = 40
    f = mpmath.mpf(f)
    return float(13 * mpmath.atan(mpmath.mpf("0.76") * f / 1000)
                 + mpmath.mpf("3.5") * mpmath.atan((f / 7500) ** 2))


class TestMel:
    def test_zero(self):
        assert hz_to_mel(0.0) == 0.0
        assert mel_to_hz(0.0) == 0.0

    def test_reference_point(self):
        assert 999 <= hz_to_mel(1000.0) <= 1001

    def test_break_frequency(self):
        assert hz_to_mel(700.0) == pytest.approx(MEL_700, rel=1e-14)
        assert mel_to_hz(MEL_700) == pytest.approx(700.0, rel=1e-12)

    def test_roundtrip_440(self):
        assert mel_to_hz(hz_to_mel(440.0)) == pytest.approx(440.0, rel=1e-9)

    def test_low_frequency_slope(self):
        # mel/f stays in [1.55, 1.62] only up to ~54.9 Hz; at 100 Hz it is 1.5049
        f = np.linspace(0.1, 54.0, 500)
        ratio = hz_to_mel(f) / f
        assert np.all((ratio >= 1.55) & (ratio <= 1.62))
        assert hz_to_mel(100.0) / 100.0 == pytest.approx(1.5048910240709708, rel=1e-12)
        # derivative at the origin, by finite difference
        h = 1e-6
        assert hz_to_mel(h) / h == pytest.approx(2595 / (700 * math.log(10)), rel=1e-6)

    def test_array_shape_preserved(self):
        out = hz_to_mel(np.array([[0.0, 700.0], [1000.0, 2000.0]]))
        assert out.shape == (2, 2)

    @pytest.mark.parametrize("bad", [-1.0, float("nan"), float("inf")])
    def test_domain(self, bad):
        with pytest.raises(DomainError):
            hz_to_mel(bad)
        with pytest.raises(DomainError):
            mel_to_hz(bad)


class TestBark:
    def test_zero(self):
        assert hz_to_bark(0.0) == 0.0
        assert bark_to_hz(0.0) == 0.0

    @pytest.mark.parametrize("f,expected", [(1000.0, BARK_1000), (500.0, BARK_500)])
    def test_oracle_values(self, f, expected):
        assert hz_to_bark(f) == pytest.approx(expected, abs=1e-12)
        assert bark_oracle(f) == pytest.approx(expected, abs=1e-14)

    def test_inverse(self):
        assert bark_to_hz(BARK_1000) == pytest.approx(1000.0, rel=1e-9)
        assert bark_to_hz(hz_to_bark(1000.0)) == pytest.approx(1000.0, rel=1e-6)

    def test_bounded(self):
        assert hz_to_bark(1e12) < BARK_SUPREMUM

    @pytest.mark.parametrize("bad", [-0.1, BARK_SUPREMUM, BARK_SUPREMUM + 1, float("nan")])
    def test_inverse_domain(self, bad):
        with pytest.raises(DomainError):
            bark_to_hz(bad)

    def test_forward_domain(self):
        with pytest.raises(DomainError):
            hz_to_bark(-5.0)


def test_roundtrip_log_grid():
    f = np.logspace(1, np.log10(2e7), 1000)
    assert np.max(np.abs(mel_to_hz(hz_to_mel(f)) - f) / f) < 1e-9
    assert np.max(np.abs(bark_to_hz(hz_to_bark(f)) - f) / f) < 1e-6


freqs = st.floats(min_value=0.0, max_value=1e8, allow_nan=False)


@given(freqs, freqs)
def test_monotone(a, b):
    lo, hi = sorted((a, b))
    if hi - lo <= 1e-9 * max(1.0, hi):
        return
    assert hz_to_mel(lo) < hz_to_mel(hi)
    assert hz_to_bark(lo) <= hz_to_bark(hi)


@given(st.floats(min_value=1.0, max_value=5e7))
def test_bark_roundtrip_property(f):
    assert bark_to_hz(hz_to_bark(f)) == pytest.approx(f, rel=1e-6)
