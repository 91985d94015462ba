import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ardpca.signal import decimate, dft_magnitude, fft

from oracles import direct_dft


def test_decimate_identity():
    x = np.random.default_rng(0).standard_normal(64)
    np.testing.assert_allclose(decimate(x, 64), x, atol=1e-12)


def test_decimate_constant():
    np.testing.assert_allclose(decimate(np.full(1024, 2.5), 64), np.full(64, 2.5))


def _tone_amplitude(y, cycles):
    t = np.arange(y.size)
    basis = np.exp(-2j * np.pi * cycles * t / y.size)
    return 2 * abs(y @ basis) / y.size


def test_decimate_antialiasing():
    n = 1024
    t = np.arange(n) / n
    low = np.sin(2 * np.pi * 2 * t)
    high = np.sin(2 * np.pi * 400 * t)
    y = decimate(low + high, 64)
    assert abs(_tone_amplitude(y, 2) - 1) < 0.1
    # 400 cycles alias to 400 mod 64 = 16 cycles in the decimated record
    assert _tone_amplitude(y, 16) < 0.3


def test_decimate_rejects_non_divisor():
    with pytest.raises(ValueError, match="non-integer decimation"):
        decimate(np.zeros(100), 64)


def test_decimate_rows():
    x = np.random.default_rng(1).standard_normal((3, 1024))
    y = decimate(x, 256)
    np.testing.assert_allclose(y[1], decimate(x[1], 256))


def test_dft_constant():
    np.testing.assert_allclose(dft_magnitude(np.full(8, 3.0)), [24, 0, 0, 0], atol=1e-12)


def test_dft_tone_peak():
    n, k, amp = 256, 17, 1.7
    t = np.arange(n)
    mag = dft_magnitude(amp * np.cos(2 * np.pi * k * t / n + 0.4))
    assert np.argmax(mag) == k
    assert abs(mag[k] - n * amp / 2) < 1e-8


def test_parseval_against_direct_dft():
    x = np.random.default_rng(2).standard_normal(128)
    full = direct_dft(x)
    np.testing.assert_allclose(fft(x), full, atol=1e-9)
    assert abs(np.sum(np.abs(fft(x)) ** 2) - x.size * np.sum(x ** 2)) < 1e-8 * x.size * np.sum(x ** 2)


@pytest.mark.parametrize("n", [8, 16, 32, 64, 128, 256])
def test_magnitude_matches_direct_transform(n):
    x = np.random.default_rng(n).standard_normal(n)
    np.testing.assert_allclose(dft_magnitude(x), np.abs(direct_dft(x))[: n // 2], atol=1e-8)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 63))
def test_magnitude_shift_invariant(seed, shift):
    x = np.random.default_rng(seed).standard_normal(64)
    np.testing.assert_allclose(dft_magnitude(np.roll(x, shift)), dft_magnitude(x), atol=1e-8)


@pytest.mark.parametrize("n", [4, 12, 100])
def test_dft_rejects_bad_lengths(n):
    with pytest.raises(ValueError):
        dft_magnitude(np.zeros(n))
