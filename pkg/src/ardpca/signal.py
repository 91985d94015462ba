"""
Preprocessing transforms for revolution-length vibration records:
block-average decimation and one-sided DFT magnitudes.
"""
import numpy as np


def decimate(signal, target):
    """
    Reduce `signal` to `target` points.

    A boxcar (moving-average) filter of width ``n // target`` is applied and
    the output sampled at that stride, which is the mean of consecutive
    non-overlapping blocks.
    """
    x = np.asarray(signal, dtype=float)
    n = x.shape[-1]
    if target < 1 or n % target:
        raise ValueError("non-integer decimation")
    return x.reshape(*x.shape[:-1], target, n // target).mean(axis=-1)


def _is_pow2(n):
    return n >= 1 and (n & (n - 1)) == 0


def fft(signal):
    """
    Iterative radix-2 decimation-in-time FFT along the last axis.

    ``X_k = sum_t x_t exp(-2 pi i k t / n)``; the length must be a power of
    two.
    """
    x = np.asarray(signal, dtype=complex)
    n = x.shape[-1]
    if not _is_pow2(n):
        raise ValueError("length must be a power of two")
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=int)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    out = x[..., rev].copy()

    size = 2
    while size <= n:
        half = size // 2
        twiddle = np.exp(-2j * np.pi * np.arange(half) / size)
        blocks = out.reshape(*out.shape[:-1], n // size, size)
        even = blocks[..., :half].copy()
        odd = blocks[..., half:] * twiddle
        blocks[..., :half] = even + odd
        blocks[..., half:] = even - odd
        out = blocks.reshape(*out.shape[:-1], n)
        size *= 2
    return out


def dft_magnitude(signal):
    """One-sided magnitude spectrum: ``|X_k|`` for ``k = 0 .. n/2 - 1``."""
    x = np.asarray(signal, dtype=float)
    n = x.shape[-1]
    if n < 8 or not _is_pow2(n):
        raise ValueError("length must be a power of two >= 8")
    return np.abs(fft(x)[..., : n // 2])
