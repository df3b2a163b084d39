"""Radix-2 FFT and Fourier spectral differentiation on a periodic grid.

The transform is an iterative decimation-in-time Cooley-Tukey FFT acting on
the last axis, so a stack of fields (e.g. ``(phi1, phi2)``) is transformed in
one call.  Sign and scaling follow numpy: ``fft`` has ``exp(-2 pi i jk/N)``
and no scaling, ``ifft`` divides by ``N``.
"""
from functools import lru_cache

import numpy as np

from .errors import DomainError

__all__ = [
    "fft",
    "ifft",
    "is_power_of_two",
    "wavenumbers",
    "grid",
    "spectral_derivative",
    "second_derivative_matrix",
    "first_derivative_matrix",
]


def is_power_of_two(n):
    return n >= 1 and (n & (n - 1)) == 0


@lru_cache(maxsize=32)
def _plan(n):
    """Bit-reversal permutation and per-stage twiddle factors for size n."""
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.intp)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    twiddles = []
    half = 1
    while half < n:
        twiddles.append(np.exp(-1j * np.pi * np.arange(half) / half))
        half *= 2
    return rev, tuple(twiddles)


def _transform(x, inverse):
    x = np.asarray(x, dtype=complex)
    n = x.shape[-1]
    if not is_power_of_two(n):
        raise DomainError(f"radix-2 FFT needs a power-of-two length, got {n}")
    rev, twiddles = _plan(n)
    lead = x.shape[:-1]
    y = x[..., rev]  # fancy indexing copies, so the stages below work in place
    if inverse:
        np.conj(y, out=y)
    half = 1
    for w in twiddles:
        # blocks of length 2*half: butterflies between first and second halves
        blocks = y.reshape(lead + (n // (2 * half), 2, half))
        top = blocks[..., 0, :]
        bot = blocks[..., 1, :] * w if half > 1 else blocks[..., 1, :].copy()
        blocks[..., 1, :] = top - bot
        top += bot
        half *= 2
    y = y.reshape(lead + (n,))
    if inverse:
        y = np.conj(y) / n
    return y


def fft(x):
    """Forward DFT along the last axis (length must be a power of two)."""
    return _transform(x, inverse=False)


def ifft(x):
    """Inverse DFT along the last axis, normalised by 1/N."""
    return _transform(x, inverse=True)


def wavenumbers(n, L):
    """Angular wavenumbers ``2 pi m / L`` in FFT order (m = 0..N/2-1, -N/2..-1)."""
    m = np.arange(n)
    m = np.where(m < n // 2, m, m - n)
    return 2.0 * np.pi * m / L


def grid(n, L):
    """Uniform periodic grid ``x_j = j L / N``."""
    return np.arange(n) * (L / n)


def _multipliers(n, L, order):
    xi = wavenumbers(n, L)
    mult = (1j * xi) ** order
    if order % 2 == 1:
        # the Nyquist mode has no well-defined odd derivative on a real grid
        mult[n // 2] = 0.0
    return mult


def spectral_derivative(f, L, order=1):
    """Derivative of periodic samples along the last axis.

    Real input gives real output.
    """
    f = np.asarray(f)
    n = f.shape[-1]
    out = ifft(fft(f) * _multipliers(n, L, order))
    if np.isrealobj(f):
        return out.real
    return out


def _circulant(column):
    n = column.size
    j = np.arange(n)
    return column[(j[:, None] - j[None, :]) % n]


def second_derivative_matrix(n, L):
    """Dense, symmetric Fourier second-derivative matrix ``F^-1 diag(-xi^2) F``."""
    column = ifft(_multipliers(n, L, 2)).real
    d2 = _circulant(column)
    return 0.5 * (d2 + d2.T)


def first_derivative_matrix(n, L):
    """Dense, antisymmetric Fourier first-derivative matrix (Nyquist mode dropped)."""
    column = ifft(_multipliers(n, L, 1)).real
    d1 = _circulant(column)
    return 0.5 * (d1 - d1.T)
