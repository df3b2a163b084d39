import math

from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays
import numpy as np
import pytest

from phi4waves.errors import DomainError
from phi4waves.fourier import (
    fft,
    first_derivative_matrix,
    grid,
    ifft,
    is_power_of_two,
    second_derivative_matrix,
    spectral_derivative,
    wavenumbers,
)

sizes = st.sampled_from([1, 2, 4, 8, 16, 64, 256])
finite = st.floats(min_value=-1e3, max_value=1e3)


@given(sizes.flatmap(lambda n: arrays(np.float64, n, elements=finite)))
def test_fft_matches_numpy(x):
    assert np.allclose(fft(x), np.fft.fft(x), atol=1e-9 * max(1.0, np.max(np.abs(x))))


@given(sizes.flatmap(lambda n: arrays(np.complex128, n, elements=st.complex_numbers(max_magnitude=1e3))))
def test_roundtrip(x):
    assert np.allclose(ifft(fft(x)), x, atol=1e-10 * max(1.0, np.max(np.abs(x))))


def test_batched_last_axis():
    x = np.random.default_rng(0).standard_normal((3, 64))
    assert np.allclose(fft(x), np.fft.fft(x, axis=-1), atol=1e-12)


def test_input_untouched():
    x = np.arange(8.0) + 0j
    y = x.copy()
    fft(x)
    ifft(x)
    assert np.array_equal(x, y)


@pytest.mark.parametrize("n", [3, 6, 100])
def test_rejects_non_power_of_two(n):
    with pytest.raises(DomainError):
        fft(np.zeros(n))


def test_power_of_two_predicate():
    assert [n for n in range(20) if is_power_of_two(n)] == [1, 2, 4, 8, 16]


def test_wavenumbers_and_grid():
    k = wavenumbers(8, 2 * math.pi)
    assert list(k) == [0, 1, 2, 3, -4, -3, -2, -1]
    assert grid(4, 2.0).tolist() == [0.0, 0.5, 1.0, 1.5]


def test_spectral_derivative_of_trig():
    L = 4 * math.pi
    x = grid(128, L)
    f = np.sin(3 * 2 * math.pi * x / L)
    d = spectral_derivative(f, L)
    assert d.dtype == np.float64
    assert np.max(np.abs(d - 3 * 2 * math.pi / L * np.cos(3 * 2 * math.pi * x / L))) <= 1e-11
    d2 = spectral_derivative(f, L, order=2)
    assert np.max(np.abs(d2 + (6 * math.pi / L) ** 2 * f)) <= 1e-11


def test_derivative_matrices():
    n, L = 64, 3.0
    D2 = second_derivative_matrix(n, L)
    D1 = first_derivative_matrix(n, L)
    assert np.max(np.abs(D2 - D2.T)) == 0.0
    assert np.max(np.abs(D1 + D1.T)) == 0.0
    f = np.cos(2 * math.pi * 5 * grid(n, L) / L)
    assert np.allclose(D2 @ f, spectral_derivative(f, L, 2), atol=1e-10)
    assert np.allclose(D1 @ f, spectral_derivative(f, L, 1), atol=1e-10)
    ev = np.sort(np.linalg.eigvalsh(-D2)) / (2 * math.pi / L) ** 2
    assert np.allclose(ev[:5], [0, 1, 1, 4, 4], atol=1e-9)
