"""Baseband OFDM envelope, oversampled peak power and aperiodic autocorrelation.

The symbol duration is normalized to 1, so subcarrier k (0-based) sits at
frequency k and the envelope is ``s(t) = sum_k A_k exp(2j*pi*k*t)``.
"""

from __future__ import annotations

import numpy as np

from .constellation import as_codeword


def baseband_sample(c, t: float) -> complex:
    """Evaluate the envelope at a single time ``t`` in [0, 1)."""
    if not 0.0 <= t < 1.0:
        raise ValueError(f"t must lie in [0, 1), got {t}")
    c = as_codeword(c)
    k = np.arange(c.size)
    return complex(np.sum(c * np.exp(2j * np.pi * k * t)))


def sampling_grid(K: int, J: int) -> np.ndarray:
    """Times i/(JK), i = 0..JK-1."""
    if J < 1:
        raise ValueError(f"oversampling factor must be >= 1, got {J}")
    return np.arange(J * K) / (J * K)


def envelope(symbols, J: int) -> np.ndarray:
    """Envelope on the J-times oversampled grid.

    ``symbols`` may be a single codeword or an (m, K) stack; the grid is the
    last axis of the result. Computed as a zero-padded inverse FFT.
    """
    if J < 1:
        raise ValueError(f"oversampling factor must be >= 1, got {J}")
    x = np.asarray(symbols, dtype=complex)
    L = J * x.shape[-1]
    return np.fft.ifft(x, n=L, axis=-1) * L


def peak_envelope_power(symbols, J: int = 16):
    """max_t |s(t)|^2 over the oversampled grid (per row for stacked input)."""
    s = envelope(symbols, J)
    peak = np.max(s.real ** 2 + s.imag ** 2, axis=-1)
    return float(peak) if peak.ndim == 0 else peak


def pmepr(symbols, J: int, p_av: float):
    """Peak envelope power over average power, linear scale."""
    if not p_av > 0:
        raise ValueError(f"p_av must be positive, got {p_av}")
    return peak_envelope_power(symbols, J) / p_av


def to_db(x):
    return 10.0 * np.log10(x)


def aperiodic_autocorr(c) -> np.ndarray:
    """rho[i] = sum_k A_k conj(A_{k+i}) for i = 0..K-1."""
    c = as_codeword(c)
    K = c.size
    # full correlation via FFT on a 2K grid; index i holds sum_k c[k+i] conj(c[k])
    L = 1 << int(np.ceil(np.log2(2 * K)))
    F = np.fft.fft(c, L)
    r = np.fft.ifft(np.abs(F) ** 2)[:K]
    rho = np.conj(r)
    rho[0] = rho[0].real
    return rho


def autocorr_peak_bound(rho) -> float:
    """rho(0) + 2 sum_{i>=1} |rho(i)|, an upper bound on the envelope peak power."""
    rho = np.asarray(rho)
    return float(rho[0].real + 2.0 * np.sum(np.abs(rho[1:])))
