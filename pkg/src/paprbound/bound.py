"""Fourth-moment bound on the PMEPR and its CCDF.

The cyclic shift matrices ``B[k](+1)`` (ones on the wrapped diagonal) and
the negacyclic ones ``B[k](-1)`` (wrapped entries negated) are diagonalized by

    V[m, n]    = exp(-2j*pi*m*n/K) / sqrt(K)
    Vhat[m, n] = exp(-2j*pi*n*(m/K + 1/(2K))) / sqrt(K)
    D[k, n]    = exp(-2j*pi*k*n/K)
    Dhat[k, n] = exp(-2j*pi*k*(n/K + 1/(2K)))

with every index 0-based: ``B[k](+1) = V^H diag(D[k]) V`` and
``B[k](-1) = Vhat^H diag(Dhat[k]) Vhat``. ``V`` is the unitary DFT and
``Vhat`` is the unitary DFT applied after a half-bin modulation, so the
production path uses FFTs and never forms the rank-one projectors
``C_k = V^H e_k e_k^H V``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constellation import Codebook, as_codeword


@dataclass(frozen=True)
class SpectralPair:
    K: int
    V: np.ndarray
    Vhat: np.ndarray
    D: np.ndarray
    Dhat: np.ndarray

    @property
    def half_bin(self) -> np.ndarray:
        """exp(-j*pi*n/K), the modulation turning V into Vhat."""
        return np.exp(-1j * np.pi * np.arange(self.K) / self.K)

    def alpha(self, u) -> np.ndarray:
        """V @ u along the last axis."""
        return np.fft.fft(u, axis=-1) / np.sqrt(self.K)

    def beta(self, u) -> np.ndarray:
        """Vhat @ u along the last axis."""
        return np.fft.fft(np.asarray(u) * self.half_bin, axis=-1) / np.sqrt(self.K)

    def alpha_adjoint(self, y) -> np.ndarray:
        """V^H @ y along the last axis."""
        return np.fft.ifft(y, axis=-1) * np.sqrt(self.K)

    def beta_adjoint(self, y) -> np.ndarray:
        """Vhat^H @ y along the last axis."""
        return np.fft.ifft(y, axis=-1) * np.sqrt(self.K) * np.conj(self.half_bin)


def build_spectral_pair(K: int) -> SpectralPair:
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    m = np.arange(K)[:, None]
    n = np.arange(K)[None, :]
    V = np.exp(-2j * np.pi * m * n / K) / np.sqrt(K)
    Vhat = np.exp(-2j * np.pi * n * (m / K + 1 / (2 * K))) / np.sqrt(K)
    D = np.exp(-2j * np.pi * m * n / K)
    Dhat = np.exp(-2j * np.pi * m * (n / K + 1 / (2 * K)))
    for a in (V, Vhat, D, Dhat):
        a.setflags(write=False)
    return SpectralPair(K, V, Vhat, D, Dhat)


def shift_matrix(K: int, k: int, sign: int = 1) -> np.ndarray:
    """Block matrix [[0, sign*I_k], [I_{K-k}, 0]].

    ``c^H B c`` equals rho(k) + sign*conj(rho(K-k)).
    """
    B = np.zeros((K, K))
    B[:k, K - k:] = sign * np.eye(k)
    B[k:, :K - k] = np.eye(K - k)
    return B


def eigendecomposition_error(pair: SpectralPair) -> float:
    """Largest entry of |B - V^H D V| over both families and all shifts."""
    K = pair.K
    worst = 0.0
    for k in range(K):
        rebuilt = pair.V.conj().T @ (pair.D[k][:, None] * pair.V)
        rebuilt_hat = pair.Vhat.conj().T @ (pair.Dhat[k][:, None] * pair.Vhat)
        worst = max(worst,
                    np.max(np.abs(rebuilt - shift_matrix(K, k, 1))),
                    np.max(np.abs(rebuilt_hat - shift_matrix(K, k, -1))))
    return float(worst)


def _apply(W, c):
    c = np.asarray(c, dtype=complex)
    if W is None:
        return c
    W = np.asarray(W)
    if W.shape != (c.shape[-1], c.shape[-1]):
        raise ValueError(f"W has shape {W.shape}, codewords have length {c.shape[-1]}")
    return c @ W.T


def quartic_sums(c, pair: SpectralPair, W=None):
    """(sum_k |alpha_k|^4, sum_k |beta_k|^4) for alpha = V W c, beta = Vhat W c.

    Accepts a single codeword or an (m, K) stack; stacked input returns two
    length-m arrays.
    """
    c = np.asarray(c, dtype=complex)
    if c.shape[-1] != pair.K:
        raise ValueError(f"codeword length {c.shape[-1]} does not match K={pair.K}")
    if W is not None and c.ndim == 1:
        err = unitarity_error(W)
        if err >= 1e-8:
            raise ValueError(f"W is not unitary (error {err:.3g})")
    u = _apply(W, c)
    a2 = np.abs(pair.alpha(u)) ** 2
    b2 = np.abs(pair.beta(u)) ** 2
    qa = np.sum(a2 * a2, axis=-1)
    qb = np.sum(b2 * b2, axis=-1)
    if c.ndim == 1:
        return float(qa), float(qb)
    return qa, qb


def unitarity_error(W) -> float:
    W = np.asarray(W)
    return float(np.max(np.abs(W @ W.conj().T - np.eye(W.shape[0]))))


def codeword_papr_bound(c, pair: SpectralPair, p_av: float) -> float:
    """Upper bound on the PMEPR of one codeword from its quartic spectral sums."""
    if not p_av > 0:
        raise ValueError(f"p_av must be positive, got {p_av}")
    K = pair.K
    qa, qb = quartic_sums(as_codeword(c), pair)
    return float(np.sqrt(K * (2 * K - 1) / (2 * p_av ** 2) * (qa + qb)))


def expansion_identity_check(c, pair: SpectralPair) -> float:
    """Largest relative gap between the three equal forms of the squared-peak bound.

    The forms are the autocorrelation sum ``(2K-1)(|rho0|^2 + 2 sum |rho_i|^2)``,
    the periodic/odd-periodic split over ``rho(k) +- conj(rho(K-k))`` and the
    quartic spectral form ``K(2K-1)/2 (sum |alpha|^4 + sum |beta|^4)``.
    """
    from .signal import aperiodic_autocorr

    c = as_codeword(c)
    K = c.size
    rho = aperiodic_autocorr(c)
    rho_ext = np.append(rho, 0.0)
    r2 = np.abs(rho) ** 2
    direct = (2 * K - 1) * (r2[0] + 2 * np.sum(r2[1:]))

    k = np.arange(K)
    mirrored = np.conj(rho_ext[K - k])
    split = (2 * K - 1) / 2 * np.sum(np.abs(rho + mirrored) ** 2 + np.abs(rho - mirrored) ** 2)

    qa, qb = quartic_sums(c, pair)
    spectral = K * (2 * K - 1) / 2 * (qa + qb)

    forms = np.array([direct, split, spectral])
    scale = np.max(np.abs(forms))
    if scale == 0:
        return 0.0
    return float((forms.max() - forms.min()) / scale)


@dataclass(frozen=True)
class BoundReport:
    gamma: float
    upper: float
    lower: float
    quartic_total: float


def _check_ensemble(book: Codebook, ensemble):
    if ensemble is None:
        return None
    mats = list(ensemble)
    if len(mats) != book.N:
        raise ValueError(f"ensemble has {len(mats)} matrices for {book.N} subsets")
    return mats


def quartic_total(book: Codebook, pair: SpectralPair, ensemble=None) -> float:
    """sum over subsets n, codewords c in subset n, of sum |V W_n c|^4 + |Vhat W_n c|^4."""
    mats = _check_ensemble(book, ensemble)
    parts = []
    for n in range(book.N):
        W = None if mats is None else mats[n]
        qa, qb = quartic_sums(book.subset(n), pair, W)
        parts.append(np.sum(qa + qb))
    return float(np.sum(parts))


def bound_prefactor(K: int, p_av: float) -> float:
    return K * (2 * K - 1) / (2 * p_av ** 2)


def lower_bound(K: int, p_av: float, gamma) -> float:
    """K^2 (2K-1) / (p_av^2 gamma^2), the floor reached when E[c c^H] = I."""
    return K ** 2 * (2 * K - 1) / (p_av ** 2 * np.asarray(gamma, dtype=float) ** 2)


def ccdf_upper_bound(book: Codebook, pair: SpectralPair, ensemble=None, gamma: float = 1.0,
                     total: float | None = None) -> BoundReport:
    """Markov bound on Pr(PMEPR > gamma) for a uniformly drawn codeword.

    ``total`` may carry a precomputed quartic total so sweeps over gamma do
    not recompute it.
    """
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    _check_ensemble(book, ensemble)
    if book.K != pair.K:
        raise ValueError(f"codebook K={book.K} does not match spectral pair K={pair.K}")
    if total is None:
        total = quartic_total(book, pair, ensemble)
    upper = bound_prefactor(book.K, book.p_av) * total / (book.M * gamma ** 2)
    return BoundReport(float(gamma), float(upper), float(lower_bound(book.K, book.p_av, gamma)),
                       float(total))


def bound_sweep(book: Codebook, pair: SpectralPair, gammas, ensemble=None) -> list:
    total = quartic_total(book, pair, ensemble)
    return [ccdf_upper_bound(book, pair, ensemble, g, total=total) for g in gammas]


def sample_second_moment(book: Codebook, n: int) -> np.ndarray:
    """g = mean of c c^H over subset n."""
    X = book.subset(n)
    g = X.T @ X.conj() / X.shape[0]
    return (g + g.conj().T) / 2


def _sandwich_diag(transform, g) -> np.ndarray:
    # diag(T g T^H) for Hermitian g, where transform applies T along the last axis
    Tg = transform(g.T).T
    return np.real(np.diag(transform(Tg.conj())))


def jensen_floor(book: Codebook, pair: SpectralPair, gamma: float, ensemble=None) -> float:
    """Lower bound on the upper bound obtained from each subset's second moment.

    For every subset and bin, the mean of (c^H C_k c)^2 is at least
    (trace(C_k g))^2 = ((V g V^H)_kk)^2; summing these floors with the
    same weights as the upper bound gives this value.
    """
    mats = _check_ensemble(book, ensemble)
    K = book.K
    parts = []
    for n in range(book.N):
        g = sample_second_moment(book, n)
        if mats is not None:
            g = mats[n] @ g @ mats[n].conj().T
        dv = _sandwich_diag(pair.alpha, g)
        dvh = _sandwich_diag(pair.beta, g)
        parts.append(book.partition[n].size * (np.sum(dv ** 2) + np.sum(dvh ** 2)))
    return float(bound_prefactor(K, book.p_av) * np.sum(parts) / (book.M * gamma ** 2))
