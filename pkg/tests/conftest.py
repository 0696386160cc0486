"""Shared fixtures and slow-but-obvious reference implementations.

The oracles here are written from the defining sums with explicit loops or
dense matrices and never call the FFT paths they are used to check.
"""

import cmath
import math

import numpy as np
import pytest

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20181)


def qam16(rng, size):
    levels = np.array([-3, -1, 1, 3])
    return (rng.choice(levels, size) + 1j * rng.choice(levels, size)) / math.sqrt(10)


def dense_dft(K):
    V = np.empty((K, K), dtype=complex)
    Vh = np.empty((K, K), dtype=complex)
    for m in range(K):
        for n in range(K):
            V[m, n] = cmath.exp(-2j * math.pi * m * n / K) / math.sqrt(K)
            Vh[m, n] = cmath.exp(-2j * math.pi * n * (m / K + 1 / (2 * K))) / math.sqrt(K)
    return V, Vh


def dense_projectors(K):
    """C_k = V^H G_k V and Chat_k = Vhat^H G_k Vhat as (K, K, K) stacks."""
    V, Vh = dense_dft(K)
    C = np.array([np.outer(V[k].conj(), V[k]) for k in range(K)])
    Ch = np.array([np.outer(Vh[k].conj(), Vh[k]) for k in range(K)])
    return C, Ch


def oracle_quartic(c, W=None):
    c = np.asarray(c, dtype=complex)
    K = c.size
    u = c if W is None else W @ c
    C, Ch = dense_projectors(K)
    qa = sum((u.conj() @ C[k] @ u).real ** 2 for k in range(K))
    qb = sum((u.conj() @ Ch[k] @ u).real ** 2 for k in range(K))
    return qa, qb


def oracle_objective(Ws, subsets):
    total = 0.0
    for W, X in zip(Ws, subsets):
        for c in X:
            qa, qb = oracle_quartic(c, W)
            total += qa + qb
    return total


def oracle_gradient(W, X):
    """4 sum_c sum_k {(u^H C_k u) C_k + (u^H Chat_k u) Chat_k} u c^H, u = W c."""
    K = W.shape[0]
    C, Ch = dense_projectors(K)
    G = np.zeros((K, K), dtype=complex)
    for c in X:
        u = W @ c
        A = np.zeros((K, K), dtype=complex)
        for k in range(K):
            A += (u.conj() @ C[k] @ u).real * C[k] + (u.conj() @ Ch[k] @ u).real * Ch[k]
        G += 4 * np.outer(A @ u, c.conj())
    return G


def fd_gradient(f, W, h=1e-6):
    G = np.zeros(W.shape, dtype=complex)
    for i in range(W.shape[0]):
        for j in range(W.shape[1]):
            E = np.zeros(W.shape, dtype=complex)
            E[i, j] = h
            G[i, j] = (f(W + E) - f(W - E)) / (2 * h)
            E[i, j] = 1j * h
            G[i, j] += 1j * (f(W + E) - f(W - E)) / (2 * h)
    return G


def direct_signal(c, t):
    return sum(a * cmath.exp(2j * math.pi * k * t) for k, a in enumerate(c))


def loop_autocorr(c):
    K = len(c)
    return np.array([sum(c[k] * np.conj(c[k + i]) for k in range(K - i)) for i in range(K)])


def random_unitary(rng, K):
    Z = rng.standard_normal((K, K)) + 1j * rng.standard_normal((K, K))
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def shift_block(K, k, sign):
    """The block matrix [[0, sign*I_k], [I_{K-k}, 0]] built entry by entry."""
    B = np.zeros((K, K))
    for a in range(K):
        for b in range(K):
            if a == b + k:
                B[a, b] = 1.0
            elif a == b + k - K:
                B[a, b] = sign
    return B
