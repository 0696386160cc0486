"""Projected gradient descent for one unitary precoder per codeword subset.

Each subset n gets a unitary ``W_n`` that is applied as ``c -> W_n c`` before
transmission. The matrices are chosen to shrink the fourth-moment objective

    f = sum_n sum_{c in subset n} sum_k |(V W_n c)_k|^4 + |(Vhat W_n c)_k|^4

by fixed-step descent along the real-parametrization gradient followed by a
projection back onto the unitary group.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .bound import SpectralPair, quartic_sums, unitarity_error
from .constellation import Codebook


class Projection(str, Enum):
    GRAM_SCHMIDT = "gram_schmidt"
    SYMMETRIC = "symmetric"


class ProjectionError(ArithmeticError):
    """Raised when an iterate is too close to singular to project."""

    def __init__(self, message, subset=None, iteration=None):
        super().__init__(message)
        self.subset = subset
        self.iteration = iteration


def objective_subset(W, X, pair: SpectralPair) -> float:
    X = np.asarray(X, dtype=complex)
    if X.shape[0] == 0:
        return 0.0
    if X.shape[-1] != pair.K:
        raise ValueError(f"codeword length {X.shape[-1]} does not match K={pair.K}")
    qa, qb = quartic_sums(X, pair, W)
    return float(np.sum(qa + qb))


def objective(ensemble, book: Codebook, pair: SpectralPair) -> float:
    mats = list(ensemble)
    if len(mats) != book.N:
        raise ValueError(f"ensemble has {len(mats)} matrices for {book.N} subsets")
    return float(np.sum([objective_subset(W, book.subset(n), pair) for n, W in enumerate(mats)]))


def gradient(W, X, pair: SpectralPair) -> np.ndarray:
    """d f / d Re(W) + j d f / d Im(W) for one subset.

    Uses ``4 sum_c [V^H(|a|^2 a) + Vhat^H(|b|^2 b)] c^H`` with ``a = V W c`` and
    ``b = Vhat W c``; the per-codeword terms are summed by one matrix product.
    """
    W = np.asarray(W, dtype=complex)
    X = np.asarray(X, dtype=complex).reshape(-1, pair.K)
    if W.shape != (pair.K, pair.K):
        raise ValueError(f"W has shape {W.shape}, expected {(pair.K, pair.K)}")
    U = X @ W.T
    a = pair.alpha(U)
    b = pair.beta(U)
    Y = pair.alpha_adjoint(np.abs(a) ** 2 * a) + pair.beta_adjoint(np.abs(b) ** 2 * b)
    return 4.0 * (Y.T @ X.conj())


def gradient_step(W, grad, epsilon: float) -> np.ndarray:
    W = np.asarray(W)
    grad = np.asarray(grad)
    if W.shape != grad.shape:
        raise ValueError(f"shape mismatch {W.shape} vs {grad.shape}")
    return W - epsilon * grad


def project_gram_schmidt(W, tol: float = 1e-12) -> np.ndarray:
    """Orthonormalize the rows of W in order (modified Gram-Schmidt)."""
    Q = np.array(W, dtype=complex)
    for k in range(Q.shape[0]):
        for i in range(k):
            Q[k] -= np.vdot(Q[i], Q[k]) * Q[i]
        norm = np.linalg.norm(Q[k])
        if norm < tol:
            raise ProjectionError(f"row {k} is linearly dependent on earlier rows (norm {norm:.3g})")
        Q[k] /= norm
    return Q


def project_symmetric(W, tol: float = 1e-12) -> np.ndarray:
    """(W W^H)^(-1/2) W, the unitary polar factor of W."""
    W = np.asarray(W, dtype=complex)
    lam, F = np.linalg.eigh(W @ W.conj().T)
    if lam[0] < tol:
        raise ProjectionError(f"W W^H is near singular (smallest eigenvalue {lam[0]:.3g})")
    return (F / np.sqrt(lam)) @ (F.conj().T @ W)


_PROJECTORS = {
    Projection.GRAM_SCHMIDT: project_gram_schmidt,
    Projection.SYMMETRIC: project_symmetric,
}


def auto_epsilon(K: int, M: int, N: int) -> float:
    return N / M / K ** 2


@dataclass(frozen=True)
class OptimizerConfig:
    epsilon: float
    max_iters: int = 100
    stop_tol: float = 1e-6
    projection: Projection = Projection.SYMMETRIC
    snapshot_iters: tuple = ()

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if not self.stop_tol > 0:
            raise ValueError(f"stop_tol must be positive, got {self.stop_tol}")
        object.__setattr__(self, "projection", Projection(self.projection))
        object.__setattr__(self, "snapshot_iters", tuple(sorted(set(int(i) for i in self.snapshot_iters))))


@dataclass
class OptimizerTrace:
    """One row per completed iteration; iteration 0 is the identity start."""

    initial_objective: float = float("nan")
    objective: list = field(default_factory=list)
    unitarity_error: list = field(default_factory=list)
    max_step: list = field(default_factory=list)
    wall_time: list = field(default_factory=list)
    snapshots: dict = field(default_factory=dict)
    converged: bool = False

    @property
    def iterations(self) -> int:
        return len(self.objective)

    def rows(self):
        for i in range(self.iterations):
            yield i + 1, self.objective[i], self.unitarity_error[i], self.max_step[i]


def identity_ensemble(N: int, K: int) -> list:
    return [np.eye(K, dtype=complex) for _ in range(N)]


def optimize(book: Codebook, pair: SpectralPair, config: OptimizerConfig):
    """Run the descent/projection loop on every subset.

    All subsets advance together and the loop stops once every matrix moved
    by less than ``stop_tol`` (Frobenius norm) in one iteration, or after
    ``max_iters`` iterations. Each subset's update depends only on its own
    codewords, so processing order has no effect on the result.

    Returns
    -------
    ensemble : list of ndarray
        One unitary (K, K) matrix per subset.
    trace : OptimizerTrace
    """
    project = _PROJECTORS[config.projection]
    subsets = [book.subset(n) for n in range(book.N)]
    Ws = identity_ensemble(book.N, book.K)
    trace = OptimizerTrace()
    trace.initial_objective = float(np.sum([objective_subset(W, X, pair) for W, X in zip(Ws, subsets)]))
    if 0 in config.snapshot_iters:
        trace.snapshots[0] = [W.copy() for W in Ws]

    start = time.perf_counter()
    for it in range(1, config.max_iters + 1):
        new = []
        for n, (W, X) in enumerate(zip(Ws, subsets)):
            stepped = gradient_step(W, gradient(W, X, pair), config.epsilon)
            try:
                new.append(project(stepped))
            except ProjectionError as exc:
                raise ProjectionError(f"subset {n}, iteration {it}: {exc}", subset=n, iteration=it) from exc
        max_step = max(float(np.linalg.norm(a - b)) for a, b in zip(new, Ws))
        Ws = new
        trace.objective.append(float(np.sum([objective_subset(W, X, pair) for W, X in zip(Ws, subsets)])))
        trace.unitarity_error.append(max(unitarity_error(W) for W in Ws))
        trace.max_step.append(max_step)
        trace.wall_time.append(time.perf_counter() - start)
        if it in config.snapshot_iters:
            trace.snapshots[it] = [W.copy() for W in Ws]
        if max_step < config.stop_tol:
            trace.converged = True
            break
    return Ws, trace
