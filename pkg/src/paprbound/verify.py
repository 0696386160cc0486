"""Self-check harness that exercises every identity and ordering the library relies on."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bound import (build_spectral_pair, ccdf_upper_bound, codeword_papr_bound,
                    eigendecomposition_error, expansion_identity_check, jensen_floor,
                    quartic_sums, unitarity_error)
from .constellation import ConstellationSpec, generate_codebook
from .experiment import default_gamma_grid, empirical_ccdf
from .optimizer import gradient, objective_subset, project_gram_schmidt, project_symmetric
from .signal import aperiodic_autocorr, autocorr_peak_bound, peak_envelope_power


@dataclass
class Check:
    name: str
    tol: float
    worst: float = 0.0
    cases: int = 0
    failures: list = field(default_factory=list)

    def record(self, value: float, where: str):
        value = float(value)
        self.cases += 1
        self.worst = max(self.worst, value) if np.isfinite(value) else np.inf
        if not value <= self.tol:
            self.failures.append(f"{where}: {value:.3g} > {self.tol:.3g}")

    @property
    def passed(self) -> bool:
        return not self.failures


@dataclass
class VerifyReport:
    checks: dict

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def lines(self):
        for c in self.checks.values():
            status = "PASS" if c.passed else "FAIL"
            yield f"{status} {c.name:<22} worst={c.worst:.3e} tol={c.tol:.1e} cases={c.cases}"
            for f in c.failures[:3]:
                yield f"     {f}"


def random_unitary(K: int, rng) -> np.ndarray:
    Z = rng.standard_normal((K, K)) + 1j * rng.standard_normal((K, K))
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def polar_factor_svd(A) -> np.ndarray:
    U, _, Vh = np.linalg.svd(A)
    return U @ Vh


def finite_difference_gradient(f, W, h: float = 1e-6) -> np.ndarray:
    """Central differences of a real function of a complex matrix, d/dRe + j d/dIm."""
    G = np.zeros_like(W, dtype=complex)
    for idx in np.ndindex(W.shape):
        for unit in (1.0, 1j):
            E = np.zeros_like(W, dtype=complex)
            E[idx] = unit * h
            d = (f(W + E) - f(W - E)) / (2 * h)
            G[idx] += d if unit == 1.0 else 1j * d
    return G


def _rel(a, b) -> float:
    scale = max(np.max(np.abs(a)), np.max(np.abs(b)))
    return 0.0 if scale == 0 else float(np.max(np.abs(a - b)) / scale)


def verify_suite(K_values=(1, 4, 8, 32), seeds=(0, 1, 2), pair_builder=build_spectral_pair,
                 n_codewords: int = 50, J: int = 64) -> VerifyReport:
    """Run every invariant check and keep the worst observation per check.

    ``pair_builder`` exists so a deliberately broken spectral pair can be
    injected; only checks that read the dense matrices should notice.
    """
    checks = {name: Check(name, tol) for name, tol in [
        ("eigendecomposition", 1e-10),
        ("expansion_identity", 1e-9),
        ("peak_vs_autocorr", 1e-12),
        ("autocorr_vs_quartic", 1e-12),
        ("jensen_floor", 1e-12),
        ("gradient_fd", 1e-5),
        ("projection_polar", 1e-10),
        ("projection_unitarity", 1e-10),
        ("projection_fixed_point", 1e-10),
        ("markov_validity", 0.0),
    ]}
    spec = ConstellationSpec()
    for K in K_values:
        pair = pair_builder(K)
        checks["eigendecomposition"].record(eigendecomposition_error(pair), f"K={K}")
        for seed in seeds:
            where = f"K={K} seed={seed}"
            rng = np.random.default_rng([seed, K])
            book = generate_codebook(spec, K, n_codewords, 1, seed)

            for c in book.symbols:
                checks["expansion_identity"].record(expansion_identity_check(c, pair), where)
                peak = peak_envelope_power(c, J)
                acb = autocorr_peak_bound(aperiodic_autocorr(c))
                qa, qb = quartic_sums(c, pair)
                quartic = K * (2 * K - 1) / 2 * (qa + qb)
                checks["peak_vs_autocorr"].record((peak - acb) / max(acb, 1e-300), where)
                checks["autocorr_vs_quartic"].record((acb ** 2 - quartic) / max(quartic, 1e-300), where)

            gamma = float(default_gamma_grid(K)[0])
            W = random_unitary(K, rng)
            upper = ccdf_upper_bound(book, pair, [W], gamma).upper
            floor = jensen_floor(book, pair, gamma, [W])
            checks["jensen_floor"].record((floor - upper) / upper, where)

            X = book.symbols[:3]
            G = gradient(W, X, pair)
            fd = finite_difference_gradient(lambda Z: objective_subset(Z, X, pair), W)
            checks["gradient_fd"].record(_rel(G, fd), where)

            A = rng.standard_normal((K, K)) + 1j * rng.standard_normal((K, K))
            P = project_symmetric(A)
            checks["projection_polar"].record(_rel(P, polar_factor_svd(A)), where)
            checks["projection_unitarity"].record(
                max(unitarity_error(P), unitarity_error(project_gram_schmidt(A))), where)
            checks["projection_fixed_point"].record(
                max(np.max(np.abs(project_symmetric(W) - W)),
                    np.max(np.abs(project_gram_schmidt(W) - W))), where)

            grid = default_gamma_grid(K)
            curve = empirical_ccdf(book, None, J, grid)
            bound = np.array([ccdf_upper_bound(book, pair, None, g).upper for g in grid])
            checks["markov_validity"].record(np.sum(curve.prob > bound), where)
            # single-codeword bound must dominate its measured PMEPR
            worst = max(peak_envelope_power(c, J) / book.p_av - codeword_papr_bound(c, pair, book.p_av)
                        for c in book.symbols)
            checks["markov_validity"].record(float(worst > 1e-12), where)
    return VerifyReport(checks)
