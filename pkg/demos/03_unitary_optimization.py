"""Shrinking the bound with one unitary matrix per subset.

Runs projected gradient descent at desk scale, prints the objective and
the median PMEPR along the way, then compares subset sizes.
"""
import numpy as np

from paprbound import (ConstellationSpec, OptimizerConfig, build_spectral_pair, generate_codebook,
                       optimize)
from paprbound.experiment import codebook_pmepr
from paprbound.optimizer import auto_epsilon

K, M, N = 16, 200, 10
book = generate_codebook(ConstellationSpec(), K, M, N, seed=1)
pair = build_spectral_pair(K)
eps = auto_epsilon(K, M, N)
print(f"K={K} M={M} N={N}  step size N/M/K^2 = {eps:.3e}")

config = OptimizerConfig(eps, max_iters=50, snapshot_iters=(0, 10, 25, 50))
ensemble, trace = optimize(book, pair, config)

print(f"\n{'iter':>5} {'objective':>11} {'median PMEPR [dB]':>18}")
print(f"{0:5d} {trace.initial_objective:11.1f} "
      f"{10 * np.log10(np.median(codebook_pmepr(book, trace.snapshots[0]))):18.3f}")
for it in (10, 25, 50):
    med = np.median(codebook_pmepr(book, trace.snapshots[it]))
    print(f"{it:5d} {trace.objective[it - 1]:11.1f} {10 * np.log10(med):18.3f}")

print("\nlargest unitarity error seen:", max(trace.unitarity_error))

# Precoding is lossless: the receiver inverts it exactly and noise keeps its norm.
W = ensemble[0]
c = book.subset(0)[0]
noise = np.random.default_rng(0).standard_normal(K) * (1 + 1j)
print("round trip error:", np.max(np.abs(W.conj().T @ (W @ c) - c)))
print("noise norm before/after:", np.linalg.norm(noise).round(6), np.linalg.norm(W.conj().T @ noise).round(6))

# Smaller subsets leave each matrix fewer codewords to fit, so f goes lower.
print("\nSubset size vs final objective (M=400, 50 iterations):")
for n_sub in (8, 40):
    b = generate_codebook(ConstellationSpec(), K, 400, n_sub, seed=9)
    _, t = optimize(b, pair, OptimizerConfig(auto_epsilon(K, 400, n_sub), 50))
    print(f"  N={n_sub:3d} ({400 // n_sub} per subset): {t.initial_objective:.0f} -> {t.objective[-1]:.0f}")
