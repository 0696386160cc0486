"""From one codeword to its PMEPR bound.

Walks the chain of inequalities for a single 16-QAM codeword:
sampled peak power <= autocorrelation bound <= fourth-moment bound,
and shows that the fourth-moment bound can be written three equal ways.
"""
import numpy as np

from paprbound import (aperiodic_autocorr, autocorr_peak_bound, build_spectral_pair,
                       codeword_papr_bound, expansion_identity_check, generate_codeword,
                       peak_envelope_power, quartic_sums, ConstellationSpec)

K = 32
c = generate_codeword(ConstellationSpec(), K, seed=2024, index=0)
pair = build_spectral_pair(K)

print("Codeword length K =", K, " power =", np.sum(np.abs(c) ** 2).round(3))

# Peak envelope power on increasingly fine grids. The J=16 value is already
# within a fraction of a percent of the dense-grid value.
for J in (1, 4, 16, 256):
    print(f"  peak |s(t)|^2 with oversampling J={J:<4d}: {peak_envelope_power(c, J):.4f}")

rho = aperiodic_autocorr(c)
acb = autocorr_peak_bound(rho)
print("\nAutocorrelation bound rho(0) + 2 sum |rho(i)| =", round(acb, 4))

qa, qb = quartic_sums(c, pair)
quartic = K * (2 * K - 1) / 2 * (qa + qb)
print("Fourth-moment bound on peak^2 =", round(quartic, 2), " -> on peak:", round(np.sqrt(quartic), 4))
print("  (autocorr bound)^2 =", round(acb ** 2, 2))

# The three algebraic forms of the squared bound agree to rounding error.
print("\nRelative spread between the three equal forms:", expansion_identity_check(c, pair))

p_av = K  # unit-energy constellation
print("\nPMEPR (J=16):          ", round(peak_envelope_power(c, 16) / p_av, 4))
print("Per-codeword bound:    ", round(codeword_papr_bound(c, pair, p_av), 4))

# The all-ones codeword is the coherent worst case; everything is in closed form.
ones = np.ones(4)
p4 = build_spectral_pair(4)
print("\nAll-ones K=4: quartic sums", quartic_sums(ones, p4),
      " bound", round(codeword_papr_bound(ones, p4, 4.0), 4), " actual PMEPR 4")
