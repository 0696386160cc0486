"""Fourth-moment PMEPR bounds for OFDM codebooks and unitary precoders that shrink them."""

__version__ = "0.1.0"

from .bound import (BoundReport, SpectralPair, bound_sweep, build_spectral_pair, ccdf_upper_bound,
                    codeword_papr_bound, expansion_identity_check, jensen_floor, lower_bound,
                    quartic_sums, quartic_total, sample_second_moment)
from .constellation import (Codebook, ConstellationSpec, Kind, codeword_power, generate_codebook,
                            generate_codeword)
from .experiment import CcdfCurve, ExperimentConfig, empirical_ccdf, run_experiment
from .optimizer import (OptimizerConfig, OptimizerTrace, Projection, ProjectionError, gradient,
                        gradient_step, objective, optimize, project_gram_schmidt, project_symmetric)
from .signal import (aperiodic_autocorr, autocorr_peak_bound, baseband_sample, peak_envelope_power,
                     pmepr)
from .verify import verify_suite
