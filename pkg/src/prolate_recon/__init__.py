"""Bandlimited signal reconstruction with discrete prolate spheroidal bases
and robust maximum-correntropy estimation."""

from .dictionary import (Dictionary, PswfKind, ReconstructionModel, SampleSet,
                         SincKind, build_pswf_dictionary, build_sinc_dictionary,
                         default_term_count, synthesize)
from .experiments import (ExperimentConfig, ExperimentReport, GaussianBurst,
                          NoiseConfig, NonUniformSampling, UniformSampling,
                          UniformSpikes, generate_test_signal, inject_noise,
                          preset_config, reconstruction_error, run_experiment,
                          sample_grid, with_seed)
from .pswf import (BandlimitParams, DiscretePswfBasis, build_sinc_kernel,
                   compute_basis, evaluate_basis_function, load_basis,
                   save_basis, shannon_count)
from .solvers import (AdaptiveKernel, FixedKernel, MccConfig, MccSolveReport,
                      RidgeConfig, adaptive_sigma, cim, correntropy_estimate,
                      gaussian_kernel, mcc_objective, mcc_objective_gradient,
                      solve_least_squares, solve_mcc, solve_ridge,
                      update_weights, weighted_ridge_step)

__version__ = "0.1.0"
