"""Sticky-reflected stochastic porous medium equation on a uniform interior
mesh: spectral fractional-norm machinery, explicit stepping with exact-zero
bookkeeping, and Monte Carlo diagnostics."""

from .grid import (Grid, make_grid, project_pc, project_pl, eval_pl,
                   restrict_to, pl_sine_coefficients)
from .spectral import (SpectralBasis, build_basis, apply_laplacian,
                       apply_frac_laplacian, discrete_norm, ContinuousSine,
                       continuous_norm)
from .coeffs import (Nemytskii, NoiseColoring, discretize_mode, mode_matrix,
                     sigma_n, check_support_condition, SupportReport)
from .sde import (SdeConfig, SdeState, Trajectory, BlowUpError, System,
                  make_system, drift_pme, sample_increments, smooth_cutoff,
                  step, simulate_path, path_rng)
from .functionals import (HolderSpec, TimeSobolevSpec, energy, g_energy,
                          stickiness, holder_norm, time_sobolev_norm,
                          beta_exponents, MartingaleDiagnostics,
                          martingale_residual, occupation_near_zero)
from .harness import (ExperimentPlan, MomentRow, MomentReport,
                      ConvergenceReport, StickinessReport, build_initial,
                      run_moments, run_convergence, run_stickiness,
                      wilson_interval)
from .config import ConfigError, RunConfig, parse_config, load_config
from .checks import CheckResult, run_all_checks

__version__ = "0.1.0"
