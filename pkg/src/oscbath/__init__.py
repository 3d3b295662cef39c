"""Covariance-matrix dynamics of identical oscillators relaxing through a
common reservoir, with entanglement and squeezing diagnostics.

The network decouples into N - 1 free modes and one damped collective mode;
the bath enters through time-local coefficients built from non-Markovian
dissipation and noise kernels. See the README for the command-line interface.
"""
from ._backend import backend_name, set_backend
from .bath import (BathSpec, CoefficientTable, build_coefficient_table,
                   dissipation_kernel, mean_occupation, noise_kernel,
                   spectral_density, write_coefficient_csv)
from .dynamics import (BlockSystem, CovarianceState, FreeBlockSolution,
                       Trajectory, analytic_free_block, build_block_system,
                       constants_of_motion, diffusion_matrix, drift_matrix,
                       evolve, free_block_solution, write_trajectory_csv)
from .entanglement import (EntanglementReport, GMatrix, SqueezeMatchParams,
                           assemble_g, combined_variance, entanglement_report,
                           g_matrix, min_combined_variance, negativity,
                           squeeze_match_params, squeezing_threshold,
                           symplectic_form, to_bare_basis, two_mode_threshold,
                           write_report_csv)
from .errors import (BasisMismatch, ConfigError, FrequencyImaginary,
                     GridTooCoarse, InvalidModeCount, NonPhysicalWarning,
                     NoSignChange, OscbathError, QuadratureFailure,
                     StepTooLarge, TimeOutOfRange, UnphysicalMoments,
                     UnsupportedModeCount, WrongModeCount)
from .model import (EffectiveFrequencies, ModeTransform, SystemParams,
                    effective_frequencies, expand_to_phase_space,
                    mode_transform)
from .states import (AsymmetricStateSpec, GhzStateSpec,
                     asymmetric_initial_covariance, ghz_initial_covariance,
                     write_covariance_csv)

__version__ = "0.1.0"
