"""Ground-state entanglement of a 2D lattice of coupled harmonic oscillators.

The lattice arises from a spin-wave (low-excitation) reduction of binary
dipolar condensates pinned in a square optical lattice: each site is one
oscillator, coupled to horizontal, vertical and diagonal neighbors.  The
package computes the dispersion and phase boundary of the model, the
Gaussian ground-state covariances by three engines, block entropies and
their area-law scaling, and two-site entanglement with its critical
behavior.
"""

from .model import (CouplingParams, LatticeSpec, PotentialMatrix, StabilityError,
                    StabilityReport, build_potential, neighbor_couplings, stability_check)
from .spectrum import (DispersionPoint, GapScalingFit, PhasePoint, critical_g2,
                       critical_g2_numeric, critical_g_equal, dispersion,
                       dispersion_value, energy_gap, gap_scaling_exponent,
                       phase_boundary_cases, zone_minimum)
from .groundstate import (CorrelationTable, CovariancePair, QuadratureConvergenceError,
                          QuadratureSpec, covariance_dense, covariance_infinite,
                          covariance_pbc_fft, excitation_density)
from .entanglement import (BlockRegion, SymplecticSpectrum, TwoSiteParams, block_entropy,
                           entropy_vs_L, eof_symmetric, reduce_block, symplectic_spectrum,
                           two_site_params)
from .oracle import (HarmonicPrediction, SpinSystemSpec, TwoSiteSolution, eof_fock_series,
                     exact_two_site, harmonic_two_site_prediction, symplectic_bruteforce,
                     validation_battery)
from .scan import (DerivativeEstimate, FitResult, PeakResult, SweepRow, SweepSpec,
                   area_law_fit, derivative_zeta, finite_size_peak, sweep_g)
from .config import ConfigError, RunConfig, config_digest, parse_config, serialize_config

__version__ = "0.1.0"

__all__ = [
    "CouplingParams", "LatticeSpec", "PotentialMatrix", "StabilityError", "StabilityReport",
    "build_potential", "neighbor_couplings", "stability_check",
    "DispersionPoint", "GapScalingFit", "PhasePoint", "critical_g2", "critical_g2_numeric",
    "critical_g_equal", "dispersion", "dispersion_value", "energy_gap",
    "gap_scaling_exponent", "phase_boundary_cases", "zone_minimum",
    "CorrelationTable", "CovariancePair", "QuadratureConvergenceError", "QuadratureSpec",
    "covariance_dense", "covariance_infinite", "covariance_pbc_fft", "excitation_density",
    "BlockRegion", "SymplecticSpectrum", "TwoSiteParams", "block_entropy", "entropy_vs_L",
    "eof_symmetric", "reduce_block", "symplectic_spectrum", "two_site_params",
    "HarmonicPrediction", "SpinSystemSpec", "TwoSiteSolution", "eof_fock_series",
    "exact_two_site", "harmonic_two_site_prediction", "symplectic_bruteforce",
    "validation_battery",
    "DerivativeEstimate", "FitResult", "PeakResult", "SweepRow", "SweepSpec",
    "area_law_fit", "derivative_zeta", "finite_size_peak", "sweep_g",
    "ConfigError", "RunConfig", "config_digest", "parse_config", "serialize_config",
]
