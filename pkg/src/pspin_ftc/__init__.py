"""Kicked p-spin Floquet time crystals.

Quantum dynamics in the (N+1)-dimensional symmetric subspace, its
mean-field limit, and the diagnostics used to map time-crystal phases:
power spectra, eigenphase statistics, OTOCs and the classical G measure.
"""
__version__ = "0.1.0"

from .spin import (SpinAlgebra, build_spin_algebra, coherent_state, dicke_state, expectation,
                   infinite_temperature_state)
from .floquet import (FloquetOperator, ModelParams, PowerSpectrum, TimeSeries, build_floquet,
                      build_pspin_hamiltonian, dominant_frequency, evolve, power_spectrum, wrap_phase)
from .spectral import (R_POISSON, EigenphaseSpectrum, SpacingRatioStats, clustering_degeneracy,
                       dos_histogram, eigenphases, parity_blocks, spacing_ratio)
from .otoc import OtocAverage, OtocSeries, otoc_long_time_average, otoc_series
from .classical import (ClassicalState, PhaseDiagramCell, averaged_correlation, bifurcation_set,
                        chaos_border, fibonacci_sphere, flow_step, g_measure, hyperbolic_onset_p2,
                        iterate_map, map_step, phase_boundary_p2, tangent_eigenvalues_at_pole)
from .criticality import (CriticalPoints, critical_oracle, critical_points, dqpt_point,
                          gs_critical_point, semiclassical_energy, spinodal_point)
from .resonance import (ResonanceHamiltonian, build_effective_hamiltonian, build_resonance_hamiltonian,
                        validate_effective_spectrum)
from .config import ConfigError, RunConfig, load_config
from .sweep import SweepResult, SwitchingResult, run_sweep, run_switching_protocol

__all__ = [name for name in dir() if not name.startswith("_")]
