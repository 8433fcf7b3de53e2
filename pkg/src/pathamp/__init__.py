"""pathamp: lattice transition amplitudes for coupled oscillator sources.

The package builds the discrete quadratic-form matrix of a network of
coupled harmonic oscillators on a time lattice, evaluates the closed-form
Gaussian transition amplitude (with a brute-force quadrature oracle at
tiny dimension), carries the two-oscillator system to its continuum
Green's function, composes the four-source two-path interference
amplitude, and extracts the coupling-derived separation by matching the
discrete phases against free-particle propagation.
"""

from ._backend import BACKEND_NAME, USING_NUMBA
from .errors import (ConfigError, DimensionTooLarge, EquidistanceViolated,
                     NonConvergent, PathampError, PoleAtEvaluation,
                     ResonantCoupling, SingularAction, UnstableMode,
                     ZeroMomentum)
from .green import (GreenKernels, SpectralSource, convolved_response,
                    freq_kernels, green_quadrature, green_residual,
                    normal_mode_frequencies, pairwise_phase,
                    time_domain_green)
from .lattice import (ActionMatrix, Amplitude, OscillatorNetwork,
                      SourceVector, build_action_matrix, quadratic_form,
                      symmetrize, transition_amplitude, wrap_phase)
from .oracle import (ConvergenceRow, QuadratureSpec, brute_force_amplitude,
                     compare_with_closed_form, continuum_convergence_report,
                     stencil_residual)
from .twinslit import (DistanceResult, ScanRow, SchrodingerSide,
                       TwinSlitScenario, coupling_coefficient,
                       equidistant_amplitude, four_source_amplitude,
                       infer_distance, intensity, pattern_scan,
                       phase_schedule, point_source_wave,
                       schrodinger_propagator, schrodinger_two_path)

__version__ = "0.1.0"
