"""Analytic dissipative wave-packet dynamics and quantum backflow detection.

Closed-form evolution of stretched Gaussian packets and their
superpositions under exponentially damped free dynamics, symmetrized
two-identical-particle states (bosons/fermions), detection and
quantification of backflow intervals, and a CLI reproducing the
reference parameter scans.  Numerical oracles (a grid propagator and
adaptive quadrature) live in ckbackflow.oracle and back the test suite
and the `backflow validate` command.
"""

__version__ = "0.1.0"

from .errors import (
    BoundaryContaminationError,
    ErfcRangeError,
    QuadratureAccuracyError,
    UnsupportedConfigurationError,
)
from .special_functions import (
    erfc_complex,
    erfcx_complex,
    full_line_gaussian_overlap,
    half_line_gaussian_overlap,
)
from .dynamics import (
    BackflowProbeResult,
    CKParams,
    EvolutionCoefficients,
    GaussianPacket,
    SuperposedState,
    backflow_probe,
    current_density,
    effective_time,
    evolution_coefficients,
    growth_time,
    left_probability,
    linear_potential_negative_momentum_probability,
    momentum_amplitude,
    negative_momentum_probability,
    packet_amplitude,
    physical_momentum_distribution,
    superposed_amplitude,
    superposed_momentum_amplitude,
)
from .two_particle import (
    QuadrantProbabilities,
    TwoParticleState,
    at_least_one_negative_probability,
    boson_fermion_initial_slope,
    fidelity,
    momentum_quadrant_probability,
    overlap,
    quadrant_probabilities,
    two_particle_amplitude,
)
from .backflow import (
    BackflowInterval,
    FidelityBackflowRecord,
    FidelityScanBase,
    ScanGrid,
    backflow_amount,
    current_sign_map,
    fidelity_backflow_scan,
    find_backflow_intervals,
    peak_probability_rise,
)
from .config import RunConfig, builtin_presets

__all__ = [
    "__version__",
    "BackflowInterval",
    "BackflowProbeResult",
    "BoundaryContaminationError",
    "CKParams",
    "ErfcRangeError",
    "EvolutionCoefficients",
    "FidelityBackflowRecord",
    "FidelityScanBase",
    "GaussianPacket",
    "QuadrantProbabilities",
    "QuadratureAccuracyError",
    "RunConfig",
    "ScanGrid",
    "SuperposedState",
    "TwoParticleState",
    "UnsupportedConfigurationError",
    "at_least_one_negative_probability",
    "backflow_amount",
    "backflow_probe",
    "boson_fermion_initial_slope",
    "builtin_presets",
    "current_density",
    "current_sign_map",
    "effective_time",
    "erfc_complex",
    "erfcx_complex",
    "evolution_coefficients",
    "fidelity",
    "fidelity_backflow_scan",
    "find_backflow_intervals",
    "full_line_gaussian_overlap",
    "growth_time",
    "half_line_gaussian_overlap",
    "left_probability",
    "linear_potential_negative_momentum_probability",
    "momentum_amplitude",
    "momentum_quadrant_probability",
    "negative_momentum_probability",
    "overlap",
    "packet_amplitude",
    "peak_probability_rise",
    "physical_momentum_distribution",
    "quadrant_probabilities",
    "superposed_amplitude",
    "superposed_momentum_amplitude",
    "two_particle_amplitude",
]
