"""Simulation of variable-strength pre- and postselected measurements.

The package reproduces the quantum pigeonhole experiment: two photonic
pigeons in interferometers, a qubit meter coupled at any strength between
weak and strong, and a Kraus-operator model of the photonic circuit that
implements the coupling. Closed-form PPS values and the circuit
simulation are cross-checked against each other.

Example:
    from ppslab import Device, Quadrature, Strength, postselection, run_photonic_circuit

    run = run_photonic_circuit(
        Device.SAME, postselection("paradox"), Strength(0.5), Quadrature.REAL
    )
    run.system_value  # 0.0 at every strength
"""

from .checks import CheckResult, run_checks
from .classical import (
    PigeonDistribution,
    minimize_same_pair,
    same_pair_probability,
    sample_assignments,
)
from .errors import (
    ClassicalBoundError,
    DegenerateRunError,
    DegenerateScenarioError,
    DimensionMismatchError,
    InvalidDistributionError,
    NotAProjectorError,
    NotNormalizedError,
    PpsLabError,
    SingularStrengthError,
    SweepConfigError,
    UndefinedWeakValueError,
)
from .hilbert import (
    ALGEBRA_TOL,
    COMPARE_TOL,
    STATES,
    Ket,
    Operator,
    apply,
    identity,
    inner,
    projector_onto,
    state,
    tensor,
)
from .meter import (
    S_MIN,
    MeterObservable,
    MeterState,
    Quadrature,
    Strength,
    coupling_unitary,
    meter_observable,
    meter_states,
    meter_to_system,
    system_to_meter,
)
from .pigeonhole import (
    CLASSICAL_FLOOR,
    PROJECTORS,
    CircuitRun,
    Device,
    PigeonProjector,
    Postselection,
    build_projectors,
    classical_same_hole_floor,
    postselection,
    run_closed_form,
    run_photonic_circuit,
    scenario,
)
from .pps import (
    PpsScenario,
    QuadratureReadout,
    abl_probability,
    backaction_sensitivity,
    ps_probability_deformed,
    readout,
    strong_imaginary_value,
    weak_value,
)
from .sweep import Engine, OutputFormat, SweepConfig

__version__ = "0.1.0"

__all__ = [
    # Version
    "__version__",
    # Errors
    "PpsLabError",
    "DimensionMismatchError",
    "NotNormalizedError",
    "NotAProjectorError",
    "SingularStrengthError",
    "UndefinedWeakValueError",
    "DegenerateScenarioError",
    "DegenerateRunError",
    "InvalidDistributionError",
    "SweepConfigError",
    "ClassicalBoundError",
    # Linear algebra
    "Ket",
    "Operator",
    "STATES",
    "state",
    "tensor",
    "inner",
    "apply",
    "identity",
    "projector_onto",
    # Meter
    "Strength",
    "Quadrature",
    "MeterState",
    "MeterObservable",
    "coupling_unitary",
    "meter_states",
    "meter_observable",
    "meter_to_system",
    "system_to_meter",
    # PPS
    "PpsScenario",
    "QuadratureReadout",
    "weak_value",
    "abl_probability",
    "strong_imaginary_value",
    "readout",
    "ps_probability_deformed",
    "backaction_sensitivity",
    # Pigeonhole experiment
    "Device",
    "PigeonProjector",
    "Postselection",
    "CircuitRun",
    "PROJECTORS",
    "build_projectors",
    "postselection",
    "scenario",
    "run_photonic_circuit",
    "run_closed_form",
    "classical_same_hole_floor",
    # Classical baseline
    "PigeonDistribution",
    "same_pair_probability",
    "minimize_same_pair",
    "sample_assignments",
    # Sweeps and checks
    "SweepConfig",
    "Engine",
    "OutputFormat",
    "CheckResult",
    "run_checks",
    # Constants
    "ALGEBRA_TOL",
    "COMPARE_TOL",
    "S_MIN",
    "CLASSICAL_FLOOR",
]
