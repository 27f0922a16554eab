"""The quantum pigeonhole experiment.

Two photonic pigeons travel clockwise (C) or anti-clockwise (A) through
their own interferometers. They are preselected in |+>|+> and one of five
path postselections is applied: the paradoxical |+i>|+i> or one of the
calibration states CC, CA, AC, AA obtained by blocking paths.

The pair observables are

    LL   = |CC><CC|        both clockwise
    RR   = |AA><AA|        both anti-clockwise
    same = LL + RR         both in the same hole

Each is measured at variable strength by a photonic circuit that uses the
polarization of photon 1 as the meter. run_photonic_circuit simulates that
circuit stage by stage with (possibly lossy) Kraus operators;
run_closed_form gives the same numbers from pps.readout.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Mapping

from .classical import minimize_same_pair
from .errors import ClassicalBoundError, DegenerateRunError
from .hilbert import (
    ALGEBRA_TOL,
    I2,
    Ket,
    Operator,
    Z,
    apply,
    basis_ket,
    outer,
    partial_bra,
    projector_onto,
    state,
    tensor,
    tensor_all,
)
from .meter import Quadrature, Strength, couple, meter_to_system, readout_basis
from .pps import PpsScenario, readout

logger = logging.getLogger(__name__)

# Exact minimum of the classical same-hole statistic
CLASSICAL_FLOOR = 1.0 / 3.0

# Loss factors of the photonic procedure
STEERING_FACTOR = 0.5  # photon 2 projected onto |D>
ERASER_FACTOR = 0.5  # polarization projected onto |D> in the partial eraser
_ND_AMPLITUDE = math.sqrt(0.5)


class Device(str, Enum):
    """Which pair observable photon 1's optics encode."""

    SAME = "same"
    LL = "LL"
    RR = "RR"


@dataclass(frozen=True)
class PigeonProjector:
    """A pair observable on the two-pigeon path space (CC, CA, AC, AA)."""

    label: Device
    matrix: Operator


@dataclass(frozen=True)
class Postselection:
    """A final path state of the two pigeons."""

    label: str
    ket: Ket


@dataclass(frozen=True)
class CircuitRun:
    """Outcome of one measurement run.

    Attributes:
        device: Pair observable measured
        post: Path postselection
        strength: Measurement strength set by the partial eraser
        quadrature: Meter readout basis
        yes_prob: Probability of the "yes" port given the run survived
        no_prob: Probability of the "no" port given the run survived
        success_prob: Probability that the run survives every lossy stage
        stage_probabilities: Accumulated survival probability after each stage
    """

    device: Device
    post: Postselection
    strength: Strength
    quadrature: Quadrature
    yes_prob: float
    no_prob: float
    success_prob: float
    stage_probabilities: tuple[tuple[str, float], ...] = field(default=())

    @property
    def system_value(self) -> float:
        """Meter value converted to the system value of this quadrature."""
        return meter_to_system(self.yes_prob, self.strength, self.quadrature)


def build_projectors() -> tuple[PigeonProjector, PigeonProjector, PigeonProjector]:
    """Return the (same, LL, RR) pair projectors."""
    both_clockwise = projector_onto(basis_ket(4, 0))
    both_anticlockwise = projector_onto(basis_ket(4, 3))
    return (
        PigeonProjector(Device.SAME, both_clockwise + both_anticlockwise),
        PigeonProjector(Device.LL, both_clockwise),
        PigeonProjector(Device.RR, both_anticlockwise),
    )


PROJECTORS: Mapping[Device, PigeonProjector] = MappingProxyType(
    {projector.label: projector for projector in build_projectors()}
)

PRESELECTION: Ket = tensor(state("plus"), state("plus"))


def _path_pair(first: str, second: str) -> Ket:
    return tensor(state(first), state(second))


POSTSELECTIONS: Mapping[str, Postselection] = MappingProxyType({
    "paradox": Postselection("paradox", _path_pair("plus_i", "plus_i")),
    "CC": Postselection("CC", _path_pair("C", "C")),
    "CA": Postselection("CA", _path_pair("C", "A_path")),
    "AC": Postselection("AC", _path_pair("A_path", "C")),
    "AA": Postselection("AA", _path_pair("A_path", "A_path")),
})


def postselection(label: str) -> Postselection:
    try:
        return POSTSELECTIONS[label]
    except KeyError:
        known = ", ".join(POSTSELECTIONS)
        raise KeyError(f"Unknown postselection '{label}'. Known labels: {known}") from None


def scenario(device: Device, post: Postselection) -> PpsScenario:
    """The PPS scenario a device and postselection correspond to."""
    device = Device(device)
    return PpsScenario(
        psi_i=PRESELECTION,
        psi_f=post.ket,
        pi=PROJECTORS[device].matrix,
        name=f"{device.value}/{post.label}",
    )


def classical_same_hole_floor() -> float:
    """Minimum classical probability that a random pair shares a hole.

    Raises:
        ClassicalBoundError: If the classical optimizer disagrees with 1/3
    """
    value, witness = minimize_same_pair()
    if abs(value - CLASSICAL_FLOOR) > ALGEBRA_TOL:
        raise ClassicalBoundError(
            f"Classical minimum {value!r} disagrees with 1/3 (witness {witness})"
        )
    return value


def procedure_success_factor(device: Device) -> float:
    """Loss of the photonic procedure excluding the postselection itself.

    1/4 for same (steering and eraser), 1/8 for LL and RR which also lose
    half the photons in their polarizer and neutral density filter.
    """
    device_factor = 1.0 if Device(device) is Device.SAME else 0.5
    return device_factor * STEERING_FACTOR * ERASER_FACTOR


# -- circuit elements ---------------------------------------------------------

_PATH_C = projector_onto(state("C"))
_PATH_A = projector_onto(state("A_path"))


def _arm_operators(device: Device) -> tuple[Operator, Operator]:
    """(clockwise, anti-clockwise) Kraus operators on photon 1's polarization."""
    if device is Device.SAME:
        # half waveplate swapping |D> and |A> in the anti-clockwise arm
        return I2, Z
    neutral_density = I2 * _ND_AMPLITUDE
    if device is Device.LL:
        # polarizer passing H, then a waveplate taking H to A
        return neutral_density, outer(state("A_pol"), state("H"))
    return outer(state("D"), state("H")), neutral_density


def _frame_rotation(device: Device) -> Operator:
    """Polarization unitary taking the "yes" encoding to |H> and "no" to |V>."""
    yes_pol, no_pol = (state("A_pol"), state("D")) if device is Device.RR else (
        state("D"), state("A_pol"))
    return outer(state("H"), yes_pol) + outer(state("V"), no_pol)


class _Tracker:
    """Records survival probability stage by stage."""

    def __init__(self, device: Device, post: Postselection):
        self.device = device
        self.post = post
        self.stages: list[tuple[str, float]] = []

    def record(self, stage: str, ket: Ket) -> Ket:
        probability = ket.norm_squared()
        logger.debug(
            f"[CIRCUIT] {self.device.value}/{self.post.label} {stage}: survival {probability:.12g}"
        )
        if probability <= ALGEBRA_TOL:
            raise DegenerateRunError(
                stage,
                f"{self.device.value}/{self.post.label}: no amplitude survives this stage",
            )
        self.stages.append((stage, probability))
        return ket


def _steered_state(tracker: _Tracker) -> Ket:
    """Stages prepare and steer; factors (path1, path2, pol1)."""
    prepared = tensor_all(PRESELECTION, state("bell_phi_plus"))
    tracker.record("prepare", prepared)

    # Photon 2 half waveplate in its anti-clockwise arm, factors (path1, path2, pol1, pol2)
    arm_plate = tensor_all(I2, _PATH_C, I2, I2) + tensor_all(I2, _PATH_A, I2, Z)
    steered = partial_bra(state("D"), (2, 2, 2, 2), 3, apply(arm_plate, prepared))
    return tracker.record("steer", steered)


def _device_state(device: Device, tracker: _Tracker) -> Ket:
    clockwise, anticlockwise = _arm_operators(device)
    optics = tensor_all(_PATH_C, I2, clockwise) + tensor_all(_PATH_A, I2, anticlockwise)
    return tracker.record("device", apply(optics, _steered_state(tracker)))


def device_output_state(device: Device) -> Ket:
    """Photon paths and photon 1 polarization right after the device optics.

    Factors are (path1, path2, pol1). For same and LL the state is
    proportional to Π|ψi>⊗|D> + (1-Π)|ψi>⊗|A>; for RR the polarizations
    are swapped.
    """
    device = Device(device)
    return _device_state(device, _Tracker(device, POSTSELECTIONS["paradox"]))


def run_photonic_circuit(
    device: Device, post: Postselection, s: Strength, quadrature: Quadrature
) -> CircuitRun:
    """Simulate the steering, device, postselection and partial eraser stages.

    Raises:
        DegenerateRunError: If a stage leaves nothing to detect
    """
    device = Device(device)
    quadrature = Quadrature(quadrature)
    tracker = _Tracker(device, post)

    encoded = _device_state(device, tracker)
    polarization = tracker.record("postselect", partial_bra(post.ket, (4, 2), 0, encoded))
    polarization = apply(_frame_rotation(device), polarization)

    # Partial eraser: polarization-controlled rotation of the eraser path, then
    # polarization projected onto the unbiased |D> state.
    coupled = couple(polarization, projector_onto(state("H")), s)
    pointer = tracker.record("eraser", partial_bra(state("D"), (2, 2), 0, coupled))

    yes_ket, no_ket = readout_basis(quadrature)
    survival = pointer.norm_squared()
    yes_prob = abs(complex(yes_ket.amps.conj() @ pointer.amps)) ** 2 / survival
    no_prob = abs(complex(no_ket.amps.conj() @ pointer.amps)) ** 2 / survival

    return CircuitRun(
        device=device,
        post=post,
        strength=s,
        quadrature=quadrature,
        yes_prob=yes_prob,
        no_prob=no_prob,
        success_prob=survival,
        stage_probabilities=tuple(tracker.stages),
    )


def run_closed_form(
    device: Device, post: Postselection, s: Strength, quadrature: Quadrature
) -> CircuitRun:
    """Same outcome as run_photonic_circuit, from the closed-form PPS engine."""
    device = Device(device)
    quadrature = Quadrature(quadrature)
    values = readout(scenario(device, post), s)
    yes_prob = values.meter_prob(quadrature)
    return CircuitRun(
        device=device,
        post=post,
        strength=s,
        quadrature=quadrature,
        yes_prob=yes_prob,
        no_prob=1.0 - yes_prob,
        success_prob=procedure_success_factor(device) * values.ps_prob,
    )
