"""Closed-form pre- and postselected (PPS) quantities at every strength.

With a = <ψf|Π|ψi>, b = <ψf|(1-Π)|ψi> and c = sqrt(1 - s^2), coupling Π
to a qubit meter and postselecting on ψf leaves the meter in a|s> + b|-s>.
Everything here follows from that state:

    P_ps(s)          = |a|^2 + |b|^2 + 2c Re[a b*]
    real system      = (|a|^2 + c Re[a b*]) / P_ps
    imaginary system = Im[a b*] / P_ps

s -> 0 recovers the weak value and s = 1 the ABL rule together with the
strong imaginary value.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import (
    DegenerateScenarioError,
    DimensionMismatchError,
    NotAProjectorError,
    NotNormalizedError,
    PpsLabError,
    UndefinedWeakValueError,
)
from .hilbert import (
    ALGEBRA_TOL,
    I2,
    Ket,
    Operator,
    apply,
    expectation,
    inner,
    projector_onto,
    state,
    tensor,
)
from .meter import (
    Quadrature,
    Strength,
    couple,
    coupling_generator,
    meter_observable,
    system_to_meter,
)

logger = logging.getLogger(__name__)

# Largest back-action deformation accepted by ps_probability_deformed
MAX_DELTA = 1e-3

# Step of the central difference used for the back-action sensitivity
SENSITIVITY_STEP = 1e-5


@dataclass(frozen=True, eq=False)
class PpsScenario:
    """Preselection, postselection and the projector measured in between.

    Attributes:
        psi_i: Normalized preselected ket
        psi_f: Normalized postselected ket
        pi: Projector on the same space
        name: Label used in error messages and logs
    """

    psi_i: Ket
    psi_f: Ket
    pi: Operator
    name: str = "scenario"

    def __post_init__(self) -> None:
        if not (self.psi_i.dim == self.psi_f.dim == self.pi.dim):
            raise DimensionMismatchError(
                f"{self.name}: dims differ (psi_i={self.psi_i.dim}, psi_f={self.psi_f.dim}, "
                f"pi={self.pi.dim})"
            )
        if not self.psi_i.is_normalized():
            raise NotNormalizedError(f"{self.name}: preselection is not normalized")
        if not self.psi_f.is_normalized():
            raise NotNormalizedError(f"{self.name}: postselection is not normalized")
        if not self.pi.is_projector():
            raise NotAProjectorError(f"{self.name}: measured operator is not a projector")

    def amplitudes(self) -> tuple[complex, complex]:
        """Return (<ψf|Π|ψi>, <ψf|(1-Π)|ψi>)."""
        yes = inner(self.psi_f, apply(self.pi, self.psi_i))
        no = inner(self.psi_f, apply(self.pi.complement(), self.psi_i))
        return yes, no


@dataclass(frozen=True)
class QuadratureReadout:
    """Meter-level and system-level values of one scenario at one strength.

    Attributes:
        strength: Measurement strength
        real_system: Conditional expectation of the real meter observable
        imag_system: Conditional expectation of the imaginary meter observable
        real_meter_prob: Probability of the real "yes" outcome given postselection
        imag_meter_prob: Probability of the imaginary "yes" outcome given postselection
        ps_prob: Probability that the postselection succeeds
    """

    strength: Strength
    real_system: float
    imag_system: float
    real_meter_prob: float
    imag_meter_prob: float
    ps_prob: float

    def meter_prob(self, kind: Quadrature) -> float:
        if Quadrature(kind) is Quadrature.REAL:
            return self.real_meter_prob
        return self.imag_meter_prob

    def system_value(self, kind: Quadrature) -> float:
        if Quadrature(kind) is Quadrature.REAL:
            return self.real_system
        return self.imag_system


def weak_value(sc: PpsScenario) -> complex:
    """<ψf|Π|ψi> / <ψf|ψi>.

    Raises:
        UndefinedWeakValueError: If pre- and postselection are orthogonal
    """
    overlap = inner(sc.psi_f, sc.psi_i)
    if abs(overlap) <= ALGEBRA_TOL:
        raise UndefinedWeakValueError(f"{sc.name}: <ψf|ψi> = 0, weak value undefined")
    yes, _ = sc.amplitudes()
    return yes / overlap


def _strong_denominator(sc: PpsScenario) -> tuple[complex, complex, float]:
    yes, no = sc.amplitudes()
    denominator = abs(yes) ** 2 + abs(no) ** 2
    if denominator <= ALGEBRA_TOL:
        raise DegenerateScenarioError(f"{sc.name}: both branch amplitudes vanish")
    return yes, no, denominator


def abl_probability(sc: PpsScenario) -> float:
    """Probability of the "yes" outcome of a strong measurement of Π given pre/postselection."""
    yes, _, denominator = _strong_denominator(sc)
    return abs(yes) ** 2 / denominator


def strong_imaginary_value(sc: PpsScenario) -> float:
    """Im[<ψi|ψf><ψf|Π|ψi>] / (|<ψf|Π|ψi>|^2 + |<ψf|(1-Π)|ψi>|^2)."""
    yes, _, denominator = _strong_denominator(sc)
    overlap = inner(sc.psi_i, sc.psi_f)
    return (overlap * yes).imag / denominator


def readout(sc: PpsScenario, s: Strength) -> QuadratureReadout:
    """Closed-form readout of both quadratures at strength s.

    Raises:
        DegenerateScenarioError: If the postselection probability vanishes
    """
    yes, no = sc.amplitudes()
    c = s.overlap
    cross = yes * no.conjugate()
    ps_prob = abs(yes) ** 2 + abs(no) ** 2 + 2.0 * c * cross.real
    if ps_prob <= ALGEBRA_TOL:
        raise DegenerateScenarioError(
            f"{sc.name}: postselection probability vanishes at s={s.s:g}"
        )
    real_system = (abs(yes) ** 2 + c * cross.real) / ps_prob
    imag_system = cross.imag / ps_prob
    return QuadratureReadout(
        strength=s,
        real_system=real_system,
        imag_system=imag_system,
        real_meter_prob=system_to_meter(real_system, s, Quadrature.REAL),
        imag_meter_prob=system_to_meter(imag_system, s, Quadrature.IMAGINARY),
        ps_prob=min(1.0, ps_prob),
    )


def conditional_expectations(sc: PpsScenario, s: Strength) -> tuple[float, float]:
    """Real and imaginary system values evaluated on the coupled state.

    Computes E[F ⊗ O] / E[F ⊗ 1] with F = |ψf><ψf| for both calibrated
    meter observables O, using U(ψi ⊗ |+z>) rather than the closed forms.
    """
    coupled = couple(sc.psi_i, sc.pi, s)
    postselect = projector_onto(sc.psi_f)
    ps_prob = expectation(tensor(postselect, I2), coupled).real
    if ps_prob <= ALGEBRA_TOL:
        raise DegenerateScenarioError(
            f"{sc.name}: postselection probability vanishes at s={s.s:g}"
        )
    values = []
    for kind in (Quadrature.REAL, Quadrature.IMAGINARY):
        observable = meter_observable(kind, s).matrix
        values.append(expectation(tensor(postselect, observable), coupled).real / ps_prob)
    return values[0], values[1]


def joint_imag_expectation(sc: PpsScenario, s: Strength) -> float:
    """E[|ψf><ψf| ⊗ Π̃_O] on the coupled state; equals Im[a b*] at every strength."""
    coupled = couple(sc.psi_i, sc.pi, s)
    observable = meter_observable(Quadrature.IMAGINARY, s).matrix
    return expectation(tensor(projector_onto(sc.psi_f), observable), coupled).real


def ps_probability_deformed(sc: PpsScenario, s: Strength, delta: float) -> float:
    """Postselection probability with the back-action scaled by delta.

    The coupling generator -i(θ/2)(2Π-1) ⊗ Y is augmented by δ 1 ⊗ Π̃_O
    and exponentiated on the system ⊗ meter space. The deformed map is not
    unitary, so the result is computed on raw arrays and may exceed the
    undeformed probability.

    Raises:
        PpsLabError: If |delta| exceeds MAX_DELTA
        SingularStrengthError: If s is below S_MIN
    """
    if not math.isfinite(delta) or abs(delta) > MAX_DELTA:
        raise PpsLabError(
            f"Back-action deformation must satisfy |delta| <= {MAX_DELTA}, got {delta}"
        )
    observable = meter_observable(Quadrature.IMAGINARY, s).matrix
    backaction = tensor(Operator(np.eye(sc.pi.dim)), observable)
    generator = coupling_generator(sc.pi, s).entries + delta * backaction.entries
    initial = np.kron(sc.psi_i.amps, state("+z").amps)
    evolved = (expm(generator) @ initial).reshape(sc.pi.dim, 2)
    meter = sc.psi_f.amps.conj() @ evolved
    return float(np.vdot(meter, meter).real)


def backaction_sensitivity(
    sc: PpsScenario, s: Strength, step: float = SENSITIVITY_STEP
) -> float:
    """Central difference of log P_ps(δ) at δ = 0.

    Twice the imaginary system value at the same strength.
    """
    forward = ps_probability_deformed(sc, s, step)
    backward = ps_probability_deformed(sc, s, -step)
    if forward <= 0.0 or backward <= 0.0:
        raise DegenerateScenarioError(f"{sc.name}: postselection probability vanishes at s={s.s:g}")
    return (math.log(forward) - math.log(backward)) / (2.0 * step)
