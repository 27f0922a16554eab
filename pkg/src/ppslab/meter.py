"""Qubit-meter model of a variable-strength measurement.

A projector Π on the system is coupled to a spin-1/2 meter prepared in
|+z>. The coupling leaves the meter in |s> on the "yes" subspace of Π and
in |-s> on the "no" subspace, where

    |±s> = sqrt((1 ± s)/2) |+x> + sqrt((1 ∓ s)/2) |-x>

so that |<s|-s>|^2 = 1 - s^2. s = 0 is a weak (non-disturbing)
measurement and s = 1 a strong projective one.

Readout frames (yes, no):
    real       (|+x>, |-x>)
    imaginary  (|+y>, |-y>)   |+y> = (|+z> + i|-z>)/sqrt(2)
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.linalg import expm

from .errors import (
    DegenerateScenarioError,
    DimensionMismatchError,
    NotAProjectorError,
    SingularStrengthError,
)
from .hilbert import (
    ALGEBRA_TOL,
    COMPARE_TOL,
    I2,
    MAX_DIM,
    Ket,
    Operator,
    X,
    Y,
    apply,
    identity,
    state,
    tensor,
)

logger = logging.getLogger(__name__)

# Smallest strength that may be divided by; the s -> 0 limit is pps.weak_value.
S_MIN = 1e-6


class Quadrature(str, Enum):
    """Meter readout basis."""

    REAL = "real"
    IMAGINARY = "imaginary"


@dataclass(frozen=True)
class Strength:
    """Measurement strength s = sin(theta), 0 <= s <= 1.

    Attributes:
        s: Distinguishability of the two pointer states
    """

    s: float

    def __post_init__(self) -> None:
        s = float(self.s)
        if not math.isfinite(s) or not 0.0 <= s <= 1.0:
            raise SingularStrengthError(f"Strength must lie in [0, 1], got {self.s}")
        object.__setattr__(self, "s", s)

    @property
    def theta(self) -> float:
        return math.asin(self.s)

    @property
    def overlap(self) -> float:
        """<s|-s> = sqrt(1 - s^2), real and non-negative."""
        return math.sqrt(max(0.0, 1.0 - self.s * self.s))

    @classmethod
    def from_theta(cls, theta: float) -> Strength:
        if not 0.0 <= theta <= math.pi / 2:
            raise SingularStrengthError(f"theta must lie in [0, pi/2], got {theta}")
        return cls(math.sin(theta))

    @classmethod
    def from_overlap(cls, overlap: float) -> Strength:
        """Build from |<s|-s>|, i.e. s = sqrt(1 - |<s|-s>|^2)."""
        if not 0.0 <= overlap <= 1.0:
            raise SingularStrengthError(f"Pointer overlap must lie in [0, 1], got {overlap}")
        return cls(math.sqrt(1.0 - overlap * overlap))

    def require_divisible(self) -> None:
        """Raise unless s is large enough to divide by."""
        if self.s < S_MIN:
            raise SingularStrengthError(
                f"Strength {self.s:g} is below s_min={S_MIN:g}; use the analytic weak value instead"
            )


@dataclass(frozen=True)
class MeterState:
    """A pointer state of the meter qubit."""

    ket: Ket

    def __post_init__(self) -> None:
        if self.ket.dim != 2:
            raise DimensionMismatchError(f"Meter states live in dimension 2, got {self.ket.dim}")


@dataclass(frozen=True)
class MeterObservable:
    """Calibrated meter observable for one quadrature at a given strength.

    Attributes:
        kind: Quadrature the observable reads
        matrix: (1 + X/s)/2 for real, Y/(2s) for imaginary
        strength: Strength the calibration refers to
    """

    kind: Quadrature
    matrix: Operator
    strength: Strength


def _rotation(half_angle: float, sign: int) -> Operator:
    """cos(a) 1 + sign * i sin(a) Y."""
    return I2 * math.cos(half_angle) + Y * (sign * 1j * math.sin(half_angle))


def _require_projector(pi: Operator) -> None:
    if not pi.is_projector():
        raise NotAProjectorError("Coupling needs a projector (Π² = Π, Π† = Π)")
    if 2 * pi.dim > MAX_DIM:
        raise DimensionMismatchError(f"System dimension {pi.dim} too large to couple to a meter")


def coupling_unitary(pi: Operator, s: Strength) -> Operator:
    """Von Neumann coupling of projector pi to the meter.

    Evaluated in its Euler form at the Bloch half angle theta/2,

        U = Π ⊗ (cos 1 - i sin Y) + (1 - Π) ⊗ (cos 1 + i sin Y),

    which maps |psi>|+z> to Π|psi>|s> + (1 - Π)|psi>|-s>.

    Raises:
        NotAProjectorError: If pi is not a projector
    """
    _require_projector(pi)
    half = s.theta / 2.0
    return tensor(pi, _rotation(half, -1)) + tensor(pi.complement(), _rotation(half, +1))


def coupling_generator(pi: Operator, s: Strength) -> Operator:
    """Return -i (theta/2) (2Π - 1) ⊗ Y, the exponent of the coupling unitary."""
    _require_projector(pi)
    signed = pi * 2.0 - identity(pi.dim)
    return tensor(signed, Y) * (-0.5j * s.theta)


def coupling_unitary_expm(pi: Operator, s: Strength) -> Operator:
    """Coupling unitary by direct matrix exponentiation of its generator."""
    return Operator(expm(coupling_generator(pi, s).entries))


def couple(psi: Ket, pi: Operator, s: Strength) -> Ket:
    """Return U (psi ⊗ |+z>), the joint system-meter state after the coupling."""
    return apply(coupling_unitary(pi, s), tensor(psi, state("+z")))


def meter_states(s: Strength) -> tuple[MeterState, MeterState]:
    """Return the pointer states (|s>, |-s>)."""
    up = math.sqrt((1.0 + s.s) / 2.0)
    down = math.sqrt((1.0 - s.s) / 2.0)
    plus_x, minus_x = state("+x"), state("-x")
    pointer_yes = plus_x.scaled(up) + minus_x.scaled(down)
    pointer_no = plus_x.scaled(down) + minus_x.scaled(up)
    return MeterState(pointer_yes), MeterState(pointer_no)


def readout_basis(kind: Quadrature) -> tuple[Ket, Ket]:
    """Return the (yes, no) meter kets of a quadrature."""
    if Quadrature(kind) is Quadrature.REAL:
        return state("+x"), state("-x")
    return state("+y"), state("-y")


def meter_observable(kind: Quadrature, s: Strength) -> MeterObservable:
    """Calibrated meter observable.

    Real: <±s|Π_O|±s> = (1±1)/2. Imaginary: <±s|Π_O|∓s> = ±i/2.

    Raises:
        SingularStrengthError: If s is below S_MIN
    """
    s.require_divisible()
    kind = Quadrature(kind)
    if kind is Quadrature.REAL:
        matrix = (I2 + X * (1.0 / s.s)) * 0.5
    else:
        matrix = Y * (1.0 / (2.0 * s.s))
    return MeterObservable(kind=kind, matrix=matrix, strength=s)


def meter_to_system(meter_prob: float, s: Strength, kind: Quadrature) -> float:
    """Convert the probability of a "yes" meter outcome to a system value.

    Real values are shifted about 1/2 and divided by s; imaginary values
    have 1/2 subtracted and are divided by s.
    """
    if not -COMPARE_TOL <= meter_prob <= 1.0 + COMPARE_TOL:
        raise ValueError(f"Meter probability must lie in [0, 1], got {meter_prob}")
    s.require_divisible()
    shifted = (meter_prob - 0.5) / s.s
    if Quadrature(kind) is Quadrature.REAL:
        return 0.5 + shifted
    return shifted


def system_to_meter(system_value: float, s: Strength, kind: Quadrature) -> float:
    """Inverse of meter_to_system."""
    if Quadrature(kind) is Quadrature.REAL:
        return 0.5 + s.s * (system_value - 0.5)
    return 0.5 + s.s * system_value


def pointer_overlap(coupled: Ket, pi: Operator) -> float:
    """Recover |<s|-s>|^2 from a coupled system ⊗ meter ket.

    The yes and no branches of pi are each a product of a system ket and
    a pointer state; the pointer is read off as the leading right singular
    vector of the branch amplitudes.

    Raises:
        DegenerateScenarioError: If either branch is empty
    """
    dim_system = pi.dim
    if coupled.dim != 2 * dim_system:
        raise DimensionMismatchError(
            f"Coupled ket has dimension {coupled.dim}, expected {2 * dim_system}"
        )
    pointers = []
    for branch in (pi, pi.complement()):
        amps = apply(tensor(branch, I2), coupled).amps.reshape(dim_system, 2)
        if np.linalg.norm(amps) <= ALGEBRA_TOL:
            raise DegenerateScenarioError("Pointer overlap needs both branches populated")
        _, _, vh = np.linalg.svd(amps)
        pointers.append(vh[0])
    return float(abs(np.vdot(pointers[0], pointers[1])) ** 2)
