"""Dense complex linear algebra over small Hilbert spaces.

Kets and operators are thin immutable wrappers around numpy arrays.
Kets may be sub-normalized: a squared norm below one carries the
probability that the preparation so far has succeeded.

Basis conventions:
    path qubit          (|C>, |A>)        clockwise, anti-clockwise
    polarization qubit  (|H>, |V>)
    meter qubit         (|+z>, |-z>)
    two pigeons         (CC, CA, AC, AA)  first factor varies slowest
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping, Union, overload

import numpy as np

from .errors import DimensionMismatchError, NotNormalizedError

logger = logging.getLogger(__name__)

# Tolerances
ALGEBRA_TOL = 1e-12  # exact identities (idempotence, Hermiticity, normalization)
COMPARE_TOL = 1e-9  # closed form vs simulation

MAX_DIM = 16


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=np.complex128)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Ket:
    """A (possibly sub-normalized) state vector.

    Attributes:
        amps: 1-D complex amplitudes in the computational basis
    """

    amps: np.ndarray

    def __post_init__(self) -> None:
        amps = _frozen(self.amps)
        if amps.ndim != 1 or amps.size < 1:
            raise DimensionMismatchError(f"Ket needs a non-empty 1-D array, got shape {amps.shape}")
        if amps.size > MAX_DIM:
            raise DimensionMismatchError(f"Ket dimension {amps.size} exceeds {MAX_DIM}")
        if not np.all(np.isfinite(amps)):
            raise ValueError("Ket amplitudes must be finite")
        if np.vdot(amps, amps).real > 1.0 + COMPARE_TOL:
            raise NotNormalizedError(
                f"Ket squared norm {np.vdot(amps, amps).real:.15g} exceeds 1"
            )
        object.__setattr__(self, "amps", amps)

    @property
    def dim(self) -> int:
        return self.amps.size

    def norm_squared(self) -> float:
        """Squared norm, i.e. the success probability carried by the ket."""
        return float(np.vdot(self.amps, self.amps).real)

    def norm(self) -> float:
        return float(np.sqrt(self.norm_squared()))

    def is_normalized(self, tol: float = ALGEBRA_TOL) -> bool:
        return abs(self.norm() - 1.0) <= tol

    def normalized(self) -> Ket:
        """Return the unit ket in the same direction."""
        n = self.norm()
        if n == 0.0:
            raise NotNormalizedError("Cannot normalize the zero ket")
        return Ket(self.amps / n)

    def scaled(self, factor: complex) -> Ket:
        return Ket(self.amps * factor)

    def __add__(self, other: Ket) -> Ket:
        _check_dims(self.dim, other.dim, "ket addition")
        return Ket(self.amps + other.amps)

    def __sub__(self, other: Ket) -> Ket:
        _check_dims(self.dim, other.dim, "ket subtraction")
        return Ket(self.amps - other.amps)

    def __repr__(self) -> str:
        return f"Ket(dim={self.dim}, amps={np.array2string(self.amps, precision=4)})"


@dataclass(frozen=True, eq=False)
class Operator:
    """A square complex matrix acting on a Hilbert space of dimension dim."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        entries = _frozen(self.entries)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1] or entries.shape[0] < 1:
            raise DimensionMismatchError(f"Operator must be square, got shape {entries.shape}")
        if entries.shape[0] > MAX_DIM:
            raise DimensionMismatchError(f"Operator dimension {entries.shape[0]} exceeds {MAX_DIM}")
        if not np.all(np.isfinite(entries)):
            raise ValueError("Operator entries must be finite")
        object.__setattr__(self, "entries", entries)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def dagger(self) -> Operator:
        return Operator(self.entries.conj().T)

    def is_hermitian(self, tol: float = ALGEBRA_TOL) -> bool:
        return bool(np.max(np.abs(self.entries - self.entries.conj().T)) <= tol)

    def is_projector(self, tol: float = ALGEBRA_TOL) -> bool:
        """Check Π² = Π and Π† = Π entrywise."""
        square = self.entries @ self.entries
        return self.is_hermitian(tol) and bool(np.max(np.abs(square - self.entries)) <= tol)

    def is_unitary(self, tol: float = ALGEBRA_TOL) -> bool:
        product = self.entries.conj().T @ self.entries
        return bool(np.max(np.abs(product - np.eye(self.dim))) <= tol)

    def complement(self) -> Operator:
        """Return 1 - self."""
        return Operator(np.eye(self.dim) - self.entries)

    def __matmul__(self, other: Operator) -> Operator:
        _check_dims(self.dim, other.dim, "operator product")
        return Operator(self.entries @ other.entries)

    def __add__(self, other: Operator) -> Operator:
        _check_dims(self.dim, other.dim, "operator addition")
        return Operator(self.entries + other.entries)

    def __sub__(self, other: Operator) -> Operator:
        _check_dims(self.dim, other.dim, "operator subtraction")
        return Operator(self.entries - other.entries)

    def __mul__(self, factor: complex) -> Operator:
        return Operator(self.entries * factor)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"Operator(dim={self.dim})"


def _check_dims(left: int, right: int, what: str) -> None:
    if left != right:
        raise DimensionMismatchError(f"Dimension mismatch in {what}: {left} vs {right}")


def identity(dim: int) -> Operator:
    return Operator(np.eye(dim))


@overload
def tensor(a: Ket, b: Ket) -> Ket: ...
@overload
def tensor(a: Operator, b: Operator) -> Operator: ...


def tensor(a: Union[Ket, Operator], b: Union[Ket, Operator]) -> Union[Ket, Operator]:
    """Kronecker product with a's index varying slowest.

    Raises:
        TypeError: If a ket is combined with an operator
    """
    if isinstance(a, Ket) and isinstance(b, Ket):
        return Ket(np.kron(a.amps, b.amps))
    if isinstance(a, Operator) and isinstance(b, Operator):
        return Operator(np.kron(a.entries, b.entries))
    raise TypeError(f"tensor needs two kets or two operators, got {type(a).__name__} "
                    f"and {type(b).__name__}")


def tensor_all(*factors: Union[Ket, Operator]) -> Union[Ket, Operator]:
    """Left fold of tensor over two or more factors."""
    if not factors:
        raise TypeError("tensor_all needs at least one factor")
    result = factors[0]
    for factor in factors[1:]:
        result = tensor(result, factor)
    return result


def inner(a: Ket, b: Ket) -> complex:
    """Return <a|b>, conjugate-linear in a."""
    _check_dims(a.dim, b.dim, "inner product")
    return complex(np.vdot(a.amps, b.amps))


def apply(op: Operator, v: Ket) -> Ket:
    """Matrix-vector product; the result may be sub-normalized."""
    _check_dims(op.dim, v.dim, "operator application")
    return Ket(op.entries @ v.amps)


def outer(a: Ket, b: Ket) -> Operator:
    """Return |a><b|."""
    _check_dims(a.dim, b.dim, "outer product")
    return Operator(np.outer(a.amps, b.amps.conj()))


def projector_onto(v: Ket) -> Operator:
    """Return |v><v| for a normalized ket.

    Raises:
        NotNormalizedError: If v is not normalized within ALGEBRA_TOL
    """
    if not v.is_normalized():
        raise NotNormalizedError(f"projector_onto needs a normalized ket, norm is {v.norm():.15g}")
    return outer(v, v)


def expectation(op: Operator, v: Ket) -> complex:
    """Return <v|op|v> without normalizing v.

    op may have norm above 1, so op|v> is never wrapped in a Ket.
    """
    if op.dim != v.dim:
        raise DimensionMismatchError(f"Operator of dim {op.dim} applied to ket of dim {v.dim}")
    return complex(np.vdot(v.amps, op.entries @ v.amps))


def basis_ket(dim: int, index: int) -> Ket:
    amps = np.zeros(dim, dtype=np.complex128)
    amps[index] = 1.0
    return Ket(amps)


def partial_bra(bra: Ket, dims: tuple[int, ...], position: int, v: Ket) -> Ket:
    """Contract <bra| against one tensor factor of v.

    Args:
        bra: Ket whose conjugate is applied
        dims: Dimensions of the tensor factors of v, slowest first
        position: Index of the factor to contract
        v: Ket on the full space

    Returns:
        Ket on the remaining factors (sub-normalized in general)
    """
    if int(np.prod(dims)) != v.dim:
        raise DimensionMismatchError(f"Factor dims {dims} do not multiply to {v.dim}")
    _check_dims(bra.dim, dims[position], "partial contraction")
    amps = v.amps.reshape(dims)
    contracted = np.tensordot(bra.amps.conj(), amps, axes=([0], [position]))
    return Ket(contracted.reshape(-1))


_SQRT_HALF = 1.0 / np.sqrt(2.0)

# Pauli matrices in the (|+z>, |-z>) frame
I2 = identity(2)
X = Operator(np.array([[0, 1], [1, 0]]))
Y = Operator(np.array([[0, -1j], [1j, 0]]))
Z = Operator(np.array([[1, 0], [0, -1]]))


def _qubit(alpha: complex, beta: complex) -> Ket:
    return Ket(np.array([alpha, beta]))


# Named states. The letter A is overloaded in the literature (anti-clockwise
# path vs anti-diagonal polarization), so the two are registered separately.
STATES: Mapping[str, Ket] = MappingProxyType({
    # path
    "C": _qubit(1, 0),
    "A_path": _qubit(0, 1),
    "plus": _qubit(_SQRT_HALF, _SQRT_HALF),
    "plus_i": _qubit(_SQRT_HALF, 1j * _SQRT_HALF),
    # polarization
    "H": _qubit(1, 0),
    "V": _qubit(0, 1),
    "D": _qubit(_SQRT_HALF, _SQRT_HALF),
    "A_pol": _qubit(_SQRT_HALF, -_SQRT_HALF),
    "R": _qubit(_SQRT_HALF, 1j * _SQRT_HALF),
    "L": _qubit(_SQRT_HALF, -1j * _SQRT_HALF),
    "bell_phi_plus": Ket(np.array([_SQRT_HALF, 0, 0, _SQRT_HALF])),
    # meter frame
    "+z": _qubit(1, 0),
    "-z": _qubit(0, 1),
    "+x": _qubit(_SQRT_HALF, _SQRT_HALF),
    "-x": _qubit(_SQRT_HALF, -_SQRT_HALF),
    "+y": _qubit(_SQRT_HALF, 1j * _SQRT_HALF),
    "-y": _qubit(_SQRT_HALF, -1j * _SQRT_HALF),
})


def state(label: str) -> Ket:
    """Look up a registered ket by label.

    Raises:
        KeyError: If the label is not registered
    """
    try:
        return STATES[label]
    except KeyError:
        known = ", ".join(STATES)
        raise KeyError(f"Unknown state '{label}'. Known labels: {known}") from None
