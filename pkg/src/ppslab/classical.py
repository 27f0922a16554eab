"""Classical baseline: three pigeons in two holes.

A distribution P(b1, b2, b3) over the eight assignments of pigeons to the
holes C and A is examined by picking one of the three pairs uniformly at
random. The chance that the pair shares a hole is affine in P,

    1/3 + (2/3) (P(CCC) + P(AAA)),

so it can never drop below 1/3.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass

import numpy as np

from .errors import ClassicalBoundError, InvalidDistributionError

logger = logging.getLogger(__name__)

HOLES = ("C", "A")

# Assignments in lexicographic order: CCC, CCA, CAC, CAA, ACC, ACA, AAC, AAA
ASSIGNMENTS: tuple[str, ...] = tuple("".join(a) for a in itertools.product(HOLES, repeat=3))

PAIRS = ((0, 1), (0, 2), (1, 2))

DISTRIBUTION_TOL = 1e-12


def _same_pair_fraction(assignment: str) -> float:
    return sum(assignment[i] == assignment[j] for i, j in PAIRS) / len(PAIRS)


# Fraction of the three pairs sharing a hole, per assignment
_SAME_FRACTIONS = np.array([_same_pair_fraction(a) for a in ASSIGNMENTS])


@dataclass(frozen=True, eq=False)
class PigeonDistribution:
    """Probability of each assignment, indexed like ASSIGNMENTS."""

    probs: np.ndarray

    def __post_init__(self) -> None:
        probs = np.array(self.probs, dtype=float)
        if probs.shape != (len(ASSIGNMENTS),):
            raise InvalidDistributionError(
                f"Need {len(ASSIGNMENTS)} probabilities, got shape {probs.shape}"
            )
        if not np.all(np.isfinite(probs)) or np.any(probs < 0.0):
            raise InvalidDistributionError("Probabilities must be finite and non-negative")
        if abs(probs.sum() - 1.0) > DISTRIBUTION_TOL:
            raise InvalidDistributionError(f"Probabilities sum to {probs.sum():.15g}, not 1")
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

    def __getitem__(self, assignment: str) -> float:
        return float(self.probs[ASSIGNMENTS.index(assignment)])

    @classmethod
    def point_mass(cls, assignment: str) -> PigeonDistribution:
        probs = np.zeros(len(ASSIGNMENTS))
        probs[ASSIGNMENTS.index(assignment)] = 1.0
        return cls(probs)

    @classmethod
    def uniform(cls, assignments: tuple[str, ...] = ASSIGNMENTS) -> PigeonDistribution:
        probs = np.array([1.0 if a in assignments else 0.0 for a in ASSIGNMENTS])
        return cls(probs / probs.sum())

    @classmethod
    def mixed(cls) -> PigeonDistribution:
        """Uniform over the six assignments that are not all in one hole."""
        return cls.uniform(tuple(a for a in ASSIGNMENTS if len(set(a)) > 1))

    def __repr__(self) -> str:
        support = {a: round(float(p), 6) for a, p in zip(ASSIGNMENTS, self.probs) if p > 0}
        return f"PigeonDistribution({support})"


def same_pair_probability(d: PigeonDistribution) -> float:
    """Chance that a uniformly chosen pair shares a hole, from the affine identity."""
    return 1.0 / 3.0 + (2.0 / 3.0) * (d["CCC"] + d["AAA"])


def same_pair_probability_enumerated(d: PigeonDistribution) -> float:
    """Same statistic by direct enumeration over assignments and pairs."""
    return float(d.probs @ _SAME_FRACTIONS)


def minimize_same_pair() -> tuple[float, PigeonDistribution]:
    """Exact minimum of the same-pair statistic and a distribution attaining it.

    The statistic is affine, so its minimum over the simplex is attained at
    a vertex; every point mass is evaluated and the first minimizer is
    returned as the witness.
    """
    vertices = [PigeonDistribution.point_mass(a) for a in ASSIGNMENTS]
    values = [same_pair_probability_enumerated(v) for v in vertices]
    best = int(np.argmin(values))
    value = values[best]
    identity_value = same_pair_probability(vertices[best])
    if abs(value - identity_value) > DISTRIBUTION_TOL:
        raise ClassicalBoundError(
            f"Enumeration {value!r} and identity {identity_value!r} disagree"
        )
    logger.debug(f"[CLASSICAL] minimum {value:.12g} at {ASSIGNMENTS[best]}")
    return value, vertices[best]


def sample_assignments(d: PigeonDistribution, n: int, seed: int) -> float:
    """Monte Carlo frequency with which a random pair shares a hole.

    Draws n assignments from d and one of the three pairs uniformly for
    each, using numpy's PCG64 generator seeded with seed. The result is
    bit-for-bit reproducible for a given seed.
    """
    if n < 1:
        raise ValueError(f"Sample count must be at least 1, got {n}")
    rng = np.random.default_rng(seed)
    assignments = rng.choice(len(ASSIGNMENTS), size=n, p=d.probs)
    pairs = rng.integers(0, len(PAIRS), size=n)
    letters = np.array([[a[i] for i in range(3)] for a in ASSIGNMENTS])
    first = np.array([i for i, _ in PAIRS])[pairs]
    second = np.array([j for _, j in PAIRS])[pairs]
    same = letters[assignments, first] == letters[assignments, second]
    return float(np.count_nonzero(same)) / n


def standard_error(probability: float, n: int) -> float:
    """Binomial standard error of a frequency estimated from n samples."""
    return float(np.sqrt(probability * (1.0 - probability) / n))
