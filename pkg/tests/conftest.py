"""Shared fixtures for the ppslab tests."""

import numpy as np
import pytest

from ppslab.hilbert import Ket
from ppslab.pigeonhole import POSTSELECTIONS, Device, scenario


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def random_ket(rng):
    """Factory for random normalized kets of a given dimension."""

    def make(dim: int) -> Ket:
        amps = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        return Ket(amps / np.linalg.norm(amps))

    return make


@pytest.fixture
def paradox():
    """PPS scenarios for |+>|+> -> |+i>|+i>, keyed by device."""
    return {device: scenario(device, POSTSELECTIONS["paradox"]) for device in Device}
