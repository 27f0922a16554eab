"""Tests for the qubit meter: strength, coupling and calibrated observables."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from ppslab.errors import NotAProjectorError, SingularStrengthError
from ppslab.hilbert import I2, X, Y, apply, inner, projector_onto, state, tensor
from ppslab.meter import (
    S_MIN,
    Quadrature,
    Strength,
    couple,
    coupling_unitary,
    coupling_unitary_expm,
    meter_observable,
    meter_states,
    meter_to_system,
    pointer_overlap,
    readout_basis,
    system_to_meter,
)
from ppslab.pigeonhole import PROJECTORS, Device

GRID = tuple(round(0.1 * k, 10) for k in range(11))
CALIBRATED = (S_MIN, 0.1, 0.25, 0.5, 0.75, 1.0)


class TestStrength:
    @pytest.mark.parametrize("s", [-0.1, 1.2, math.nan])
    def test_out_of_range(self, s):
        with pytest.raises(SingularStrengthError):
            Strength(s)

    def test_theta(self):
        assert Strength(0.5).theta == pytest.approx(math.pi / 6)
        assert math.sin(Strength(0.3).theta) == pytest.approx(0.3, abs=1e-12)

    def test_from_theta(self):
        assert Strength.from_theta(math.pi / 6).s == pytest.approx(0.5, abs=1e-12)

    def test_from_overlap(self):
        assert Strength.from_overlap(0.8).s == pytest.approx(0.6, abs=1e-12)
        assert Strength(0.6).overlap == pytest.approx(0.8, abs=1e-12)

    def test_require_divisible(self):
        Strength(S_MIN).require_divisible()
        with pytest.raises(SingularStrengthError, match="weak value"):
            Strength(S_MIN / 10).require_divisible()


class TestCouplingUnitary:
    @pytest.mark.parametrize("s", GRID)
    @pytest.mark.parametrize("projector", list(PROJECTORS.values()), ids=lambda p: p.label.value)
    def test_unitary(self, projector, s):
        u = coupling_unitary(projector.matrix, Strength(s)).entries
        assert np.max(np.abs(u.conj().T @ u - np.eye(8))) <= 1e-12

    def test_zero_strength_is_identity(self):
        u = coupling_unitary(PROJECTORS[Device.SAME].matrix, Strength(0.0))
        assert_allclose(u.entries, np.eye(8), atol=1e-12)

    @pytest.mark.parametrize("s", [0.2, 0.6, 1.0])
    def test_euler_form_matches_exponential(self, s):
        pi = projector_onto(state("C"))
        direct = coupling_unitary_expm(pi, Strength(s)).entries
        assert_allclose(coupling_unitary(pi, Strength(s)).entries, direct, atol=1e-12)

    @pytest.mark.parametrize("s", [0.0, 0.3, 0.6, 1.0])
    def test_pointer_decomposition(self, random_ket, s):
        pi = PROJECTORS[Device.LL].matrix
        psi = random_ket(4)
        yes, no = meter_states(Strength(s))
        expected = tensor(apply(pi, psi), yes.ket) + tensor(apply(pi.complement(), psi), no.ket)
        coupled = couple(psi, pi, Strength(s))
        assert np.linalg.norm(coupled.amps - expected.amps) <= 1e-12

    def test_strong_coupling_orthogonal_pointers(self):
        yes, no = meter_states(Strength(1.0))
        assert abs(inner(yes.ket, no.ket)) <= 1e-12

    def test_non_projector_rejected(self):
        with pytest.raises(NotAProjectorError):
            coupling_unitary(X, Strength(0.5))


class TestMeterStates:
    def test_strong(self):
        yes, no = meter_states(Strength(1.0))
        assert_allclose(yes.ket.amps, state("+x").amps, atol=1e-12)
        assert_allclose(no.ket.amps, state("-x").amps, atol=1e-12)

    def test_weak(self):
        yes, no = meter_states(Strength(0.0))
        assert_allclose(yes.ket.amps, state("+z").amps, atol=1e-12)
        assert_allclose(no.ket.amps, state("+z").amps, atol=1e-12)

    @pytest.mark.parametrize("s", GRID)
    def test_overlap(self, s):
        yes, no = meter_states(Strength(s))
        assert abs(inner(yes.ket, no.ket)) ** 2 == pytest.approx(1 - s * s, abs=1e-12)

    def test_overlap_recovered_from_coupled_state(self):
        pi = projector_onto(state("C"))
        coupled = couple(state("plus"), pi, Strength(0.6))
        assert pointer_overlap(coupled, pi) == pytest.approx(0.64, abs=1e-12)


class TestMeterObservable:
    def test_real_strong(self):
        m = meter_observable(Quadrature.REAL, Strength(1.0))
        assert_allclose(m.matrix.entries, ((I2 + X) * 0.5).entries)

    def test_imaginary_strong(self):
        m = meter_observable(Quadrature.IMAGINARY, Strength(1.0))
        assert_allclose(m.matrix.entries, (Y * 0.5).entries)

    def test_real_half(self):
        m = meter_observable("real", Strength(0.5))
        assert_allclose(m.matrix.entries, ((I2 + X * 2.0) * 0.5).entries)
        assert m.matrix.is_hermitian()

    @pytest.mark.parametrize("s", CALIBRATED[1:])
    def test_calibration(self, s):
        strength = Strength(s)
        yes, no = (m.ket for m in meter_states(strength))
        real = meter_observable(Quadrature.REAL, strength).matrix
        imag = meter_observable(Quadrature.IMAGINARY, strength).matrix
        assert inner(yes, apply(real, yes)) == pytest.approx(1.0, abs=1e-12)
        assert inner(no, apply(real, no)) == pytest.approx(0.0, abs=1e-12)
        assert inner(yes, apply(imag, no)) == pytest.approx(0.5j, abs=1e-12)
        assert inner(no, apply(imag, yes)) == pytest.approx(-0.5j, abs=1e-12)
        assert inner(yes, apply(imag, yes)) == pytest.approx(0.0, abs=1e-12)

    def test_singular_strength(self):
        with pytest.raises(SingularStrengthError):
            meter_observable(Quadrature.IMAGINARY, Strength(0.0))

    def test_readout_bases(self):
        yes, no = readout_basis("imaginary")
        assert_allclose(yes.amps, state("+y").amps)
        assert_allclose(no.amps, state("-y").amps)
        yes, no = readout_basis(Quadrature.REAL)
        assert abs(inner(yes, no)) <= 1e-12


class TestConversion:
    def test_real(self):
        assert meter_to_system(0.75, Strength(0.5), Quadrature.REAL) == pytest.approx(1.0)

    @pytest.mark.parametrize("s", CALIBRATED)
    def test_unshifted_imaginary(self, s):
        assert meter_to_system(0.5, Strength(s), Quadrature.IMAGINARY) == 0.0

    def test_strong_limit_is_identity(self):
        assert meter_to_system(1 / 6, Strength(1.0), Quadrature.REAL) == pytest.approx(1 / 6)

    @pytest.mark.parametrize("kind", list(Quadrature))
    @pytest.mark.parametrize("s", CALIBRATED[1:])
    def test_round_trip(self, kind, s):
        low = 0.0 if kind is Quadrature.REAL else -0.5
        for value in np.linspace(low, low + 1.0, 11):
            meter = system_to_meter(value, Strength(s), kind)
            assert meter_to_system(meter, Strength(s), kind) == pytest.approx(value, abs=1e-12)

    def test_singular(self):
        with pytest.raises(SingularStrengthError):
            meter_to_system(0.5, Strength(0.0), Quadrature.REAL)

    def test_probability_out_of_range(self):
        with pytest.raises(ValueError):
            meter_to_system(1.5, Strength(0.5), Quadrature.REAL)
