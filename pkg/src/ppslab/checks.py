"""Invariant suite behind `ppslab check`.

Each check returns a CheckResult; run_checks evaluates all of them and
never raises for a failing invariant, only for a broken configuration.
"""

from __future__ import annotations

import logging
import math
import os
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .classical import PigeonDistribution, minimize_same_pair, sample_assignments, standard_error
from .errors import PpsLabError, SweepConfigError
from .meter import Quadrature, Strength
from .pigeonhole import (
    CLASSICAL_FLOOR,
    POSTSELECTIONS,
    PROJECTORS,
    Device,
    classical_same_hole_floor,
    procedure_success_factor,
    run_closed_form,
    run_photonic_circuit,
    scenario,
)
from .pps import (
    abl_probability,
    backaction_sensitivity,
    joint_imag_expectation,
    readout,
    strong_imaginary_value,
    weak_value,
)
from .sweep import strength_grid

logger = logging.getLogger(__name__)

TOLERANCE_ENV = "PPSLAB_TOLERANCE"
DEFAULT_TOLERANCE = 1e-9

# Fixed by how far s = WEAK_PROBE is from the weak limit and by the
# finite-difference step, not by the comparison tolerance.
WEAK_PROBE = 1e-6
WEAK_LIMIT_TOL = 1e-5
SENSITIVITY_TOL = 1e-6
SENSITIVITY_STRENGTHS = (0.2, 0.5, 0.8, 1.0)

MONTE_CARLO_SAMPLES = 1_000_000
MONTE_CARLO_SEED = 0

CALIBRATION_LABELS = ("CC", "CA", "AC", "AA")


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def tolerance_from_env() -> float:
    """Comparison tolerance from PPSLAB_TOLERANCE, default 1e-9.

    Raises:
        SweepConfigError: If the variable is set but not a positive float
    """
    raw = os.environ.get(TOLERANCE_ENV)
    if raw is None or not raw.strip():
        return DEFAULT_TOLERANCE
    try:
        value = float(raw)
    except ValueError:
        raise SweepConfigError(f"{TOLERANCE_ENV}={raw!r} is not a number") from None
    if not math.isfinite(value) or value <= 0.0:
        raise SweepConfigError(f"{TOLERANCE_ENV} must be positive, got {raw!r}")
    return value


def coarse_grid() -> tuple[float, ...]:
    """Eleven strengths 0, 0.1, ..., 1."""
    return tuple(round(0.1 * k, 10) for k in range(11))


def _worst(pairs: list[tuple[str, float]]) -> tuple[str, float]:
    return max(pairs, key=lambda p: p[1])


def check_engine_equivalence(tol: float) -> CheckResult:
    deviations = []
    for device in Device:
        for post in POSTSELECTIONS.values():
            for s in coarse_grid():
                strength = Strength(s)
                for quadrature in Quadrature:
                    circuit = run_photonic_circuit(device, post, strength, quadrature)
                    closed = run_closed_form(device, post, strength, quadrature)
                    where = f"{device.value}/{post.label}/s={s:g}/{quadrature.value}"
                    deviations.append((where, abs(circuit.yes_prob - closed.yes_prob)))
                    deviations.append((where + " success",
                                       abs(circuit.success_prob - closed.success_prob)))
    where, worst = _worst(deviations)
    return CheckResult("engine_equivalence", worst <= tol,
                       f"{len(deviations) // 2} runs, worst {worst:.3g} at {where}")


def check_success_factors(tol: float) -> CheckResult:
    expected = {Device.SAME: 0.25, Device.LL: 0.125, Device.RR: 0.125}
    worst = max(abs(procedure_success_factor(d) - f) for d, f in expected.items())
    return CheckResult("success_factors", worst <= tol, "same 1/4, LL and RR 1/8")


def check_limit_consistency(tol: float) -> CheckResult:
    weak_deviations = []
    strong_deviations = []
    for device in Device:
        for post in POSTSELECTIONS.values():
            sc = scenario(device, post)
            weak = readout(sc, Strength(WEAK_PROBE))
            value = weak_value(sc)
            weak_deviations.append((sc.name, max(abs(weak.real_system - value.real),
                                                 abs(weak.imag_system - value.imag))))
            strong = readout(sc, Strength(1.0))
            strong_deviations.append((sc.name,
                                      max(abs(strong.real_system - abl_probability(sc)),
                                          abs(strong.imag_system - strong_imaginary_value(sc)))))
    weak_where, weak_worst = _worst(weak_deviations)
    strong_where, strong_worst = _worst(strong_deviations)
    return CheckResult(
        "limit_consistency",
        weak_worst <= WEAK_LIMIT_TOL and strong_worst <= tol,
        f"weak worst {weak_worst:.3g} at {weak_where}, strong worst {strong_worst:.3g} "
        f"at {strong_where}",
    )


def _paradox(device: Device):
    return scenario(device, POSTSELECTIONS["paradox"])


def check_pigeonhole_violation(tol: float) -> CheckResult:
    same = _paradox(Device.SAME)
    values = [readout(same, Strength(s)).real_system for s in strength_grid()]
    worst = max(abs(v) for v in values)
    below = all(v < CLASSICAL_FLOOR for v in values)
    return CheckResult("pigeonhole_violation", worst <= tol and below,
                       f"max |same| = {worst:.3g} on {len(values)} strengths")


def check_sum_rule_curve(tol: float) -> CheckResult:
    scenarios = {d: _paradox(d) for d in Device}
    deviations = []
    for s in strength_grid():
        strength = Strength(s)
        real = {d: readout(sc, strength).real_system for d, sc in scenarios.items()}
        delta = real[Device.LL] + real[Device.RR] - real[Device.SAME]
        c = strength.overlap
        deviations.append((f"s={s:g}", abs(delta - (1.0 - c) / (3.0 - c))))
    where, worst = _worst(deviations)
    return CheckResult("sum_rule_curve", worst <= tol, f"worst {worst:.3g} at {where}")


def check_imaginary_cancellation(tol: float) -> CheckResult:
    both_cw, both_acw = _paradox(Device.LL), _paradox(Device.RR)
    worst = max(
        abs(readout(both_cw, Strength(s)).imag_system + readout(both_acw, Strength(s)).imag_system)
        for s in strength_grid()
    )
    return CheckResult("imaginary_cancellation", worst <= tol, f"max |LL + RR| = {worst:.3g}")


def check_strength_independence(tol: float) -> CheckResult:
    both_cw = _paradox(Device.LL)
    worst = max(abs(joint_imag_expectation(both_cw, Strength(s)) - 0.125) for s in strength_grid())
    return CheckResult("strength_independence", worst <= tol, f"max |E - 1/8| = {worst:.3g}")


def check_sensitivity(tol: float) -> CheckResult:
    deviations = []
    for device in Device:
        sc = _paradox(device)
        for s in SENSITIVITY_STRENGTHS:
            strength = Strength(s)
            derivative = backaction_sensitivity(sc, strength)
            expected = 2.0 * readout(sc, strength).imag_system
            deviations.append((f"{sc.name} s={s:g}", abs(derivative - expected)))
    where, worst = _worst(deviations)
    return CheckResult("backaction_sensitivity", worst <= SENSITIVITY_TOL,
                       f"worst {worst:.3g} at {where}")


def check_calibration(tol: float) -> CheckResult:
    deviations = []
    for device, projector in PROJECTORS.items():
        for label in CALIBRATION_LABELS:
            sc = scenario(device, POSTSELECTIONS[label])
            member = float(np.vdot(sc.psi_f.amps, projector.matrix.entries @ sc.psi_f.amps).real)
            for s in coarse_grid()[1:]:
                values = readout(sc, Strength(s))
                deviations.append((f"{sc.name} s={s:g}", max(abs(values.real_system - member),
                                                              abs(values.imag_system))))
    where, worst = _worst(deviations)
    return CheckResult("calibration", worst <= tol, f"worst {worst:.3g} at {where}")


def check_classical_bound(tol: float) -> CheckResult:
    value, witness = minimize_same_pair()
    floor = classical_same_hole_floor()
    mixed = PigeonDistribution.mixed()
    frequency = sample_assignments(mixed, MONTE_CARLO_SAMPLES, MONTE_CARLO_SEED)
    error = standard_error(CLASSICAL_FLOOR, MONTE_CARLO_SAMPLES)
    passed = (abs(value - CLASSICAL_FLOOR) <= tol and abs(floor - CLASSICAL_FLOOR) <= tol
              and abs(frequency - CLASSICAL_FLOOR) <= 3.0 * error)
    return CheckResult("classical_bound", passed,
                       f"minimum {value:.12g} at {witness}, sampled {frequency:.6f} ± {error:.2g}")


CHECKS: tuple[Callable[[float], CheckResult], ...] = (
    check_engine_equivalence,
    check_success_factors,
    check_limit_consistency,
    check_pigeonhole_violation,
    check_sum_rule_curve,
    check_imaginary_cancellation,
    check_strength_independence,
    check_sensitivity,
    check_calibration,
    check_classical_bound,
)


def run_checks(tol: float) -> list[CheckResult]:
    """Run every check; a check that raises is reported as failed."""
    results = []
    for check in CHECKS:
        try:
            result = check(tol)
        except PpsLabError as e:
            result = CheckResult(check.__name__.removeprefix("check_"), False, f"error: {e}")
        level = logging.INFO if result.passed else logging.ERROR
        logger.log(level, f"[CHECK] {result.name}: {'PASS' if result.passed else 'FAIL'} "
                          f"({result.detail})")
        results.append(result)
    return results
