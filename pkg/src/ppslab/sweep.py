"""Parameter sweeps and their data files.

Rows are plain dicts keyed by column name. They are sorted by their key
columns before writing, and floats are rendered with FLOAT_DIGITS
significant digits, so an identical configuration always produces a
byte-identical file.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import sys
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from .classical import (
    ASSIGNMENTS,
    PigeonDistribution,
    minimize_same_pair,
    sample_assignments,
    same_pair_probability,
    standard_error,
)
from .errors import SweepConfigError
from .hilbert import inner
from .meter import S_MIN, Quadrature, Strength
from .pigeonhole import (
    CLASSICAL_FLOOR,
    POSTSELECTIONS,
    Device,
    postselection,
    procedure_success_factor,
    run_closed_form,
    run_photonic_circuit,
    scenario,
)
from .pps import readout, weak_value

logger = logging.getLogger(__name__)

DEFAULT_GRID_POINTS = 101
GRID_START = 0.01
FLOAT_DIGITS = 12
WEAK_LIMIT = "weak_limit"

SWEEP_COLUMNS = (
    "device",
    "postselection",
    "quadrature",
    "engine",
    "strength",
    "meter_prob",
    "system_value",
    "success_prob",
)

VIOLATION_COLUMNS = (
    "strength",
    "direct_same_system",
    "indirect_sum_system",
    "delta",
    "classical_floor",
    "pigeonhole_violated",
)

CLASSICAL_COLUMNS = (
    "distribution",
    "same_pair_exact",
    "same_pair_sampled",
    "standard_error",
    "samples",
    "seed",
)


class Engine(str, Enum):
    CLOSED_FORM = "closed_form"
    CIRCUIT = "circuit"
    BOTH = "both"

    def members(self) -> tuple[Engine, ...]:
        if self is Engine.BOTH:
            return (Engine.CIRCUIT, Engine.CLOSED_FORM)
        return (self,)


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


def strength_grid(points: int = DEFAULT_GRID_POINTS) -> tuple[float, ...]:
    """Evenly spaced strengths from GRID_START to 1 inclusive."""
    if points < 2:
        raise SweepConfigError(f"A strength grid needs at least 2 points, got {points}")
    return tuple(float(s) for s in np.linspace(GRID_START, 1.0, points))


def parse_strengths(text: str) -> tuple[float, ...]:
    """Parse "grid:<n>" or a comma separated list of strengths.

    Raises:
        SweepConfigError: If the text is neither form
    """
    text = text.strip()
    if text.startswith("grid:"):
        try:
            points = int(text[len("grid:"):])
        except ValueError:
            raise SweepConfigError(f"Invalid strength grid '{text}', expected grid:<n>") from None
        return strength_grid(points)
    try:
        return tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise SweepConfigError(f"Invalid strength list '{text}'") from None


def parse_choices(text: str, allowed: Iterable[str], what: str) -> tuple[str, ...]:
    """Parse a comma separated subset of allowed labels, keeping the order given."""
    allowed = tuple(allowed)
    chosen = tuple(part.strip() for part in text.split(",") if part.strip())
    unknown = [c for c in chosen if c not in allowed]
    if unknown:
        raise SweepConfigError(
            f"Unknown {what}: {', '.join(unknown)}. Choose from {', '.join(allowed)}"
        )
    return chosen


def validate_strengths(strengths: Sequence[float]) -> None:
    """Strengths must be non-empty, strictly increasing and within [S_MIN, 1]."""
    if not strengths:
        raise SweepConfigError("At least one strength is required")
    for s in strengths:
        if not math.isfinite(s) or not S_MIN <= s <= 1.0:
            raise SweepConfigError(f"Strength {s} outside [{S_MIN:g}, 1]")
    if any(b <= a for a, b in zip(strengths, strengths[1:])):
        raise SweepConfigError("Strengths must be strictly increasing")


@dataclass(frozen=True)
class SweepConfig:
    """Configuration of a sweep over devices, postselections, strengths and quadratures.

    Attributes:
        devices: Pair observables to measure
        postselections: Postselection labels
        strengths: Strictly increasing strengths in [S_MIN, 1]
        quadratures: Meter readout bases
        engine: Simulation engine, or both for paired rows
        output: Destination file, or None for stdout
        format: Output file format
    """

    devices: tuple[Device, ...] = tuple(Device)
    postselections: tuple[str, ...] = tuple(POSTSELECTIONS)
    strengths: tuple[float, ...] = strength_grid()
    quadratures: tuple[Quadrature, ...] = tuple(Quadrature)
    engine: Engine = Engine.CLOSED_FORM
    output: Path | None = None
    format: OutputFormat = OutputFormat.CSV

    def __post_init__(self) -> None:
        validate_config(self)


def validate_config(config: SweepConfig) -> None:
    """Validate sweep configuration values.

    Raises:
        SweepConfigError: If any configuration value is invalid
    """
    if not config.devices:
        raise SweepConfigError("At least one device is required")
    if not config.postselections:
        raise SweepConfigError("At least one postselection is required")
    if not config.quadratures:
        raise SweepConfigError("At least one quadrature is required")
    for label in config.postselections:
        if label not in POSTSELECTIONS:
            raise SweepConfigError(f"Unknown postselection '{label}'")
    validate_strengths(config.strengths)


def format_config_for_logging(config: SweepConfig) -> str:
    return (
        f"Devices: {', '.join(d.value for d in config.devices)}\n"
        f"Postselections: {', '.join(config.postselections)}\n"
        f"Strengths: {len(config.strengths)} from {config.strengths[0]:g} "
        f"to {config.strengths[-1]:g}\n"
        f"Quadratures: {', '.join(q.value for q in config.quadratures)}\n"
        f"Engine: {config.engine.value}\n"
        f"Output: {config.output or 'stdout'} ({config.format.value})"
    )


def _strength_key(value: Any) -> float:
    return -1.0 if value == WEAK_LIMIT else float(value)


def sweep_rows(config: SweepConfig) -> list[dict[str, Any]]:
    """One row per (device, postselection, quadrature, engine, strength).

    Closed-form cells also get a weak_limit row from the analytic weak value.
    """
    runners = {Engine.CLOSED_FORM: run_closed_form, Engine.CIRCUIT: run_photonic_circuit}
    rows: list[dict[str, Any]] = []
    for device in config.devices:
        for label in config.postselections:
            post = postselection(label)
            for quadrature in config.quadratures:
                for engine in config.engine.members():
                    if engine is Engine.CLOSED_FORM:
                        rows.append(_weak_limit_row(device, label, quadrature))
                    for s in config.strengths:
                        run = runners[engine](device, post, Strength(s), quadrature)
                        rows.append({
                            "device": device.value,
                            "postselection": label,
                            "quadrature": quadrature.value,
                            "engine": engine.value,
                            "strength": s,
                            "meter_prob": run.yes_prob,
                            "system_value": run.system_value,
                            "success_prob": run.success_prob,
                        })
    rows.sort(key=lambda r: (r["device"], r["postselection"], r["quadrature"], r["engine"],
                             _strength_key(r["strength"])))
    logger.debug(f"[SWEEP] built {len(rows)} rows")
    return rows


def _weak_limit_row(device: Device, label: str, quadrature: Quadrature) -> dict[str, Any]:
    sc = scenario(device, postselection(label))
    value = weak_value(sc)
    overlap = abs(inner(sc.psi_f, sc.psi_i)) ** 2
    return {
        "device": device.value,
        "postselection": label,
        "quadrature": quadrature.value,
        "engine": Engine.CLOSED_FORM.value,
        "strength": WEAK_LIMIT,
        "meter_prob": 0.5,
        "system_value": value.real if quadrature is Quadrature.REAL else value.imag,
        "success_prob": procedure_success_factor(device) * overlap,
    }


def violation_rows(strengths: Sequence[float]) -> list[dict[str, Any]]:
    """Direct same-hole value against the LL + RR sum for the paradox postselection."""
    validate_strengths(strengths)
    paradox = postselection("paradox")
    scenarios = {device: scenario(device, paradox) for device in Device}

    def row(strength: Any, direct: float, indirect: float) -> dict[str, Any]:
        return {
            "strength": strength,
            "direct_same_system": direct,
            "indirect_sum_system": indirect,
            "delta": indirect - direct,
            "classical_floor": CLASSICAL_FLOOR,
            "pigeonhole_violated": direct < CLASSICAL_FLOOR,
        }

    weak = {device: weak_value(sc).real for device, sc in scenarios.items()}
    rows = [row(WEAK_LIMIT, weak[Device.SAME], weak[Device.LL] + weak[Device.RR])]
    for s in strengths:
        real = {device: readout(sc, Strength(s)).real_system for device, sc in scenarios.items()}
        rows.append(row(s, real[Device.SAME], real[Device.LL] + real[Device.RR]))
    return rows


NAMED_DISTRIBUTIONS = {
    "point_CCC": lambda: PigeonDistribution.point_mass("CCC"),
    "uniform8": PigeonDistribution.uniform,
    "mixed6": PigeonDistribution.mixed,
}


def classical_rows(samples: int, seed: int) -> list[dict[str, Any]]:
    """Exact and sampled same-pair probabilities for the named distributions.

    The first row is the exact minimizer, labelled with its witness.
    """
    value, witness = minimize_same_pair()
    support = [a for a, p in zip(ASSIGNMENTS, witness.probs) if p > 0]
    named = [(f"minimum:{support[0]}", witness)]
    named += [(name, factory()) for name, factory in NAMED_DISTRIBUTIONS.items()]
    rows = []
    for name, distribution in named:
        exact = same_pair_probability(distribution)
        rows.append({
            "distribution": name,
            "same_pair_exact": exact,
            "same_pair_sampled": sample_assignments(distribution, samples, seed),
            "standard_error": standard_error(exact, samples),
            "samples": samples,
            "seed": seed,
        })
    logger.debug(f"[CLASSICAL] minimum {value:.12g}")
    return rows


def format_value(value: Any) -> Any:
    """Render floats with FLOAT_DIGITS significant digits, booleans in lower case."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value + 0.0:.{FLOAT_DIGITS}g}"
    return value


def _json_value(value: Any) -> Any:
    if isinstance(value, float):
        return float(format_value(value))
    return value


def render(rows: Sequence[dict[str, Any]], columns: Sequence[str], fmt: OutputFormat) -> str:
    """Serialize rows to CSV or JSON text."""
    if OutputFormat(fmt) is OutputFormat.JSON:
        records = [{c: _json_value(r[c]) for c in columns} for r in rows]
        return json.dumps(records, indent=2) + "\n"
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow({c: format_value(r[c]) for c in columns})
    return buffer.getvalue()


def write_output(text: str, output: Path | None) -> None:
    """Write text to output, or to stdout when output is None."""
    if output is None:
        sys.stdout.write(text)
        return
    output.parent.mkdir(parents=True, exist_ok=True)
    with output.open("w", newline="", encoding="utf-8") as f:
        f.write(text)
