"""Tests for sweep configuration, row building and rendering."""

import json

import pytest

from ppslab.errors import SweepConfigError
from ppslab.meter import Quadrature
from ppslab.pigeonhole import Device
from ppslab.sweep import (
    CLASSICAL_COLUMNS,
    SWEEP_COLUMNS,
    VIOLATION_COLUMNS,
    WEAK_LIMIT,
    Engine,
    OutputFormat,
    SweepConfig,
    classical_rows,
    format_value,
    parse_choices,
    parse_strengths,
    render,
    strength_grid,
    sweep_rows,
    validate_strengths,
    violation_rows,
    write_output,
)


class TestStrengths:
    def test_default_grid(self):
        grid = strength_grid()
        assert len(grid) == 101
        assert grid[0] == pytest.approx(0.01)
        assert grid[-1] == 1.0

    def test_parse_grid(self):
        assert parse_strengths("grid:3") == pytest.approx((0.01, 0.505, 1.0))

    def test_parse_list(self):
        assert parse_strengths("0.2, 0.5,1") == (0.2, 0.5, 1.0)

    @pytest.mark.parametrize("text", ["grid:x", "grid:1", "0.2,abc"])
    def test_parse_invalid(self, text):
        with pytest.raises(SweepConfigError):
            parse_strengths(text)

    @pytest.mark.parametrize(
        "strengths",
        [(), (0.5, 0.2), (0.2, 0.2), (0.0, 0.5), (0.5, 1.5)],
        ids=["empty", "decreasing", "repeated", "zero", "above-one"],
    )
    def test_validate_invalid(self, strengths):
        with pytest.raises(SweepConfigError):
            validate_strengths(strengths)

    def test_parse_choices(self):
        assert parse_choices("LL,same", ["same", "LL", "RR"], "devices") == ("LL", "same")
        with pytest.raises(SweepConfigError, match="Unknown devices: XX"):
            parse_choices("XX", ["same", "LL", "RR"], "devices")


class TestConfig:
    def test_defaults(self):
        config = SweepConfig()
        assert config.devices == (Device.SAME, Device.LL, Device.RR)
        assert config.postselections == ("paradox", "CC", "CA", "AC", "AA")
        assert len(config.strengths) == 101
        assert config.engine is Engine.CLOSED_FORM
        assert config.format is OutputFormat.CSV

    @pytest.mark.parametrize(
        "overrides",
        [{"devices": ()}, {"postselections": ()}, {"quadratures": ()},
         {"postselections": ("CV",)}, {"strengths": (0.5, 0.1)}],
    )
    def test_invalid(self, overrides):
        with pytest.raises(SweepConfigError):
            SweepConfig(**overrides)


def _config(**overrides):
    values = {
        "devices": (Device.SAME,),
        "postselections": ("paradox",),
        "strengths": (0.2, 0.5, 1.0),
        "quadratures": (Quadrature.REAL,),
    }
    values.update(overrides)
    return SweepConfig(**values)


class TestSweepRows:
    def test_same_hole_real(self):
        rows = sweep_rows(_config())
        assert [r["strength"] for r in rows] == [WEAK_LIMIT, 0.2, 0.5, 1.0]
        weak = rows[0]
        assert weak["meter_prob"] == 0.5
        assert weak["system_value"] == pytest.approx(0, abs=1e-12)
        assert weak["success_prob"] == pytest.approx(0.25 * 0.25, abs=1e-12)
        for row in rows[1:]:
            assert row["meter_prob"] == pytest.approx(0.5 - row["strength"] / 2, abs=1e-12)
            assert row["success_prob"] == pytest.approx(1 / 16, abs=1e-12)

    def test_imaginary_full_strength(self):
        rows = sweep_rows(_config(devices=(Device.LL,), quadratures=(Quadrature.IMAGINARY,)))
        assert rows[-1]["strength"] == 1.0
        assert rows[-1]["meter_prob"] == pytest.approx(5 / 6, abs=1e-12)
        assert rows[0]["system_value"] == pytest.approx(0.5, abs=1e-12)

    def test_both_engines(self):
        rows = sweep_rows(_config(engine=Engine.BOTH, devices=tuple(Device),
                                  quadratures=tuple(Quadrature)))
        circuit = {(r["device"], r["quadrature"], r["strength"]): r
                   for r in rows if r["engine"] == "circuit"}
        closed = [r for r in rows if r["engine"] == "closed_form" and r["strength"] != WEAK_LIMIT]
        assert len(circuit) == len(closed) == 3 * 2 * 3
        for row in closed:
            paired = circuit[(row["device"], row["quadrature"], row["strength"])]
            assert paired["meter_prob"] == pytest.approx(row["meter_prob"], abs=1e-9)

    def test_sorted(self):
        rows = sweep_rows(_config(devices=(Device.RR, Device.SAME),
                                  postselections=("paradox", "CA"), engine=Engine.BOTH))
        keys = [(r["device"], r["postselection"], r["quadrature"], r["engine"],
                 -1.0 if r["strength"] == WEAK_LIMIT else r["strength"]) for r in rows]
        assert keys == sorted(keys)
        assert rows[0]["device"] == "RR"


class TestViolationRows:
    def test_rows(self):
        rows = violation_rows((0.2, 0.5, 1.0))
        assert rows[0]["strength"] == WEAK_LIMIT
        assert rows[0]["delta"] == pytest.approx(0, abs=1e-12)
        assert rows[-1]["delta"] == pytest.approx(1 / 3, abs=1e-12)
        assert all(r["pigeonhole_violated"] for r in rows)
        assert all(r["classical_floor"] == pytest.approx(1 / 3) for r in rows)

    def test_delta_shrinks_with_strength(self):
        deltas = [r["delta"] for r in violation_rows(strength_grid(21))[1:]]
        assert deltas == sorted(deltas)
        assert deltas[0] < 1e-4

    def test_invalid_grid(self):
        with pytest.raises(SweepConfigError):
            violation_rows((0.0,))


class TestClassicalRows:
    def test_rows(self):
        rows = classical_rows(samples=1000, seed=0)
        assert [r["distribution"] for r in rows] == [
            "minimum:CCA", "point_CCC", "uniform8", "mixed6"
        ]
        exact = {r["distribution"]: r["same_pair_exact"] for r in rows}
        assert exact["minimum:CCA"] == pytest.approx(1 / 3)
        assert exact["point_CCC"] == pytest.approx(1.0)
        assert exact["uniform8"] == pytest.approx(0.5)
        assert exact["mixed6"] == pytest.approx(1 / 3)
        assert rows[1]["same_pair_sampled"] == 1.0
        assert all(r["samples"] == 1000 and r["seed"] == 0 for r in rows)


class TestRender:
    def test_format_value(self):
        assert format_value(0.1 + 0.2) == "0.3"
        assert format_value(-0.0) == "0"
        assert format_value(1 / 3) == "0.333333333333"
        assert format_value(True) == "true"
        assert format_value(WEAK_LIMIT) == WEAK_LIMIT
        assert format_value(7) == 7

    def test_csv_header(self):
        text = render([], SWEEP_COLUMNS, OutputFormat.CSV)
        assert text == ("device,postselection,quadrature,engine,strength,meter_prob,"
                        "system_value,success_prob\n")

    def test_csv_rows(self):
        text = render(violation_rows((1.0,)), VIOLATION_COLUMNS, OutputFormat.CSV)
        lines = text.splitlines()
        assert lines[0] == ("strength,direct_same_system,indirect_sum_system,delta,"
                            "classical_floor,pigeonhole_violated")
        weak = lines[1].split(",")
        assert weak[0] == "weak_limit"
        assert weak[-2:] == ["0.333333333333", "true"]
        full = lines[2].split(",")
        assert full[0] == "1"
        assert float(full[1]) == pytest.approx(0, abs=1e-12)
        assert full[2:] == ["0.333333333333"] * 3 + ["true"]
        assert "\r" not in text

    def test_json(self):
        text = render(classical_rows(100, 1), CLASSICAL_COLUMNS, "json")
        records = json.loads(text)
        assert list(records[0]) == list(CLASSICAL_COLUMNS)
        assert records[0]["same_pair_exact"] == 0.333333333333

    def test_write_output(self, tmp_path):
        path = tmp_path / "nested" / "out.csv"
        write_output("a,b\n", path)
        assert path.read_bytes() == b"a,b\n"

    def test_write_stdout(self, capsys):
        write_output("x\n", None)
        assert capsys.readouterr().out == "x\n"
