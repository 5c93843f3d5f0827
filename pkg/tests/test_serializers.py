"""
Unit tests for JSON and CSV output.
"""

import json

import pytest

from api import serializers
from core.exceptions import IoError
from models.dynamics import CycleStability, Direction, LimitCycle, Trajectory
from models.geometry import CurveLabel, CurveSample


def _cycle(x0: float) -> LimitCycle:
    return LimitCycle(
        x0=x0, period=70.0, stability=CycleStability.STABLE, slope=0.5,
        residual=1e-12, direction_found=Direction.FORWARD,
    )


class TestJson:
    """Document layout and number formatting."""

    def test_envelope(self):
        document = json.loads(serializers.dumps_json("equilibria", {"a": 1.0}, [1, 2]))
        assert document["schema_version"] == "1"
        assert document["command"] == "equilibria"
        assert document["config"] == {"a": 1.0}
        assert document["results"] == [1, 2]
        assert "warnings" not in document

    def test_seventeen_digits(self):
        text = serializers.dumps_json("x", {}, {"value": 0.1, "third": 1.0 / 3.0})
        assert "0.10000000000000001" in text
        assert "0.33333333333333331" in text
        assert json.loads(text)["results"]["third"] == 1.0 / 3.0

    def test_sorted_keys(self):
        text = serializers.dumps_json("x", {}, {"b": 1, "a": 2})
        assert text.index('"a"') < text.index('"b"')
        assert text.index('"command"') < text.index('"schema_version"')

    def test_non_finite(self):
        document = json.loads(serializers.dumps_json("x", {}, [float("nan"), float("inf"), -float("inf")]))
        assert document["results"] == ["nan", "inf", "-inf"]
        assert document["warnings"] == [serializers.NON_FINITE_WARNING]

    def test_empty_results(self):
        assert json.loads(serializers.dumps_json("cycles", {}, []))["results"] == []

    def test_models_unwrapped(self):
        document = json.loads(serializers.dumps_json("cycles", {}, [_cycle(1.2)]))
        assert document["results"][0]["stability"] == "stable"
        assert document["results"][0]["direction_found"] == "forward"

    def test_unknown_type(self):
        with pytest.raises(TypeError):
            serializers.dumps_json("x", {}, object())


class TestCsv:
    """Tables with a header row."""

    def test_trajectory(self):
        traj = Trajectory(t=[0.0, 0.5, 1.0], x=[1.0, 0.9, 0.8], y=[0.0, 0.1, 0.2])
        lines = serializers.dumps_csv(traj).splitlines()
        assert lines[0] == "t,x,y"
        assert len(lines) == 4
        assert lines[2].startswith("0.5,0.90000000000000002,")

    def test_cycles_sorted(self):
        lines = serializers.dumps_csv([_cycle(1.5), _cycle(1.2)]).splitlines()
        assert lines[0] == "x0,period,stability,slope"
        assert lines[1].startswith("1.2,")
        assert lines[2].startswith("1.5,")

    def test_empty_cycles(self):
        assert serializers.dumps_csv([]).splitlines() == ["x0,period,stability,slope"]

    def test_surface_rows(self):
        sample = CurveSample(label=CurveLabel.BS, points=[(float(i), 0.0, 1.0) for i in range(12)])
        lines = serializers.dumps_csv(sample).splitlines()
        assert lines[0] == "label,c0,c1,c2"
        assert len(lines) == 13
        assert lines[1].startswith("BS,")

    def test_no_tabular_form(self):
        with pytest.raises(TypeError, match="no tabular form"):
            serializers.dumps_csv({"a": 1})


class TestSerialize:
    """Writing files."""

    def test_writes_file(self, tmp_path):
        path = tmp_path / "out" / "result.json"
        text = serializers.serialize([1.0], "json", path, command="x")
        assert path.read_text(encoding="utf-8") == text

    def test_returns_text_without_path(self):
        assert serializers.serialize([_cycle(1.0)], serializers.OutputFormat.CSV, None).startswith("x0,")

    def test_unwritable(self, tmp_path):
        blocker = tmp_path / "file.txt"
        blocker.write_text("x")
        with pytest.raises(IoError):
            serializers.serialize([1.0], "json", blocker / "result.json")
