import io
import json
import math
import re

import numpy as np
import pandas as pd
import pytest
from typer.testing import CliRunner

from app.cli import app
from tests.conftest import example_tangent

runner = CliRunner()


def _csv(result) -> pd.DataFrame:
    return pd.read_csv(io.StringIO(result.stdout))


def _polyline(svg: str) -> np.ndarray:
    points = re.search(r'<polyline[^>]* points="([^"]+)"', svg).group(1)
    return np.array([[float(v) for v in pair.split(",")] for pair in points.split()])


def _view_box(svg: str) -> list[float]:
    return [float(v) for v in re.search(r'viewBox="([^"]+)"', svg).group(1).split()]


def _report(path) -> dict:
    data = json.loads(path.read_text(encoding="utf-8"))
    return {check["name"]: check for check in data["checks"]}


# --- АНАЛИЗ ---

def test_analyze_example_curvature():
    result = runner.invoke(app, ["analyze", "--catalog", "paper-example", "-n", "16"])
    assert result.exit_code == 0, result.stderr
    df = _csv(result)
    assert list(df.columns[:5]) == ["t", "s", "x", "y", "z"]
    assert len(df) == 16
    assert df["kappa"][0] == pytest.approx(math.sqrt(2), abs=1e-9)
    assert df["s"].iloc[-1] == pytest.approx(2 * math.pi, abs=1e-9)


def test_analyze_classifies_circle_and_helix(tmp_path):
    report = tmp_path / "circle.json"
    result = runner.invoke(app, ["analyze", "--catalog", "circle", "-n", "16", "--report", str(report)])
    assert result.exit_code == 0
    assert _report(report)["helix.kind"]["value"] == "planar"

    report = tmp_path / "helix.json"
    result = runner.invoke(app, ["analyze", "--catalog", "circular-helix:1,1", "-n", "16",
                                 "--report", str(report)])
    assert result.exit_code == 0
    checks = _report(report)
    assert checks["helix.kind"]["value"] == "circular"
    assert checks["helix.kappa"]["value"] == pytest.approx(0.5, abs=1e-9)
    assert checks["helix.tau"]["value"] == pytest.approx(0.5, abs=1e-9)


def test_analyze_writes_csv_file(tmp_path):
    out = tmp_path / "helix.csv"
    result = runner.invoke(app, ["analyze", "--catalog", "circular-helix", "-n", "8", "-o", str(out)])
    assert result.exit_code == 0
    assert result.stdout == ""
    assert len(pd.read_csv(out)) == 8


def test_spec_file_input(tmp_path):
    spec = tmp_path / "helix.curve"
    spec.write_text('x = "cos(t)"\ny = "sin(t)"\nz = "t"\ndomain = 0 6\n', encoding="utf-8")
    result = runner.invoke(app, ["analyze", "--spec", str(spec), "-n", "8"])
    assert result.exit_code == 0, result.stderr
    np.testing.assert_allclose(_csv(result)["tau"], 0.5, atol=1e-9)


# --- ИНДИКАТРИСА ---

def test_tangent_indicatrix_of_example():
    n = 24
    result = runner.invoke(app, ["indicatrix", "--catalog", "paper-example", "--which", "T", "-n", str(n)])
    assert result.exit_code == 0, result.stderr
    df = _csv(result)
    expected = np.array([example_tangent(float(s)) for s in np.linspace(0.0, 2 * math.pi, n)])
    np.testing.assert_allclose(df[["gx", "gy", "gz"]].to_numpy(), expected, atol=1e-9)
    assert df["sigma"].is_monotonic_increasing


def test_tangent_indicatrix_of_helix_is_small_circle():
    result = runner.invoke(app, ["indicatrix", "--catalog", "circular-helix:1,1", "--which", "t", "-n", "16"])
    assert result.exit_code == 0
    np.testing.assert_allclose(_csv(result)["kappa_g"], 1.0, atol=1e-7)


def test_degenerate_indicatrix_is_skipped(tmp_path):
    report = tmp_path / "report.json"
    result = runner.invoke(app, ["indicatrix", "--catalog", "circular-helix:1,1", "--which", "C",
                                 "-n", "16", "--report", str(report)])
    assert result.exit_code == 0
    assert result.stdout.strip() == "sigma,gx,gy,gz,kappa_g"
    assert _report(report)["indicatrix.C"]["status"] == "SKIP"


# --- БЕРТРАН ---

def test_bertrand_from_example_tangent(tmp_path):
    report = tmp_path / "report.json"
    result = runner.invoke(app, ["bertrand", "--catalog", "paper-example", "--domain", "0", str(math.pi),
                                 "--which", "T", "-n", "64", "--report", str(report)])
    assert result.exit_code == 0, result.stderr
    df = _csv(result)
    assert list(df.columns) == ["sigma", "x", "y", "z", "kappa", "tau"]
    checks = _report(report)
    for name in ("bertrand.fit", "bertrand.coefficients", "bertrand.speed", "bertrand.normal-alignment"):
        assert checks[name]["status"] == "PASS", checks[name]


def test_bertrand_from_helix_is_circular(tmp_path):
    report = tmp_path / "report.json"
    result = runner.invoke(app, ["bertrand", "--catalog", "circular-helix:1,1", "--theta", str(math.pi / 3),
                                 "-n", "32", "--report", str(report)])
    assert result.exit_code == 0, result.stderr
    assert _report(report)["bertrand.helix-kind"]["value"] == "circular"


def test_bertrand_right_angle_on_circle():
    result = runner.invoke(app, ["bertrand", "--catalog", "circle", "--which", "P", "--theta", str(math.pi / 2),
                                 "--a", "2", "-n", "33"])
    assert result.exit_code == 0, result.stderr
    ring = _csv(result)[["x", "y", "z"]].to_numpy()[:-1]
    np.testing.assert_allclose(np.linalg.norm(ring - ring.mean(axis=0), axis=1), 2.0, atol=1e-8)


def test_bertrand_rejects_bad_parameters():
    result = runner.invoke(app, ["bertrand", "--catalog", "circle", "--a", "0"])
    assert result.exit_code == 2
    result = runner.invoke(app, ["bertrand", "--catalog", "circle", "--c", "1,2"])
    assert result.exit_code == 2


# --- ПРОВЕРКИ ---

def test_verify_helix():
    result = runner.invoke(app, ["verify", "--catalog", "circular-helix:2,1", "-n", "48"])
    assert result.exit_code == 0, result.stderr
    report = json.loads(result.stdout)
    assert report["input_digest"]
    assert all(check["status"] != "FAIL" for check in report["checks"])


def test_verify_circle_corollaries():
    result = runner.invoke(app, ["verify", "--catalog", "circle", "--suite", "corollaries", "-n", "48"])
    assert result.exit_code == 0, result.stderr
    checks = {c["name"]: c["status"] for c in json.loads(result.stdout)["checks"]}
    assert checks["corollary2.circular-helix"] == "PREMISE-NOT-MET"
    assert checks["corollary5.bertrand-fit"] == "PREMISE-NOT-MET"


def test_verify_unknown_suite():
    result = runner.invoke(app, ["verify", "--catalog", "circle", "--suite", "everything"])
    assert result.exit_code == 2


# --- КОДЫ ВЫХОДА ---

@pytest.mark.parametrize("args", [
    ["analyze", "--catalog", "no-such-curve"],
    ["analyze"],
    ["analyze", "--catalog", "circle", "--domain", "1", "0"],
    ["analyze", "--catalog", "circle", "-n", "4"],
])
def test_bad_input_exits_with_2(args):
    assert runner.invoke(app, args).exit_code == 2


def test_bad_spec_file_exits_with_2(tmp_path):
    spec = tmp_path / "bad.curve"
    spec.write_text('x = "t +"\ny = "0"\nz = "0"\ndomain = 0 1\n', encoding="utf-8")
    result = runner.invoke(app, ["analyze", "--spec", str(spec)])
    assert result.exit_code == 2
    assert result.stdout == ""


def test_straight_line_exits_with_3():
    result = runner.invoke(app, ["analyze", "--catalog", "line", "-n", "8"])
    assert result.exit_code == 3
    assert "InflectionPoint" in result.stderr


# --- ГРАФИК ---

def test_plot_circle_fills_its_box():
    result = runner.invoke(app, ["plot", "--catalog", "circle", "--projection", "xy", "-n", "256"])
    assert result.exit_code == 0, result.stderr
    svg = result.stdout
    assert svg.startswith("<?xml")
    assert re.search(r'<polyline id="circle-1"', svg)
    assert "nan" not in svg
    pts = _polyline(svg)
    assert pts[:, 0].min() == pytest.approx(-1.0, abs=0.02)
    assert pts[:, 0].max() == pytest.approx(1.0, abs=0.02)
    x0, y0, w, h = _view_box(svg)
    assert x0 < pts[:, 0].min() and x0 + w > pts[:, 0].max()
    assert y0 < pts[:, 1].min() and y0 + h > pts[:, 1].max()


def test_plot_indicatrix_stays_on_unit_disc():
    result = runner.invoke(app, ["plot", "--catalog", "paper-example", "--which", "N", "-n", "64"])
    assert result.exit_code == 0, result.stderr
    assert 'id="unit-sphere"' in result.stdout
    assert np.all(np.hypot(*_polyline(result.stdout).T) <= 1.0 + 1e-6)


def test_plot_csv_round_trip(tmp_path):
    table = tmp_path / "helix.csv"
    runner.invoke(app, ["analyze", "--catalog", "circular-helix", "-n", "32", "-o", str(table)])
    first = runner.invoke(app, ["plot", "--csv", str(table)])
    second = runner.invoke(app, ["plot", "--csv", str(table)])
    assert first.exit_code == 0, first.stderr
    assert first.stdout == second.stdout
    assert len(_polyline(first.stdout)) == 32


def test_plot_rejects_malformed_csv(tmp_path):
    table = tmp_path / "broken.csv"
    table.write_text("a,b\n1,2\n", encoding="utf-8")
    assert runner.invoke(app, ["plot", "--csv", str(table)]).exit_code == 2
    result = runner.invoke(app, ["plot", "--csv", str(table), "--catalog", "circle"])
    assert result.exit_code == 2
