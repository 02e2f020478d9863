import json

import pytest

import airswarm.cli as cli
from airswarm.errors import SimulationAborted
from airswarm.scenario import resolve_scenario_path


@pytest.fixture
def short_scenario(tmp_path):
    data = json.loads(resolve_scenario_path("waypoint_v3.json").read_text())
    data["duration_s"] = 20
    p = tmp_path / "short.json"
    p.write_text(json.dumps(data))
    return p


def test_validate_bundled(capsys):
    assert cli.main(["validate", "waypoint_v3.json"]) == 0
    assert "ok" in capsys.readouterr().out


def test_run_missing_file(capsys):
    assert cli.main(["run", "missing.json"]) == 1
    assert "missing.json" in capsys.readouterr().err


def test_validate_bad_scenario(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"approach": "formation"}))
    assert cli.main(["validate", str(p)]) == 1
    assert "duration_s" in capsys.readouterr().err


def test_run_writes_artifacts(short_scenario, tmp_path):
    out = tmp_path / "out"
    assert cli.main(["run", str(short_scenario), "--seed", "7", "--out", str(out)]) == 0
    assert {p.name for p in out.iterdir()} == {"trace.csv", "metrics.json", "trajectory.svg"}


def test_run_twice_identical(short_scenario, tmp_path):
    for d in ("a", "b"):
        assert cli.main(["run", str(short_scenario), "--seed", "7", "--out", str(tmp_path / d)]) == 0
    for name in ("trace.csv", "metrics.json", "trajectory.svg"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_metrics_and_plot(short_scenario, tmp_path, capsys):
    out = tmp_path / "out"
    cli.main(["run", str(short_scenario), "--out", str(out)])
    capsys.readouterr()
    assert cli.main(["metrics", str(out / "trace.csv"), "--transient", "5",
                     "--json", str(tmp_path / "m.json")]) == 0
    assert "followers" in capsys.readouterr().out
    assert json.loads((tmp_path / "m.json").read_text())["transient_s"] == 5.0
    assert cli.main(["plot", str(out / "trace.csv"), "--svg", str(tmp_path / "p.svg")]) == 0
    assert (tmp_path / "p.svg").stat().st_size > 0
    assert cli.main(["metrics", str(tmp_path / "nope.csv")]) == 1


def test_runtime_error_exit_code(short_scenario, tmp_path, monkeypatch, capsys):
    def boom(scenario, seed=None):
        raise SimulationAborted("non-finite state", 12)

    monkeypatch.setattr(cli, "run_simulation", boom)
    assert cli.main(["run", str(short_scenario), "--out", str(tmp_path)]) == 2
    assert "step 12" in capsys.readouterr().err


def test_seed_range():
    assert cli.main(["run", "waypoint_v3.json", "--seed", str(2**64)]) == 1


def test_usage_errors_exit_1(capsys):
    assert cli.main(["bogus"]) == 1
    assert cli.main(["run", "waypoint_v3", "--seed", "x"]) == 1
    assert cli.main(["plot", "t.csv"]) == 1
    assert cli.main(["--help"]) == 0
