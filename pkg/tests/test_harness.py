"""Experiment harness: aggregation, config files, artifacts, CLI."""

from __future__ import annotations

import configparser
import csv
import math
import textwrap

import numpy as np
import pytest

from pushtrack.harness import (
    ExperimentConfig,
    aggregate,
    build_scenario,
    dump_defaults,
    experiment_config_from_file,
    load_scenario_file,
    main,
    run_experiment,
)
from pushtrack.scenario import MethodResult, Scenario


def mk(method, times, pos, rot=None):
    times = np.asarray(times, dtype=float)
    pos = np.asarray(pos, dtype=float)
    rot = np.zeros_like(pos) if rot is None else np.asarray(rot, dtype=float)
    return MethodResult(method, times, np.zeros((len(times), 7)), pos, rot)


TINY_SCENARIO = textwrap.dedent(
    """\
    [scene]
    half_extents = 0.06 0.045
    height = 0.12
    pusher_radius = 0.01

    [params]
    contact_friction = 0.8
    support_friction = 0.4
    restitution = 0.5
    mass = 0.38

    [observer]
    sigma_pos = 0.0
    sigma_rot = 0.0
    outlier_rate = 0.0

    [run]
    duration = 0.6
    initial_pose = 0.0 0.0 0.06 1.0 0.0 0.0 0.0
    pusher_start = -0.075 0.006 0.06 0.0
    segments = 0.05 0.0 0.0 0.0 0.6
    """
)


# ---------------------------------------------------------------------------
# experiment config

def test_experiment_config_validation():
    with pytest.raises(ValueError, match="run count must be at least 1"):
        ExperimentConfig(runs=0)
    with pytest.raises(ValueError, match="no methods requested"):
        ExperimentConfig(methods=())
    with pytest.raises(ValueError, match="unknown method: 'ekf'"):
        ExperimentConfig(methods=("pbpf", "ekf"))
    with pytest.raises(ValueError, match="particle count"):
        ExperimentConfig(particles=0)
    with pytest.raises(ValueError, match="update interval"):
        ExperimentConfig(dt=-0.1)


def test_filter_config_inherits_overrides():
    cfg = ExperimentConfig(particles=12, dt=0.08).filter_config()
    assert cfg.m == 12 and cfg.dt == 0.08
    default = ExperimentConfig().filter_config()
    assert default.m == 70 and default.dt == 0.16


# ---------------------------------------------------------------------------
# aggregation

def test_aggregate_single_constant_run():
    rep = aggregate({"snapshot": [mk("snapshot", [0.0, 0.02], [0.1, 0.1])]})
    pm, ps, rm, rs = rep.summary["snapshot"]
    assert pm == pytest.approx(0.1, abs=1e-15)
    assert ps == pytest.approx(0.0, abs=1e-15)
    assert rep.runs == 1
    assert np.all(rep.series["snapshot"][:, 1] == 0.0)  # single-run band is zero


def test_aggregate_two_run_confidence_band():
    rep = aggregate(
        {"pbpf": [mk("pbpf", [0.0], [0.1]), mk("pbpf", [0.0], [0.3])]}
    )
    want = 1.96 * np.std([0.1, 0.3], ddof=1) / math.sqrt(2)
    assert abs(rep.series["pbpf"][0, 1] - want) < 1e-12
    assert abs(want - 0.196) < 1e-3
    assert rep.summary["pbpf"][0] == pytest.approx(0.2, abs=1e-15)


def test_aggregate_rejects_bad_inputs():
    with pytest.raises(ValueError, match="nothing to aggregate"):
        aggregate({})
    with pytest.raises(ValueError, match="nothing to aggregate for method 'cvpf'"):
        aggregate({"pbpf": [mk("pbpf", [0.0], [0.1])], "cvpf": []})
    with pytest.raises(ValueError, match="different numbers of runs"):
        aggregate(
            {
                "pbpf": [mk("pbpf", [0.0], [0.1])],
                "cvpf": [mk("cvpf", [0.0], [0.1]), mk("cvpf", [0.0], [0.2])],
            }
        )
    with pytest.raises(ValueError, match="misaligned time grids"):
        aggregate(
            {
                "pbpf": [mk("pbpf", [0.0], [0.1])],
                "cvpf": [mk("cvpf", [0.02], [0.1])],
            }
        )


def test_aggregate_is_order_invariant():
    a = mk("pbpf", [0.0, 0.02], [0.1, 0.2])
    b = mk("cvpf", [0.0, 0.02], [0.3, 0.4])
    r1 = aggregate({"pbpf": [a], "cvpf": [b]})
    r2 = aggregate({"cvpf": [b], "pbpf": [a]})
    assert r1.summary == r2.summary


# ---------------------------------------------------------------------------
# config files

def test_defaults_template_parses_and_pins_the_tuning():
    cp = configparser.ConfigParser()
    cp.read_string(dump_defaults())
    assert cp.getint("pbpf", "particles") == 70
    assert cp.getfloat("pbpf", "dt") == 0.16
    assert cp.getint("cvpf", "particles") == 200
    assert cp.getfloat("cvpf", "dt") == 0.02
    assert cp.getint("experiment", "runs") == 10
    assert cp.get("experiment", "scene") == "scene1"


def test_scenario_file_round_trip(tmp_path):
    path = tmp_path / "scn.ini"
    body = TINY_SCENARIO.replace(
        "outlier_rate = 0.0",
        "outlier_rate = 0.0\nwindows = 0.1:0.2 0.3:0.4",
    ).replace(
        "pusher_radius = 0.01",
        "pusher_radius = 0.01\nobstacles = 0.25 0.0 0.01 0.02 0.3",
    )
    path.write_text(body)
    s = load_scenario_file(str(path), seed=5)
    assert isinstance(s, Scenario)
    assert s.seed == 5
    assert s.duration == 0.6
    assert s.scene.obstacles[0].yaw == 0.3
    assert s.observer.occlusion_windows == ((0.1, 0.2), (0.3, 0.4))
    assert s.true_params.contact_friction == 0.8
    assert len(s.script) == 1
    assert np.allclose(s.script[0].displacement, [0.05, 0.0, 0.0])


def test_scenario_file_error_reporting(tmp_path):
    path = tmp_path / "scn.ini"
    path.write_text(TINY_SCENARIO.replace("contact_friction = 0.8\n", ""))
    with pytest.raises(ValueError, match=r"missing \[params\] contact_friction"):
        load_scenario_file(str(path), seed=0)

    path.write_text(TINY_SCENARIO.replace("0.06 0.045", "0.06 banana"))
    with pytest.raises(ValueError, match="not a number"):
        load_scenario_file(str(path), seed=0)

    path.write_text(TINY_SCENARIO.replace("0.06 0.045", "0.06"))
    with pytest.raises(ValueError, match="expected 2 numbers, got 1"):
        load_scenario_file(str(path), seed=0)

    path.write_text(
        TINY_SCENARIO.replace("outlier_rate = 0.0", "outlier_rate = 0.0\nwindows = 1-2")
    )
    with pytest.raises(ValueError, match="expected start:end"):
        load_scenario_file(str(path), seed=0)

    with pytest.raises(ValueError, match="cannot read scenario file"):
        load_scenario_file(str(tmp_path / "absent.ini"), seed=0)


def test_experiment_config_from_file(tmp_path):
    path = tmp_path / "exp.ini"
    path.write_text(
        textwrap.dedent(
            """\
            [experiment]
            scene = scene3
            methods = pbpf, snapshot
            runs = 4
            seed = 11
            out = results

            [pbpf]
            particles = 25
            dt = 0.08
            """
        )
    )
    cfg = experiment_config_from_file(str(path))
    assert cfg.scene == "scene3"
    assert cfg.methods == ("pbpf", "snapshot")
    assert cfg.runs == 4 and cfg.seed == 11 and cfg.out == "results"
    assert cfg.particles == 25 and cfg.dt == 0.08

    with pytest.raises(ValueError, match="cannot read config file"):
        experiment_config_from_file(str(tmp_path / "absent.ini"))


def test_build_scenario_accepts_presets_and_files(tmp_path):
    assert build_scenario("scene3", 0).duration == 9.0
    path = tmp_path / "scn.ini"
    path.write_text(TINY_SCENARIO)
    assert build_scenario(str(path), 0).duration == 0.6
    with pytest.raises(ValueError, match="unknown scene preset or missing file"):
        build_scenario("scene9", 0)


# ---------------------------------------------------------------------------
# artifacts

def test_experiment_writes_the_full_artifact_set(tmp_path):
    scn = tmp_path / "scn.ini"
    scn.write_text(TINY_SCENARIO)
    out = tmp_path / "out"
    cfg = ExperimentConfig(
        scene=str(scn), methods=("snapshot",), runs=1, seed=0, out=str(out)
    )
    report = run_experiment(cfg)

    # a perfect observer makes the snapshot tracker exact
    assert report.summary["snapshot"][0] == 0.0

    for rel in ("logs/run_00.csv", "errors/run_00.csv", "aggregate.csv",
                "timeseries.csv", "manifest.txt"):
        assert (out / rel).exists(), rel
    manifest = (out / "manifest.txt").read_text().splitlines()
    assert manifest == [
        "logs/run_00.csv", "errors/run_00.csv", "aggregate.csv", "timeseries.csv"
    ]

    # the summary must be recomputable from the per-run error table
    with open(out / "errors" / "run_00.csv", newline="") as f:
        rows = list(csv.DictReader(f))
    pos = [float(r["pos_err_m"]) for r in rows if r["method"] == "snapshot"]
    assert abs(np.mean(pos) - report.summary["snapshot"][0]) < 1e-12
    assert len(pos) == 31  # 0.6 s at 0.02 s frames, inclusive of frame 0

    with open(out / "aggregate.csv", newline="") as f:
        agg = list(csv.DictReader(f))
    assert agg[0]["method"] == "snapshot"
    assert float(agg[0]["pos_mean"]) == 0.0


def test_experiment_artifacts_are_deterministic(tmp_path):
    scn = tmp_path / "scn.ini"
    scn.write_text(
        TINY_SCENARIO.replace("sigma_pos = 0.0", "sigma_pos = 0.004").replace(
            "sigma_rot = 0.0", "sigma_rot = 0.03"
        )
    )
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        cfg = ExperimentConfig(
            scene=str(scn), methods=("snapshot", "cvpf"), runs=2, seed=3, out=str(out)
        )
        run_experiment(cfg)
        outs.append(out)
    for rel in ("aggregate.csv", "timeseries.csv", "logs/run_00.csv",
                "logs/run_01.csv", "errors/run_00.csv"):
        assert (outs[0] / rel).read_bytes() == (outs[1] / rel).read_bytes(), rel


def test_runs_use_distinct_seeds(tmp_path):
    scn = tmp_path / "scn.ini"
    scn.write_text(TINY_SCENARIO.replace("sigma_pos = 0.0", "sigma_pos = 0.004"))
    out = tmp_path / "out"
    cfg = ExperimentConfig(
        scene=str(scn), methods=("snapshot",), runs=2, seed=0, out=str(out)
    )
    run_experiment(cfg)
    a = (out / "logs" / "run_00.csv").read_bytes()
    b = (out / "logs" / "run_01.csv").read_bytes()
    assert a != b


# ---------------------------------------------------------------------------
# CLI

def test_cli_dump_defaults(capsys):
    assert main(["dump-defaults"]) == 0
    text = capsys.readouterr().out
    cp = configparser.ConfigParser()
    cp.read_string(text)
    assert cp.getint("pbpf", "particles") == 70


def test_cli_reports_errors_on_stderr(capsys):
    assert main(["compare", "--scene", "scene9", "--runs", "1"]) == 1
    err = capsys.readouterr().err
    assert err.startswith("error:")
    assert "scene9" in err


def test_cli_generate_then_replay(tmp_path, capsys):
    scn = tmp_path / "scn.ini"
    scn.write_text(TINY_SCENARIO)
    out = tmp_path / "gen"
    assert main(
        ["generate", "--scene", str(scn), "--runs", "1", "--out", str(out)]
    ) == 0
    assert "wrote 1 run logs" in capsys.readouterr().out
    log_path = out / "logs" / "run_00.csv"
    assert log_path.exists()

    rep_out = tmp_path / "rep"
    code = main(
        ["replay", str(log_path), "--methods", "snapshot", "--out", str(rep_out)]
    )
    assert code == 0
    text = capsys.readouterr().out
    assert "snapshot: mean pos err 0.0000 m" in text
    assert (rep_out / "run_00_errors.csv").exists()


def test_cli_compare_flow(tmp_path, capsys):
    scn = tmp_path / "scn.ini"
    scn.write_text(TINY_SCENARIO)
    out = tmp_path / "cmp"
    code = main(
        [
            "compare", "--scene", str(scn), "--runs", "1", "--out", str(out),
            "--methods", "snapshot,cvpf",
        ]
    )
    assert code == 0
    text = capsys.readouterr().out
    assert text.splitlines()[0].startswith("snapshot: pos 0.0000")
    assert (out / "aggregate.csv").exists()
    assert (out / "timeseries.csv").exists()
