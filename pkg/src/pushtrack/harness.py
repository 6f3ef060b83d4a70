"""Command-line experiment harness.

Verbs: generate (record run logs), replay (run one method over a saved
log), compare (generate + replay all requested methods + aggregate), and
dump-defaults (print the full config template).  Everything the harness
writes is plain text: run logs, per-run error CSVs, an aggregate summary,
a per-timestep mean/CI table, and a manifest listing every artifact,
written last so a missing manifest flags an interrupted run.

Repeating a verb with the same config and seed reproduces every output
file byte for byte.
"""

from __future__ import annotations

import argparse
import configparser
import os
import sys
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import streams
from .baselines import CvpfConfig
from .filter import FilterConfig
from .geometry import NoiseSpec, Pose
from .observer import ObserverSpec
from .physics import Control, Obstacle, PhysicsParams, SceneModel
from .scenario import (
    METHODS,
    MethodResult,
    RunLog,
    Scenario,
    generate_run,
    make_preset,
    PRESETS,
    replay,
)


@dataclass(frozen=True)
class ExperimentConfig:
    scene: str = "scene1"
    methods: tuple[str, ...] = METHODS
    runs: int = 10
    seed: int = 0
    out: str = "out"
    particles: int | None = None
    dt: float | None = None
    workers: int | None = None

    def __post_init__(self) -> None:
        if self.runs < 1:
            raise ValueError("run count must be at least 1")
        if not self.methods:
            raise ValueError("no methods requested")
        for m in self.methods:
            if m not in METHODS:
                raise ValueError(f"unknown method: {m!r}")
        if self.particles is not None and self.particles < 1:
            raise ValueError("particle count must be at least 1")
        if self.dt is not None and self.dt <= 0:
            raise ValueError("update interval must be positive")

    def filter_config(self) -> FilterConfig:
        kw = {}
        if self.particles is not None:
            kw["m"] = self.particles
        if self.dt is not None:
            kw["dt"] = self.dt
        return FilterConfig(**kw)


@dataclass(eq=False)
class AggregateReport:
    """Pooled error statistics plus the per-timestep mean/CI series."""

    runs: int
    summary: dict[str, tuple[float, float, float, float]]
    times: np.ndarray
    series: dict[str, np.ndarray] = field(default_factory=dict)


def aggregate(runs_by_method: Mapping[str, Sequence[MethodResult]]) -> AggregateReport:
    """Pool per-run error series into one report.

    Rows must share one time grid; the per-timestep 95% band is the
    normal approximation 1.96 * std / sqrt(runs) with sample std across
    runs (zero half-width for a single run).
    """
    if not runs_by_method or not any(len(v) for v in runs_by_method.values()):
        raise ValueError("nothing to aggregate")
    ref_times = None
    n_runs = None
    for method, results in runs_by_method.items():
        if not results:
            raise ValueError(f"nothing to aggregate for method {method!r}")
        if n_runs is None:
            n_runs = len(results)
        elif len(results) != n_runs:
            raise ValueError("methods cover different numbers of runs")
        for r in results:
            if ref_times is None:
                ref_times = r.times
            elif r.times.shape != ref_times.shape or not np.array_equal(r.times, ref_times):
                raise ValueError("misaligned time grids across runs")

    summary: dict[str, tuple[float, float, float, float]] = {}
    series: dict[str, np.ndarray] = {}
    for method, results in runs_by_method.items():
        pos = np.stack([r.pos_err for r in results])
        rot = np.stack([r.rot_err for r in results])
        ddof = 1 if pos.size > 1 else 0
        summary[method] = (
            float(pos.mean()),
            float(pos.std(ddof=ddof)),
            float(rot.mean()),
            float(rot.std(ddof=ddof)),
        )
        table = np.empty((len(ref_times), 4))
        table[:, 0] = pos.mean(axis=0)
        table[:, 2] = rot.mean(axis=0)
        if n_runs > 1:
            table[:, 1] = 1.96 * pos.std(axis=0, ddof=1) / np.sqrt(n_runs)
            table[:, 3] = 1.96 * rot.std(axis=0, ddof=1) / np.sqrt(n_runs)
        else:
            table[:, 1] = 0.0
            table[:, 3] = 0.0
        series[method] = table
    return AggregateReport(runs=n_runs, summary=summary, times=ref_times, series=series)


# ---------------------------------------------------------------------------
# config files

_DEFAULTS_TEMPLATE = """\
[experiment]
scene = scene1
methods = pbpf,cvpf,snapshot
runs = 10
seed = 0
out = out

[pbpf]
particles = 70
dt = 0.16
motion_sigma_pos = 0.005
motion_sigma_rot = 0.05
obs_sigma_pos = 0.02
obs_sigma_rot = 0.09
init_sigma_x = 0.07
init_sigma_y = 0.02
init_sigma_z = 0.01
init_sigma_rot = 0.04
prior_contact_friction = 0.1 0.3
prior_support_friction = 0.1 0.3
prior_restitution = 0.9 0.2
prior_mass = 0.38 0.5

[cvpf]
particles = 200
dt = 0.02

[scene]
half_extents = 0.06 0.045
height = 0.12
pusher_radius = 0.01
gravity = 9.81
obstacles =

[params]
contact_friction = 0.3
support_friction = 0.4
restitution = 0.5
mass = 0.38

[observer]
sigma_pos = 0.02
sigma_rot = 0.09
outlier_rate = 0.05
outlier_sigma_pos = 0.15
outlier_sigma_rot = 0.8
frame_period = 0.02
windows =

[run]
duration = 15.0
initial_pose = 0.0 0.0 0.06 1.0 0.0 0.0 0.0
pusher_start = -0.075 0.0 0.06 0.0
segments = 0.30 0.0 0.0 0.0 15.0
"""


def dump_defaults() -> str:
    return _DEFAULTS_TEMPLATE


def _floats(raw: str, n: int, where: str) -> list[float]:
    parts = raw.split()
    if len(parts) != n:
        raise ValueError(f"{where}: expected {n} numbers, got {len(parts)}")
    try:
        return [float(p) for p in parts]
    except ValueError:
        raise ValueError(f"{where}: not a number: {raw!r}") from None


def load_scenario_file(path: str, seed: int) -> Scenario:
    """Build a Scenario from a key-value config file (see dump-defaults
    for the template).  The seed comes from the caller, not the file, so
    one file serves a whole batch of runs."""
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    read = cp.read(path)
    if not read:
        raise ValueError(f"cannot read scenario file: {path}")

    def need(section: str, key: str) -> str:
        try:
            return cp.get(section, key)
        except (configparser.NoSectionError, configparser.NoOptionError):
            raise ValueError(f"{path}: missing [{section}] {key}") from None

    where = f"{path} [scene]"
    half = _floats(need("scene", "half_extents"), 2, where)
    obstacles = []
    raw_obs = cp.get("scene", "obstacles", fallback="").strip()
    if raw_obs:
        for chunk in raw_obs.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            v = _floats(chunk, 5, where + " obstacles")
            obstacles.append(Obstacle(v[0:2], v[2:4], v[4]))
    scene = SceneModel(
        half_extents=half,
        height=float(need("scene", "height")),
        pusher_radius=float(need("scene", "pusher_radius")),
        gravity=cp.getfloat("scene", "gravity", fallback=9.81),
        obstacles=tuple(obstacles),
    )
    params = PhysicsParams(
        float(need("params", "contact_friction")),
        float(need("params", "support_friction")),
        float(need("params", "restitution")),
        float(need("params", "mass")),
    )

    windows = []
    raw_win = cp.get("observer", "windows", fallback="").strip()
    if raw_win:
        for chunk in raw_win.replace(",", " ").split():
            a, sep, b = chunk.partition(":")
            if not sep:
                raise ValueError(f"{path} [observer] windows: expected start:end, got {chunk!r}")
            windows.append((float(a), float(b)))
    observer = ObserverSpec(
        noise=NoiseSpec(
            cp.getfloat("observer", "sigma_pos", fallback=0.02),
            cp.getfloat("observer", "sigma_rot", fallback=0.09),
        ),
        occlusion_windows=tuple(windows),
        outlier_rate=cp.getfloat("observer", "outlier_rate", fallback=0.05),
        outlier_magnitude=NoiseSpec(
            cp.getfloat("observer", "outlier_sigma_pos", fallback=0.15),
            cp.getfloat("observer", "outlier_sigma_rot", fallback=0.8),
        ),
        frame_period=cp.getfloat("observer", "frame_period", fallback=0.02),
    )

    where = f"{path} [run]"
    pose_row = _floats(need("run", "initial_pose"), 7, where)
    initial_pose = Pose(pose_row[0:3], pose_row[3:7])
    start = _floats(need("run", "pusher_start"), 4, where)
    script: list[Control] = []
    raw_seg = cp.get("run", "segments", fallback="").strip()
    pos = np.array(start[0:3])
    yaw = start[3]
    if raw_seg:
        for chunk in raw_seg.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            v = _floats(chunk, 5, where + " segments")
            ctl = Control(v[0:3], v[3], v[4], pos, yaw)
            script.append(ctl)
            pos, yaw = ctl.end_position, ctl.end_yaw
    return Scenario(
        scene=scene,
        true_params=params,
        script=tuple(script),
        observer=observer,
        seed=seed,
        duration=float(need("run", "duration")),
        initial_pose=initial_pose,
    )


def build_scenario(scene: str, seed: int) -> Scenario:
    if scene in PRESETS:
        return make_preset(scene, seed)
    if os.path.exists(scene):
        return load_scenario_file(scene, seed)
    raise ValueError(f"unknown scene preset or missing file: {scene!r}")


def experiment_config_from_file(path: str) -> ExperimentConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    if not cp.read(path):
        raise ValueError(f"cannot read config file: {path}")
    kw = {}
    if cp.has_section("experiment"):
        sec = cp["experiment"]
        if "scene" in sec:
            kw["scene"] = sec["scene"]
        if "methods" in sec:
            kw["methods"] = tuple(m.strip() for m in sec["methods"].split(",") if m.strip())
        if "runs" in sec:
            kw["runs"] = sec.getint("runs")
        if "seed" in sec:
            kw["seed"] = sec.getint("seed")
        if "out" in sec:
            kw["out"] = sec["out"]
    if cp.has_section("pbpf"):
        sec = cp["pbpf"]
        if "particles" in sec:
            kw["particles"] = sec.getint("particles")
        if "dt" in sec:
            kw["dt"] = sec.getfloat("dt")
    return ExperimentConfig(**kw)


# ---------------------------------------------------------------------------
# artifacts

def _r(v: float) -> str:
    return repr(float(v))


def _write_error_csv(path: str, results: Sequence[MethodResult]) -> None:
    with open(path, "w", newline="") as f:
        f.write("t,method,pos_err_m,rot_err_rad\n")
        for r in results:
            for j in range(len(r.times)):
                f.write(
                    f"{_r(r.times[j])},{r.method},{_r(r.pos_err[j])},{_r(r.rot_err[j])}\n"
                )


def _write_aggregate_csv(path: str, report: AggregateReport, order: Sequence[str]) -> None:
    with open(path, "w", newline="") as f:
        f.write("method,pos_mean,pos_std,rot_mean,rot_std\n")
        for method in order:
            pm, ps, rm, rs = report.summary[method]
            f.write(f"{method},{_r(pm)},{_r(ps)},{_r(rm)},{_r(rs)}\n")


def _write_timeseries_csv(path: str, report: AggregateReport, order: Sequence[str]) -> None:
    with open(path, "w", newline="") as f:
        f.write(f"# per-timestep mean over {report.runs} runs;"
                " 95% band = 1.96*std/sqrt(runs), normal approximation\n")
        f.write("t,method,pos_mean,pos_ci,rot_mean,rot_ci\n")
        for method in order:
            table = report.series[method]
            for j in range(len(report.times)):
                f.write(
                    f"{_r(report.times[j])},{method},{_r(table[j, 0])},"
                    f"{_r(table[j, 1])},{_r(table[j, 2])},{_r(table[j, 3])}\n"
                )


def run_experiment(cfg: ExperimentConfig) -> AggregateReport:
    """Generate run logs, replay every requested method on each, and
    write the full artifact set under cfg.out."""
    os.makedirs(cfg.out, exist_ok=True)
    logs_dir = os.path.join(cfg.out, "logs")
    errors_dir = os.path.join(cfg.out, "errors")
    os.makedirs(logs_dir, exist_ok=True)
    os.makedirs(errors_dir, exist_ok=True)

    manifest: list[str] = []
    runs_by_method: dict[str, list[MethodResult]] = {m: [] for m in cfg.methods}
    pbpf_cfg = cfg.filter_config()
    for i in range(cfg.runs):
        scenario = build_scenario(cfg.scene, streams.run_seed(cfg.seed, i))
        log = generate_run(scenario)
        log_path = os.path.join(logs_dir, f"run_{i:02d}.csv")
        log.save(log_path)
        manifest.append(os.path.relpath(log_path, cfg.out))
        per_run: list[MethodResult] = []
        for method in cfg.methods:
            config = pbpf_cfg if method == "pbpf" else None
            result = replay(log, method, config=config, workers=cfg.workers)
            per_run.append(result)
            runs_by_method[method].append(result)
        err_path = os.path.join(errors_dir, f"run_{i:02d}.csv")
        _write_error_csv(err_path, per_run)
        manifest.append(os.path.relpath(err_path, cfg.out))

    report = aggregate(runs_by_method)
    agg_path = os.path.join(cfg.out, "aggregate.csv")
    _write_aggregate_csv(agg_path, report, cfg.methods)
    manifest.append(os.path.relpath(agg_path, cfg.out))
    ts_path = os.path.join(cfg.out, "timeseries.csv")
    _write_timeseries_csv(ts_path, report, cfg.methods)
    manifest.append(os.path.relpath(ts_path, cfg.out))

    with open(os.path.join(cfg.out, "manifest.txt"), "w", newline="") as f:
        for rel in manifest:
            f.write(rel + "\n")
    return report


def generate_only(cfg: ExperimentConfig) -> list[str]:
    os.makedirs(cfg.out, exist_ok=True)
    logs_dir = os.path.join(cfg.out, "logs")
    os.makedirs(logs_dir, exist_ok=True)
    manifest = []
    for i in range(cfg.runs):
        scenario = build_scenario(cfg.scene, streams.run_seed(cfg.seed, i))
        log = generate_run(scenario)
        log_path = os.path.join(logs_dir, f"run_{i:02d}.csv")
        log.save(log_path)
        manifest.append(os.path.relpath(log_path, cfg.out))
    with open(os.path.join(cfg.out, "manifest.txt"), "w", newline="") as f:
        for rel in manifest:
            f.write(rel + "\n")
    return manifest


def replay_log(
    path: str,
    methods: Sequence[str],
    particles: int | None = None,
    dt: float | None = None,
    workers: int | None = None,
    out: str | None = None,
) -> list[MethodResult]:
    log = RunLog.load(path)
    results = []
    for method in methods:
        config = None
        if method == "pbpf":
            kw = {}
            if particles is not None:
                kw["m"] = particles
            if dt is not None:
                kw["dt"] = dt
            config = FilterConfig(**kw)
        results.append(replay(log, method, config=config, workers=workers))
    if out is not None:
        os.makedirs(out, exist_ok=True)
        stem = os.path.splitext(os.path.basename(path))[0]
        _write_error_csv(os.path.join(out, f"{stem}_errors.csv"), results)
    return results


# ---------------------------------------------------------------------------
# CLI

def _add_common(p: argparse.ArgumentParser, *, methods: bool) -> None:
    p.add_argument("--scene", default="scene1", help="preset name or scenario file")
    p.add_argument("--runs", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="out")
    if methods:
        p.add_argument("--methods", default="pbpf,cvpf,snapshot")
        p.add_argument("--particles", type=int, default=None)
        p.add_argument("--dt", type=float, default=None)
        p.add_argument("--workers", type=int, default=None)


def _parse_methods(raw: str) -> tuple[str, ...]:
    return tuple(m.strip() for m in raw.split(",") if m.strip())


def main(argv: Sequence[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="pushtrack",
        description="Pose-tracking experiments for planar pushing.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p_gen = sub.add_parser("generate", help="record run logs only")
    _add_common(p_gen, methods=False)

    p_rep = sub.add_parser("replay", help="replay methods over a saved run log")
    p_rep.add_argument("log", help="path to a run log")
    p_rep.add_argument("--methods", default="pbpf,cvpf,snapshot")
    p_rep.add_argument("--particles", type=int, default=None)
    p_rep.add_argument("--dt", type=float, default=None)
    p_rep.add_argument("--workers", type=int, default=None)
    p_rep.add_argument("--out", default=None)

    p_cmp = sub.add_parser("compare", help="generate runs and compare methods")
    _add_common(p_cmp, methods=True)

    sub.add_parser("dump-defaults", help="print the config template")

    args = parser.parse_args(argv)
    try:
        if args.verb == "dump-defaults":
            sys.stdout.write(dump_defaults())
            return 0
        if args.verb == "generate":
            cfg = ExperimentConfig(
                scene=args.scene, runs=args.runs, seed=args.seed, out=args.out
            )
            paths = generate_only(cfg)
            print(f"wrote {len(paths)} run logs under {cfg.out}")
            return 0
        if args.verb == "replay":
            results = replay_log(
                args.log,
                _parse_methods(args.methods),
                particles=args.particles,
                dt=args.dt,
                workers=args.workers,
                out=args.out,
            )
            for r in results:
                print(
                    f"{r.method}: mean pos err {r.pos_err.mean():.4f} m, "
                    f"mean rot err {r.rot_err.mean():.4f} rad"
                )
            return 0
        cfg = ExperimentConfig(
            scene=args.scene,
            methods=_parse_methods(args.methods),
            runs=args.runs,
            seed=args.seed,
            out=args.out,
            particles=args.particles,
            dt=args.dt,
            workers=args.workers,
        )
        report = run_experiment(cfg)
        for method in cfg.methods:
            pm, ps, rm, rs = report.summary[method]
            print(f"{method}: pos {pm:.4f} +/- {ps:.4f} m, rot {rm:.4f} +/- {rs:.4f} rad")
        return 0
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
