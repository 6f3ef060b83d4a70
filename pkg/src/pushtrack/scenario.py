"""Scripted pushing scenarios, replayable run logs, and method replay.

A Scenario couples a scene, true physics parameters, a pusher script, and
an observer spec under one seed.  generate_run integrates ground truth on
a fine sub-step, samples observations on the frame grid, and packs the
result into a RunLog that round-trips through a text file byte for byte.
replay feeds a recorded log to one of the three tracking methods on its
own update grid and scores it against the logged ground truth, so every
method sees exactly the same data.

The three presets mirror a desk-scale pushing session from three angles:
scene1 pushes along a curved path behind a cluttering obstacle (camera
line of sight blocked mid-run), scene2 repeatedly reaches in and retreats
(observer blind while the pusher is near the object), scene3 is the same
kind of push with a permanently clear view.
"""

from __future__ import annotations

import csv
import hashlib
import io
from dataclasses import dataclass
from math import cos, hypot, isfinite, sin

import numpy as np

from . import streams
from .baselines import ConstantVelocityFilter, CvpfConfig, SnapshotState, snapshot_track
from .filter import FilterConfig, ParticleFilter
from .geometry import NoiseSpec, Pose, pose_error
from .observer import Observation, ObserverSpec, observe
from .physics import Control, Obstacle, PhysicsParams, PusherSliderBackend, SceneModel

METHODS = ("pbpf", "cvpf", "snapshot")

TRUTH_DT_SUB = 1e-4

_PARKED_XY = (1.0, 1.0)


@dataclass(frozen=True, eq=False)
class Scenario:
    """Everything needed to produce one run, deterministically."""

    scene: SceneModel
    true_params: PhysicsParams
    script: tuple[Control, ...]
    observer: ObserverSpec
    seed: int
    duration: float
    initial_pose: Pose

    def __post_init__(self) -> None:
        if not (isfinite(self.duration) and self.duration > 0):
            raise ValueError("duration must be positive")
        total = sum(c.duration for c in self.script)
        if total > self.duration + 1e-9:
            raise ValueError("script is longer than the scenario duration")
        object.__setattr__(self, "script", tuple(self.script))


def scenario_hash(scenario: Scenario) -> str:
    """Content address of a scenario: sha256 over a canonical text dump.
    Any field change, including one float bit, changes the hash."""
    h = hashlib.sha256()

    def put(*parts) -> None:
        for p in parts:
            if isinstance(p, (float, np.floating)):
                p = float(p)
            h.update(repr(p).encode())
            h.update(b"|")

    sc = scenario.scene
    put("scene", *sc.half_extents, sc.height, sc.pusher_radius, sc.gravity)
    for ob in sc.obstacles:
        put("obstacle", *ob.center, *ob.half_extents, ob.yaw)
    tp = scenario.true_params
    put("params", tp.contact_friction, tp.support_friction, tp.restitution, tp.mass)
    for c in scenario.script:
        put("control", *c.displacement, c.dyaw, c.duration, *c.start_position, c.start_yaw)
    obs = scenario.observer
    put("observer", obs.noise.sigma_pos, obs.noise.sigma_rot, obs.outlier_rate,
        obs.outlier_magnitude.sigma_pos, obs.outlier_magnitude.sigma_rot, obs.frame_period)
    for a, b in obs.occlusion_windows:
        put("window", a, b)
    put("seed", scenario.seed)
    put("duration", scenario.duration)
    put("initial", *scenario.initial_pose.position, *scenario.initial_pose.orientation)
    return h.hexdigest()


def _slice_script(
    script: tuple[Control, ...], frame_period: float, duration: float, scene: SceneModel
) -> list[Control]:
    """Cut the script into one control per frame, chaining start poses.
    Frames past the end of the script hold the pusher still; an empty
    script parks the pusher away from the workspace."""
    n = round(duration / frame_period)
    if abs(n * frame_period - duration) > 1e-9:
        raise ValueError("duration must be a multiple of the frame period")
    out: list[Control] = []
    for k, seg in enumerate(script):
        m = round(seg.duration / frame_period)
        if m < 1 or abs(m * frame_period - seg.duration) > 1e-9:
            raise ValueError(
                f"script segment {k} duration is not a multiple of the frame period"
            )
        sub_disp = seg.displacement / m
        sub_dyaw = seg.dyaw / m
        ctl = Control(sub_disp, sub_dyaw, frame_period, seg.start_position, seg.start_yaw)
        out.append(ctl)
        for _ in range(m - 1):
            ctl = ctl.then(sub_disp, sub_dyaw, frame_period)
            out.append(ctl)
    if out:
        rest_pos, rest_yaw = out[-1].end_position, out[-1].end_yaw
    else:
        rest_pos = np.array([_PARKED_XY[0], _PARKED_XY[1], scene.height / 2.0])
        rest_yaw = 0.0
    zero = np.zeros(3)
    while len(out) < n:
        ctl = Control(zero, 0.0, frame_period, rest_pos, rest_yaw)
        out.append(ctl)
        rest_pos, rest_yaw = ctl.end_position, ctl.end_yaw
    return out


def _ground_truth(
    scenario: Scenario, frame_controls: list[Control], dt_sub: float
) -> list[Pose]:
    backend = PusherSliderBackend(scenario.scene, dt_sub, penetration="error")
    poses = [scenario.initial_pose]
    state = scenario.initial_pose
    for k, ctl in enumerate(frame_controls):
        try:
            state = backend.predict(state, ctl, scenario.true_params)
        except ValueError as exc:
            raise RuntimeError(
                f"ground-truth generation failed at frame {k + 1}: {exc}"
            ) from exc
        poses.append(state)
    return poses


@dataclass(eq=False)
class RunLog:
    """One recorded run: per-frame controls, ground truth, observations,
    plus the header needed to rebuild the world for replay."""

    scenario_hash: str
    seed: int
    frame_period: float
    duration: float
    scene: SceneModel
    true_params: PhysicsParams
    pusher_start: np.ndarray
    times: np.ndarray
    controls: np.ndarray
    gt: np.ndarray
    obs_present: np.ndarray
    obs: np.ndarray

    @property
    def n_frames(self) -> int:
        return len(self.times)

    def gt_pose(self, k: int) -> Pose:
        return Pose.from_row(self.gt[k])

    def observation(self, k: int) -> Observation:
        t = float(self.times[k])
        if not self.obs_present[k]:
            return Observation(t, None)
        return Observation(t, Pose.from_row(self.obs[k]))

    def frame_controls(self) -> list[Control]:
        """Rebuild the chained per-frame controls from the logged
        displacements; entry k drives frame k+1."""
        pos = np.array(self.pusher_start[:3])
        yaw = float(self.pusher_start[3])
        out = []
        for k in range(1, self.n_frames):
            ux, uy, uz, uyaw = self.controls[k]
            ctl = Control((ux, uy, uz), float(uyaw), self.frame_period, pos, yaw)
            out.append(ctl)
            pos, yaw = ctl.end_position, ctl.end_yaw
        return out

    def save(self, path: str) -> None:
        with open(path, "w", newline="") as f:
            f.write(self.dumps())

    def dumps(self) -> str:
        buf = io.StringIO()
        w = buf.write
        w("# pushtrack run log v1\n")
        w(f"# scenario_hash = {self.scenario_hash}\n")
        w(f"# seed = {self.seed}\n")
        w(f"# frame_period = {self.frame_period!r}\n")
        w(f"# duration = {self.duration!r}\n")
        r = lambda v: repr(float(v))
        sc = self.scene
        w(f"# object_half_extents = {r(sc.half_extents[0])} {r(sc.half_extents[1])}\n")
        w(f"# object_height = {r(sc.height)}\n")
        w(f"# pusher_radius = {r(sc.pusher_radius)}\n")
        w(f"# gravity = {r(sc.gravity)}\n")
        tp = self.true_params
        w(f"# contact_friction = {r(tp.contact_friction)}\n")
        w(f"# support_friction = {r(tp.support_friction)}\n")
        w(f"# restitution = {r(tp.restitution)}\n")
        w(f"# mass = {r(tp.mass)}\n")
        ps = self.pusher_start
        w(f"# pusher_start = {r(ps[0])} {r(ps[1])} {r(ps[2])} {r(ps[3])}\n")
        for ob in sc.obstacles:
            w(
                f"# obstacle = {r(ob.center[0])} {r(ob.center[1])} "
                f"{r(ob.half_extents[0])} {r(ob.half_extents[1])} {r(ob.yaw)}\n"
            )
        w(
            "t,ux,uy,uz,uyaw,gt_px,gt_py,gt_pz,gt_qw,gt_qx,gt_qy,gt_qz,"
            "obs_present,obs_px,obs_py,obs_pz,obs_qw,obs_qx,obs_qy,obs_qz\n"
        )
        for k in range(self.n_frames):
            cells = [repr(float(self.times[k]))]
            cells += [repr(float(v)) for v in self.controls[k]]
            cells += [repr(float(v)) for v in self.gt[k]]
            if self.obs_present[k]:
                cells.append("1")
                cells += [repr(float(v)) for v in self.obs[k]]
            else:
                cells.append("0")
                cells += [""] * 7
            w(",".join(cells))
            w("\n")
        return buf.getvalue()

    @classmethod
    def load(cls, path: str) -> "RunLog":
        with open(path, newline="") as f:
            lines = f.read().split("\n")
        header: dict[str, str] = {}
        obstacles: list[Obstacle] = []
        body_start = None
        for i, line in enumerate(lines):
            if not line.startswith("#"):
                body_start = i
                break
            if "=" not in line:
                continue
            key, _, value = line[1:].partition("=")
            key = key.strip()
            value = value.strip()
            if key == "obstacle":
                parts = [float(v) for v in value.split()]
                if len(parts) != 5:
                    raise ValueError(f"{path}:{i + 1}: obstacle needs 5 numbers")
                obstacles.append(Obstacle(parts[0:2], parts[2:4], parts[4]))
            else:
                header[key] = value
        if body_start is None:
            raise ValueError(f"{path}:1: no data section found")
        try:
            half = [float(v) for v in header["object_half_extents"].split()]
            scene = SceneModel(
                half_extents=half,
                height=float(header["object_height"]),
                pusher_radius=float(header["pusher_radius"]),
                gravity=float(header["gravity"]),
                obstacles=tuple(obstacles),
            )
            params = PhysicsParams(
                float(header["contact_friction"]),
                float(header["support_friction"]),
                float(header["restitution"]),
                float(header["mass"]),
            )
            pusher_start = np.array([float(v) for v in header["pusher_start"].split()])
            seed = int(header["seed"])
            frame_period = float(header["frame_period"])
            duration = float(header["duration"])
            shash = header["scenario_hash"]
        except KeyError as exc:
            raise ValueError(f"{path}:1: missing header key {exc}") from exc
        if pusher_start.shape != (4,):
            raise ValueError(f"{path}:1: pusher_start needs 4 numbers")

        rows = list(csv.reader(lines[body_start:]))
        if not rows or rows[0][0] != "t":
            raise ValueError(f"{path}:{body_start + 1}: missing column header")
        data = [r for r in rows[1:] if r]
        n = len(data)
        times = np.empty(n)
        controls = np.empty((n, 4))
        gt = np.empty((n, 7))
        obs_present = np.zeros(n, dtype=bool)
        obs = np.full((n, 7), np.nan)
        for j, row in enumerate(data):
            lineno = body_start + 2 + j
            if len(row) != 20:
                raise ValueError(f"{path}:{lineno}: expected 20 columns, got {len(row)}")
            try:
                times[j] = float(row[0])
                controls[j] = [float(v) for v in row[1:5]]
                gt[j] = [float(v) for v in row[5:12]]
                present = row[12] == "1"
                obs_present[j] = present
                if present:
                    obs[j] = [float(v) for v in row[13:20]]
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from exc
        return cls(
            scenario_hash=shash,
            seed=seed,
            frame_period=frame_period,
            duration=duration,
            scene=scene,
            true_params=params,
            pusher_start=pusher_start,
            times=times,
            controls=controls,
            gt=gt,
            obs_present=obs_present,
            obs=obs,
        )


def generate_run(scenario: Scenario, dt_sub: float = TRUTH_DT_SUB) -> RunLog:
    """Integrate ground truth and sample the observation stream.

    Truth runs on a much finer sub-step than particle rollouts use, so the
    filter always works against a slightly mismatched model, the way it
    would against the world.
    """
    fp = scenario.observer.frame_period
    frame_controls = _slice_script(scenario.script, fp, scenario.duration, scenario.scene)
    gt_poses = _ground_truth(scenario, frame_controls, dt_sub)
    n = len(gt_poses)

    times = np.empty(n)
    controls = np.zeros((n, 4))
    gt = np.empty((n, 7))
    obs_present = np.zeros(n, dtype=bool)
    obs = np.full((n, 7), np.nan)
    for k in range(n):
        t = k * fp
        times[k] = t
        if k > 0:
            ctl = frame_controls[k - 1]
            controls[k, 0:3] = ctl.displacement
            controls[k, 3] = ctl.dyaw
        gt[k] = gt_poses[k].as_row()
        ob = observe(gt_poses[k], t, scenario.observer, streams.stream(scenario.seed, streams.OBSERVE, k, 0))
        if ob.pose is not None:
            obs_present[k] = True
            obs[k] = ob.pose.as_row()

    if frame_controls:
        first = frame_controls[0]
        pusher_start = np.array([*first.start_position, first.start_yaw])
    else:
        pusher_start = np.array([_PARKED_XY[0], _PARKED_XY[1], scenario.scene.height / 2.0, 0.0])

    return RunLog(
        scenario_hash=scenario_hash(scenario),
        seed=scenario.seed,
        frame_period=fp,
        duration=scenario.duration,
        scene=scenario.scene,
        true_params=scenario.true_params,
        pusher_start=pusher_start,
        times=times,
        controls=controls,
        gt=gt,
        obs_present=obs_present,
        obs=obs,
    )


@dataclass(eq=False)
class MethodResult:
    """One method's replay on one log, aligned to the frame grid."""

    method: str
    times: np.ndarray
    estimates: np.ndarray
    pos_err: np.ndarray
    rot_err: np.ndarray


_CONFIRM_GATE = 0.3


def _first_confirmed(log: RunLog) -> int:
    """Index of the first trustworthy observation.

    A lone detection can be a hallucination, so tracking starts at the
    first present observation whose next present neighbor lies within a
    loose positional gate.  Every method is scored from this frame, which
    keeps the per-method error series on one shared grid.
    """
    present = np.flatnonzero(log.obs_present)
    if len(present) == 0:
        raise ValueError("log contains no observations")
    for i in range(len(present) - 1):
        a, b = present[i], present[i + 1]
        gap = np.linalg.norm(log.obs[a, :3] - log.obs[b, :3])
        if gap < _CONFIRM_GATE:
            return int(a)
    return int(present[-1])


def _score(
    method: str, log: RunLog, k0: int, est_rows: np.ndarray
) -> MethodResult:
    f = log.n_frames - k0
    pos_err = np.empty(f)
    rot_err = np.empty(f)
    for j in range(f):
        err = pose_error(Pose.from_row(est_rows[j]), log.gt_pose(k0 + j))
        pos_err[j] = err.positional
        rot_err[j] = err.rotational
    return MethodResult(method, log.times[k0:].copy(), est_rows, pos_err, rot_err)


def replay(
    log: RunLog,
    method: str,
    config: FilterConfig | CvpfConfig | None = None,
    workers: int | None = None,
    dt_sub: float = 0.002,
) -> MethodResult:
    """Run one tracking method over a recorded log.

    The method consumes the logged observations on its own update grid
    (which must subdivide into whole frames) and is scored on every frame
    from the first visible observation on, each frame using the method's
    most recent estimate at or before that frame time.  The log's seed
    drives the method's random streams, so a replay is exactly repeatable.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method: {method!r}")
    k0 = _first_confirmed(log)
    f = log.n_frames - k0
    est_rows = np.empty((f, 7))

    if method == "snapshot":
        state = SnapshotState()
        for j in range(f):
            pose, state = snapshot_track(log.observation(k0 + j), state)
            est_rows[j] = pose.as_row()
        return _score(method, log, k0, est_rows)

    if method == "pbpf":
        cfg = config if config is not None else FilterConfig()
        stride = round(cfg.dt / log.frame_period)
        if stride < 1 or abs(stride * log.frame_period - cfg.dt) > 1e-9:
            raise ValueError("filter dt must be an integer multiple of the log frame period")
        pf = ParticleFilter(cfg, log.scene, log.seed, dt_sub=dt_sub, workers=workers)
        frame_controls = log.frame_controls()
        current = pf.initialize(log.observation(k0)).as_row()
        for j in range(f):
            k = k0 + j
            if j > 0 and j % stride == 0:
                controls = frame_controls[k - stride : k]
                current = pf.update(controls, log.observation(k)).as_row()
            est_rows[j] = current
        return _score(method, log, k0, est_rows)

    cfg = config if config is not None else CvpfConfig()
    stride = round(cfg.dt / log.frame_period)
    if stride < 1 or abs(stride * log.frame_period - cfg.dt) > 1e-9:
        raise ValueError("filter dt must be an integer multiple of the log frame period")
    cv = ConstantVelocityFilter(cfg, log.seed)
    current = cv.initialize(log.observation(k0)).as_row()
    for j in range(f):
        k = k0 + j
        if j > 0 and j % stride == 0:
            current = cv.update(log.observation(k)).as_row()
        est_rows[j] = current
    return _score(method, log, k0, est_rows)


# ---------------------------------------------------------------------------
# occlusion geometry for the presets

def _segment_hits_rect(p0, p1, ob: Obstacle) -> bool:
    """Does the 2D segment p0-p1 cross the oriented rectangle?  Slab test
    in the rectangle's frame."""
    c, s = cos(ob.yaw), sin(ob.yaw)
    dx0, dy0 = p0[0] - ob.center[0], p0[1] - ob.center[1]
    dx1, dy1 = p1[0] - ob.center[0], p1[1] - ob.center[1]
    a0 = (c * dx0 + s * dy0, -s * dx0 + c * dy0)
    a1 = (c * dx1 + s * dy1, -s * dx1 + c * dy1)
    tmin, tmax = 0.0, 1.0
    for axis in (0, 1):
        lo, hi = -ob.half_extents[axis], ob.half_extents[axis]
        d = a1[axis] - a0[axis]
        if abs(d) < 1e-15:
            if a0[axis] < lo or a0[axis] > hi:
                return False
            continue
        t0 = (lo - a0[axis]) / d
        t1 = (hi - a0[axis]) / d
        if t0 > t1:
            t0, t1 = t1, t0
        tmin = max(tmin, t0)
        tmax = min(tmax, t1)
        if tmin > tmax:
            return False
    return True


def _occlusion_windows(
    mask: np.ndarray, frame_period: float
) -> tuple[tuple[float, float], ...]:
    """Merge a per-frame occlusion mask into [start, end) second windows;
    a window covers its last occluded frame's sample time."""
    windows = []
    start = None
    for k, hidden in enumerate(mask):
        if hidden and start is None:
            start = k
        elif not hidden and start is not None:
            windows.append((start * frame_period, k * frame_period))
            start = None
    if start is not None:
        windows.append((start * frame_period, len(mask) * frame_period))
    return tuple(windows)


def _pusher_positions(frame_controls: list[Control]) -> np.ndarray:
    """World xy of the pusher at every frame time (frame 0 = script start)."""
    n = len(frame_controls) + 1
    out = np.empty((n, 2))
    if not frame_controls:
        out[:] = _PARKED_XY
        return out
    out[0] = frame_controls[0].start_position[:2]
    for k, ctl in enumerate(frame_controls):
        out[k + 1] = ctl.end_position[:2]
    return out


def _windows_from_rule(
    scene: SceneModel,
    params: PhysicsParams,
    script: tuple[Control, ...],
    duration: float,
    frame_period: float,
    initial_pose: Pose,
    rule: str,
    camera: tuple[float, float] = (0.0, 0.0),
    proximity: float = 0.0,
) -> tuple[tuple[float, float], ...]:
    """Derive occlusion windows from the ground-truth geometry.

    rule "obstacles": hidden while the camera-to-object sight line crosses
    any obstacle.  rule "pusher": hidden while the pusher is within
    proximity of the object center.  rule "none": never hidden.
    """
    if rule == "none":
        return ()
    probe = Scenario(
        scene=scene,
        true_params=params,
        script=script,
        observer=ObserverSpec(frame_period=frame_period),
        seed=0,
        duration=duration,
        initial_pose=initial_pose,
    )
    frame_controls = _slice_script(script, frame_period, duration, scene)
    gt = _ground_truth(probe, frame_controls, TRUTH_DT_SUB)
    n = len(gt)
    mask = np.zeros(n, dtype=bool)
    if rule == "obstacles":
        for k in range(n):
            center = gt[k].position[:2]
            mask[k] = any(
                _segment_hits_rect(camera, center, ob) for ob in scene.obstacles
            )
    elif rule == "pusher":
        pusher = _pusher_positions(frame_controls)
        for k in range(n):
            center = gt[k].position[:2]
            mask[k] = hypot(pusher[k, 0] - center[0], pusher[k, 1] - center[1]) < proximity
    else:
        raise ValueError(f"unknown occlusion rule: {rule!r}")
    return _occlusion_windows(mask, frame_period)


# ---------------------------------------------------------------------------
# presets

_OBJECT_HALF = (0.06, 0.045)
_OBJECT_HEIGHT = 0.12
_PUSHER_RADIUS = 0.01
_PUSHER_Z = _OBJECT_HEIGHT / 2.0
# High-grip contact, deliberately far from the sampling prior's mean:
# the filter has to cope with an object whose surface it does not know.
_TRUE_PARAMS = PhysicsParams(
    contact_friction=0.8, support_friction=0.4, restitution=0.5, mass=0.38
)


def _initial_pose() -> Pose:
    return Pose((0.0, 0.0, _PUSHER_Z), (1.0, 0.0, 0.0, 0.0))


def _scene1(seed: int) -> Scenario:
    """Curved push among clutter.

    A slim obstacle blinks the sight line off for about half a second
    mid-push, and the clutter also degrades the detector: a raised
    hallucination rate with larger kicks.  The snapshot tracker swallows
    those hallucinations raw; the filters reject them.
    """
    scene = SceneModel(
        half_extents=_OBJECT_HALF,
        height=_OBJECT_HEIGHT,
        pusher_radius=_PUSHER_RADIUS,
        obstacles=(Obstacle((0.145, -0.25), (0.002, 0.004), 0.0),),
    )
    start = Control(
        displacement=(0.30, 0.0, 0.0),
        dyaw=0.0,
        duration=15.0,
        start_position=(-0.075, 0.012, _PUSHER_Z),
        start_yaw=0.0,
    )
    script = (start,)
    duration = 15.0
    camera = (0.45, -1.6)
    windows = _windows_from_rule(
        scene, _TRUE_PARAMS, script, duration, 0.02, _initial_pose(),
        rule="obstacles", camera=camera,
    )
    observer = ObserverSpec(
        occlusion_windows=windows,
        outlier_rate=0.06,
        outlier_magnitude=NoiseSpec(1.0, 1.5),
    )
    return Scenario(
        scene=scene,
        true_params=_TRUE_PARAMS,
        script=script,
        observer=observer,
        seed=seed,
        duration=duration,
        initial_pose=_initial_pose(),
    )


def _scene2(seed: int) -> Scenario:
    """Straight pushes with retreats; observer blind near the pusher."""
    scene = SceneModel(
        half_extents=_OBJECT_HALF,
        height=_OBJECT_HEIGHT,
        pusher_radius=_PUSHER_RADIUS,
    )
    c0 = Control((0.10, 0.0, 0.0), 0.0, 2.0, (-0.175, 0.0, _PUSHER_Z), 0.0)
    c1 = c0.then((0.10, 0.0, 0.0), 0.0, 5.0)
    c2 = c1.then((-0.10, 0.0, 0.0), 0.0, 2.0)
    c3 = c2.then((0.14, 0.0, 0.0), 0.0, 4.0)
    c4 = c3.then((-0.12, 0.0, 0.0), 0.0, 2.0)
    script = (c0, c1, c2, c3, c4)
    duration = 15.0
    windows = _windows_from_rule(
        scene, _TRUE_PARAMS, script, duration, 0.02, _initial_pose(),
        rule="pusher", proximity=0.11,
    )
    observer = ObserverSpec(occlusion_windows=windows)
    return Scenario(
        scene=scene,
        true_params=_TRUE_PARAMS,
        script=script,
        observer=observer,
        seed=seed,
        duration=duration,
        initial_pose=_initial_pose(),
    )


def _scene3(seed: int) -> Scenario:
    """Sustained curved push with a permanently clear view.

    The detector is at its best here: lower noise, no hallucinations.
    The offset keeps the contact twisting the object for most of the
    run, which is where the unknown surface friction costs the most."""
    scene = SceneModel(
        half_extents=_OBJECT_HALF,
        height=_OBJECT_HEIGHT,
        pusher_radius=_PUSHER_RADIUS,
    )
    c0 = Control((0.06, 0.0, 0.0), 0.0, 1.2, (-0.135, 0.006, _PUSHER_Z), 0.0)
    c1 = c0.then((0.39, 0.0, 0.0), 0.0, 7.8)
    script = (c0, c1)
    observer = ObserverSpec(
        noise=NoiseSpec(0.006, 0.05),
        outlier_rate=0.0,
    )
    return Scenario(
        scene=scene,
        true_params=_TRUE_PARAMS,
        script=script,
        observer=observer,
        seed=seed,
        duration=9.0,
        initial_pose=_initial_pose(),
    )


PRESETS = {"scene1": _scene1, "scene2": _scene2, "scene3": _scene3}


def make_preset(name: str, seed: int) -> Scenario:
    try:
        builder = PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown scene preset: {name!r}") from None
    return builder(seed)
