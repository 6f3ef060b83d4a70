"""Deterministic quasi-static pusher-slider physics.

A disc-shaped pusher travels along piecewise-linear world-frame paths and
pushes a rectangular slider across a flat support.  Support friction is
summarized by an ellipsoidal limit surface; the ratio of its torque and
force extents equals the mean contact radius of the footprint, so the
resulting motion depends only on the contact friction coefficient and the
geometry.  Contacts are classified per sub-step as sticking (the contact
point follows the pusher) or sliding (the contact force saturates on a
friction-cone edge), the slider pose is advanced with a planar
exponential-map step, and residual penetration against the pusher or a
static obstacle is removed by a minimal-translation projection.

Motion is strictly planar: the slider keeps its height and any roll/pitch
in its orientation is carried along unchanged.  Every function here is a
pure function of its arguments, which is what makes particle rollouts
replayable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import asinh, cos, isfinite, sin, sqrt
from typing import Sequence

import numpy as np

from ..geometry import Pose, quat_about_z, quat_mul, yaw_of_quat
from ._dispatch import integrate_push, kernel_kind

__all__ = [
    "FRICTION_FLOOR",
    "MASS_FLOOR",
    "PhysicsParams",
    "ParamPrior",
    "sample_params",
    "Obstacle",
    "SceneModel",
    "mean_contact_radius",
    "Control",
    "PusherSliderBackend",
    "step",
    "kernel_kind",
]

FRICTION_FLOOR = 0.001
MASS_FLOOR = 0.05


@dataclass(frozen=True)
class PhysicsParams:
    """One sampled dynamics hypothesis.

    Values are clamped on construction: friction coefficients to at least
    FRICTION_FLOOR, mass to at least MASS_FLOOR, restitution into [0, 1].
    The quasi-static contact solve uses contact_friction and geometry only;
    support_friction and mass set the limit-surface magnitudes, whose ratio
    is fixed by the footprint, and restitution is a carried-along knob of
    the hypothesis vector with no effect on impact-free pushing.
    """

    contact_friction: float
    support_friction: float
    restitution: float
    mass: float

    def __post_init__(self) -> None:
        for name in ("contact_friction", "support_friction", "restitution", "mass"):
            if not isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        object.__setattr__(
            self, "contact_friction", max(float(self.contact_friction), FRICTION_FLOOR)
        )
        object.__setattr__(
            self, "support_friction", max(float(self.support_friction), FRICTION_FLOOR)
        )
        object.__setattr__(
            self, "restitution", min(max(float(self.restitution), 0.0), 1.0)
        )
        object.__setattr__(self, "mass", max(float(self.mass), MASS_FLOOR))


@dataclass(frozen=True)
class ParamPrior:
    """Independent Gaussian prior over the PhysicsParams fields."""

    mean_contact_friction: float = 0.1
    std_contact_friction: float = 0.3
    mean_support_friction: float = 0.1
    std_support_friction: float = 0.3
    mean_restitution: float = 0.9
    std_restitution: float = 0.2
    mean_mass: float = 0.38
    std_mass: float = 0.5

    def __post_init__(self) -> None:
        for name in (
            "std_contact_friction",
            "std_support_friction",
            "std_restitution",
            "std_mass",
        ):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")


def sample_params(prior: ParamPrior, rng: np.random.Generator) -> PhysicsParams:
    """Draw one PhysicsParams from the prior; clamps apply on construction.

    Exactly four standard normals are consumed, in field order, so a prior
    with all stds zero returns the means without randomness entering.
    """
    z = rng.standard_normal(4)
    return PhysicsParams(
        contact_friction=prior.mean_contact_friction + prior.std_contact_friction * z[0],
        support_friction=prior.mean_support_friction + prior.std_support_friction * z[1],
        restitution=prior.mean_restitution + prior.std_restitution * z[2],
        mass=prior.mean_mass + prior.std_mass * z[3],
    )


@dataclass(frozen=True, eq=False)
class Obstacle:
    """Static axis-oriented rectangle in the plane, rotated by yaw."""

    center: np.ndarray
    half_extents: np.ndarray
    yaw: float = 0.0

    def __post_init__(self) -> None:
        center = np.asarray(self.center, dtype=float).copy()
        half = np.asarray(self.half_extents, dtype=float).copy()
        if center.shape != (2,) or half.shape != (2,):
            raise ValueError("obstacle center and half_extents must be 2-vectors")
        if not (np.all(np.isfinite(center)) and np.all(np.isfinite(half)) and isfinite(self.yaw)):
            raise ValueError("obstacle fields must be finite")
        if not np.all(half > 0):
            raise ValueError("obstacle half_extents must be positive")
        center.setflags(write=False)
        half.setflags(write=False)
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "half_extents", half)
        object.__setattr__(self, "yaw", float(self.yaw))


def mean_contact_radius(hx: float, hy: float) -> float:
    """Mean distance from the center of a 2*hx by 2*hy rectangle to its
    points under a uniform distribution.

    Closed form of (1 / (4 hx hy)) * integral of sqrt(x^2 + y^2) over the
    rectangle.  This is the torque-to-force ratio of the ellipsoidal limit
    surface for a uniform pressure footprint.
    """
    if not (hx > 0 and hy > 0):
        raise ValueError("half extents must be positive")
    return (
        sqrt(hx * hx + hy * hy) / 3.0
        + hx * hx / (6.0 * hy) * asinh(hy / hx)
        + hy * hy / (6.0 * hx) * asinh(hx / hy)
    )


@dataclass(frozen=True, eq=False)
class SceneModel:
    """Fixed geometry of one experiment: the slider footprint and height,
    the pusher disc radius, gravity, and any static obstacles.

    mean_contact_radius is derived at construction and squared into the
    limit-surface ratio used by the contact solve.
    """

    half_extents: np.ndarray
    height: float
    pusher_radius: float
    gravity: float = 9.81
    obstacles: tuple[Obstacle, ...] = ()
    mean_contact_radius: float = field(init=False, compare=False)

    def __post_init__(self) -> None:
        half = np.asarray(self.half_extents, dtype=float).copy()
        if half.shape != (2,):
            raise ValueError("half_extents must be a 2-vector")
        if not np.all(np.isfinite(half)) or not np.all(half > 0):
            raise ValueError("half_extents must be positive and finite")
        for name in ("height", "pusher_radius", "gravity"):
            v = getattr(self, name)
            if not isfinite(v) or v <= 0:
                raise ValueError(f"{name} must be positive and finite")
        half.setflags(write=False)
        object.__setattr__(self, "half_extents", half)
        object.__setattr__(self, "height", float(self.height))
        object.__setattr__(self, "pusher_radius", float(self.pusher_radius))
        object.__setattr__(self, "gravity", float(self.gravity))
        object.__setattr__(self, "obstacles", tuple(self.obstacles))
        object.__setattr__(
            self, "mean_contact_radius", mean_contact_radius(half[0], half[1])
        )

    def max_support_force(self, params: PhysicsParams) -> float:
        """Friction force that saturates the limit surface under pure
        translation.  The contact solve never needs the magnitude (only the
        force/torque ratio enters); exposed for inspection and tests."""
        return params.support_friction * params.mass * self.gravity

    def max_support_torque(self, params: PhysicsParams) -> float:
        """Friction torque that saturates the limit surface under pure
        rotation about the footprint center."""
        return self.max_support_force(params) * self.mean_contact_radius

    def obstacle_table(self) -> np.ndarray:
        """Kernel-ready (N, 7) table: cx, cy, hx, hy, cos yaw, sin yaw,
        circumradius per obstacle."""
        table = np.empty((len(self.obstacles), 7), dtype=np.float64)
        for i, ob in enumerate(self.obstacles):
            hx, hy = float(ob.half_extents[0]), float(ob.half_extents[1])
            table[i] = (
                float(ob.center[0]),
                float(ob.center[1]),
                hx,
                hy,
                cos(ob.yaw),
                sin(ob.yaw),
                sqrt(hx * hx + hy * hy),
            )
        return table


@dataclass(frozen=True, eq=False)
class Control:
    """One straight pusher path segment.

    displacement is expressed in the pusher frame at the segment start (a
    disc pusher makes yaw cosmetic, but it is tracked so logs can replay
    the full commanded motion); start_position and start_yaw anchor the
    segment in the world.  duration must be positive.
    """

    displacement: np.ndarray
    dyaw: float
    duration: float
    start_position: np.ndarray
    start_yaw: float

    def __post_init__(self) -> None:
        disp = np.asarray(self.displacement, dtype=float).copy()
        start = np.asarray(self.start_position, dtype=float).copy()
        if disp.shape != (3,) or start.shape != (3,):
            raise ValueError("displacement and start_position must be 3-vectors")
        if not (np.all(np.isfinite(disp)) and np.all(np.isfinite(start))):
            raise ValueError("control fields must be finite")
        if not (isfinite(self.dyaw) and isfinite(self.duration)):
            raise ValueError("control fields must be finite")
        if not self.duration > 0:
            raise ValueError("control duration must be positive")
        disp.setflags(write=False)
        start.setflags(write=False)
        object.__setattr__(self, "displacement", disp)
        object.__setattr__(self, "start_position", start)
        object.__setattr__(self, "dyaw", float(self.dyaw))
        object.__setattr__(self, "duration", float(self.duration))

    @property
    def end_yaw(self) -> float:
        return self.start_yaw + self.dyaw

    @property
    def end_position(self) -> np.ndarray:
        c = cos(self.start_yaw)
        s = sin(self.start_yaw)
        dx, dy, dz = self.displacement
        return np.array(
            [
                self.start_position[0] + c * dx - s * dy,
                self.start_position[1] + s * dx + c * dy,
                self.start_position[2] + dz,
            ]
        )

    def world_velocity_xy(self) -> tuple[float, float]:
        """Planar world-frame velocity of the pusher over this segment."""
        c = cos(self.start_yaw)
        s = sin(self.start_yaw)
        dx, dy = float(self.displacement[0]), float(self.displacement[1])
        return (c * dx - s * dy) / self.duration, (s * dx + c * dy) / self.duration

    def then(self, displacement, dyaw: float, duration: float) -> "Control":
        """Next segment, chained to start where this one ends."""
        return Control(
            displacement=np.asarray(displacement, dtype=float),
            dyaw=dyaw,
            duration=duration,
            start_position=self.end_position,
            start_yaw=self.end_yaw,
        )


class PusherSliderBackend:
    """Rolls a slider pose forward through pusher controls.

    dt_sub is the target integration sub-step; each control is split into
    round(duration / dt_sub) equal sub-steps (at least one).  predict is a
    pure function of its arguments, and when no contact occurs the input
    pose object is returned unchanged.

    penetration selects what happens when the pusher center starts inside
    the slider footprint.  "error" raises, which is right for scripted
    ground truth where that indicates a bad script.  "resolve" lets the
    integrator push the configuration apart, which is what particle
    rollouts need: a scattered pose hypothesis may legitimately contain
    the pusher, and erroring there would kill the filter on a routine
    state.
    """

    def __init__(
        self,
        scene: SceneModel,
        dt_sub: float = 0.002,
        penetration: str = "error",
    ):
        if not dt_sub > 0:
            raise ValueError("dt_sub must be positive")
        if penetration not in ("error", "resolve"):
            raise ValueError('penetration must be "error" or "resolve"')
        self.scene = scene
        self.dt_sub = float(dt_sub)
        self.penetration = penetration
        self._c2 = scene.mean_contact_radius * scene.mean_contact_radius
        self._obs = scene.obstacle_table()

    def predict(
        self, state: Pose, controls: Control | Sequence[Control], params: PhysicsParams
    ) -> Pose:
        if isinstance(controls, Control):
            controls = (controls,)
        if not controls:
            return state
        scene = self.scene
        hx = float(scene.half_extents[0])
        hy = float(scene.half_extents[1])
        x0 = float(state.position[0])
        y0 = float(state.position[1])
        z0 = float(state.position[2])
        yaw0 = yaw_of_quat(state.orientation)

        if self.penetration == "error":
            first = controls[0]
            dxw = float(first.start_position[0]) - x0
            dyw = float(first.start_position[1]) - y0
            c = cos(yaw0)
            s = sin(yaw0)
            bx = c * dxw + s * dyw
            by = -s * dxw + c * dyw
            if abs(bx) < hx and abs(by) < hy:
                raise ValueError(
                    "initial penetration: pusher center starts inside the object footprint"
                )

        segs = np.empty((len(controls), 6), dtype=np.float64)
        for i, ctl in enumerate(controls):
            vx, vy = ctl.world_velocity_xy()
            n_sub = max(1, round(ctl.duration / self.dt_sub))
            segs[i, 0] = float(ctl.start_position[0])
            segs[i, 1] = float(ctl.start_position[1])
            segs[i, 2] = vx
            segs[i, 3] = vy
            segs[i, 4] = ctl.duration
            segs[i, 5] = float(n_sub)

        x1, y1, yaw1 = integrate_push(
            x0, y0, yaw0, segs, params.contact_friction, hx, hy,
            scene.pusher_radius, self._c2, self._obs,
        )
        if x1 == x0 and y1 == y0 and yaw1 == yaw0:
            return state
        residual = quat_mul(quat_about_z(-yaw0), state.orientation)
        return Pose(
            np.array([x1, y1, z0]), quat_mul(quat_about_z(yaw1), residual)
        )


def step(
    state: Pose,
    control: Control,
    params: PhysicsParams,
    scene: SceneModel,
    dt_sub: float = 0.002,
) -> Pose:
    """Advance one control; convenience wrapper over PusherSliderBackend."""
    return PusherSliderBackend(scene, dt_sub).predict(state, [control], params)
