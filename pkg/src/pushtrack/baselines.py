"""Comparison trackers: repeated snapshots and a constant-velocity filter.

The snapshot tracker reports each observation as-is and holds the last
reported pose through gaps.  The constant-velocity particle filter (CVPF)
replaces the physics rollout with extrapolation of the difference between
its two previous estimates; its observation update, resampling, and
estimate are the exact same code paths the physics filter uses, so the
two differ only in their motion model.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import isfinite

import numpy as np

from . import streams
from .filter import (
    SKIPPED,
    FilterConfig,
    InitNoise,
    ParticleSet,
    estimate,
    init_particles,
    observation_update,
    resample,
)
from .geometry import NoiseSpec, Pose, quat_conjugate, quat_mul
from .observer import Observation


@dataclass(frozen=True)
class SnapshotState:
    """Memory of the snapshot tracker: the last pose it reported."""

    last_reported: Pose | None = None


def snapshot_track(obs: Observation, state: SnapshotState) -> tuple[Pose, SnapshotState]:
    """Report the observed pose, or hold the previous report when the
    observation is absent."""
    if obs.pose is not None:
        return obs.pose, SnapshotState(obs.pose)
    if state.last_reported is None:
        raise ValueError("no pose ever observed")
    return state.last_reported, state


@dataclass(frozen=True)
class CvpfConfig:
    """Constant-velocity filter tuning; noise defaults match the physics
    filter, with more particles on a finer update grid."""

    m: int = 200
    dt: float = 0.02
    motion_noise: NoiseSpec = NoiseSpec(0.005, 0.05)
    obs_noise: NoiseSpec = NoiseSpec(0.02, 0.09)
    init_noise: InitNoise = field(default_factory=InitNoise)

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError("particle count must be at least 1")
        if not (isfinite(self.dt) and self.dt > 0):
            raise ValueError("dt must be positive")
        if not (self.obs_noise.sigma_pos > 0 and self.obs_noise.sigma_rot > 0):
            raise ValueError("obs_noise sigmas must be positive")


@dataclass(frozen=True, eq=False)
class PoseDelta:
    """World-frame pose increment: a translation plus a left-applied
    rotation."""

    translation: np.ndarray
    rotation: np.ndarray

    @classmethod
    def identity(cls) -> "PoseDelta":
        return cls(np.zeros(3), np.array([1.0, 0.0, 0.0, 0.0]))


def cv_delta(est_prev: Pose | None, est_prev2: Pose | None) -> PoseDelta:
    """Velocity proxy from the last two estimates: translation
    p_prev - p_prev2 and rotation q_prev * q_prev2^-1.  With fewer than
    two estimates available the delta is the identity (cold start)."""
    if est_prev is None or est_prev2 is None:
        return PoseDelta.identity()
    return PoseDelta(
        est_prev.position - est_prev2.position,
        quat_mul(est_prev.orientation, quat_conjugate(est_prev2.orientation)),
    )


def _quat_mul_rows(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Hamilton product applied row-wise; a is (4,) or (M, 4), b is (M, 4)."""
    aw, ax, ay, az = (a[..., i] for i in range(4))
    bw, bx, by, bz = (b[..., i] for i in range(4))
    return np.stack(
        [
            aw * bw - ax * bx - ay * by - az * bz,
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by - ax * bz + ay * bw + az * bx,
            aw * bz + ax * by - ay * bx + az * bw,
        ],
        axis=-1,
    )


def cv_motion_update(
    particles: ParticleSet, delta: PoseDelta, cfg: CvpfConfig, rng: np.random.Generator
) -> ParticleSet:
    """Apply the delta to every particle, then add pose noise.

    The delta rotation composes on the left (world frame), matching the
    world-frame translation.  All noise comes from the single rng, drawn
    in batches: position normals (M, 3), rotation axes (M, 3), rotation
    angles (M).
    """
    m = particles.m
    positions = particles.positions + delta.translation
    quats = _quat_mul_rows(delta.rotation, particles.quats)

    positions = positions + rng.standard_normal((m, 3)) * cfg.motion_noise.sigma_pos
    axes = rng.standard_normal((m, 3))
    norms = np.sqrt(np.sum(axes * axes, axis=1))
    degenerate = norms < 1e-12
    axes[degenerate] = (1.0, 0.0, 0.0)
    norms[degenerate] = 1.0
    axes /= norms[:, None]
    angles = rng.standard_normal(m) * cfg.motion_noise.sigma_rot
    half = 0.5 * angles
    noise_q = np.concatenate(
        [np.cos(half)[:, None], np.sin(half)[:, None] * axes], axis=1
    )
    quats = _quat_mul_rows(noise_q, quats)
    quats /= np.sqrt(np.sum(quats * quats, axis=1))[:, None]

    return ParticleSet(
        positions=positions,
        quats=quats,
        weights=particles.weights.copy(),
        stream_ids=particles.stream_ids.copy(),
        step=particles.step + 1,
        seed=particles.seed,
    )


class ConstantVelocityFilter:
    """Stateful CVPF: keeps the particle set plus the two most recent
    estimates that define the extrapolation delta."""

    def __init__(self, cfg: CvpfConfig, seed: int):
        self.cfg = cfg
        self.seed = int(seed)
        self.particles: ParticleSet | None = None
        self._prev: Pose | None = None
        self._prev2: Pose | None = None

    def initialize(self, obs: Observation) -> Pose:
        if obs.pose is None:
            raise ValueError("cannot initialize without an observation")
        rng = streams.stream(self.seed, streams.INIT, 0, 0)
        self.particles = init_particles(obs.pose, self.cfg, rng, seed=self.seed)
        est = estimate(self.particles)
        self._prev = est
        self._prev2 = None
        return est

    def update(self, obs: Observation) -> Pose:
        if self.particles is None:
            raise RuntimeError("filter not initialized")
        s = self.particles.step
        delta = cv_delta(self._prev, self._prev2)
        moved = cv_motion_update(
            self.particles, delta, self.cfg, streams.stream(self.seed, streams.MOTION, s, 0)
        )
        weighted, status = observation_update(moved, obs, self.cfg)
        if status != SKIPPED:
            weighted = resample(
                weighted, streams.stream(self.seed, streams.RESAMPLE, s, 0)
            )
        est = estimate(weighted)
        self.particles = weighted
        self._prev2 = self._prev
        self._prev = est
        return est
