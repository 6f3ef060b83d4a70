"""Particle filter with a physics rollout as its motion model.

Each update samples fresh dynamics parameters per particle, rolls the
particle's pose through the recorded pusher controls with its own physics
backend, adds pose noise, weights against the current snapshot observation
(when there is one), resamples, and reports the mean pose.  Frames with no
observation skip the weighting and resampling entirely, leaving the
physics to carry the belief through occlusion.

Randomness discipline
---------------------
Every draw comes from an addressable stream (see streams.py) keyed by
(master seed, purpose, update index, member).  The motion update uses one
stream per particle, addressed by the particle's carried stream id, so the
result cannot depend on execution order and a thread pool reproduces the
sequential result bit for bit.  Resampling reassigns stream ids by output
index, keeping duplicated particles on distinct streams afterwards.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import isfinite
from time import perf_counter
from typing import Sequence

import numpy as np

from . import streams
from .geometry import NoiseSpec, Pose, perturb_pose, quat_average
from .observer import Observation
from .physics import Control, ParamPrior, PusherSliderBackend, SceneModel, sample_params

SKIPPED = "skipped"
UPDATED = "updated"
FLOORED = "floored"

_UNDERFLOW_LIMIT = 1e-300
_WEIGHT_FLOOR = 1e-12


@dataclass(frozen=True)
class InitNoise:
    """Spread of the initial particle cloud: per-axis position stds plus a
    single rotation-angle std (uniform random axis)."""

    sigma_pos: np.ndarray = None  # type: ignore[assignment]
    sigma_rot: float = 0.04

    def __post_init__(self) -> None:
        sp = self.sigma_pos
        sp = np.array([0.07, 0.02, 0.01]) if sp is None else np.asarray(sp, dtype=float).copy()
        if sp.shape != (3,):
            raise ValueError("sigma_pos must be a 3-vector")
        if not np.all(np.isfinite(sp)) or np.any(sp < 0):
            raise ValueError("sigma_pos must be non-negative and finite")
        if not (isfinite(self.sigma_rot) and self.sigma_rot >= 0):
            raise ValueError("sigma_rot must be non-negative and finite")
        sp.setflags(write=False)
        object.__setattr__(self, "sigma_pos", sp)
        object.__setattr__(self, "sigma_rot", float(self.sigma_rot))


@dataclass(frozen=True)
class FilterConfig:
    """Tuning of the physics-rollout filter.

    dt is the update interval; each update consumes the recorded controls
    covering exactly dt of scenario time.  obs_noise is the Gaussian the
    weighting assumes for the observer, which need not match the observer
    actually generating the data.
    """

    m: int = 70
    dt: float = 0.16
    param_prior: ParamPrior = ParamPrior()
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


@dataclass(eq=False)
class ParticleSet:
    """The belief: M pose hypotheses with weights and per-particle stream
    ids.  step counts completed motion updates and addresses the streams
    of the next one.  Arrays are owned by the set; operations return new
    sets rather than mutating."""

    positions: np.ndarray
    quats: np.ndarray
    weights: np.ndarray
    stream_ids: np.ndarray
    step: int
    seed: int

    def __post_init__(self) -> None:
        m = len(self.weights)
        if m < 1:
            raise ValueError("empty particle set")
        if (
            self.positions.shape != (m, 3)
            or self.quats.shape != (m, 4)
            or self.stream_ids.shape != (m,)
        ):
            raise ValueError("inconsistent particle array shapes")

    @property
    def m(self) -> int:
        return len(self.weights)

    def pose(self, i: int) -> Pose:
        return Pose(self.positions[i], self.quats[i])


@dataclass(frozen=True)
class StepTiming:
    """Wall-clock cost of one filter update, for checking the dt budget."""

    step: int
    seconds: float
    status: str


def init_particles(
    first_obs: Pose | None,
    cfg: FilterConfig,
    rng: np.random.Generator,
    seed: int = 0,
) -> ParticleSet:
    """Scatter M particles around the first observed pose.

    Draws run sequentially from the given rng, one particle at a time:
    three position normals scaled by the per-axis stds, then the rotation
    perturbation.
    """
    if first_obs is None:
        raise ValueError("cannot initialize without an observation")
    m = cfg.m
    positions = np.empty((m, 3))
    quats = np.empty((m, 4))
    rot_noise = NoiseSpec(0.0, cfg.init_noise.sigma_rot)
    for i in range(m):
        pos = first_obs.position + rng.standard_normal(3) * cfg.init_noise.sigma_pos
        p = perturb_pose(Pose(pos, first_obs.orientation), rot_noise, rng)
        positions[i] = p.position
        quats[i] = p.orientation
    return ParticleSet(
        positions=positions,
        quats=quats,
        weights=np.full(m, 1.0 / m),
        stream_ids=np.arange(m, dtype=np.int64),
        step=0,
        seed=seed,
    )


def motion_update(
    particles: ParticleSet,
    controls: Control | Sequence[Control],
    cfg: FilterConfig,
    backends: Sequence[PusherSliderBackend],
    workers: int | None = None,
) -> ParticleSet:
    """Propagate every particle through the controls with freshly sampled
    physics parameters, then add pose noise.

    Particle i draws from stream (seed, MOTION, step, stream_ids[i]):
    four parameter normals first, then the perturbation.  workers > 1 runs
    particles on a thread pool; results are written by particle index, so
    parallel and sequential schedules agree exactly.
    """
    if len(backends) != particles.m:
        raise ValueError("one backend per particle required")
    m = particles.m
    positions = np.empty((m, 3))
    quats = np.empty((m, 4))

    def one(i: int) -> None:
        g = streams.stream(
            particles.seed, streams.MOTION, particles.step, int(particles.stream_ids[i])
        )
        params = sample_params(cfg.param_prior, g)
        try:
            predicted = backends[i].predict(particles.pose(i), controls, params)
        except Exception as exc:
            raise RuntimeError(f"motion update failed at particle {i}: {exc}") from exc
        noisy = perturb_pose(predicted, cfg.motion_noise, g)
        positions[i] = noisy.position
        quats[i] = noisy.orientation

    if workers is not None and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for _ in pool.map(one, range(m)):
                pass
    else:
        for i in range(m):
            one(i)

    return ParticleSet(
        positions=positions,
        quats=quats,
        weights=particles.weights.copy(),
        stream_ids=particles.stream_ids.copy(),
        step=particles.step + 1,
        seed=particles.seed,
    )


def observation_update(
    particles: ParticleSet, obs: Observation, cfg: FilterConfig
) -> tuple[ParticleSet, str]:
    """Reweight particles against an observation.

    An absent observation returns the particle set untouched with status
    "skipped".  Otherwise each weight is the product of two Gaussian
    densities over the positional and rotational distances to the observed
    pose, normalized to sum to one.  If every raw density underflows, all
    weights are floored uniformly (status "floored") so the filter survives
    an extreme outlier instead of dying on a zero-weight set.
    """
    if obs.pose is None:
        return particles, SKIPPED

    dp = particles.positions - obs.pose.position
    pos_err = np.sqrt(np.sum(dp * dp, axis=1))
    dots = np.abs(particles.quats @ obs.pose.orientation)
    rot_err = 2.0 * np.arccos(np.minimum(dots, 1.0))

    sp = cfg.obs_noise.sigma_pos
    sr = cfg.obs_noise.sigma_rot
    raw = np.exp(-0.5 * (pos_err / sp) ** 2) * np.exp(-0.5 * (rot_err / sr) ** 2)
    raw /= 2.0 * np.pi * sp * sr

    if np.all(raw < _UNDERFLOW_LIMIT):
        raw = np.full(particles.m, _WEIGHT_FLOOR)
        status = FLOORED
    else:
        status = UPDATED

    out = ParticleSet(
        positions=particles.positions,
        quats=particles.quats,
        weights=raw / raw.sum(),
        stream_ids=particles.stream_ids,
        step=particles.step,
        seed=particles.seed,
    )
    return out, status


def resample(particles: ParticleSet, rng: np.random.Generator) -> ParticleSet:
    """Systematic (low-variance) resampling.

    One uniform draw places M evenly spaced pointers over the cumulative
    weights; equal weights therefore reproduce every particle exactly
    once.  Weights reset to 1/M and stream ids are reassigned by output
    index so duplicates draw independently afterwards.
    """
    w = particles.weights
    total = w.sum()
    if not total > 0.0:
        raise ValueError("cannot resample: total weight is zero")
    m = particles.m
    u0 = rng.random()
    idx = np.empty(m, dtype=np.int64)
    i = 0
    cum = w[0] / total
    for k in range(m):
        target = (u0 + k) / m
        while target > cum and i < m - 1:
            i += 1
            cum += w[i] / total
        idx[k] = i
    return ParticleSet(
        positions=particles.positions[idx].copy(),
        quats=particles.quats[idx].copy(),
        weights=np.full(m, 1.0 / m),
        stream_ids=np.arange(m, dtype=np.int64),
        step=particles.step,
        seed=particles.seed,
    )


def estimate(particles: ParticleSet) -> Pose:
    """Mean pose of the set: arithmetic position mean and the dominant
    eigenvector average of the orientations.  Weights are not used; the
    filter always calls this on a set whose weights are uniform."""
    if particles.m == 0:
        raise ValueError("empty particle set")
    return Pose(
        particles.positions.mean(axis=0), quat_average(particles.quats)
    )


def filter_step(
    particles: ParticleSet,
    controls: Control | Sequence[Control],
    obs: Observation,
    cfg: FilterConfig,
    backends: Sequence[PusherSliderBackend],
    workers: int | None = None,
    timing: list[StepTiming] | None = None,
) -> tuple[ParticleSet, Pose]:
    """One full update: motion, weighting, resampling (only when the
    observation was present), estimate.  Appends a StepTiming when a
    timing list is supplied."""
    t0 = perf_counter()
    s = particles.step
    out = motion_update(particles, controls, cfg, backends, workers)
    out, status = observation_update(out, obs, cfg)
    if status != SKIPPED:
        out = resample(out, streams.stream(out.seed, streams.RESAMPLE, s, 0))
    est = estimate(out)
    if timing is not None:
        timing.append(StepTiming(step=s, seconds=perf_counter() - t0, status=status))
    return out, est


class ParticleFilter:
    """Stateful convenience wrapper tying the pieces together.

    Owns one physics backend per particle (instances share nothing
    mutable, so the motion update may fan out across threads) and the
    per-step timing log.
    """

    def __init__(
        self,
        cfg: FilterConfig,
        scene: SceneModel,
        seed: int,
        dt_sub: float = 0.002,
        workers: int | None = None,
    ):
        self.cfg = cfg
        self.seed = int(seed)
        self.workers = workers
        self.backends = [
            PusherSliderBackend(scene, dt_sub, penetration="resolve")
            for _ in range(cfg.m)
        ]
        self.particles: ParticleSet | None = None
        self.timing: list[StepTiming] = []

    def initialize(self, obs: Observation) -> Pose:
        if obs.pose is None:
            raise ValueError("cannot initialize without an observation")
        rng = streams.stream(self.seed, streams.INIT, 0, 0)
        self.particles = init_particles(obs.pose, self.cfg, rng, seed=self.seed)
        return estimate(self.particles)

    def update(self, controls: Control | Sequence[Control], obs: Observation) -> Pose:
        if self.particles is None:
            raise RuntimeError("filter not initialized")
        self.particles, est = filter_step(
            self.particles, controls, obs, self.cfg, self.backends,
            self.workers, self.timing,
        )
        return est
