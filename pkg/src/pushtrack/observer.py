"""Synthetic single-snapshot pose observer.

Stands in for a per-frame pose estimator looking at the scene.  Each frame
it either reports the true pose corrupted by Gaussian noise, reports a
grossly corrupted outlier, or reports nothing at all because the object is
occluded.  Occlusion is driven entirely by configured time windows, so the
output inside a window is absent no matter what the random stream says.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isfinite

import numpy as np

from .geometry import NoiseSpec, Pose, perturb_pose


@dataclass(frozen=True)
class Observation:
    """A pose report at a point in time; pose None means no output."""

    time: float
    pose: Pose | None

    @property
    def present(self) -> bool:
        return self.pose is not None


@dataclass(frozen=True)
class ObserverSpec:
    """Noise, occlusion, and outlier behavior of the synthetic observer.

    noise applies to ordinary frames; with probability outlier_rate a frame
    instead uses outlier_magnitude, modeling the estimator latching onto a
    wrong fit.  occlusion_windows are sorted, non-overlapping [start, end)
    intervals in seconds.  frame_period is the nominal spacing of frames, a
    property of the stream rather than of a single observation.
    """

    noise: NoiseSpec = NoiseSpec(0.02, 0.09)
    occlusion_windows: tuple[tuple[float, float], ...] = ()
    outlier_rate: float = 0.05
    outlier_magnitude: NoiseSpec = NoiseSpec(0.15, 0.8)
    frame_period: float = 0.02

    def __post_init__(self) -> None:
        if not 0.0 <= self.outlier_rate <= 1.0:
            raise ValueError("outlier_rate must lie in [0, 1]")
        if not (isfinite(self.frame_period) and self.frame_period > 0):
            raise ValueError("frame_period must be positive")
        windows = tuple((float(a), float(b)) for a, b in self.occlusion_windows)
        prev_end = -np.inf
        for a, b in windows:
            if not (isfinite(a) and isfinite(b) and a < b):
                raise ValueError(f"bad occlusion window [{a}, {b})")
            if a < prev_end:
                raise ValueError("occlusion windows must be sorted and non-overlapping")
            prev_end = b
        object.__setattr__(self, "occlusion_windows", windows)

    def occluded(self, time: float) -> bool:
        for a, b in self.occlusion_windows:
            if a <= time < b:
                return True
            if time < a:
                break
        return False


def observe(
    truth: Pose, time: float, spec: ObserverSpec, rng: np.random.Generator
) -> Observation:
    """Produce one frame's observation of the true pose.

    Occluded frames consume no randomness.  Visible frames consume one
    uniform draw for the outlier decision and then whatever the chosen
    perturbation needs, so a fixed stream yields a fixed observation.
    """
    if spec.occluded(time):
        return Observation(time, None)
    is_outlier = rng.random() < spec.outlier_rate
    noise = spec.outlier_magnitude if is_outlier else spec.noise
    return Observation(time, perturb_pose(truth, noise, rng))
