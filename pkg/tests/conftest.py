"""Shared helpers for the test suite."""

from __future__ import annotations

import numpy as np

from pushtrack.geometry import Pose


def random_quat(rng: np.random.Generator) -> np.ndarray:
    """Uniform random unit quaternion, (w, x, y, z) order."""
    q = rng.standard_normal(4)
    return q / np.linalg.norm(q)


def random_pose(rng: np.random.Generator, scale: float = 1.0) -> Pose:
    return Pose(rng.uniform(-scale, scale, size=3), random_quat(rng))


def quat_close(a, b, tol: float = 1e-9) -> bool:
    """Componentwise equality up to the q / -q sign ambiguity."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return min(np.abs(a - b).max(), np.abs(a + b).max()) < tol
