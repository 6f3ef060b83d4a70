"""SE(3) poses, quaternion algebra, pose noise, error metrics, rotation averaging.

Conventions used throughout the package:

* Quaternions are length-4 arrays ordered ``(w, x, y, z)``, always unit norm.
  ``q`` and ``-q`` denote the same rotation; every comparison in this module
  is invariant to that sign.
* Poses pair a position in meters with an orientation quaternion.
* Rotational distance between two orientations is the geodesic angle of the
  relative rotation, ``2*acos(|<qa, qb>|)``, folded into [0, pi].  The dot
  product is clamped to [-1, 1] before acos for stability near identity.
* Rotational noise is an axis drawn uniformly on the unit sphere combined
  with a signed Gaussian angle, applied as a world-frame (left) rotation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Pose",
    "PoseError",
    "NoiseSpec",
    "identity_pose",
    "pose_compose",
    "pose_inverse",
    "pose_error",
    "perturb_pose",
    "quat_average",
    "quat_mul",
    "quat_conjugate",
    "quat_rotate",
    "quat_from_axis_angle",
    "quat_about_z",
    "yaw_of_quat",
]

_UNIT_TOL = 1e-9


def _as_unit_quat(q) -> np.ndarray:
    q = np.asarray(q, dtype=np.float64).reshape(4)
    n = math.sqrt(float(q @ q))
    if not math.isfinite(n) or n < 1e-12:
        raise ValueError("quaternion has zero or non-finite norm")
    if abs(n - 1.0) > 1e-15:
        q = q / n
    else:
        q = q.copy()
    return q


@dataclass(frozen=True)
class Pose:
    """Rigid-body pose: position (m) plus unit quaternion (w, x, y, z).

    The orientation is renormalized on construction, so the unit-norm
    invariant holds after every operation.  Arrays are copied and frozen.
    """

    position: np.ndarray
    orientation: np.ndarray

    def __init__(self, position, orientation):
        p = np.asarray(position, dtype=np.float64).reshape(3).copy()
        if not np.all(np.isfinite(p)):
            raise ValueError("position must be finite")
        q = _as_unit_quat(orientation)
        p.setflags(write=False)
        q.setflags(write=False)
        object.__setattr__(self, "position", p)
        object.__setattr__(self, "orientation", q)

    def as_row(self) -> np.ndarray:
        """7-vector ``(px, py, pz, qw, qx, qy, qz)`` used by the run logs."""
        return np.concatenate([self.position, self.orientation])

    @classmethod
    def from_row(cls, row) -> "Pose":
        row = np.asarray(row, dtype=np.float64).reshape(7)
        return cls(row[:3], row[3:])


def identity_pose() -> Pose:
    return Pose(np.zeros(3), np.array([1.0, 0.0, 0.0, 0.0]))


@dataclass(frozen=True)
class PoseError:
    """Positional distance (m, >= 0) and rotational distance (rad, in [0, pi])."""

    positional: float
    rotational: float


@dataclass(frozen=True)
class NoiseSpec:
    """Isotropic pose-noise magnitudes: position std (m) and rotation std (rad)."""

    sigma_pos: float
    sigma_rot: float

    def __post_init__(self):
        if self.sigma_pos < 0 or self.sigma_rot < 0:
            raise ValueError("noise stds must be non-negative")


def quat_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Hamilton product a * b (not normalized)."""
    aw, ax, ay, az = a
    bw, bx, by, bz = b
    return np.array([
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    ])


def quat_conjugate(q: np.ndarray) -> np.ndarray:
    return np.array([q[0], -q[1], -q[2], -q[3]])


def quat_rotate(q: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Rotate a 3-vector by a unit quaternion."""
    w, x, y, z = q
    # v + 2*w*(u x v) + 2*(u x (u x v)), u = (x, y, z)
    ux = np.array([x, y, z])
    t = 2.0 * np.cross(ux, v)
    return np.asarray(v, dtype=np.float64) + w * t + np.cross(ux, t)


def quat_from_axis_angle(axis: np.ndarray, angle: float) -> np.ndarray:
    axis = np.asarray(axis, dtype=np.float64)
    n = math.sqrt(float(axis @ axis))
    if n < 1e-12:
        raise ValueError("rotation axis has zero norm")
    half = 0.5 * angle
    s = math.sin(half) / n
    return np.array([math.cos(half), axis[0] * s, axis[1] * s, axis[2] * s])


def quat_about_z(angle: float) -> np.ndarray:
    half = 0.5 * angle
    return np.array([math.cos(half), 0.0, 0.0, math.sin(half)])


def yaw_of_quat(q: np.ndarray) -> float:
    """Heading angle of the rotated x-axis, projected on the xy-plane."""
    w, x, y, z = q
    # first column of the rotation matrix
    r00 = 1.0 - 2.0 * (y * y + z * z)
    r10 = 2.0 * (x * y + w * z)
    return math.atan2(r10, r00)


def pose_compose(a: Pose, b: Pose) -> Pose:
    """Rigid composition a . b: apply b in a's frame."""
    return Pose(
        a.position + quat_rotate(a.orientation, b.position),
        quat_mul(a.orientation, b.orientation),
    )


def pose_inverse(p: Pose) -> Pose:
    qi = quat_conjugate(p.orientation)
    return Pose(-quat_rotate(qi, p.position), qi)


def rotation_angle(qa: np.ndarray, qb: np.ndarray) -> float:
    """Geodesic angle in [0, pi] between two unit quaternions, sign-invariant."""
    d = abs(float(np.dot(qa, qb)))
    if d > 1.0:
        d = 1.0
    return 2.0 * math.acos(d)


def pose_error(estimate: Pose, truth: Pose) -> PoseError:
    """Positional and rotational distance between two poses.

    Symmetric in its arguments, invariant to quaternion sign flips, and zero
    iff the poses are equal up to quaternion sign.
    """
    dp = estimate.position - truth.position
    return PoseError(
        positional=math.sqrt(float(dp @ dp)),
        rotational=rotation_angle(estimate.orientation, truth.orientation),
    )


def perturb_pose(p: Pose, noise: NoiseSpec, rng: np.random.Generator) -> Pose:
    """Add isotropic Gaussian pose noise.

    Position gets an independent N(0, sigma_pos^2) offset per axis.  The
    orientation is pre-multiplied (world frame) by a rotation about a
    uniformly random axis with signed angle ~ N(0, sigma_rot^2).  Zero noise
    returns the input pose unchanged, bit-exact, and draws nothing from rng.
    """
    pos = p.position
    if noise.sigma_pos > 0.0:
        pos = pos + rng.normal(0.0, noise.sigma_pos, size=3)
    q = p.orientation
    if noise.sigma_rot > 0.0:
        axis = rng.normal(size=3)
        n = math.sqrt(float(axis @ axis))
        if n < 1e-12:
            axis = np.array([1.0, 0.0, 0.0])
            n = 1.0
        angle = rng.normal(0.0, noise.sigma_rot)
        q = quat_mul(quat_from_axis_angle(axis, angle), q)
    if pos is p.position and q is p.orientation:
        return p
    return Pose(pos, q)


def quat_average(quats, weights=None) -> np.ndarray:
    """Average a set of unit quaternions by the maximal-eigenvector method.

    Builds the weighted outer-product accumulation matrix
    ``M = sum_i w_i q_i q_i^T`` and returns its dominant eigenvector, which
    is invariant to permutation of the inputs and to the sign of every input
    quaternion.  The eigenvector is found by power iteration with a single
    deflation fallback for (near-)degenerate spectra; the returned sign is
    fixed deterministically (first nonzero component non-negative, scanning
    w, x, y, z).

    Raises ValueError on an empty input set or all-zero weights.
    """
    Q = np.asarray(quats, dtype=np.float64)
    if Q.size == 0:
        raise ValueError("empty rotation set")
    if Q.ndim == 1:
        Q = Q.reshape(1, 4)
    if Q.shape[1] != 4:
        raise ValueError("quaternions must have 4 components")
    if weights is None:
        w = np.full(Q.shape[0], 1.0 / Q.shape[0])
    else:
        w = np.asarray(weights, dtype=np.float64)
        if w.shape != (Q.shape[0],):
            raise ValueError("weights must match the number of quaternions")
        if np.any(w < 0):
            raise ValueError("weights must be non-negative")
        tot = float(w.sum())
        if tot <= 0:
            raise ValueError("weights must not all be zero")
        w = w / tot
    M = (Q * w[:, None]).T @ Q
    v = _dominant_eigenvector(M)
    return _canonical_sign(v)


def _canonical_sign(q: np.ndarray) -> np.ndarray:
    for c in q:
        if c != 0.0:
            return q if c > 0 else -q
    return q


def _power_iterate(M: np.ndarray, v: np.ndarray, max_iter: int, tol: float):
    """Run power iteration; returns (vector, eigenvalue, converged)."""
    lam = 0.0
    for _ in range(max_iter):
        nv = M @ v
        norm = math.sqrt(float(nv @ nv))
        if norm < 1e-300:
            # v is in the null space; restart from a different basis vector
            return v, 0.0, False
        nv = nv / norm
        # sign-align with the previous iterate so the step norm is meaningful
        if float(nv @ v) < 0.0:
            nv = -nv
        delta = float(np.max(np.abs(nv - v)))
        v = nv
        lam = float(v @ (M @ v))
        if delta < tol:
            return v, lam, True
    return v, lam, False


def _dominant_eigenvector(M: np.ndarray) -> np.ndarray:
    # deterministic start: the column with the largest diagonal entry
    start = int(np.argmax(np.diag(M)))
    v0 = np.zeros(4)
    v0[start] = 1.0
    v, lam, ok = _power_iterate(M, v0, max_iter=50_000, tol=1e-15)
    if ok:
        return v
    # Slow convergence means the top two eigenvalues (nearly) tie, e.g. for
    # antipodal input sets.  Deflate and compare the two candidates; on a tie
    # any vector in the top eigenspace is a valid average, so keep the first.
    M2 = M - lam * np.outer(v, v)
    start2 = int(np.argmax(np.diag(M2)))
    w0 = np.zeros(4)
    w0[start2] = 1.0
    w0 -= v * float(v @ w0)
    n = math.sqrt(float(w0 @ w0))
    if n < 1e-12:
        return v
    v2, lam2, _ = _power_iterate(M2, w0 / n, max_iter=50_000, tol=1e-15)
    if lam2 > lam:
        return v2
    return v
