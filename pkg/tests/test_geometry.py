"""Pose algebra, noise, and rotation averaging, checked against scipy and a
dense eigendecomposition oracle."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial.transform import Rotation

from conftest import quat_close, random_pose, random_quat
from pushtrack.geometry import (
    NoiseSpec,
    Pose,
    identity_pose,
    perturb_pose,
    pose_compose,
    pose_error,
    pose_inverse,
    quat_about_z,
    quat_average,
    quat_from_axis_angle,
    quat_mul,
    quat_rotate,
    rotation_angle,
    yaw_of_quat,
)
from pushtrack.streams import stream


def to_scipy(q):
    """(w, x, y, z) -> scipy's (x, y, z, w)."""
    return Rotation.from_quat([q[1], q[2], q[3], q[0]])


# ---------------------------------------------------------------------------
# Pose construction

def test_pose_renormalizes_quaternion():
    p = Pose((0, 0, 0), (2.0, 0.0, 0.0, 0.0))
    assert np.allclose(p.orientation, [1, 0, 0, 0])
    assert abs(np.linalg.norm(p.orientation) - 1.0) < 1e-9


def test_pose_rejects_degenerate_inputs():
    with pytest.raises(ValueError):
        Pose((0, 0, 0), (0, 0, 0, 0))
    with pytest.raises(ValueError):
        Pose((np.nan, 0, 0), (1, 0, 0, 0))
    with pytest.raises(ValueError):
        Pose((0, 0, 0), (np.inf, 0, 0, 0))


def test_pose_arrays_are_frozen():
    p = identity_pose()
    with pytest.raises(ValueError):
        p.position[0] = 1.0
    with pytest.raises(ValueError):
        p.orientation[0] = 0.5


def test_pose_row_round_trip():
    rng = np.random.default_rng(3)
    for _ in range(20):
        p = random_pose(rng)
        q = Pose.from_row(p.as_row())
        assert np.array_equal(q.position, p.position)
        assert np.array_equal(q.orientation, p.orientation)


# ---------------------------------------------------------------------------
# quaternion primitives vs scipy

def test_quat_mul_matches_scipy():
    rng = np.random.default_rng(10)
    for _ in range(200):
        a, b = random_quat(rng), random_quat(rng)
        ours = quat_mul(a, b)
        theirs = (to_scipy(a) * to_scipy(b)).as_quat()  # x y z w
        assert quat_close(ours, [theirs[3], theirs[0], theirs[1], theirs[2]], 1e-12)


def test_quat_rotate_matches_scipy():
    rng = np.random.default_rng(11)
    for _ in range(200):
        q = random_quat(rng)
        v = rng.standard_normal(3)
        assert np.allclose(quat_rotate(q, v), to_scipy(q).apply(v), atol=1e-12)


def test_quat_from_axis_angle_matches_scipy():
    rng = np.random.default_rng(12)
    for _ in range(100):
        axis = rng.standard_normal(3)
        angle = rng.uniform(-3, 3)
        ours = quat_from_axis_angle(axis, angle)
        rv = axis / np.linalg.norm(axis) * angle
        theirs = Rotation.from_rotvec(rv).as_quat()
        assert quat_close(ours, [theirs[3], theirs[0], theirs[1], theirs[2]], 1e-12)
    with pytest.raises(ValueError):
        quat_from_axis_angle(np.zeros(3), 1.0)


def test_quat_about_z_yaw_round_trip():
    for angle in (-3.0, -0.5, 0.0, 0.25, 1.0, 3.1):
        assert abs(yaw_of_quat(quat_about_z(angle)) - angle) < 1e-12


# ---------------------------------------------------------------------------
# composition and error metrics

def test_compose_identity_is_neutral():
    rng = np.random.default_rng(13)
    p = random_pose(rng)
    out = pose_compose(identity_pose(), p)
    assert np.allclose(out.position, p.position, atol=1e-15)
    assert quat_close(out.orientation, p.orientation, 1e-15)


def test_compose_with_inverse_is_identity():
    rng = np.random.default_rng(14)
    for _ in range(50):
        p = random_pose(rng)
        out = pose_compose(p, pose_inverse(p))
        assert np.linalg.norm(out.position) < 1e-12
        assert quat_close(out.orientation, np.array([1.0, 0, 0, 0]), 1e-12)


def test_compose_stacks_shared_axis_rotations():
    quarter = Pose((0, 0, 0), quat_about_z(math.pi / 2))
    out = pose_compose(quarter, quarter)
    assert abs(rotation_angle(out.orientation, quat_about_z(math.pi))) < 1e-12


def test_compose_matches_matrix_oracle():
    rng = np.random.default_rng(15)
    for _ in range(100):
        a, b = random_pose(rng), random_pose(rng)
        out = pose_compose(a, b)
        Ra, Rb = to_scipy(a.orientation), to_scipy(b.orientation)
        assert np.allclose(out.position, Ra.apply(b.position) + a.position, atol=1e-12)
        expect = (Ra * Rb).as_quat()
        assert quat_close(out.orientation, [expect[3], *expect[:3]], 1e-12)


def test_rotation_angle_matches_scipy_geodesic():
    rng = np.random.default_rng(16)
    for _ in range(300):
        a, b = random_quat(rng), random_quat(rng)
        theirs = (to_scipy(a).inv() * to_scipy(b)).magnitude()
        assert abs(rotation_angle(a, b) - theirs) < 1e-9


def test_pose_error_worked_values():
    assert pose_error(identity_pose(), identity_pose()) == pose_error(
        identity_pose(), identity_pose()
    )
    e = pose_error(identity_pose(), identity_pose())
    assert e.positional == 0.0 and e.rotational == 0.0

    # 3-4-5 style distance
    p = Pose((1, 2, 2), (1, 0, 0, 0))
    assert abs(pose_error(p, identity_pose()).positional - 3.0) < 1e-15

    # double cover: q and -q are the same rotation
    rng = np.random.default_rng(17)
    q = random_quat(rng)
    e = pose_error(Pose((0, 0, 0), q), Pose((0, 0, 0), -q))
    assert e.rotational == 0.0


def test_pose_error_symmetric_and_sign_invariant():
    rng = np.random.default_rng(18)
    for _ in range(100):
        a, b = random_pose(rng), random_pose(rng)
        e1 = pose_error(a, b)
        e2 = pose_error(b, a)
        assert abs(e1.positional - e2.positional) < 1e-12
        assert abs(e1.rotational - e2.rotational) < 1e-12
        flipped = Pose(a.position, -a.orientation)
        e3 = pose_error(flipped, b)
        assert abs(e1.rotational - e3.rotational) < 1e-12
        assert 0.0 <= e1.rotational <= math.pi + 1e-12


def test_rotational_error_left_invariance():
    rng = np.random.default_rng(19)
    for _ in range(100):
        a, b, r = random_quat(rng), random_quat(rng), random_quat(rng)
        base = rotation_angle(a, b)
        rotated = rotation_angle(quat_mul(r, a), quat_mul(r, b))
        assert abs(base - rotated) < 1e-9


# ---------------------------------------------------------------------------
# perturb_pose

def test_perturb_zero_noise_is_bit_exact_and_draws_nothing():
    rng = np.random.default_rng(20)
    p = random_pose(rng)
    g = stream(7, 1, 0, 0)
    out = perturb_pose(p, NoiseSpec(0.0, 0.0), g)
    assert out is p
    # the stream was not consumed
    assert g.random() == stream(7, 1, 0, 0).random()


def test_perturb_position_std_moment():
    g = stream(21, 1)
    base = identity_pose()
    n = 100_000
    deltas = np.empty((n, 3))
    for i in range(n):
        deltas[i] = perturb_pose(base, NoiseSpec(0.005, 0.0), g).position
    stds = deltas.std(axis=0)
    assert np.all(np.abs(stds - 0.005) < 0.03 * 0.005)


def test_perturb_rotation_folded_normal_mean():
    g = stream(22, 1)
    base = identity_pose()
    n = 100_000
    angles = np.empty(n)
    for i in range(n):
        out = perturb_pose(base, NoiseSpec(0.0, 0.05), g)
        angles[i] = rotation_angle(out.orientation, base.orientation)
    expect = math.sqrt(2.0 / math.pi) * 0.05
    assert abs(angles.mean() - expect) < 0.05 * expect


def test_perturb_rotation_only_keeps_position():
    g = stream(23, 1)
    p = random_pose(np.random.default_rng(23))
    out = perturb_pose(p, NoiseSpec(0.0, 0.1), g)
    assert np.array_equal(out.position, p.position)
    assert rotation_angle(out.orientation, p.orientation) > 0


# ---------------------------------------------------------------------------
# quat_average

def oracle_average(quats, weights=None):
    """Dense symmetric eigendecomposition of the accumulation matrix."""
    Q = np.asarray(quats, dtype=float)
    w = np.full(len(Q), 1.0 / len(Q)) if weights is None else np.asarray(weights, float)
    M = (Q * w[:, None]).T @ Q
    vals, vecs = np.linalg.eigh(M)
    return vecs[:, -1]


def test_average_of_identical_quats():
    rng = np.random.default_rng(30)
    q = random_quat(rng)
    assert quat_close(quat_average([q, q, q]), q, 1e-12)


def test_average_respects_double_cover():
    rng = np.random.default_rng(31)
    q = random_quat(rng)
    assert quat_close(quat_average([q, -q]), q, 1e-9)


def test_average_halves_a_single_z_rotation():
    got = quat_average([np.array([1.0, 0, 0, 0]), quat_about_z(math.pi / 2)])
    assert quat_close(got, quat_about_z(math.pi / 4), 1e-9)


def test_average_invariant_to_permutation_and_sign():
    rng = np.random.default_rng(32)
    quats = [random_quat(rng) for _ in range(6)]
    base = quat_average(quats)
    shuffled = [quats[i] for i in (3, 0, 5, 1, 4, 2)]
    assert quat_close(quat_average(shuffled), base, 1e-9)
    flipped = [q if i % 2 else -q for i, q in enumerate(quats)]
    assert quat_close(quat_average(flipped), base, 1e-9)


def test_average_weight_handling():
    rng = np.random.default_rng(33)
    a, b = random_quat(rng), random_quat(rng)
    # all the mass on one input returns that input
    assert quat_close(quat_average([a, b], weights=[1.0, 0.0]), a, 1e-9)
    # scaling all weights is a no-op
    w = np.array([0.2, 0.8])
    assert quat_close(
        quat_average([a, b], weights=w), quat_average([a, b], weights=10 * w), 1e-12
    )


def test_average_matches_eigh_oracle_on_random_sets():
    rng = np.random.default_rng(34)
    for _ in range(100):
        n = int(rng.integers(1, 11))
        quats = [random_quat(rng) for _ in range(n)]
        weights = rng.uniform(0.1, 1.0, size=n) if rng.random() < 0.5 else None
        got = quat_average(quats, weights)
        want = oracle_average(quats, weights)
        assert quat_close(got, want, 1e-9)


def test_average_antipodal_tie_still_returns_a_unit_average():
    # top eigenvalue is degenerate here; any vector in the top eigenspace
    # is a legitimate mean, so only unitness and optimality are required
    quats = [np.array([1.0, 0, 0, 0]), quat_about_z(math.pi)]
    got = quat_average(quats)
    assert abs(np.linalg.norm(got) - 1.0) < 1e-9
    M = sum(0.5 * np.outer(q, q) for q in quats)
    top = np.linalg.eigvalsh(M)[-1]
    assert abs(float(got @ M @ got) - top) < 1e-9


def test_average_error_cases():
    with pytest.raises(ValueError, match="empty rotation set"):
        quat_average([])
    q = np.array([1.0, 0, 0, 0])
    with pytest.raises(ValueError):
        quat_average([q, q], weights=[1.0])
    with pytest.raises(ValueError):
        quat_average([q, q], weights=[-1.0, 2.0])
    with pytest.raises(ValueError):
        quat_average([q, q], weights=[0.0, 0.0])


# ---------------------------------------------------------------------------
# property checks

@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_compose_is_associative(seed):
    rng = np.random.default_rng(seed)
    a, b, c = (random_pose(rng) for _ in range(3))
    left = pose_compose(pose_compose(a, b), c)
    right = pose_compose(a, pose_compose(b, c))
    assert np.allclose(left.position, right.position, atol=1e-12)
    assert quat_close(left.orientation, right.orientation, 1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_pose_error_is_zero_only_at_equality(seed):
    rng = np.random.default_rng(seed)
    p = random_pose(rng)
    e = pose_error(p, p)
    assert e.positional == 0.0 and e.rotational < 1e-7
    q = Pose(p.position + (1e-3, 0, 0), p.orientation)
    assert pose_error(p, q).positional > 0
