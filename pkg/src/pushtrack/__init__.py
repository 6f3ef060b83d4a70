"""pushtrack: 6D pose tracking of a pushed object.

The package tracks the pose of a rigid object being pushed across a flat
surface.  Three trackers share one observation abstraction: a particle
filter whose motion model rolls sampled physics forward (the main method),
a constant-velocity particle filter, and a tracker that simply repeats the
latest pose snapshot.  A built-in deterministic pusher-slider simulator
provides both ground truth and the particle rollouts, and the harness
turns scripted scenarios into replayable logs and CSV reports.
"""

from .geometry import (
    NoiseSpec,
    Pose,
    PoseError,
    identity_pose,
    perturb_pose,
    pose_compose,
    pose_error,
    pose_inverse,
    quat_average,
)
from .physics import (
    Control,
    Obstacle,
    ParamPrior,
    PhysicsParams,
    PusherSliderBackend,
    SceneModel,
    sample_params,
    step,
)

__version__ = "0.1.0"

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
    "PhysicsParams",
    "ParamPrior",
    "sample_params",
    "Control",
    "Obstacle",
    "SceneModel",
    "PusherSliderBackend",
    "step",
    "__version__",
]
