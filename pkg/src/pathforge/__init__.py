"""Path discretization and Fuzzy-PI hybrid force/motion control for robot end-effectors."""

from .contact_sim import SimTrace, StepStatus, SurfaceModel, contact_force, run_force_controlled, run_open_loop
from .discretize import (
    CircleFit,
    NagataCurve,
    Trajectory,
    attach_orientations,
    circular_discretize,
    fit_circle,
    linear_discretize,
    nagata_discretize,
    nagata_eval,
    nagata_prepare,
    slerp_sequence,
)
from .fuzzy_control import FuzzyPIState, Label, MembershipSet, RuleBase, defuzzify, fuzzify, fuzzy_pi_step, infer
from .geometry import FrameTransform, Pose, UnitQuaternion, frame_from_three_points, invert, transform_point

__version__ = "0.1.0"
