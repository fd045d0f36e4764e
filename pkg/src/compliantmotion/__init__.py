"""Learning 6-D linear compliant-motion primitives from pose+wrench demonstrations.

The package covers the full loop: synthetic demonstration generation in
a quasi-static contact simulator, work-ratio analysis, desired-direction
learning by sector intersection, compliant-axis selection, and simulated
reproduction of the learned primitive.
"""

from .core import (
    CHANNELS,
    Channel,
    CompliantPrimitive,
    Demonstration,
    LearnerConfig,
    MotionStep,
    Pose,
    WrenchSample,
    validate_demonstration,
)
from .compliance import (
    ComplianceResult,
    pca_ranks,
    remove_desired_component,
    residuals,
    select_num_axes,
    stiffness_matrix,
)
from .direction import (
    AngleRectangle,
    DesiredDirectionResult,
    align_to_z,
    ang2vec,
    chebyshev_center,
    compute_pitch,
    intersect_rectangles,
    learn_desired_direction,
    sector_rectangle,
    select_inliers,
    vec2ang,
    vote_grid,
)
from .pipeline import LearnReport, learn_primitive
from .preproc import aggregate, mean_direction
from .rotations import rotation_exp, rotation_log
from .sim import (
    BodyState,
    Environment,
    Facet,
    GoalRegion,
    SimParams,
    TeacherSpec,
    Trajectory,
    contact_wrench,
    generate_demo,
    reproduce,
    step_controller,
)
from .scenarios import SCENARIOS, Scenario, build
from .work import WorkProfile, is_three_dof_compliant, work_profile

__version__ = "0.1.0"

__all__ = [
    "AngleRectangle",
    "BodyState",
    "CHANNELS",
    "Channel",
    "ComplianceResult",
    "CompliantPrimitive",
    "Demonstration",
    "DesiredDirectionResult",
    "Environment",
    "Facet",
    "GoalRegion",
    "LearnReport",
    "LearnerConfig",
    "MotionStep",
    "Pose",
    "SCENARIOS",
    "Scenario",
    "SimParams",
    "TeacherSpec",
    "Trajectory",
    "WorkProfile",
    "WrenchSample",
    "aggregate",
    "align_to_z",
    "ang2vec",
    "build",
    "chebyshev_center",
    "compute_pitch",
    "contact_wrench",
    "generate_demo",
    "intersect_rectangles",
    "is_three_dof_compliant",
    "learn_desired_direction",
    "learn_primitive",
    "mean_direction",
    "pca_ranks",
    "reproduce",
    "remove_desired_component",
    "residuals",
    "rotation_exp",
    "rotation_log",
    "sector_rectangle",
    "select_inliers",
    "select_num_axes",
    "step_controller",
    "stiffness_matrix",
    "validate_demonstration",
    "vec2ang",
    "vote_grid",
    "work_profile",
]
