"""Bundled parametric contact scenarios at desk scale.

Each builder returns a Scenario: environment (facets, goal, probes),
a teacher specification for synthesizing demonstrations, a start pose
and bookkeeping (duration, ground-truth vectors for tests and plots).

    valley  two plates at 45 degrees; pure-translation alignment
    peg2d   chamferless peg-in-hole cross section, tilt about +y
    edge    stick levered around a table edge; contact drives translation
    couple  V-socket alignment, tilt about +x; mirrored demos disagree on rotation
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .core import Pose
from .rotations import rotation_exp
from .sim import BodyFace, CornerFeature, Environment, Facet, GoalRegion, SimParams, TeacherSpec

SQ2 = math.sqrt(2.0)


@dataclass(frozen=True)
class Scenario:
    name: str
    env: Environment
    teacher: TeacherSpec
    start: Pose
    duration: float
    params: SimParams = SimParams()
    max_steps: int = 6000
    demo_frame: str = "world"
    truth: dict = field(default_factory=dict)


def _quat_about(axis, angle_rad: float) -> np.ndarray:
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    return rotation_exp(axis * angle_rad)


def valley(
    side: str = "left",
    start_slant: float = 0.04,
    mu: float = 0.7,
    noise_deg: float = 0.0,
    force_mag: float = 10.0,
) -> Scenario:
    """Two plates at 45 degrees forming a V along y; teacher presses straight down.

    The true desired direction is -z (the face bisector) and the single
    compliant translation axis is the valley-transverse x. The default
    friction is dry-metal-like; it also keeps the per-step sectors narrow
    enough that their intersection pins the direction tightly.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    facets = (
        Facet(point=np.zeros(3), normal=np.array([1.0, 0.0, 1.0]) / SQ2, mu=mu),
        Facet(point=np.zeros(3), normal=np.array([-1.0, 0.0, 1.0]) / SQ2, mu=mu),
    )
    goal = GoalRegion(pose=Pose.identity(), tol_pos=0.001, tol_rot=math.pi / 2)
    env = Environment(
        facets=facets,
        goal=goal,
        bounds=np.array([[-0.5, -0.5, -0.5], [0.5, 0.5, 0.5]]),
        probes=np.zeros((1, 3)),
    )
    sgn = -1.0 if side == "left" else 1.0
    start = Pose(np.array([sgn * start_slant / SQ2, 0.0, start_slant / SQ2]), [1, 0, 0, 0])
    teacher = TeacherSpec(
        force_mag=force_mag,
        trans_dir=np.array([0.0, 0.0, -1.0]),
        noise_deg=noise_deg,
        stop_goal=GoalRegion(pose=Pose.identity(), tol_pos=0.004, tol_rot=math.pi),
    )
    return Scenario(
        name="valley",
        env=env,
        teacher=teacher,
        start=start,
        duration=4.0,
        max_steps=6000,
        truth={
            "v_d": np.array([0.0, 0.0, -1.0]),
            "compliant_axis": np.array([1.0, 0.0, 0.0]),
            "bottom_line_point": np.zeros(3),
            "bottom_line_dir": np.array([0.0, 1.0, 0.0]),
        },
    )


def peg2d(
    angle_deg: float = 20.0,
    clearance: float = 0.00025,
    engagement: Optional[float] = None,
    peg_radius: float = 0.0165,
    peg_length: float = 0.08,
    depth: float = 0.05,
    mu: float = 0.3,
    mu_bore: float = 0.06,
    tip_round: float = 0.0015,
    noise_deg: float = 0.0,
    rot_noise_deg: Optional[float] = None,
    force_noise: float = 0.0,
    torque_noise: float = 0.0,
    force_mag: float = 3.0,
    torque_mag: float = 1.5,
    probe_spacing: float = 0.0025,
) -> Scenario:
    """Chamferless hole cross section in the x-z plane, peg tilted about +y.

    The peg starts with its tip inside the hole mouth at the given tilt,
    centered in the remaining gap. Default radius/clearance echo the
    reference hardware (16.5 mm peg, 0.25 mm radial clearance);
    acceptance sweeps use a wider clearance so the rigid 2-D model leaves
    a usable convergence region. tip_round sets both the inboard offset of
    the lowest probes and the lip chamfer width, together emulating the
    rounded tool end the hardware relies on. The bore is polished
    (mu_bore) while the rim and face are rougher (mu): entry wedges can
    lock while deep sliding stays free, which is where jams happen on the
    real setup too.
    """
    W = peg_radius + clearance
    big = 1.0
    # The hardware analog rounds the TOOL end; with point probes the
    # equivalent geometry is a lip rounding, modeled as 45-degree chamfer
    # facets of width tip_round at the mouth. They give corner contacts
    # the inclined normals that funnel the tip toward the hole axis.
    ch = tip_round
    facets = (
        Facet(  # left wall (bore)
            point=np.array([-W, 0.0, 0.0]),
            normal=np.array([1.0, 0.0, 0.0]),
            mu=mu_bore,
            extent=np.array([[-W - 1e-6, -big, -depth], [-W + 1e-6, big, -ch]]),
        ),
        Facet(  # right wall (bore)
            point=np.array([W, 0.0, 0.0]),
            normal=np.array([-1.0, 0.0, 0.0]),
            mu=mu_bore,
            extent=np.array([[W - 1e-6, -big, -depth], [W + 1e-6, big, -ch]]),
        ),
        Facet(  # left lip chamfer
            point=np.array([-W, 0.0, -ch]),
            normal=np.array([1.0, 0.0, 1.0]) / SQ2,
            mu=mu,
            extent=np.array([[-W - ch - 1e-6, -big, -ch - 1e-6], [-W + 1e-6, big, 1e-6]]),
        ),
        Facet(  # right lip chamfer
            point=np.array([W, 0.0, -ch]),
            normal=np.array([-1.0, 0.0, 1.0]) / SQ2,
            mu=mu,
            extent=np.array([[W - 1e-6, -big, -ch - 1e-6], [W + ch + 1e-6, big, 1e-6]]),
        ),
        Facet(  # hole bottom (bore)
            point=np.array([0.0, 0.0, -depth]),
            normal=np.array([0.0, 0.0, 1.0]),
            mu=mu_bore,
            extent=np.array([[-W, -big, -depth - 1e-6], [W, big, -depth + 1e-6]]),
        ),
        Facet(  # top surface, left of the hole
            point=np.array([0.0, 0.0, 0.0]),
            normal=np.array([0.0, 0.0, 1.0]),
            mu=0.05,
            extent=np.array([[-big, -big, -1e-6], [-W - ch, big, 1e-6]]),
        ),
        Facet(  # top surface, right of the hole
            point=np.array([0.0, 0.0, 0.0]),
            normal=np.array([0.0, 0.0, 1.0]),
            mu=0.05,
            extent=np.array([[W + ch, -big, -1e-6], [big, big, 1e-6]]),
        ),
    )
    # Body geometry: the rounded tip is a short probe row (inboard corners
    # plus flank transition points); the flat flanks are faces pressed by
    # the hole lips.
    probes = np.array(
        [
            [-(peg_radius - tip_round), 0.0, -peg_length],
            [peg_radius - tip_round, 0.0, -peg_length],
            [-peg_radius, 0.0, -peg_length + tip_round],
            [peg_radius, 0.0, -peg_length + tip_round],
        ]
    )
    body_faces = (
        BodyFace(
            a=np.array([-peg_radius, 0.0, -peg_length + tip_round]),
            b=np.array([-peg_radius, 0.0, 0.0]),
            normal=np.array([-1.0, 0.0, 0.0]),
        ),
        BodyFace(
            a=np.array([peg_radius, 0.0, -peg_length + tip_round]),
            b=np.array([peg_radius, 0.0, 0.0]),
            normal=np.array([1.0, 0.0, 0.0]),
        ),
    )
    corners = (
        CornerFeature(point=np.array([-W, 0.0, 0.0]), mu=mu),
        CornerFeature(point=np.array([W, 0.0, 0.0]), mu=mu),
    )
    goal_pose = Pose(np.array([0.0, 0.0, peg_length - depth]), [1, 0, 0, 0])
    slot = np.array([1.0, 0.0, 1.0])  # the cross-section is y-invariant
    env = Environment(
        facets=facets,
        goal=GoalRegion(pose=goal_pose, tol_pos=0.002, tol_rot=math.radians(2.0), pos_weights=slot),
        bounds=np.array([[-0.6, -0.6, -0.6], [0.6, 0.6, 0.6]]),
        probes=probes,
        corners=corners,
        body_faces=body_faces,
    )
    theta = math.radians(angle_deg)
    if engagement is None:
        # Start with the tip just inside the mouth, no deeper than the
        # tilt geometrically allows (about 2 * clearance / tan(theta)).
        if theta > 1e-6:
            engagement = min(0.006, clearance / math.tan(theta))
        else:
            engagement = 0.006
    q0 = _quat_about([0.0, 1.0, 0.0], theta)
    # Center the tilted cross section in the hole gap.
    tip_x = -math.tan(theta) * (engagement + peg_radius * math.sin(theta)) / 2.0
    tip = np.array([tip_x, 0.0, -engagement])
    wrist = tip + peg_length * np.array([math.sin(theta), 0.0, math.cos(theta)])
    start = Pose(wrist, q0)
    teacher = TeacherSpec(
        force_mag=force_mag,
        trans_dir=None,  # lead the peg toward the goal, like a hand would
        torque_mag=torque_mag,
        rot_mode="to_goal",
        noise_deg=noise_deg,
        rot_noise_deg=rot_noise_deg,
        force_noise=force_noise,
        torque_noise=torque_noise,
        stop_goal=GoalRegion(pose=goal_pose, tol_pos=0.004, tol_rot=math.radians(4.0), pos_weights=slot),
    )
    return Scenario(
        name="peg2d",
        env=env,
        teacher=teacher,
        start=start,
        duration=8.0,
        max_steps=8000,
        demo_frame="tool",
        truth={
            "v_d": np.array([0.0, 0.0, -1.0]),
            "w_d": np.array([0.0, -1.0, 0.0]),
            "tilt_axis": np.array([0.0, 1.0, 0.0]),
            "angle_deg": angle_deg,
        },
    )


def edge(
    total_rotation_deg: float = 35.0,
    stick_length: float = 0.12,
    mu: float = 0.3,
    torque_mag: float = 2.0,
    noise_deg: float = 0.0,
) -> Scenario:
    """Stick levered around a table edge by a pure torque about -y.

    The wrist translation is entirely contact-driven, so translation work
    is positive throughout and the translations come out 3-DOF compliant,
    while the rotation keeps a desired direction (-y).
    """
    facets = (
        Facet(  # table top, left of the edge at x = 0
            point=np.zeros(3),
            normal=np.array([0.0, 0.0, 1.0]),
            mu=mu,
            extent=np.array([[-0.5, -0.5, -1e-6], [0.0, 0.5, 1e-6]]),
        ),
        Facet(  # table side below the edge
            point=np.zeros(3),
            normal=np.array([1.0, 0.0, 0.0]),
            mu=mu,
            extent=np.array([[-1e-6, -0.5, -0.5], [1e-6, 0.5, 0.0]]),
        ),
    )
    # The stick underside is a body face pivoting on the table-edge corner;
    # point probes cover the stick ends for flat-on-table contact.
    probes = np.array([[0.0, 0.0, 0.0], [-stick_length / 2, 0.0, 0.0], [-stick_length, 0.0, 0.0]])
    body_faces = (
        BodyFace(
            a=np.array([-stick_length, 0.0, 0.0]),
            b=np.zeros(3),
            normal=np.array([0.0, 0.0, -1.0]),
        ),
    )
    corners = (CornerFeature(point=np.zeros(3), mu=mu),)

    wrist_x, wrist_drop = 0.05, 0.012
    eps = math.atan2(wrist_drop, wrist_x)  # stick crosses the edge corner
    start = Pose(np.array([wrist_x, 0.0, -wrist_drop]), _quat_about([0, 1, 0], eps))
    delta = math.radians(total_rotation_deg)
    goal_pose = Pose(start.position, _quat_about([0, 1, 0], eps - delta))
    env = Environment(
        facets=facets,
        goal=GoalRegion(pose=goal_pose, tol_pos=0.5, tol_rot=math.radians(3.0)),
        bounds=np.array([[-0.6, -0.6, -0.6], [0.6, 0.6, 0.6]]),
        probes=probes,
        corners=corners,
        body_faces=body_faces,
    )
    teacher = TeacherSpec(
        force_mag=0.0,
        torque_mag=torque_mag,
        rot_mode="fixed",
        rot_axis=np.array([0.0, -1.0, 0.0]),
        noise_deg=noise_deg,
        stop_goal=GoalRegion(pose=goal_pose, tol_pos=0.5, tol_rot=math.radians(5.0)),
    )
    return Scenario(
        name="edge",
        env=env,
        teacher=teacher,
        start=start,
        duration=8.0,
        max_steps=10000,
        truth={"w_d": np.array([0.0, -1.0, 0.0])},
    )


def couple(
    side: int = 1,
    tilt_deg: float = 15.0,
    mu: float = 0.2,
    noise_deg: float = 0.0,
    force_mag: float = 8.0,
    torque_mag: float = 0.8,
) -> Scenario:
    """V-socket alignment in the y-z plane; the plug tilts about +x by side * tilt.

    Mirrored demos rotate about opposite axes, so no common desired
    rotation exists and the learner must fall back to a compliant axis
    along x.
    """
    if side not in (1, -1):
        raise ValueError("side must be +1 or -1")
    facets = (
        Facet(point=np.zeros(3), normal=np.array([0.0, 1.0, 1.0]) / SQ2, mu=mu),
        Facet(point=np.zeros(3), normal=np.array([0.0, -1.0, 1.0]) / SQ2, mu=mu),
    )
    nose_len, rim_half, rim_height = 0.055, 0.02, 0.03
    probes = np.array(
        [
            [0.0, 0.0, -nose_len],
            [0.0, rim_half, -nose_len + rim_height],
            [0.0, -rim_half, -nose_len + rim_height],
        ]
    )
    goal_pose = Pose(np.array([0.0, 0.0, nose_len]), [1, 0, 0, 0])
    env = Environment(
        facets=facets,
        goal=GoalRegion(pose=goal_pose, tol_pos=0.002, tol_rot=math.radians(2.0)),
        bounds=np.array([[-0.5, -0.5, -0.5], [0.5, 0.5, 0.5]]),
        probes=probes,
    )
    tilt = math.radians(tilt_deg) * side
    start = Pose(
        np.array([0.0, side * 0.01, nose_len + 0.02]), _quat_about([1, 0, 0], tilt)
    )
    teacher = TeacherSpec(
        force_mag=force_mag,
        trans_dir=None,
        torque_mag=torque_mag,
        rot_mode="to_goal",
        noise_deg=noise_deg,
        stop_goal=GoalRegion(pose=goal_pose, tol_pos=0.004, tol_rot=math.radians(4.0)),
    )
    return Scenario(
        name="couple",
        env=env,
        teacher=teacher,
        start=start,
        duration=5.0,
        max_steps=6000,
        truth={
            "v_d": np.array([0.0, 0.0, -1.0]),
            "compliant_rot_axis": np.array([1.0, 0.0, 0.0]),
        },
    )


SCENARIOS: dict[str, Callable[..., Scenario]] = {
    "valley": valley,
    "peg2d": peg2d,
    "edge": edge,
    "couple": couple,
}


def build(name: str, **kwargs) -> Scenario:
    if name not in SCENARIOS:
        raise KeyError(f"unknown scenario '{name}'; have {sorted(SCENARIOS)}")
    return SCENARIOS[name](**kwargs)
