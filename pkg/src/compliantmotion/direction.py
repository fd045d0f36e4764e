"""Desired-direction learning: per-step direction sectors, voting, intersection.

Each usable step yields the set of pushing directions that would have
produced its observed motion: a 2-D sector between the motion direction
and the negated measured wrench, widened by the config angles and
expanded out of plane. Projected to angle space these sets are convex
quadrilaterals; a vote grid rejects outliers, the surviving rectangles
are intersected, and the Chebyshev center of the intersection is mapped
back to a 3-D unit direction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import geometry
from .core import Channel, LearnerConfig, MotionStep
from .errors import ContraryWrench, NoRotation, NoUsableSteps, OutOfDomain, ZeroVector
from .geometry import chebyshev_center  # noqa: F401  (public at this module per the pipeline layout)

_DEGENERATE_ANGLE = 1e-3


@dataclass(frozen=True)
class AngleRectangle:
    """Projected admissible-direction set of one step, as a convex polygon in angle space."""

    corners: np.ndarray
    step_index: int

    def __post_init__(self):
        c = np.asarray(self.corners, dtype=float).reshape(-1, 2)
        c.flags.writeable = False
        object.__setattr__(self, "corners", c)


@dataclass(frozen=True)
class DesiredDirectionResult:
    """Outcome of the desired-direction search for one channel."""

    direction: Optional[np.ndarray]
    inlier_ratio: float
    intersection: np.ndarray
    chebyshev_radius: float
    n_rectangles: int
    n_inliers: int
    # Diagnostics for reports and plots.
    rectangles: tuple = ()
    inlier_indices: tuple = ()
    vote_cell: Optional[np.ndarray] = None
    align_rotation: Optional[np.ndarray] = None
    angle_center: Optional[np.ndarray] = None
    n_contrary: int = 0


def vec2ang(p: np.ndarray) -> np.ndarray:
    """Project 3-D vector(s) onto the 2-D angle disc.

    With p normalized, r = arccos(p_z) and gamma = atan2(p_y, p_x);
    the result is (r cos gamma, r sin gamma). Accepts shape (3,) or (..., 3).
    """
    p = np.asarray(p, dtype=float)
    single = p.ndim == 1
    q = p[None, :] if single else p
    norm = np.linalg.norm(q, axis=-1)
    if np.any(norm == 0.0) or not np.all(np.isfinite(norm)):
        raise ZeroVector("vec2ang requires nonzero finite vectors")
    ph = q / norm[..., None]
    # atan2(hypot(x, y), z) equals arccos(z) for unit vectors and stays
    # well conditioned at the poles.
    r = np.arctan2(np.hypot(ph[..., 0], ph[..., 1]), ph[..., 2])
    gamma = np.arctan2(ph[..., 1], ph[..., 0])
    theta = np.stack([r * np.cos(gamma), r * np.sin(gamma)], axis=-1)
    return theta[0] if single else theta


def ang2vec(theta: np.ndarray) -> np.ndarray:
    """Exact inverse of vec2ang on the open disc of radius pi.

    Raises OutOfDomain when |theta| >= pi. Accepts shape (2,) or (..., 2).
    """
    t = np.asarray(theta, dtype=float)
    single = t.ndim == 1
    q = t[None, :] if single else t
    r = np.linalg.norm(q, axis=-1)
    if np.any(r >= np.pi):
        raise OutOfDomain("angle-space points must have norm < pi")
    gamma = np.arctan2(q[..., 1], q[..., 0])
    s = np.sin(r)
    p = np.stack([s * np.cos(gamma), s * np.sin(gamma), np.cos(r)], axis=-1)
    return p[0] if single else p


def align_to_z(mean_dir: np.ndarray) -> np.ndarray:
    """Minimal rotation matrix mapping mean_dir onto +z.

    The axis is normalize(mean_dir x z); an (anti)parallel input falls
    back to identity, or to a 180-degree turn about x for -z.
    """
    m = np.asarray(mean_dir, dtype=float)
    n = np.linalg.norm(m)
    if n == 0.0:
        raise ZeroVector("align_to_z requires a nonzero vector")
    m = m / n
    z = np.array([0.0, 0.0, 1.0])
    axis = np.cross(m, z)
    s = np.linalg.norm(axis)
    c = float(m[2])
    if s < 1e-9:
        if c > 0.0:
            return np.eye(3)
        return np.diag([1.0, -1.0, -1.0])  # 180 degrees about x
    axis = axis / s
    angle = np.arctan2(s, c)
    K = np.array(
        [
            [0.0, -axis[2], axis[1]],
            [axis[2], 0.0, -axis[0]],
            [-axis[1], axis[0], 0.0],
        ]
    )
    return np.eye(3) + np.sin(angle) * K + (1.0 - np.cos(angle)) * (K @ K)


def _any_orthonormal(v: np.ndarray) -> np.ndarray:
    """Some unit vector orthogonal to unit v (deterministic choice)."""
    seed = np.array([1.0, 0.0, 0.0]) if abs(v[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    u = seed - np.dot(seed, v) * v
    return u / np.linalg.norm(u)


def sector_corners(
    psi: np.ndarray, minus_pi: np.ndarray, eta_rad: float, xi_rad: float
) -> np.ndarray:
    """3-D corner vectors of the expanded admissible-direction pyramid.

    psi is the unit motion direction, minus_pi the negated unit wrench
    direction. The sector between them is widened by xi at both ends and
    expanded by eta perpendicular to its plane. When the two vectors are
    nearly parallel the in-plane and out-of-plane expansion directions
    are replaced by an orthonormal pair perpendicular to psi, so the
    pyramid keeps nonzero opening. Raises ContraryWrench when they are
    nearly antiparallel (the sector would cover a half-space).
    """
    cosang = float(np.clip(np.dot(psi, minus_pi), -1.0, 1.0))
    angle = float(np.arccos(cosang))
    if angle > np.pi - _DEGENERATE_ANGLE:
        raise ContraryWrench(
            f"motion and negated wrench subtend {angle:.4f} rad; step unusable"
        )
    if angle < _DEGENERATE_ANGLE:
        d1_dir = _any_orthonormal(psi)
        d2_dir = np.cross(psi, d1_dir)
    else:
        d1_dir = minus_pi - psi
        d1_dir = d1_dir / np.linalg.norm(d1_dir)
        d2_dir = np.cross(minus_pi, psi)
        d2_dir = d2_dir / np.linalg.norm(d2_dir)
    d1 = np.tan(xi_rad) * d1_dir
    d2 = np.tan(eta_rad) * d2_dir
    return np.array(
        [
            psi - d1 + d2,
            psi - d1 - d2,
            minus_pi + d1 + d2,
            minus_pi + d1 - d2,
        ]
    )


def sector_rectangle(
    step: MotionStep, channel: Channel, cfg: LearnerConfig, R: np.ndarray, step_index: int = 0
) -> AngleRectangle:
    """Angle-space quadrilateral of admissible desired directions for one step.

    Requires the step to carry the channel's motion direction; a step
    without a wrench direction (free-space motion) constrains the pushing
    direction to the motion itself and gets the degenerate-sector pyramid
    around it.
    """
    psi = step.motion_dir(channel)
    if psi is None:
        raise NoUsableSteps(f"step {step_index} has no {channel} motion direction")
    wrench_dir = step.wrench_dir(channel)
    minus_pi = psi if wrench_dir is None else -wrench_dir
    corners3 = sector_corners(psi, minus_pi, np.radians(cfg.eta_deg), np.radians(cfg.xi_deg))
    theta = vec2ang((R @ corners3.T).T)
    return AngleRectangle(corners=geometry.convex_order(theta), step_index=step_index)


def vote_grid(
    rects: Sequence[AngleRectangle], grid_res: float
) -> tuple[np.ndarray, int]:
    """Grid cell center contained in the most rectangles.

    The grid covers the bounding box of all rectangles at grid_res
    spacing, each cell voting once per containing rectangle. Ties go to
    the cell center closest to the origin, then lexicographically.
    """
    if not rects:
        raise NoUsableSteps("vote_grid requires at least one rectangle")
    corners = np.vstack([r.corners for r in rects])
    lo = corners.min(axis=0)
    hi = corners.max(axis=0)
    nx = max(1, int(np.ceil((hi[0] - lo[0]) / grid_res)))
    ny = max(1, int(np.ceil((hi[1] - lo[1]) / grid_res)))
    xs = lo[0] + (np.arange(nx) + 0.5) * grid_res
    ys = lo[1] + (np.arange(ny) + 0.5) * grid_res
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    centers = np.column_stack([gx.ravel(), gy.ravel()])
    counts = np.zeros(len(centers), dtype=int)
    for r in rects:
        counts += geometry.points_in_convex(r.corners, centers)
    best = counts.max()
    cand = centers[counts == best]
    order = np.lexsort((cand[:, 1], cand[:, 0], np.linalg.norm(cand, axis=1)))
    return cand[order[0]].copy(), int(best)


def select_inliers(
    rects: Sequence[AngleRectangle], cell: np.ndarray
) -> list[AngleRectangle]:
    """Rectangles containing the vote cell point (boundary inclusive)."""
    return [r for r in rects if geometry.point_in_convex(r.corners, cell, tol=1e-12)]


def intersect_rectangles(
    rects: Sequence[AngleRectangle], fallback_center: Optional[np.ndarray] = None,
    fallback_half: float = 0.005,
) -> np.ndarray:
    """Intersection polygon of the inlier rectangles by successive clipping.

    The inliers share the vote point by construction, so the result is
    nonempty up to roundoff; a numerically empty result falls back to a
    small square around fallback_center.
    """
    if not rects:
        raise NoUsableSteps("intersect_rectangles requires at least one rectangle")
    poly = geometry.ensure_ccw(rects[0].corners)
    for r in rects[1:]:
        poly = geometry.clip_convex(poly, geometry.ensure_ccw(r.corners))
        if len(poly) < 3:
            break
    if len(poly) < 3 or abs(geometry.polygon_area(poly)) == 0.0:
        if fallback_center is None:
            fallback_center = np.mean(rects[0].corners, axis=0)
        h = fallback_half
        c = fallback_center
        return np.array(
            [[c[0] - h, c[1] - h], [c[0] + h, c[1] - h], [c[0] + h, c[1] + h], [c[0] - h, c[1] + h]]
        )
    return geometry.ensure_ccw(poly)


def usable_steps(
    steps: Sequence[MotionStep], channel: Channel
) -> list[tuple[int, MotionStep]]:
    """Indices and steps that can produce a sector for the channel."""
    return [(i, s) for i, s in enumerate(steps) if s.motion_dir(channel) is not None]


def learn_desired_direction(
    steps_per_demo: Sequence[Sequence[MotionStep]], channel: Channel, cfg: LearnerConfig
) -> DesiredDirectionResult:
    """Run the full desired-direction search over concatenated demonstrations.

    Builds one angle rectangle per usable step, votes, selects inliers,
    intersects them and takes the Chebyshev center. The direction is
    reported only when the inlier ratio reaches cfg.zeta; steps whose
    wrench directly opposes their motion are dropped (counted in
    n_contrary) because their sector is unbounded.
    """
    steps = [s for demo in steps_per_demo for s in demo]
    candidates = usable_steps(steps, channel)
    if len(candidates) < 2:
        raise NoUsableSteps(f"need >= 2 steps with a {channel} direction, got {len(candidates)}")

    mean = np.mean([s.motion_dir(channel) for _, s in candidates], axis=0)
    if np.linalg.norm(mean) == 0.0:
        # Perfectly balanced opposite motions; any alignment frame works.
        mean = candidates[0][1].motion_dir(channel)
    R = align_to_z(mean)

    rects: list[AngleRectangle] = []
    n_contrary = 0
    for idx, step in candidates:
        try:
            rects.append(sector_rectangle(step, channel, cfg, R, step_index=idx))
        except ContraryWrench:
            n_contrary += 1
    if len(rects) < 2:
        raise NoUsableSteps(
            f"only {len(rects)} usable sectors for {channel} ({n_contrary} contrary-wrench steps)"
        )

    cell, _count = vote_grid(rects, cfg.grid_res)
    inliers = select_inliers(rects, cell)
    phi = intersect_rectangles(inliers, fallback_center=cell, fallback_half=cfg.grid_res / 2)
    center, radius = chebyshev_center(phi)
    ratio = len(inliers) / len(rects)

    direction = None
    if ratio >= cfg.zeta:
        direction = R.T @ ang2vec(center)
    return DesiredDirectionResult(
        direction=direction,
        inlier_ratio=ratio,
        intersection=phi,
        chebyshev_radius=radius,
        n_rectangles=len(rects),
        n_inliers=len(inliers),
        rectangles=tuple(rects),
        inlier_indices=tuple(r.step_index for r in inliers),
        vote_cell=cell,
        align_rotation=R,
        angle_center=center,
        n_contrary=n_contrary,
    )


def compute_pitch(steps: Sequence[MotionStep], cfg: LearnerConfig) -> float:
    """Translation-per-rotation ratio (m/rad) over all steps, from unnormalized data.

    Raises NoRotation when the summed rotation magnitude is below the
    rotational motion floor.
    """
    d_x = float(sum(np.linalg.norm(s.dx) for s in steps))
    d_beta = float(sum(np.linalg.norm(s.dbeta) for s in steps))
    if d_beta < cfg.motion_floor_rot:
        raise NoRotation(f"total rotation {d_beta:.2e} rad is below the motion floor")
    return d_x / d_beta
