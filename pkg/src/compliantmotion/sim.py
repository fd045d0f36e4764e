"""Quasi-static planar-facet contact world.

Used both to synthesize demonstrations (a noisy teacher pushes the tool
and the contact reaction is recorded as the F/T signal) and to execute
learned primitives with the impedance law. There is no inertia: velocity
is the damping-scaled net force, with contact handled by a small
projected Gauss-Seidel solve over probe-facet pairs (unilateral normals
plus Coulomb stick/slip). All demonstrations are recorded in the world
frame; bundled scenarios rotate about axes that are invariant under the
motion, so body- and world-frame rotation increments coincide.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .core import CompliantPrimitive, Demonstration, Pose, WrenchSample
from .errors import AngleNearPi, Diverged, TeacherStuck
from .rotations import (
    quat_conj,
    quat_distance,
    quat_mul,
    quat_rotate,
    quat_to_matrix,
    rotation_exp,
    rotation_log,
)

_BIG = 1e9


@dataclass(frozen=True)
class Facet:
    """Oriented plane patch: points q with (q - point) . normal = 0, inside extent."""

    point: np.ndarray
    normal: np.ndarray
    mu: float = 0.0
    extent: Optional[np.ndarray] = None  # (2, 3) [lo, hi] box bounding the patch

    def __post_init__(self):
        p = np.asarray(self.point, dtype=float).reshape(3)
        n = np.asarray(self.normal, dtype=float).reshape(3)
        nn = np.linalg.norm(n)
        if abs(nn - 1.0) > 1e-9:
            raise ValueError("facet normal must be unit length")
        if self.mu < 0.0:
            raise ValueError("friction coefficient must be >= 0")
        p.flags.writeable = False
        n.flags.writeable = False
        object.__setattr__(self, "point", p)
        object.__setattr__(self, "normal", n)
        if self.extent is not None:
            e = np.asarray(self.extent, dtype=float).reshape(2, 3)
            e.flags.writeable = False
            object.__setattr__(self, "extent", e)


@dataclass(frozen=True)
class GoalRegion:
    """Goal ball: weighted position distance and orientation angle tolerances.

    pos_weights lets planar scenarios ignore their free axis (e.g. a 2-D
    slot does not care about y).
    """

    pose: Pose
    tol_pos: float
    tol_rot: float
    pos_weights: Optional[np.ndarray] = None

    def __post_init__(self):
        if not (self.tol_pos > 0.0 and self.tol_rot > 0.0):
            raise ValueError("goal tolerances must be > 0")
        if self.pos_weights is not None:
            w = np.asarray(self.pos_weights, dtype=float).reshape(3)
            w.flags.writeable = False
            object.__setattr__(self, "pos_weights", w)

    def contains(self, pose: Pose) -> bool:
        d = pose.position - self.pose.position
        if self.pos_weights is not None:
            d = d * self.pos_weights
        if np.linalg.norm(d) > self.tol_pos:
            return False
        return quat_distance(pose.orientation, self.pose.orientation) <= self.tol_rot


@dataclass(frozen=True)
class CornerFeature:
    """Convex environment corner (e.g. a hole lip) that can press body faces."""

    point: np.ndarray
    mu: float = 0.0

    def __post_init__(self):
        p = np.asarray(self.point, dtype=float).reshape(3)
        p.flags.writeable = False
        object.__setattr__(self, "point", p)
        if self.mu < 0.0:
            raise ValueError("friction coefficient must be >= 0")


@dataclass(frozen=True)
class BodyFace:
    """Flat strip of the body surface (body frame): segment a-b, outward normal.

    half_width bounds the strip transverse to the segment (along
    normal x (b - a)); corners contact the face anywhere on the strip.
    """

    a: np.ndarray
    b: np.ndarray
    normal: np.ndarray
    half_width: float = _BIG

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float).reshape(3)
        b = np.asarray(self.b, dtype=float).reshape(3)
        n = np.asarray(self.normal, dtype=float).reshape(3)
        if abs(np.linalg.norm(n) - 1.0) > 1e-9:
            raise ValueError("face normal must be unit length")
        for v in (a, b, n):
            v.flags.writeable = False
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "normal", n)


@dataclass(frozen=True)
class Environment:
    """Facets plus lip corners, goal region, workspace bounds and body geometry.

    Contact happens between body probe points and environment facets, and
    between environment corners and body faces (the two families of the
    classic planar insertion analysis).
    """

    facets: tuple
    goal: GoalRegion
    bounds: np.ndarray  # (2, 3) [lo, hi]
    probes: np.ndarray  # (P, 3)
    corners: tuple = ()
    body_faces: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "facets", tuple(self.facets))
        object.__setattr__(self, "corners", tuple(self.corners))
        object.__setattr__(self, "body_faces", tuple(self.body_faces))
        b = np.asarray(self.bounds, dtype=float).reshape(2, 3)
        b.flags.writeable = False
        object.__setattr__(self, "bounds", b)
        pr = np.asarray(self.probes, dtype=float).reshape(-1, 3)
        pr.flags.writeable = False
        object.__setattr__(self, "probes", pr)
        # Cached facet arrays for vectorized distance checks.
        F = len(self.facets)
        normals = np.array([f.normal for f in self.facets]).reshape(F, 3)
        points = np.array([f.point for f in self.facets]).reshape(F, 3)
        lo = np.full((F, 3), -_BIG)
        hi = np.full((F, 3), _BIG)
        for i, f in enumerate(self.facets):
            if f.extent is not None:
                lo[i] = f.extent[0]
                hi[i] = f.extent[1]
        for a in (normals, points, lo, hi):
            a.flags.writeable = False
        object.__setattr__(self, "_normals", normals)
        object.__setattr__(self, "_points", points)
        object.__setattr__(self, "_lo", lo)
        object.__setattr__(self, "_hi", hi)

    def in_bounds(self, position: np.ndarray) -> bool:
        return bool(np.all(position >= self.bounds[0]) and np.all(position <= self.bounds[1]))


@dataclass(frozen=True)
class BodyState:
    pose: Pose
    contact_set: tuple = ()


@dataclass(frozen=True)
class SimParams:
    """Integration and contact-solver constants."""

    dt: float = 0.005
    damping_f: float = 100.0  # N s/m
    damping_o: float = 10.0  # N m s/rad
    contact_tol: float = 1e-5  # activation distance (m)
    extent_margin: float = 1e-6
    claim_margin: float = 1e-3  # per probe, drop facets penetrated much deeper than the shallowest
    max_sweeps: int = 80
    solve_tol: float = 1e-11


def _world_probes(pose: Pose, env: Environment) -> np.ndarray:
    R = quat_to_matrix(pose.orientation)
    return pose.position[None, :] + env.probes @ R.T


def _gather_contacts(pose: Pose, env: Environment, params: SimParams):
    """Contact records (key, world point, world normal, mu, signed distance).

    Probe-vs-facet pairs: when several patches claim one probe, only
    those within claim_margin of the probe's shallowest penetration are
    kept (a point that slipped a hair past a wall's edge belongs to that
    wall, not to the surface it is nominally metres "below").
    Corner-vs-body-face pairs get the face's normal, which is what a lip
    pressing a flank physically exerts.
    """
    out = []
    if env.facets and len(env.probes):
        wp = _world_probes(pose, env)  # (P, 3)
        s = (wp[:, None, :] - env._points[None, :, :]) * env._normals[None, :, :]
        s = s.sum(axis=2)  # (P, F) signed distances
        proj = wp[:, None, :] - s[:, :, None] * env._normals[None, :, :]
        m = params.extent_margin
        inside = np.all((proj >= env._lo[None] - m) & (proj <= env._hi[None] + m), axis=2)
        near = (s <= params.contact_tol) & inside
        depth = np.where(near, np.maximum(-s, 0.0), np.inf)
        shallowest = depth.min(axis=1, keepdims=True)
        keep = near & (depth <= shallowest + params.claim_margin)
        for pi, fi in zip(*np.nonzero(keep)):
            f = env.facets[fi]
            out.append(
                (("pf", int(pi), int(fi)), wp[pi], f.normal, f.mu, float(s[pi, fi]))
            )
    if env.corners and env.body_faces:
        R = quat_to_matrix(pose.orientation)
        for ci, corner in enumerate(env.corners):
            c_b = R.T @ (corner.point - pose.position)
            for bi, face in enumerate(env.body_faces):
                seg = face.b - face.a
                seg_len2 = float(seg @ seg)
                rel = c_b - face.a
                t = float(rel @ seg) / seg_len2
                if not -1e-6 <= t <= 1.0 + 1e-6:
                    continue
                trans = np.cross(face.normal, seg)
                tn = np.linalg.norm(trans)
                if tn > 0.0 and abs(float(rel @ (trans / tn))) > face.half_width:
                    continue
                s_cf = float(rel @ face.normal)  # > 0: corner outside the body
                if s_cf > params.contact_tol:
                    continue
                # Reaction on the body points opposite the face's outward normal.
                n_world = -(R @ face.normal)
                out.append((("cf", ci, bi), corner.point, n_world, corner.mu, s_cf))
    return out


def _solve_contacts(
    force_cmd: np.ndarray,
    torque_cmd: np.ndarray,
    position: np.ndarray,
    contacts: list,
    params: SimParams,
    warm: Optional[dict] = None,
):
    """Quasi-static velocity and contact reactions under Coulomb friction.

    Free motion is wrench/damping; active contacts clamp normal approach
    velocity to zero (projected Gauss-Seidel on forces) and apply
    friction that sticks exactly while the tangential demand stays inside
    the cone. Returns (v, w, reaction_force, reaction_torque, per-contact
    forces dict keyed by contact key).
    """
    inv_df = 1.0 / params.damping_f
    inv_do = 1.0 / params.damping_o
    vx, vy, vz = (force_cmd[0] * inv_df, force_cmd[1] * inv_df, force_cmd[2] * inv_df)
    wx, wy, wz = (torque_cmd[0] * inv_do, torque_cmd[1] * inv_do, torque_cmd[2] * inv_do)

    if not contacts:
        return (
            np.array([vx, vy, vz]),
            np.array([wx, wy, wz]),
            np.zeros(3),
            np.zeros(3),
            {},
        )

    nloc = []
    for key, wp, normal, mu, _s in contacts:
        nx, ny, nz = normal
        rx, ry, rz = wp[0] - position[0], wp[1] - position[1], wp[2] - position[2]
        cx, cy, cz = ry * nz - rz * ny, rz * nx - rx * nz, rx * ny - ry * nx  # rho x n
        w_n = inv_df + (cx * cx + cy * cy + cz * cz) * inv_do
        lam0, f0 = (warm or {}).get(key, (0.0, (0.0, 0.0, 0.0)))
        nloc.append([nx, ny, nz, rx, ry, rz, cx, cy, cz, w_n, mu, lam0, f0[0], f0[1], f0[2], key])

    # Apply warm-start forces up front so the sweeps only correct them.
    for c in nloc:
        lam = c[11]
        fx, fy, fz = c[12], c[13], c[14]
        ax = lam * c[0] + fx
        ay = lam * c[1] + fy
        az = lam * c[2] + fz
        vx += ax * inv_df
        vy += ay * inv_df
        vz += az * inv_df
        wx += (c[4] * az - c[5] * ay) * inv_do
        wy += (c[5] * ax - c[3] * az) * inv_do
        wz += (c[3] * ay - c[4] * ax) * inv_do

    for _sweep in range(params.max_sweeps):
        worst = 0.0
        for c in nloc:
            nx, ny, nz, rx, ry, rz, cx, cy, cz, w_n, mu = c[0:11]
            # Normal force update: drive normal approach velocity to zero.
            vn = nx * vx + ny * vy + nz * vz + cx * wx + cy * wy + cz * wz
            dl = -vn / w_n
            new_lam = c[11] + dl
            if new_lam < 0.0:
                new_lam = 0.0
            dl = new_lam - c[11]
            c[11] = new_lam
            if dl != 0.0:
                vx += dl * nx * inv_df
                vy += dl * ny * inv_df
                vz += dl * nz * inv_df
                wx += dl * cx * inv_do
                wy += dl * cy * inv_do
                wz += dl * cz * inv_do
                a = abs(dl)
                if a > worst:
                    worst = a
            # Friction: cancel tangential velocity, capped by the cone.
            pvx = vx + wy * rz - wz * ry
            pvy = vy + wz * rx - wx * rz
            pvz = vz + wx * ry - wy * rx
            dot = pvx * nx + pvy * ny + pvz * nz
            tx, ty, tz = pvx - dot * nx, pvy - dot * ny, pvz - dot * nz
            vt = math.sqrt(tx * tx + ty * ty + tz * tz)
            cap = mu * c[11]
            if cap <= 0.0:
                ncx, ncy, ncz = 0.0, 0.0, 0.0
            elif vt > 1e-15:
                ux, uy, uz = tx / vt, ty / vt, tz / vt
                qx, qy, qz = ry * uz - rz * uy, rz * ux - rx * uz, rx * uy - ry * ux
                w_t = inv_df + (qx * qx + qy * qy + qz * qz) * inv_do
                mag = vt / w_t
                ncx, ncy, ncz = c[12] - mag * ux, c[13] - mag * uy, c[14] - mag * uz
                fn = math.sqrt(ncx * ncx + ncy * ncy + ncz * ncz)
                if fn > cap:
                    sc = cap / fn
                    ncx, ncy, ncz = ncx * sc, ncy * sc, ncz * sc
            else:
                ncx, ncy, ncz = c[12], c[13], c[14]
                fn = math.sqrt(ncx * ncx + ncy * ncy + ncz * ncz)
                if fn > cap:
                    sc = cap / fn if fn > 0.0 else 0.0
                    ncx, ncy, ncz = ncx * sc, ncy * sc, ncz * sc
            dfx, dfy, dfz = ncx - c[12], ncy - c[13], ncz - c[14]
            if dfx != 0.0 or dfy != 0.0 or dfz != 0.0:
                c[12], c[13], c[14] = ncx, ncy, ncz
                vx += dfx * inv_df
                vy += dfy * inv_df
                vz += dfz * inv_df
                wx += (ry * dfz - rz * dfy) * inv_do
                wy += (rz * dfx - rx * dfz) * inv_do
                wz += (rx * dfy - ry * dfx) * inv_do
                a = abs(dfx) + abs(dfy) + abs(dfz)
                if a > worst:
                    worst = a
        if worst < params.solve_tol:
            break

    fx_t, fy_t, fz_t = 0.0, 0.0, 0.0
    tx_t, ty_t, tz_t = 0.0, 0.0, 0.0
    forces = {}
    for c in nloc:
        lam = c[11]
        rfx = lam * c[0] + c[12]
        rfy = lam * c[1] + c[13]
        rfz = lam * c[2] + c[14]
        forces[c[15]] = (lam, (c[12], c[13], c[14]))
        fx_t += rfx
        fy_t += rfy
        fz_t += rfz
        rx, ry, rz = c[3], c[4], c[5]
        tx_t += ry * rfz - rz * rfy
        ty_t += rz * rfx - rx * rfz
        tz_t += rx * rfy - ry * rfx
    return (
        np.array([vx, vy, vz]),
        np.array([wx, wy, wz]),
        np.array([fx_t, fy_t, fz_t]),
        np.array([tx_t, ty_t, tz_t]),
        forces,
    )


def _push_out(pose: Pose, env: Environment, params: SimParams, max_sweeps: int = 25) -> Pose:
    """Translate the body out of any residual penetration."""
    position = pose.position.copy()
    for _ in range(max_sweeps):
        worst = 0.0
        shift = np.zeros(3)
        test = Pose(position, pose.orientation)
        for _key, _wp, normal, _mu, s in _gather_contacts(test, env, params):
            if s < -1e-12:
                depth = -s
                if depth > worst:
                    worst = depth
                    shift = depth * normal
        if worst <= 1e-12:
            break
        position = position + shift
    return Pose(position, pose.orientation)


def penetration_depth(pose: Pose, env: Environment, params: SimParams = SimParams()) -> float:
    """Most negative contact signed distance (0 when separated)."""
    worst = 0.0
    for _key, _wp, _n, _mu, s in _gather_contacts(pose, env, params):
        worst = min(worst, s)
    return worst


def contact_wrench(
    state: BodyState,
    applied_force: np.ndarray,
    applied_torque: np.ndarray,
    env: Environment,
    params: SimParams = SimParams(),
) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form single-point contact model for the measured wrench.

    For each active probe-facet pair the normal reaction balances the
    into-surface component of the applied force; friction cancels the
    tangential component while inside the cone and otherwise opposes the
    ensuing slip at magnitude mu |F_N|. Torque contributions use the
    lever arm from the body origin (the simulated sensor location).
    """
    applied_force = np.asarray(applied_force, dtype=float)
    force = np.zeros(3)
    torque = np.zeros(3)
    for _key, wp, n, mu, _s in _gather_contacts(state.pose, env, params):
        fn_mag = max(0.0, -float(np.dot(applied_force, n)))
        if fn_mag == 0.0:
            continue
        reaction = fn_mag * n
        f_t = applied_force - np.dot(applied_force, n) * n
        t_mag = float(np.linalg.norm(f_t))
        cap = mu * fn_mag
        if t_mag <= cap or t_mag == 0.0:
            friction = -f_t
        else:
            friction = -cap * (f_t / t_mag)
        total = reaction + friction
        rho = wp - state.pose.position
        force += total
        torque += np.cross(rho, total)
    return force, torque


def _resolve_step(
    pose: Pose,
    force_cmd: np.ndarray,
    torque_cmd: np.ndarray,
    env: Environment,
    params: SimParams,
    warm: Optional[dict],
):
    contacts = _gather_contacts(pose, env, params)
    v, w, rf, rt, forces = _solve_contacts(
        force_cmd, torque_cmd, pose.position, contacts, params, warm
    )
    # Active set reported as facet indices; corner contacts follow on
    # after the facets (index = len(facets) + corner index).
    n_f = len(env.facets)
    ids = set()
    for (kind, i, j), (lam, _f) in forces.items():
        if lam > 1e-12:
            ids.add(j if kind == "pf" else n_f + i)
    return v, w, rf, rt, forces, tuple(sorted(ids))


def _integrate(pose: Pose, v: np.ndarray, w: np.ndarray, dt: float) -> Pose:
    position = pose.position + v * dt
    dq = rotation_exp(w * dt)
    q = quat_mul(dq, pose.orientation)
    return Pose.make(position, q)


def step_controller(
    state: BodyState,
    primitive: CompliantPrimitive,
    target: Pose,
    dt: float,
    env: Environment,
    params: SimParams = SimParams(),
    warm: Optional[dict] = None,
) -> tuple[BodyState, Pose, np.ndarray, np.ndarray, dict]:
    """One impedance-control step: advance the target, push, move quasi-statically.

    The feed-forward target moves by nu dt along the desired translation
    and right-multiplies exp(lambda dt [w_d]) for the desired rotation;
    absent directions leave their target component fixed. The commanded
    wrench is K_f (x* - x) and K_o log(B^T B*) mapped to the world frame;
    damping is implicit in the quasi-static velocity law. Tool-frame
    primitives advance the translation target along the rotating target
    frame and their stiffness axes ride with the body. Raises Diverged
    when the body leaves the workspace bounds.
    """
    if dt <= 0.0:
        raise ValueError("dt must be > 0")
    tool = primitive.frame == "tool"
    tgt_pos = target.position
    tgt_q = target.orientation
    if primitive.v_d is not None:
        step_dir = quat_rotate(tgt_q, primitive.v_d) if tool else primitive.v_d
        tgt_pos = tgt_pos + primitive.nu * dt * step_dir
    if primitive.w_d is not None:
        tgt_q = quat_mul(tgt_q, rotation_exp(primitive.lam * dt * primitive.w_d))
    new_target = Pose.make(tgt_pos, tgt_q)

    pose = state.pose
    K_f = primitive.K_f
    if tool:
        R = quat_to_matrix(pose.orientation)
        K_f = R @ primitive.K_f @ R.T
    force_cmd = K_f @ (new_target.position - pose.position)
    try:
        e_rot = rotation_log(quat_mul(quat_conj(pose.orientation), new_target.orientation))
    except AngleNearPi as exc:
        raise Diverged("orientation error reached pi") from exc
    torque_cmd = quat_rotate(pose.orientation, primitive.K_o @ e_rot)

    v, w, rf, rt, forces, facet_ids = _resolve_step(pose, force_cmd, torque_cmd, env, params, warm)
    new_pose = _push_out(_integrate(pose, v, w, dt), env, params)
    if not env.in_bounds(new_pose.position):
        raise Diverged(f"position {new_pose.position} left the workspace bounds")
    return BodyState(new_pose, facet_ids), new_target, rf, rt, forces


@dataclass(frozen=True)
class TeacherSpec:
    """Synthetic kinesthetic teacher: linear intents plus per-step direction noise.

    rot_mode "coupled" tracks an orientation schedule tied to translation
    progress (finish the reorientation after 1/rot_progress_gain of the
    way to the goal), the way a human inserts a tilted workpiece.
    """

    force_mag: float = 10.0
    torque_mag: float = 0.0
    trans_dir: Optional[np.ndarray] = None  # unit intent; None = toward goal position
    rot_mode: str = "none"  # "none" | "to_goal" | "fixed" | "coupled"
    rot_axis: Optional[np.ndarray] = None
    noise_deg: float = 0.0
    rot_noise_deg: Optional[float] = None
    rot_ramp_deg: float = 5.0  # to_goal torque saturates above this orientation error
    rot_progress_gain: float = 2.0
    force_noise: float = 0.0  # additive hand-tremor std (N), per axis
    torque_noise: float = 0.0  # additive hand-tremor std (N m), per axis
    tremor_tau: float = 0.4  # tremor/drift correlation time (s); noise is OU, not white
    wrench_noise: float = 0.0
    stop_at_goal: bool = True
    stop_goal: Optional[GoalRegion] = None  # looser demo-ending region; env.goal if None

    def __post_init__(self):
        if self.rot_mode not in ("none", "to_goal", "fixed", "coupled"):
            raise ValueError("rot_mode must be none, to_goal, fixed or coupled")
        if self.rot_mode == "fixed" and self.rot_axis is None:
            raise ValueError("fixed rotation intent requires rot_axis")
        for name in ("trans_dir", "rot_axis"):
            v = getattr(self, name)
            if v is not None:
                v = np.asarray(v, dtype=float).reshape(3)
                n = np.linalg.norm(v)
                if n == 0.0:
                    raise ValueError(f"{name} must be nonzero")
                v = v / n
                v.flags.writeable = False
                object.__setattr__(self, name, v)


class _TeacherNoise:
    """Ornstein-Uhlenbeck states for the teacher's direction drift and tremor.

    Human imperfection wanders at hand-motion timescales; white noise
    would average out inside every aggregation window.
    """

    def __init__(self, teacher: TeacherSpec):
        self.dir_trans = np.zeros(3)
        self.dir_rot = np.zeros(3)
        self.force = np.zeros(3)
        self.torque = np.zeros(3)
        self._stds = (
            math.radians(teacher.noise_deg),
            math.radians(
                teacher.noise_deg if teacher.rot_noise_deg is None else teacher.rot_noise_deg
            ),
            teacher.force_noise,
            teacher.torque_noise,
        )
        self._tau = teacher.tremor_tau

    def advance(self, rng: np.random.Generator, dt: float) -> None:
        a = math.exp(-dt / self._tau) if self._tau > 0.0 else 0.0
        b = math.sqrt(max(0.0, 1.0 - a * a))
        for name, std in zip(("dir_trans", "dir_rot", "force", "torque"), self._stds):
            x = getattr(self, name)
            if std > 0.0:
                setattr(self, name, a * x + b * rng.normal(0.0, std, 3))


def _perturbed(direction: np.ndarray, rotvec: np.ndarray) -> np.ndarray:
    if not np.any(rotvec):
        return direction
    return quat_rotate(rotation_exp(rotvec), direction)


def _teacher_wrench(
    pose: Pose,
    teacher: TeacherSpec,
    env: Environment,
    noise: _TeacherNoise,
    start: Optional[Pose] = None,
) -> tuple[np.ndarray, np.ndarray]:
    force = np.zeros(3)
    if teacher.force_mag > 0.0:
        if teacher.trans_dir is not None:
            d = teacher.trans_dir
        else:
            d = env.goal.pose.position - pose.position
            nd = np.linalg.norm(d)
            d = d / nd if nd > 1e-9 else None
        if d is not None:
            force = teacher.force_mag * _perturbed(d, noise.dir_trans)
    torque = np.zeros(3)
    if teacher.torque_mag > 0.0 and teacher.rot_mode != "none":
        mag = teacher.torque_mag
        if teacher.rot_mode == "fixed":
            axis = teacher.rot_axis
        else:
            if teacher.rot_mode == "coupled" and start is not None:
                # Orientation schedule tied to translation progress.
                total = float(np.linalg.norm(env.goal.pose.position - start.position))
                left = float(np.linalg.norm(env.goal.pose.position - pose.position))
                progress = 0.0 if total < 1e-9 else 1.0 - left / total
                s = min(1.0, max(0.0, progress * teacher.rot_progress_gain))
                rel = rotation_log(
                    quat_mul(quat_conj(start.orientation), env.goal.pose.orientation)
                )
                q_des = quat_mul(start.orientation, rotation_exp(s * rel))
            else:
                q_des = env.goal.pose.orientation
            err = rotation_log(quat_mul(quat_conj(pose.orientation), q_des))
            ang = float(np.linalg.norm(err))
            if ang < math.radians(0.05):
                axis = None
            else:
                axis = quat_rotate(pose.orientation, err / ang)
                mag *= min(1.0, ang / math.radians(teacher.rot_ramp_deg))
        if axis is not None:
            torque = mag * _perturbed(axis, noise.dir_rot)
    return force + noise.force, torque + noise.torque


def generate_demo(
    env: Environment,
    teacher: TeacherSpec,
    start: Pose,
    duration: float = 6.0,
    rate: float = 100.0,
    seed: int | np.random.Generator = 0,
    demo_id: str = "sim",
    frame: str = "world",
    params: SimParams = SimParams(),
) -> Demonstration:
    """Simulate a teacher pushing the tool and record pose plus contact wrench.

    The recorded wrench is the environment reaction at the body origin
    (free-space segments record near-zero wrench plus sensor noise).
    Raises TeacherStuck when nothing moves for more than a second of
    simulated time before the goal is reached.
    """
    if rate <= 0.0:
        raise ValueError("rate must be > 0")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    substeps = max(1, round(1.0 / (rate * params.dt)))
    dt = 1.0 / (rate * substeps)
    stop_goal = teacher.stop_goal if teacher.stop_goal is not None else env.goal

    pose = _push_out(start, env, params)
    start_pose = pose
    warm: dict = {}
    samples = []
    stuck_time = 0.0
    noise = _TeacherNoise(teacher)
    noise.advance(rng, dt)

    force, torque = _teacher_wrench(pose, teacher, env, noise, start_pose)
    _v, _w, rf, rt, warm, _ids = _resolve_step(pose, force, torque, env, params, warm)
    samples.append(_record(0.0, pose, rf, rt, teacher.wrench_noise, rng))

    n_records = int(round(duration * rate))
    t = 0.0
    for k in range(1, n_records + 1):
        for _ in range(substeps):
            noise.advance(rng, dt)
            force, torque = _teacher_wrench(pose, teacher, env, noise, start_pose)
            v, w, rf, rt, warm, _ids = _resolve_step(pose, force, torque, env, params, warm)
            pose = _push_out(_integrate(pose, v, w, dt), env, params)
            t += dt
            if np.linalg.norm(v) < 1e-6 and np.linalg.norm(w) < 1e-5:
                stuck_time += dt
                if stuck_time > 1.0:
                    raise TeacherStuck(f"no motion for {stuck_time:.2f} s at t={t:.2f} s")
            else:
                stuck_time = 0.0
        samples.append(_record(k / rate, pose, rf, rt, teacher.wrench_noise, rng))
        if teacher.stop_at_goal and stop_goal.contains(pose):
            break
    return Demonstration(id=demo_id, samples=tuple(samples), frame=frame)


def _record(t, pose, rf, rt, wrench_noise, rng):
    f = rf + (rng.normal(0.0, wrench_noise, 3) if wrench_noise > 0.0 else 0.0)
    tq = rt + (rng.normal(0.0, wrench_noise, 3) if wrench_noise > 0.0 else 0.0)
    return WrenchSample(t=t, pose=pose, force=np.asarray(f), torque=np.asarray(tq))


@dataclass(frozen=True)
class Trajectory:
    """Reproduction log: timestamped poses with the measured wrench."""

    samples: tuple
    goal_flags: tuple
    success: bool

    def __len__(self):
        return len(self.samples)


def reproduce(
    primitive: CompliantPrimitive,
    env: Environment,
    start: Pose,
    max_steps: int = 4000,
    dt: float = 0.005,
    params: Optional[SimParams] = None,
) -> Trajectory:
    """Execute a primitive from a start pose; success means reaching the goal region.

    Failure (timeout or leaving the workspace) is reported in the result,
    never raised.
    """
    if params is None:
        params = SimParams(dt=dt)
    state = BodyState(_push_out(start, env, params))
    target = state.pose
    warm: dict = {}
    samples = [WrenchSample(0.0, state.pose, np.zeros(3), np.zeros(3))]
    flags = [env.goal.contains(state.pose)]
    if flags[0]:
        return Trajectory(tuple(samples), tuple(flags), True)
    t = 0.0
    for _ in range(max_steps):
        try:
            state, target, rf, rt, warm = step_controller(
                state, primitive, target, dt, env, params, warm
            )
        except Diverged:
            return Trajectory(tuple(samples), tuple(flags), False)
        t += dt
        reached = env.goal.contains(state.pose)
        samples.append(WrenchSample(t, state.pose, rf, rt))
        flags.append(reached)
        if reached:
            return Trajectory(tuple(samples), tuple(flags), True)
    return Trajectory(tuple(samples), tuple(flags), False)
