"""Domain types shared by all pipeline stages, plus the learner configuration.

All types are immutable values; arrays are stored as float64 and never
mutated after construction, so instances are safe to share between tasks.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from typing import Literal, Optional, Sequence

import numpy as np

from .errors import EmptyDemo, NonFiniteValue, NonMonotoneTime

Channel = Literal["translation", "rotation"]
CHANNELS: tuple[Channel, Channel] = ("translation", "rotation")

_QUAT_NORM_TOL = 1e-9
_UNIT_NORM_TOL = 1e-9


def _as_vec(x, n: int, name: str) -> np.ndarray:
    a = np.asarray(x, dtype=float).reshape(-1)
    if a.shape != (n,):
        raise ValueError(f"{name} must have {n} components, got shape {a.shape}")
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class Pose:
    """Position (m) and orientation as a unit quaternion (w, x, y, z)."""

    position: np.ndarray
    orientation: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "position", _as_vec(self.position, 3, "position"))
        q = _as_vec(self.orientation, 4, "orientation")
        if not np.all(np.isfinite(q)) or abs(np.linalg.norm(q) - 1.0) > _QUAT_NORM_TOL:
            raise ValueError("orientation must be a unit quaternion (|q| within 1e-9 of 1)")
        object.__setattr__(self, "orientation", q)

    @classmethod
    def make(cls, position, orientation) -> "Pose":
        """Build a pose, renormalizing the quaternion first."""
        q = np.asarray(orientation, dtype=float)
        n = np.linalg.norm(q)
        if not np.isfinite(n) or n == 0.0:
            raise ValueError("orientation quaternion is zero or non-finite")
        return cls(np.asarray(position, dtype=float), q / n)

    @classmethod
    def identity(cls) -> "Pose":
        return cls(np.zeros(3), np.array([1.0, 0.0, 0.0, 0.0]))

    def rotation_matrix(self) -> np.ndarray:
        from .rotations import quat_to_matrix

        return quat_to_matrix(self.orientation)


@dataclass(frozen=True)
class WrenchSample:
    """One timestamped pose + force/torque reading from a demonstration."""

    t: float
    pose: Pose
    force: np.ndarray
    torque: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "t", float(self.t))
        object.__setattr__(self, "force", _as_vec(self.force, 3, "force"))
        object.__setattr__(self, "torque", _as_vec(self.torque, 3, "torque"))


@dataclass(frozen=True)
class Demonstration:
    """A raw kinesthetic-teaching recording: ordered pose+wrench samples."""

    id: str
    samples: tuple
    frame: str = "world"

    def __post_init__(self):
        object.__setattr__(self, "samples", tuple(self.samples))

    def __len__(self) -> int:
        return len(self.samples)


def validate_demonstration(demo: Demonstration) -> None:
    """Check demonstration invariants, raising on the first offending sample.

    Raises:
        EmptyDemo: fewer than two samples.
        NonMonotoneTime: timestamps not strictly increasing (names the index).
        NonFiniteValue: any NaN/inf component or degenerate quaternion.
    """
    n = len(demo.samples)
    if n < 2:
        raise EmptyDemo(n)
    prev_t = None
    for i, s in enumerate(demo.samples):
        if not np.isfinite(s.t):
            raise NonFiniteValue(i, "t")
        if not np.all(np.isfinite(s.pose.position)):
            raise NonFiniteValue(i, "position")
        q = s.pose.orientation
        if not np.all(np.isfinite(q)) or abs(np.linalg.norm(q) - 1.0) > _QUAT_NORM_TOL:
            raise NonFiniteValue(i, "orientation")
        if not np.all(np.isfinite(s.force)):
            raise NonFiniteValue(i, "force")
        if not np.all(np.isfinite(s.torque)):
            raise NonFiniteValue(i, "torque")
        if prev_t is not None and not s.t > prev_t:
            raise NonMonotoneTime(i)
        prev_t = s.t
    return None


def _check_unit(v: Optional[np.ndarray], name: str) -> Optional[np.ndarray]:
    if v is None:
        return None
    v = _as_vec(v, 3, name)
    if abs(np.linalg.norm(v) - 1.0) > _UNIT_NORM_TOL:
        raise ValueError(f"{name} must be unit length within 1e-9")
    return v


@dataclass(frozen=True)
class MotionStep:
    """One aggregation window: increments, mean wrench and their unit directions.

    dx/dbeta are the windowed translation (m) and rotation-log (rad)
    increments; f_raw/t_raw are window-mean force (N) and torque (N m).
    A unit direction is present only when the corresponding magnitude
    clears its floor; absence is explicit (None), never a zero vector.
    """

    dx: np.ndarray
    dbeta: np.ndarray
    f_raw: np.ndarray
    t_raw: np.ndarray
    v_hat: Optional[np.ndarray] = None
    w_hat: Optional[np.ndarray] = None
    f_hat: Optional[np.ndarray] = None
    t_hat: Optional[np.ndarray] = None

    def __post_init__(self):
        object.__setattr__(self, "dx", _as_vec(self.dx, 3, "dx"))
        object.__setattr__(self, "dbeta", _as_vec(self.dbeta, 3, "dbeta"))
        object.__setattr__(self, "f_raw", _as_vec(self.f_raw, 3, "f_raw"))
        object.__setattr__(self, "t_raw", _as_vec(self.t_raw, 3, "t_raw"))
        for name in ("v_hat", "w_hat", "f_hat", "t_hat"):
            object.__setattr__(self, name, _check_unit(getattr(self, name), name))

    def motion_dir(self, channel: Channel) -> Optional[np.ndarray]:
        return self.v_hat if channel == "translation" else self.w_hat

    def wrench_dir(self, channel: Channel) -> Optional[np.ndarray]:
        return self.f_hat if channel == "translation" else self.t_hat

    def increment(self, channel: Channel) -> np.ndarray:
        return self.dx if channel == "translation" else self.dbeta

    def wrench(self, channel: Channel) -> np.ndarray:
        return self.f_raw if channel == "translation" else self.t_raw


@dataclass(frozen=True)
class LearnerConfig:
    """Tunable parameters of the learning pipeline.

    Defaults follow the reference setup: sector widening angles of 20
    (perpendicular, eta) and 10 (in-plane, xi) degrees, averaging windows
    of 20 samples at 100 Hz, and an inlier threshold zeta of 0.6 suitable
    for two or three demonstrations.
    """

    eta_deg: float = 20.0
    xi_deg: float = 10.0
    window: int = 20
    sigma_work: float = 0.7
    zeta: float = 0.6
    grid_res: float = 0.01
    motion_floor_trans: float = 1e-4
    motion_floor_rot: float = 1e-3
    wrench_floor: float = 0.05
    sigma_demo: float = 0.1
    stiffness_k: float = 500.0
    stiffness_k_rot: float = 50.0
    speed_nu: float = 0.02
    speed_lambda: float = 0.1

    def __post_init__(self):
        if not (0.0 < self.eta_deg < 90.0 and 0.0 < self.xi_deg < 90.0):
            raise ValueError("eta_deg and xi_deg must lie in (0, 90)")
        if not (0.0 < self.zeta <= 1.0 and 0.0 < self.sigma_work <= 1.0):
            raise ValueError("zeta and sigma_work must lie in (0, 1]")
        if self.window < 1:
            raise ValueError("window must be >= 1")
        for name in (
            "grid_res",
            "motion_floor_trans",
            "motion_floor_rot",
            "wrench_floor",
            "sigma_demo",
            "stiffness_k",
            "stiffness_k_rot",
            "speed_nu",
            "speed_lambda",
        ):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be > 0")

    def stiffness(self, channel: Channel) -> float:
        return self.stiffness_k if channel == "translation" else self.stiffness_k_rot

    def motion_floor(self, channel: Channel) -> float:
        return self.motion_floor_trans if channel == "translation" else self.motion_floor_rot

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_dict(cls, d: dict) -> "LearnerConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        return cls(**d)


def _two_level_spectrum_ok(K: np.ndarray, tol_rel: float = 1e-6) -> tuple[bool, float]:
    """Check eigenvalues are all ~0 or ~k for one positive level k; returns (ok, k)."""
    evals = np.linalg.eigvalsh(K)
    k = float(evals.max())
    if k <= 1e-9:  # stiffness levels are O(1) or larger; this is a zero matrix
        return bool(np.all(np.abs(evals) <= 1e-9)), 0.0
    ok = bool(np.all((np.abs(evals) <= tol_rel * k) | (np.abs(evals - k) <= tol_rel * k)))
    return ok, k


@dataclass(frozen=True)
class CompliantPrimitive:
    """A learned 6-D linear compliant-motion primitive.

    Stiffness matrices have a two-level spectrum {0, k}; zero-stiffness
    eigenvectors are the compliant axes and are orthogonal to the desired
    direction of the same channel when that direction exists.
    """

    K_f: np.ndarray
    K_o: np.ndarray
    nu: float
    lam: float
    v_d: Optional[np.ndarray] = None
    w_d: Optional[np.ndarray] = None
    pitch: Optional[float] = None
    trans_3dof_compliant: bool = False
    rot_3dof_compliant: bool = False
    frame: str = "world"  # frame the directions and stiffness axes live in

    def __post_init__(self):
        if self.frame not in ("world", "tool"):
            raise ValueError(f"unknown primitive frame '{self.frame}'")
        K_f = np.asarray(self.K_f, dtype=float).reshape(3, 3)
        K_o = np.asarray(self.K_o, dtype=float).reshape(3, 3)
        for name, K in (("K_f", K_f), ("K_o", K_o)):
            if not np.allclose(K, K.T, atol=1e-9 * max(1.0, abs(K).max())):
                raise ValueError(f"{name} must be symmetric")
            ok, k = _two_level_spectrum_ok(K)
            if not ok:
                raise ValueError(f"{name} eigenvalues must all be 0 or one level k")
            K.flags.writeable = False
        object.__setattr__(self, "K_f", K_f)
        object.__setattr__(self, "K_o", K_o)
        object.__setattr__(self, "v_d", _check_unit(self.v_d, "v_d"))
        object.__setattr__(self, "w_d", _check_unit(self.w_d, "w_d"))
        object.__setattr__(self, "nu", float(self.nu))
        object.__setattr__(self, "lam", float(self.lam))
        if self.pitch is not None:
            object.__setattr__(self, "pitch", float(self.pitch))

        # Desired direction must be fully stiff: K v_d = k v_d.
        for dir_vec, K, name in ((self.v_d, K_f, "v_d"), (self.w_d, K_o, "w_d")):
            if dir_vec is None:
                continue
            k = float(np.linalg.eigvalsh(K).max())
            if k <= 0.0:
                raise ValueError(f"{name} present but its stiffness matrix is zero")
            if np.linalg.norm(K @ dir_vec - k * dir_vec) > 1e-6 * k:
                raise ValueError(f"compliant axes of {name}'s channel must be orthogonal to it")

        if (self.pitch is not None) != (self.v_d is not None and self.w_d is not None):
            raise ValueError("pitch must be present exactly when both directions exist")
        if self.pitch is not None:
            if abs(self.nu - self.pitch * self.lam) > 1e-9 * max(abs(self.nu), 1e-300):
                raise ValueError("speeds must satisfy nu = pitch * lambda")
        if self.trans_3dof_compliant and (self.v_d is not None or abs(K_f).max() > 0.0):
            raise ValueError("translation marked 3-DOF compliant requires K_f = 0 and no v_d")
        if self.rot_3dof_compliant and (self.w_d is not None or abs(K_o).max() > 0.0):
            raise ValueError("rotation marked 3-DOF compliant requires K_o = 0 and no w_d")

    def direction(self, channel: Channel) -> Optional[np.ndarray]:
        return self.v_d if channel == "translation" else self.w_d

    def stiffness(self, channel: Channel) -> np.ndarray:
        return self.K_f if channel == "translation" else self.K_o
