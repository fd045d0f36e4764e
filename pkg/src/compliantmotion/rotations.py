"""Unit-quaternion utilities and the SO(3) logarithm/exponential maps.

Quaternions are length-4 float arrays in (w, x, y, z) order and always
represent rotations, so q and -q are the same element.
"""

from __future__ import annotations

import numpy as np

from .errors import AngleNearPi

IDENTITY_QUAT = np.array([1.0, 0.0, 0.0, 0.0])

_NEAR_PI_TOL = 1e-6


def quat_normalize(q: np.ndarray) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    n = np.linalg.norm(q)
    if n == 0.0 or not np.isfinite(n):
        raise ValueError("cannot normalize a zero or non-finite quaternion")
    return q / n


def quat_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Hamilton product a*b (apply b first, then a, for column vectors)."""
    aw, ax, ay, az = a
    bw, bx, by, bz = b
    return np.array(
        [
            aw * bw - ax * bx - ay * by - az * bz,
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by - ax * bz + ay * bw + az * bx,
            aw * bz + ax * by - ay * bx + az * bw,
        ]
    )


def quat_conj(q: np.ndarray) -> np.ndarray:
    return np.array([q[0], -q[1], -q[2], -q[3]])


def quat_rotate(q: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Rotate vector v by quaternion q."""
    qv = np.asarray(q[1:4], dtype=float)
    t = 2.0 * np.cross(qv, v)
    return np.asarray(v, dtype=float) + q[0] * t + np.cross(qv, t)


def quat_to_matrix(q: np.ndarray) -> np.ndarray:
    w, x, y, z = q
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ]
    )


def quat_angle(q: np.ndarray) -> float:
    """Rotation angle of q in [0, pi]."""
    w = abs(float(q[0]))
    s = float(np.linalg.norm(q[1:4]))
    return 2.0 * float(np.arctan2(s, w))


def quat_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Angle of the relative rotation between a and b, in [0, pi]."""
    return quat_angle(quat_mul(quat_conj(a), b))


def rotation_log(q: np.ndarray) -> np.ndarray:
    """Axis-angle vector of a unit quaternion, with norm in [0, pi].

    Raises AngleNearPi when the rotation angle is within 1e-6 of pi,
    where the axis (and the sign of the log) is ill-conditioned;
    callers must subdivide the rotation instead.
    """
    q = np.asarray(q, dtype=float)
    if q[0] < 0.0:
        q = -q
    s = float(np.linalg.norm(q[1:4]))
    c = float(q[0])
    angle = 2.0 * float(np.arctan2(s, c))
    if angle >= np.pi - _NEAR_PI_TOL:
        raise AngleNearPi(f"rotation angle {angle:.9f} is within 1e-6 of pi")
    if s < 1e-9:
        # First-order series: v ~= axis * angle/2 for small angles.
        return q[1:4] * (2.0 / c) * (1.0 - s * s / (3.0 * c * c))
    return q[1:4] * (angle / s)


def rotation_exp(w: np.ndarray) -> np.ndarray:
    """Unit quaternion rotating about w/|w| by |w| radians. exp(0) is identity."""
    w = np.asarray(w, dtype=float)
    theta = float(np.linalg.norm(w))
    half = 0.5 * theta
    if theta < 1e-9:
        scale = 0.5 - theta * theta / 48.0
    else:
        scale = np.sin(half) / theta
    return np.concatenate(([np.cos(half)], w * scale))
