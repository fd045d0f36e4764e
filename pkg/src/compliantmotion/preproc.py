"""Windowed aggregation of raw demonstrations into motion steps.

Samples are grouped into consecutive non-overlapping blocks of
``config.window`` samples. Each block yields one MotionStep with
first-to-last pose differencing and window-mean wrench; the trailing
partial block is discarded.

The demonstration's frame label picks the learning frame. Samples always
store world-frame pose and wrench; with frame "tool" each window's
quantities are re-expressed in the tool frame (translation increments in
the window-start frame, wrench samples in their instantaneous frame),
which is the natural choice for tasks whose geometry rides with the tool.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .core import Channel, Demonstration, LearnerConfig, MotionStep, validate_demonstration
from .errors import AngleNearPi, InvalidWindow, NoMotion, TooShort
from .rotations import quat_conj, quat_mul, quat_to_matrix, rotation_log


def _unit_or_none(v: np.ndarray, floor: float) -> Optional[np.ndarray]:
    n = np.linalg.norm(v)
    if n < floor:
        return None
    return v / n


def aggregate(demo: Demonstration, cfg: LearnerConfig) -> list[MotionStep]:
    """Convert a demonstration into a list of windowed MotionSteps.

    dx is position(last) - position(first) of each window, dbeta the
    rotation log of B_first^T B_last, and f_raw/t_raw the window means,
    all expressed in the frame named by demo.frame. Raises TooShort when
    fewer than two full windows fit, InvalidWindow when a window rotates
    by (nearly) pi or more.
    """
    validate_demonstration(demo)
    if demo.frame not in ("world", "tool"):
        raise ValueError(f"unknown demonstration frame '{demo.frame}'")
    tool = demo.frame == "tool"
    w = cfg.window
    n_windows = len(demo.samples) // w
    if n_windows < 2:
        raise TooShort(f"got {len(demo.samples)} samples, need >= {2 * w} for window {w}")

    steps = []
    for k in range(n_windows):
        block = demo.samples[k * w : (k + 1) * w]
        first, last = block[0], block[-1]
        dx = last.pose.position - first.pose.position
        q_rel = quat_mul(quat_conj(first.pose.orientation), last.pose.orientation)
        try:
            dbeta = rotation_log(q_rel)  # tool-frame increment by construction
        except AngleNearPi as exc:
            raise InvalidWindow(k) from exc
        if tool:
            R0 = quat_to_matrix(first.pose.orientation)
            dx = R0.T @ dx
            f_raw = np.mean(
                [quat_to_matrix(s.pose.orientation).T @ s.force for s in block], axis=0
            )
            t_raw = np.mean(
                [quat_to_matrix(s.pose.orientation).T @ s.torque for s in block], axis=0
            )
        else:
            f_raw = np.mean([s.force for s in block], axis=0)
            t_raw = np.mean([s.torque for s in block], axis=0)
        steps.append(
            MotionStep(
                dx=dx,
                dbeta=dbeta,
                f_raw=f_raw,
                t_raw=t_raw,
                v_hat=_unit_or_none(dx, cfg.motion_floor_trans),
                w_hat=_unit_or_none(dbeta, cfg.motion_floor_rot),
                f_hat=_unit_or_none(f_raw, cfg.wrench_floor),
                t_hat=_unit_or_none(t_raw, cfg.wrench_floor),
            )
        )
    return steps


def mean_direction(steps: list[MotionStep], channel: Channel) -> np.ndarray:
    """Arithmetic mean of the present unit directions for one channel.

    Deliberately NOT renormalized: the norm (in [0, 1]) encodes how
    consistent the motion directions were, and a norm near zero is the
    signal downstream that there was no residual motion.
    """
    vecs = [d for s in steps if (d := s.motion_dir(channel)) is not None]
    if not vecs:
        raise NoMotion(f"no step has a {channel} direction")
    return np.mean(vecs, axis=0)
