"""Mechanical-work analysis: detect channels whose motion was driven by the environment.

Recorded wrenches are the contact wrench exerted by the environment on
the tool, so a positive dot product with the motion increment is work
done by the environment. When (nearly) all work on a channel is done by
the environment, every axis of that channel must be compliant.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Channel, MotionStep

ENERGY_FLOOR = 1e-9


@dataclass(frozen=True)
class WorkProfile:
    """Per-step work series (J) and the environment/total work ratio."""

    per_step: np.ndarray
    w_env: float
    w_tot: float
    ratio: float
    no_work: bool

    def __post_init__(self):
        p = np.asarray(self.per_step, dtype=float).reshape(-1)
        p.flags.writeable = False
        object.__setattr__(self, "per_step", p)


def work_profile(steps: list[MotionStep], channel: Channel) -> WorkProfile:
    """Riemann-sum work over the windowed increments of one channel.

    w_tot sums |W| (work treated as path-dependent), w_env sums the
    positive part. ratio is w_env / w_tot, or 0 with the no_work flag
    when total work falls below the 1e-9 J energy floor.
    """
    if not steps:
        raise ValueError("work_profile requires at least one step")
    per_step = np.array([float(np.dot(s.wrench(channel), s.increment(channel))) for s in steps])
    w_tot = float(np.sum(np.abs(per_step)))
    w_env = float(np.sum(np.maximum(per_step, 0.0)))
    no_work = w_tot <= ENERGY_FLOOR
    ratio = 0.0 if no_work else w_env / w_tot
    return WorkProfile(per_step=per_step, w_env=w_env, w_tot=w_tot, ratio=ratio, no_work=no_work)


def is_three_dof_compliant(profile: WorkProfile, sigma_work: float) -> bool:
    """True when the environment did at least a sigma_work share of the work."""
    if not 0.0 < sigma_work <= 1.0:
        raise ValueError("sigma_work must lie in (0, 1]")
    return (not profile.no_work) and profile.ratio >= sigma_work
