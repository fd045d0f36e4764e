"""End-to-end learning: demonstrations in, compliant primitive plus report out.

Stage order follows the method: (2) window aggregation, (3) work-ratio
check for fully compliant channels, (4) desired-direction search for the
remaining channels, (5) compliant-axis selection and stiffness assembly,
then pitch/speed coupling when both directions exist.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .compliance import ComplianceResult, select_num_axes, stiffness_matrix
from .core import CHANNELS, Channel, CompliantPrimitive, Demonstration, LearnerConfig
from .direction import DesiredDirectionResult, compute_pitch, learn_desired_direction
from .errors import NoMotion, NoRotation, NoUsableSteps
from .preproc import aggregate, mean_direction
from .work import WorkProfile, is_three_dof_compliant, work_profile


@dataclass(frozen=True)
class LearnReport:
    """Primitive plus every stage output it was derived from."""

    primitive: CompliantPrimitive
    work_profiles: dict
    direction_results: dict
    compliance_results: dict
    warnings: tuple
    config: LearnerConfig
    demo_ids: tuple
    steps_per_demo: tuple = ()


def _per_demo_means(steps_per_demo, channel: Channel) -> list[np.ndarray]:
    means = []
    for steps in steps_per_demo:
        try:
            means.append(mean_direction(steps, channel))
        except NoMotion:
            means.append(np.zeros(3))
    return means


def learn_primitive(demos: Sequence[Demonstration], cfg: LearnerConfig = LearnerConfig()) -> LearnReport:
    """Learn a compliant primitive from one or more demonstrations.

    Channels found 3-DOF compliant by the work check get zero stiffness
    and skip the direction/axis stages. Per-channel stage outputs and
    warnings are collected into the returned LearnReport.
    """
    if not demos:
        raise ValueError("learn_primitive requires at least one demonstration")
    frames = {d.frame for d in demos}
    if len(frames) > 1:
        raise ValueError(f"demonstrations disagree on frame: {sorted(frames)}")
    frame = demos[0].frame
    steps_per_demo = [aggregate(d, cfg) for d in demos]
    all_steps = [s for steps in steps_per_demo for s in steps]

    warnings: list[str] = []
    profiles: dict = {}
    dir_results: dict = {}
    comp_results: dict = {}
    directions: dict = {}
    stiffnesses: dict = {}
    three_dof: dict = {}

    for ch in CHANNELS:
        wp = work_profile(all_steps, ch)
        profiles[ch] = wp
        full = is_three_dof_compliant(wp, cfg.sigma_work)
        three_dof[ch] = full
        if full:
            directions[ch] = None
            dir_results[ch] = None
            comp_results[ch] = None
            stiffnesses[ch] = np.zeros((3, 3))
            continue

        try:
            dres = learn_desired_direction(steps_per_demo, ch, cfg)
            dir_results[ch] = dres
            directions[ch] = dres.direction
            if dres.n_contrary:
                warnings.append(f"{ch}: dropped {dres.n_contrary} contrary-wrench steps")
        except NoUsableSteps as exc:
            dir_results[ch] = None
            directions[ch] = None
            warnings.append(f"{ch}: no usable steps for direction search ({exc})")

        means = _per_demo_means(steps_per_demo, ch)
        cres = select_num_axes(means, directions[ch], cfg.sigma_demo)
        comp_results[ch] = cres
        stiffnesses[ch] = stiffness_matrix(cres.axes, cfg.stiffness(ch))

    if three_dof["translation"] and three_dof["rotation"]:
        warnings.append("both channels 3-DOF compliant: the primitive exerts no wrench at all")

    v_d = directions["translation"]
    w_d = directions["rotation"]
    pitch: Optional[float] = None
    nu = cfg.speed_nu
    lam = cfg.speed_lambda
    if v_d is not None and w_d is not None:
        try:
            pitch = compute_pitch(all_steps, cfg)
            # Neither channel runs faster than its configured default.
            lam = min(cfg.speed_lambda, cfg.speed_nu / pitch)
            nu = pitch * lam
        except NoRotation:
            # Unreachable when w_d exists (its steps cleared the floor),
            # kept as a guard for pathological configs.
            w_d = None
            pitch = None
            warnings.append("rotation direction dropped: total rotation below floor")

    primitive = CompliantPrimitive(
        K_f=stiffnesses["translation"],
        K_o=stiffnesses["rotation"],
        nu=nu,
        lam=lam,
        v_d=v_d,
        w_d=w_d,
        pitch=pitch,
        trans_3dof_compliant=three_dof["translation"],
        rot_3dof_compliant=three_dof["rotation"],
        frame=frame,
    )
    return LearnReport(
        primitive=primitive,
        work_profiles=profiles,
        direction_results=dir_results,
        compliance_results=comp_results,
        warnings=tuple(warnings),
        config=cfg,
        demo_ids=tuple(d.id for d in demos),
        steps_per_demo=tuple(tuple(s) for s in steps_per_demo),
    )
