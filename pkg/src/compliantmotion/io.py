"""File formats: demonstrations (JSON/CSV), primitives, reports, environments, trajectories.

JSON readers tolerate extra keys (a "meta" object carries seeds and
provenance); CSV files may start with '# key=value' comment lines before
the header.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .compliance import ComplianceResult
from .core import CompliantPrimitive, Demonstration, LearnerConfig, Pose, WrenchSample
from .direction import AngleRectangle, DesiredDirectionResult
from .errors import FormatError, NonFiniteValue
from .pipeline import LearnReport
from .sim import Environment, Facet, GoalRegion, Trajectory
from .work import WorkProfile

PathLike = Union[str, Path]

DEMO_CSV_HEADER = "t,px,py,pz,qw,qx,qy,qz,fx,fy,fz,tx,ty,tz"
TRAJ_CSV_HEADER = DEMO_CSV_HEADER + ",success"


def _vec(x):
    return np.asarray(x, dtype=float)


def _opt_list(v):
    return None if v is None else np.asarray(v, dtype=float).tolist()


# ---------------------------------------------------------------- demonstrations


def demo_to_dict(demo: Demonstration, meta: Optional[dict] = None) -> dict:
    d = {
        "id": demo.id,
        "frame": demo.frame,
        "samples": [
            {
                "t": s.t,
                "p": s.pose.position.tolist(),
                "q": s.pose.orientation.tolist(),
                "f": s.force.tolist(),
                "tq": s.torque.tolist(),
            }
            for s in demo.samples
        ],
    }
    if meta:
        d["meta"] = meta
    return d


def demo_from_dict(d: dict) -> Demonstration:
    try:
        samples = []
        for i, s in enumerate(d["samples"]):
            try:
                pose = Pose(_vec(s["p"]), _vec(s["q"]))
            except ValueError as exc:
                raise NonFiniteValue(i, "orientation") from exc
            samples.append(
                WrenchSample(t=float(s["t"]), pose=pose, force=_vec(s["f"]), torque=_vec(s["tq"]))
            )
        return Demonstration(id=str(d["id"]), samples=tuple(samples), frame=str(d.get("frame", "world")))
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed demonstration: {exc!r}") from exc


def write_demo(path: PathLike, demo: Demonstration, meta: Optional[dict] = None) -> None:
    Path(path).write_text(json.dumps(demo_to_dict(demo, meta), indent=1))


def read_demo(path: PathLike) -> Demonstration:
    path = Path(path)
    if path.suffix.lower() == ".csv":
        return read_demo_csv(path)
    try:
        d = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON ({exc})") from exc
    return demo_from_dict(d)


def write_demo_csv(path: PathLike, demo: Demonstration, meta: Optional[dict] = None) -> None:
    lines = []
    for key, value in (meta or {}).items():
        lines.append(f"# {key}={value}")
    lines.append(DEMO_CSV_HEADER)
    for s in demo.samples:
        row = [s.t, *s.pose.position, *s.pose.orientation, *s.force, *s.torque]
        lines.append(",".join(format(v, ".17g") for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def read_demo_csv(path: PathLike, demo_id: Optional[str] = None, frame: str = "world") -> Demonstration:
    path = Path(path)
    rows = [ln for ln in path.read_text().splitlines() if ln.strip() and not ln.startswith("#")]
    if not rows or rows[0].replace(" ", "") != DEMO_CSV_HEADER:
        raise FormatError(f"{path}: expected header '{DEMO_CSV_HEADER}'")
    samples = []
    for i, ln in enumerate(rows[1:]):
        parts = ln.split(",")
        if len(parts) != 14:
            raise FormatError(f"{path}: row {i} has {len(parts)} fields, expected 14")
        try:
            vals = [float(v) for v in parts]
        except ValueError as exc:
            raise FormatError(f"{path}: row {i}: {exc}") from exc
        try:
            pose = Pose(_vec(vals[1:4]), _vec(vals[4:8]))
        except ValueError as exc:
            raise NonFiniteValue(i, "orientation") from exc
        samples.append(WrenchSample(t=vals[0], pose=pose, force=_vec(vals[8:11]), torque=_vec(vals[11:14])))
    return Demonstration(id=demo_id or path.stem, samples=tuple(samples), frame=frame)


# ------------------------------------------------------------------- primitives


def primitive_to_dict(
    prim: CompliantPrimitive,
    config: Optional[LearnerConfig] = None,
    provenance: Optional[dict] = None,
    meta: Optional[dict] = None,
) -> dict:
    d = {
        "v_d": _opt_list(prim.v_d),
        "w_d": _opt_list(prim.w_d),
        "K_f": prim.K_f.tolist(),
        "K_o": prim.K_o.tolist(),
        "pitch": prim.pitch,
        "nu": prim.nu,
        "lambda": prim.lam,
        "trans_3dof_compliant": prim.trans_3dof_compliant,
        "rot_3dof_compliant": prim.rot_3dof_compliant,
        "frame": prim.frame,
    }
    if config is not None:
        d["config"] = config.to_dict()
    if provenance is not None:
        d["provenance"] = provenance
    if meta:
        d["meta"] = meta
    return d


def primitive_from_dict(d: dict) -> CompliantPrimitive:
    try:
        return CompliantPrimitive(
            K_f=_vec(d["K_f"]),
            K_o=_vec(d["K_o"]),
            nu=float(d["nu"]),
            lam=float(d["lambda"]),
            v_d=None if d.get("v_d") is None else _vec(d["v_d"]),
            w_d=None if d.get("w_d") is None else _vec(d["w_d"]),
            pitch=None if d.get("pitch") is None else float(d["pitch"]),
            trans_3dof_compliant=bool(d.get("trans_3dof_compliant", False)),
            rot_3dof_compliant=bool(d.get("rot_3dof_compliant", False)),
            frame=str(d.get("frame", "world")),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed primitive: {exc!r}") from exc


def write_primitive(path: PathLike, prim: CompliantPrimitive, **kwargs) -> None:
    Path(path).write_text(json.dumps(primitive_to_dict(prim, **kwargs), indent=1))


def read_primitive(path: PathLike) -> CompliantPrimitive:
    try:
        return primitive_from_dict(json.loads(Path(path).read_text()))
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON ({exc})") from exc


# ---------------------------------------------------------------------- reports


def _work_to_dict(wp: Optional[WorkProfile]) -> Optional[dict]:
    if wp is None:
        return None
    return {
        "per_step": wp.per_step.tolist(),
        "w_env": wp.w_env,
        "w_tot": wp.w_tot,
        "ratio": wp.ratio,
        "no_work": wp.no_work,
    }


def _direction_to_dict(dr: Optional[DesiredDirectionResult]) -> Optional[dict]:
    if dr is None:
        return None
    return {
        "direction": _opt_list(dr.direction),
        "inlier_ratio": dr.inlier_ratio,
        "intersection": dr.intersection.tolist(),
        "chebyshev_radius": dr.chebyshev_radius,
        "n_rectangles": dr.n_rectangles,
        "n_inliers": dr.n_inliers,
        "rectangles": [
            {"corners": r.corners.tolist(), "step_index": r.step_index} for r in dr.rectangles
        ],
        "inlier_indices": list(dr.inlier_indices),
        "vote_cell": _opt_list(dr.vote_cell),
        "align_rotation": None if dr.align_rotation is None else dr.align_rotation.tolist(),
        "angle_center": _opt_list(dr.angle_center),
        "n_contrary": dr.n_contrary,
    }


def _compliance_to_dict(cr: Optional[ComplianceResult]) -> Optional[dict]:
    if cr is None:
        return None
    return {
        "n_axes": cr.n_axes,
        "axes": cr.axes.tolist(),
        "bic": [None if not np.isfinite(b) else float(b) for b in cr.bic],
        "residuals": cr.residuals.tolist(),
        "eigenvalues": cr.eigenvalues.tolist(),
        "means": cr.means.tolist(),
    }


def report_to_dict(report: LearnReport, meta: Optional[dict] = None) -> dict:
    d = {
        "primitive": primitive_to_dict(report.primitive),
        "work": {ch: _work_to_dict(report.work_profiles.get(ch)) for ch in report.work_profiles},
        "direction": {
            ch: _direction_to_dict(report.direction_results.get(ch))
            for ch in report.direction_results
        },
        "compliance": {
            ch: _compliance_to_dict(report.compliance_results.get(ch))
            for ch in report.compliance_results
        },
        "warnings": list(report.warnings),
        "config": report.config.to_dict(),
        "provenance": {"demos": list(report.demo_ids)},
    }
    if meta:
        d["meta"] = meta
    return d


def write_report(path: PathLike, report: LearnReport, meta: Optional[dict] = None) -> None:
    Path(path).write_text(json.dumps(report_to_dict(report, meta), indent=1))


def read_report_dict(path: PathLike) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON ({exc})") from exc


# ----------------------------------------------------------------- environments


def environment_to_dict(env: Environment, meta: Optional[dict] = None) -> dict:
    d = {
        "facets": [
            {
                "p": f.point.tolist(),
                "n": f.normal.tolist(),
                "mu": f.mu,
                **({"extent": f.extent.tolist()} if f.extent is not None else {}),
            }
            for f in env.facets
        ],
        "goal": {
            "p": env.goal.pose.position.tolist(),
            "q": env.goal.pose.orientation.tolist(),
            "tol_pos": env.goal.tol_pos,
            "tol_rot": env.goal.tol_rot,
        },
        "bounds": env.bounds.tolist(),
        "probes": env.probes.tolist(),
    }
    if meta:
        d["meta"] = meta
    return d


def environment_from_dict(d: dict) -> Environment:
    try:
        facets = tuple(
            Facet(
                point=_vec(f["p"]),
                normal=_vec(f["n"]),
                mu=float(f.get("mu", 0.0)),
                extent=None if f.get("extent") is None else _vec(f["extent"]),
            )
            for f in d["facets"]
        )
        goal = GoalRegion(
            pose=Pose(_vec(d["goal"]["p"]), _vec(d["goal"]["q"])),
            tol_pos=float(d["goal"]["tol_pos"]),
            tol_rot=float(d["goal"]["tol_rot"]),
        )
        return Environment(facets=facets, goal=goal, bounds=_vec(d["bounds"]), probes=_vec(d["probes"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed environment: {exc!r}") from exc


def write_environment(path: PathLike, env: Environment, meta: Optional[dict] = None) -> None:
    Path(path).write_text(json.dumps(environment_to_dict(env, meta), indent=1))


def read_environment(path: PathLike) -> Environment:
    try:
        return environment_from_dict(json.loads(Path(path).read_text()))
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON ({exc})") from exc


# ------------------------------------------------------------------ trajectories


def write_trajectory(path: PathLike, traj: Trajectory, meta: Optional[dict] = None) -> None:
    lines = [f"# {k}={v}" for k, v in (meta or {}).items()]
    lines.append(TRAJ_CSV_HEADER)
    for s, flag in zip(traj.samples, traj.goal_flags):
        row = [s.t, *s.pose.position, *s.pose.orientation, *s.force, *s.torque]
        lines.append(",".join(format(v, ".17g") for v in row) + f",{int(flag)}")
    Path(path).write_text("\n".join(lines) + "\n")


# ----------------------------------------------------------------------- config


def read_config(path: PathLike) -> LearnerConfig:
    try:
        d = json.loads(Path(path).read_text())
        return LearnerConfig.from_dict(d)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON ({exc})") from exc
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
