"""2-D convex-polygon primitives: winding, containment, clipping, Chebyshev center.

Polygons are (N, 2) float arrays of vertices. Functions that assume
convexity expect counterclockwise winding; use ensure_ccw / convex_order
to normalize first.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import linprog


def polygon_area(poly: np.ndarray) -> float:
    """Signed area (positive for counterclockwise winding)."""
    p = np.asarray(poly, dtype=float)
    x, y = p[:, 0], p[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def ensure_ccw(poly: np.ndarray) -> np.ndarray:
    p = np.asarray(poly, dtype=float)
    return p if polygon_area(p) >= 0.0 else p[::-1].copy()


def convex_order(points: np.ndarray) -> np.ndarray:
    """Reorder points counterclockwise around their centroid.

    Produces a simple polygon for any point set whose hull contains all
    points; the result is convex whenever the points are in convex position.
    """
    p = np.asarray(points, dtype=float)
    c = p.mean(axis=0)
    ang = np.arctan2(p[:, 1] - c[1], p[:, 0] - c[0])
    return p[np.argsort(ang)]


def is_convex(poly: np.ndarray, tol: float = 0.0) -> bool:
    """True when every turn of the CCW polygon is a left (or straight) turn."""
    p = np.asarray(poly, dtype=float)
    if len(p) < 3:
        return False
    e = np.roll(p, -1, axis=0) - p
    cross = e[:, 0] * np.roll(e, -1, axis=0)[:, 1] - e[:, 1] * np.roll(e, -1, axis=0)[:, 0]
    return bool(np.all(cross >= -tol))


def point_in_convex(poly: np.ndarray, point: np.ndarray, tol: float = 1e-12) -> bool:
    """Containment in a CCW convex polygon; boundary counts within tol."""
    return bool(points_in_convex(poly, np.asarray(point, dtype=float)[None, :], tol=tol)[0])


def points_in_convex(poly: np.ndarray, points: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Vectorized containment test: (M,) bool mask for (M, 2) points."""
    p = np.asarray(poly, dtype=float)
    pts = np.asarray(points, dtype=float)
    v = p
    e = np.roll(p, -1, axis=0) - p
    # cross(e_i, pts - v_i) >= -tol for all edges i
    dx = pts[None, :, 0] - v[:, None, 0]
    dy = pts[None, :, 1] - v[:, None, 1]
    cross = e[:, None, 0] * dy - e[:, None, 1] * dx
    return np.all(cross >= -tol, axis=0)


def clip_convex(subject: np.ndarray, clip: np.ndarray) -> np.ndarray:
    """Sutherland-Hodgman clip of a polygon against a CCW convex clip polygon.

    Returns the (possibly empty) intersection polygon as an (N, 2) array.
    """
    output = [tuple(v) for v in np.asarray(subject, dtype=float)]
    clip = np.asarray(clip, dtype=float)
    n = len(clip)
    for i in range(n):
        if not output:
            break
        a = clip[i]
        b = clip[(i + 1) % n]
        ex, ey = b[0] - a[0], b[1] - a[1]

        def inside(p):
            return ex * (p[1] - a[1]) - ey * (p[0] - a[0]) >= 0.0

        def intersect(p, q):
            # Line a-b with segment p-q; denominators are nonzero because
            # p and q straddle the clip line.
            dcx, dcy = a[0] - b[0], a[1] - b[1]
            dpx, dpy = p[0] - q[0], p[1] - q[1]
            n1 = a[0] * b[1] - a[1] * b[0]
            n2 = p[0] * q[1] - p[1] * q[0]
            den = dcx * dpy - dcy * dpx
            return ((n1 * dpx - n2 * dcx) / den, (n1 * dpy - n2 * dcy) / den)

        new_output = []
        s = output[-1]
        for e in output:
            if inside(e):
                if not inside(s):
                    new_output.append(intersect(s, e))
                new_output.append(e)
            elif inside(s):
                new_output.append(intersect(s, e))
            s = e
        output = new_output
    return np.array(output, dtype=float).reshape(-1, 2)


def _halfplanes(poly: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Outward half-plane form a_i . x <= b_i of a CCW convex polygon."""
    p = ensure_ccw(np.asarray(poly, dtype=float))
    e = np.roll(p, -1, axis=0) - p
    a = np.stack([e[:, 1], -e[:, 0]], axis=1)
    b = np.einsum("ij,ij->i", a, p)
    return a, b


def chebyshev_center(poly: np.ndarray) -> tuple[np.ndarray, float]:
    """Deepest interior point of a convex polygon and its clearance radius.

    Solved as a linear program over the edge half-planes; when the optimal
    center set is a segment (e.g. rectangles), the lexicographically
    smallest optimal point is returned.
    """
    p = np.asarray(poly, dtype=float)
    if len(p) < 3:
        return p.mean(axis=0), 0.0
    a, b = _halfplanes(p)
    norms = np.linalg.norm(a, axis=1)
    keep = norms > 0.0
    a, b, norms = a[keep], b[keep], norms[keep]
    if len(a) < 3:
        return p.mean(axis=0), 0.0

    A = np.column_stack([a, norms])
    bounds = [(None, None), (None, None), (0.0, None)]
    res = linprog(np.array([0.0, 0.0, -1.0]), A_ub=A, b_ub=b, bounds=bounds, method="highs")
    if not res.success:
        return p.mean(axis=0), 0.0
    radius = float(res.x[2])

    # Lexicographic tie-break over the optimal-center set: min x, then min y.
    slack = 1e-9
    A_r = np.vstack([A, [0.0, 0.0, -1.0]])
    b_r = np.concatenate([b, [-(radius - slack)]])
    res_x = linprog(np.array([1.0, 0.0, 0.0]), A_ub=A_r, b_ub=b_r, bounds=bounds, method="highs")
    if not res_x.success:
        return res.x[:2].copy(), radius
    x_min = float(res_x.x[0])
    A_xy = np.vstack([A_r, [1.0, 0.0, 0.0]])
    b_xy = np.concatenate([b_r, [x_min + slack]])
    res_y = linprog(np.array([0.0, 1.0, 0.0]), A_ub=A_xy, b_ub=b_xy, bounds=bounds, method="highs")
    if not res_y.success:
        return res_x.x[:2].copy(), radius
    return np.array([x_min, float(res_y.x[1])]), radius
