"""Low-level planar geometry: hulls, polygon polars, distances.

Everything here works on plain (k, 2) float arrays of points. Vertex lists
are counterclockwise unless stated otherwise.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial import ConvexHull, QhullError


def cross2(a, b) -> float:
    return float(a[0] * b[1] - a[1] * b[0])


def _turn(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _prune_collinear_cycle(cycle: np.ndarray, eps: float) -> np.ndarray:
    """Drop cycle vertices whose neighbour turn area is below eps."""
    while len(cycle) > 3:
        k = len(cycle)
        keep = [
            i
            for i in range(k)
            if _turn(cycle[i - 1], cycle[i], cycle[(i + 1) % k]) > eps
        ]
        if len(keep) == k:
            return cycle
        if len(keep) < 3:
            raise ValueError("point cloud is degenerate (collinear)")
        cycle = cycle[keep]
    return cycle


def convex_hull_ccw(points: np.ndarray, eps_rel: float = 1e-12) -> np.ndarray:
    """Counterclockwise convex hull of a 2D point cloud.

    Vertex selection is qhull's; vertices collinear with their hull
    neighbours (turn area below ``eps_rel * scale**2``) are then pruned, so
    the output is strictly convex. Fully degenerate clouds raise.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 3:
        raise ValueError("need at least 3 planar points")
    try:
        hull = ConvexHull(pts)
    except QhullError as exc:
        raise ValueError(f"point cloud is degenerate ({exc.__class__.__name__})") from exc
    cycle = pts[hull.vertices]  # counterclockwise in 2D
    scale = float(np.abs(cycle).max())
    eps = eps_rel * max(scale, 1e-30) ** 2
    return _prune_collinear_cycle(cycle, eps)


def polygon_area(vertices: np.ndarray) -> float:
    """Signed shoelace area; positive for counterclockwise vertices."""
    v = np.asarray(vertices, dtype=float)
    w = np.roll(v, -1, axis=0)
    return 0.5 * float(np.sum(v[:, 0] * w[:, 1] - v[:, 1] * w[:, 0]))


def edge_normals_and_offsets(vertices: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Outward unit normal and support offset of every edge of a CCW polygon.

    Edge ``j`` runs from vertex ``j`` to vertex ``j+1``; its halfspace is
    ``{x : <x, normal_j> <= offset_j}``.
    """
    v = np.asarray(vertices, dtype=float)
    e = np.roll(v, -1, axis=0) - v
    lengths = np.hypot(e[:, 0], e[:, 1])
    if np.any(lengths <= 0.0):
        raise ValueError("polygon has a zero-length edge")
    normals = np.column_stack([e[:, 1], -e[:, 0]]) / lengths[:, None]
    offsets = np.einsum("ij,ij->i", normals, v)
    return normals, offsets


def polar_polygon(vertices: np.ndarray) -> np.ndarray:
    """Vertices of the polar body of a convex CCW polygon with 0 interior.

    Vertex/facet duality: each edge with outward normal n at support offset
    h > 0 becomes the polar vertex n / h; each primal vertex becomes a polar
    edge. Raises if the origin is not strictly interior (the polar would be
    unbounded).
    """
    normals, offsets = edge_normals_and_offsets(vertices)
    scale = float(np.abs(vertices).max())
    if offsets.min() <= 1e-14 * max(scale, 1.0):
        raise ValueError("origin is not strictly interior; polar body is unbounded")
    return normals / offsets[:, None]


def point_segment_distance(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    ab = b - a
    denom = float(ab @ ab)
    t = 0.0 if denom == 0.0 else float(np.clip((p - a) @ ab / denom, 0.0, 1.0))
    return float(np.hypot(*(a + t * ab - p)))


def point_polygon_distance(p: np.ndarray, vertices: np.ndarray) -> float:
    """Distance from a point to a convex polygon as a set (0 when inside)."""
    v = np.asarray(vertices, dtype=float)
    w = np.roll(v, -1, axis=0)
    p = np.asarray(p, dtype=float)
    inside = True
    for a, b in zip(v, w):
        if cross2(b - a, p - a) < 0.0:
            inside = False
            break
    if inside:
        return 0.0
    return min(point_segment_distance(p, a, b) for a, b in zip(v, w))


def hausdorff_distance(a_vertices: np.ndarray, b_vertices: np.ndarray) -> float:
    """Hausdorff distance between two convex polygons (as sets).

    For convex sets the supremum over each set is attained at a vertex, so
    scanning vertices against the other polygon is exact.
    """
    d_ab = max(point_polygon_distance(p, b_vertices) for p in np.asarray(a_vertices, float))
    d_ba = max(point_polygon_distance(p, a_vertices) for p in np.asarray(b_vertices, float))
    return max(d_ab, d_ba)
