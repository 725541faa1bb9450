"""Hausdorff distance and distance in measure between planar sets."""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from scipy.spatial import cKDTree

from ..errors import EmptyInput
from .hull import HullRegion
from .pointset import PointSet


class HausdorffResult(NamedTuple):
    distance: float
    error_bound: float


class MeasureResult(NamedTuple):
    value: float
    standard_error: float


def _as_samples(obj, step):
    """Discretise a set-like object; returns (points, covering radius)."""
    if isinstance(obj, PointSet):
        return obj.points, 0.0
    if isinstance(obj, np.ndarray):
        pts = np.atleast_2d(obj)
        if pts.size == 0:
            raise EmptyInput("empty point array")
        return pts, 0.0
    if isinstance(obj, HullRegion):
        parts = [poly for poly, _ in obj.boundary_polylines(chord_tol=step / 8.0)]
        pts = [np.vstack(parts)] if parts else []
        if not obj.is_degenerate:
            x0, y0, x1, y1 = obj.bbox
            gstep = 2.0 * step
            gx = np.arange(x0, x1 + gstep, gstep)
            gy = np.arange(y0, y1 + gstep, gstep)
            gxx, gyy = np.meshgrid(gx, gy)
            grid = np.column_stack([gxx.ravel(), gyy.ravel()])
            inside = obj.contains(grid)
            if inside.any():
                pts.append(grid[inside])
        if not pts:
            raise EmptyInput("region has no material to sample")
        # boundary resampled at `step`, interior grid at 2*step
        dense = []
        for poly, _ in obj.boundary_polylines(chord_tol=step / 8.0):
            dense.append(_resample_polyline(poly, step))
        if len(pts) > 1:
            dense.append(pts[1])
        return np.vstack(dense), math.sqrt(2.0) * step
    # duck-typed: objects exposing boundary/contains sampling
    raise TypeError(f"cannot interpret {type(obj).__name__} as a planar set")


def _resample_polyline(poly, step):
    if len(poly) == 1:
        return poly
    segs = np.diff(poly, axis=0)
    lens = np.hypot(segs[:, 0], segs[:, 1])
    out = [poly[0]]
    for k in range(len(segs)):
        if lens[k] == 0:
            continue
        m = max(1, int(math.ceil(lens[k] / step)))
        t = np.arange(1, m + 1) / m
        out.append(poly[k] + t[:, None] * segs[k])
    return np.vstack(out)


def _default_step(a_pts, c_pts):
    lo = np.minimum(a_pts.min(axis=0), c_pts.min(axis=0))
    hi = np.maximum(a_pts.max(axis=0), c_pts.max(axis=0))
    diam = float(np.hypot(*(hi - lo)))
    return max(diam, 1e-12) / 2048.0


def hausdorff(a, c, step=None) -> HausdorffResult:
    """Hausdorff distance between two nonempty bounded sets.

    Point sets are evaluated exactly; regions are discretised
    (boundary at `step`, interior grid at 2*step, default step diameter/2048)
    and the covering radius of the discretisation is reported as the bound.
    """
    rough_a = a.points if isinstance(a, (PointSet,)) else np.atleast_2d(np.asarray(getattr(a, "pointset", a).points if isinstance(a, HullRegion) else a))
    rough_c = c.points if isinstance(c, (PointSet,)) else np.atleast_2d(np.asarray(getattr(c, "pointset", c).points if isinstance(c, HullRegion) else c))
    if rough_a.size == 0 or rough_c.size == 0:
        raise EmptyInput("hausdorff needs nonempty inputs")
    if step is None:
        step = _default_step(rough_a, rough_c)
    pa, bound_a = _as_samples(a, step)
    pc, bound_c = _as_samples(c, step)
    d_ac = cKDTree(pc).query(pa)[0].max()
    d_ca = cKDTree(pa).query(pc)[0].max()
    return HausdorffResult(float(max(d_ac, d_ca)), float(bound_a + bound_c))


def distance_in_measure(a, c, n_samples=100_000, seed=0) -> MeasureResult:
    """Monte Carlo estimate of the area of the symmetric difference.

    Both arguments need `.contains(points)` and `.bbox`; the sampling window
    is the joint bounding box.  Deterministic for a fixed seed.
    """
    ax0, ay0, ax1, ay1 = a.bbox
    cx0, cy0, cx1, cy1 = c.bbox
    x0, y0 = min(ax0, cx0), min(ay0, cy0)
    x1, y1 = max(ax1, cx1), max(ay1, cy1)
    if not (x1 > x0) or not (y1 > y0):
        # degenerate window: both sets are essentially one point or segment
        return MeasureResult(0.0, 0.0)
    box_area = (x1 - x0) * (y1 - y0)
    rng = np.random.default_rng(seed)
    pts = rng.uniform((x0, y0), (x1, y1), size=(int(n_samples), 2))
    hit = a.contains(pts) != c.contains(pts)
    p = hit.mean()
    est = box_area * p
    se = box_area * math.sqrt(max(p * (1.0 - p), 0.0) / len(pts))
    return MeasureResult(float(est), float(se))
