"""Immutable planar point samples."""

from __future__ import annotations

import hashlib

import numpy as np

from ..errors import DuplicatePoints


class PointSet:
    """A fixed sample of distinct, finite points in the plane.

    The coordinate array is copied on construction and made read-only, so a
    PointSet can be shared freely across threads and cached structures.
    """

    __slots__ = ("points", "n", "_diameter", "_hash")

    dim = 2

    def __init__(self, points):
        pts = np.asarray(points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ValueError(f"expected an (n, 2) coordinate array, got shape {pts.shape}")
        if pts.shape[0] < 1:
            raise ValueError("a PointSet needs at least one point")
        if not np.isfinite(pts).all():
            raise ValueError("coordinates must be finite")
        uniq = np.unique(pts, axis=0)
        if uniq.shape[0] != pts.shape[0]:
            raise DuplicatePoints(
                f"{pts.shape[0] - uniq.shape[0]} duplicate coordinate pair(s); "
                "deduplicate before constructing a PointSet"
            )
        pts = pts.copy()
        pts.setflags(write=False)
        self.points = pts
        self.n = pts.shape[0]
        self._diameter = None
        self._hash = None

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"PointSet(n={self.n})"

    @property
    def bbox(self):
        """(xmin, ymin, xmax, ymax) of the sample."""
        lo = self.points.min(axis=0)
        hi = self.points.max(axis=0)
        return (lo[0], lo[1], hi[0], hi[1])

    @property
    def diameter(self):
        """Largest inter-point distance (0 for a single point)."""
        if self._diameter is None:
            if self.n == 1:
                self._diameter = 0.0
            else:
                cand = self.points
                if self.n > 16:
                    # pairwise search restricted to convex hull vertices
                    from scipy.spatial import ConvexHull, QhullError

                    try:
                        cand = self.points[ConvexHull(self.points).vertices]
                    except QhullError:
                        pass  # collinear: fall through to the full pairwise scan
                diff = cand[:, None, :] - cand[None, :, :]
                self._diameter = float(np.sqrt((diff * diff).sum(axis=2)).max())
        return self._diameter

    def content_hash(self):
        """SHA-256 of the raw coordinate bytes, for run provenance."""
        if self._hash is None:
            self._hash = hashlib.sha256(np.ascontiguousarray(self.points).tobytes()).hexdigest()
        return self._hash

    def min_nn_distance(self):
        """Smallest nearest-neighbour distance (inf for a single point)."""
        if self.n == 1:
            return float("inf")
        from scipy.spatial import cKDTree

        d, _ = cKDTree(self.points).query(self.points, k=2)
        return float(d[:, 1].min())
