"""Delaunay/Voronoi index over a point sample.

The Voronoi diagram is never materialised globally: cells are intersections
of bisector half-planes with the point's Delaunay neighbours, and everything
else (nearest queries, circumcentres, dual edges) is derived from the
triangulation and a KD-tree.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial import Delaunay, QhullError, cKDTree

from ..errors import AllCollinear
from .pointset import PointSet


def _circumcircles(points, tris):
    """Circumcentres and circumradii for each triangle, vectorised."""
    a = points[tris[:, 0]]
    b = points[tris[:, 1]] - a
    c = points[tris[:, 2]] - a
    d = 2.0 * (b[:, 0] * c[:, 1] - b[:, 1] * c[:, 0])
    bb = (b * b).sum(axis=1)
    cc = (c * c).sum(axis=1)
    ux = (c[:, 1] * bb - b[:, 1] * cc) / d
    uy = (b[:, 0] * cc - c[:, 0] * bb) / d
    centers = a + np.column_stack([ux, uy])
    radii = np.hypot(ux, uy)
    return centers, radii


def clip_polygon_halfplane(poly, point, normal):
    """Sutherland-Hodgman clip of `poly` to the half-plane (x-point).normal <= 0."""
    if len(poly) == 0:
        return poly
    vals = (poly - point) @ normal
    out = []
    m = len(poly)
    for k in range(m):
        k2 = (k + 1) % m
        inside1 = vals[k] <= 0
        inside2 = vals[k2] <= 0
        if inside1:
            out.append(poly[k])
        if inside1 != inside2:
            t = vals[k] / (vals[k] - vals[k2])
            out.append(poly[k] + t * (poly[k2] - poly[k]))
    return np.asarray(out) if out else np.empty((0, 2))


class TriangulationIndex:
    """Spatial index: Delaunay triangulation, dual Voronoi structure, KD-tree.

    Collinear samples are allowed but flagged (`collinear=True`); their
    Voronoi cells are the exact perpendicular strips between consecutive
    points along the common line.  Accessing triangle data in that state
    raises AllCollinear.
    """

    def __init__(self, pointset: PointSet):
        self.pointset = pointset
        pts = pointset.points
        self.kdtree = cKDTree(pts)
        self.collinear = False
        self._delaunay = None
        self.tris = None
        self.circumcenters = None
        self.circumradii = None
        self.edge_map = None

        if pointset.n < 3:
            self.collinear = True
        else:
            try:
                self._delaunay = Delaunay(pts)
            except QhullError:
                self.collinear = True
            else:
                if self._delaunay.simplices.shape[0] == 0:
                    self._delaunay = None
                    self.collinear = True

        if self._delaunay is not None:
            tris = self._delaunay.simplices.copy()
            a = pts[tris[:, 0]]
            cross = np.cross(pts[tris[:, 1]] - a, pts[tris[:, 2]] - a)
            flip = cross < 0
            tris[flip, 1], tris[flip, 2] = tris[flip, 2], tris[flip, 1].copy()
            self.tris = tris
            self.circumcenters, self.circumradii = _circumcircles(pts, tris)
            self.edge_map = self._build_edge_map(tris)

        if self.collinear:
            self._line = self._fit_line(pts)

    @staticmethod
    def _build_edge_map(tris):
        edge_map = {}
        for t, (i, j, k) in enumerate(tris):
            for a, b, opp in ((i, j, k), (j, k, i), (k, i, j)):
                key = (a, b) if a < b else (b, a)
                edge_map.setdefault(key, []).append((t, opp))
        return edge_map

    @staticmethod
    def _fit_line(pts):
        """Unit direction and origin of the common line (degenerate inputs)."""
        origin = pts[0]
        if pts.shape[0] == 1:
            return origin, np.array([1.0, 0.0])
        rel = pts - origin
        k = np.argmax((rel * rel).sum(axis=1))
        d = rel[k]
        norm = np.hypot(d[0], d[1])
        if norm == 0:
            return origin, np.array([1.0, 0.0])
        return origin, d / norm

    @property
    def delaunay(self):
        if self._delaunay is None:
            raise AllCollinear("no nondegenerate triangulation exists for this sample")
        return self._delaunay

    # -- queries ------------------------------------------------------------

    def nearest(self, x):
        """(distance, index) of the nearest sample; ties resolved to the lowest index."""
        x = np.asarray(x, dtype=float)
        k = min(4, self.pointset.n)
        d, idx = self.kdtree.query(x, k=k)
        d = np.atleast_1d(d)
        idx = np.atleast_1d(idx)
        tol = 1e-12 * (1.0 + d[0])
        tied = idx[d <= d[0] + tol]
        return float(d[0]), int(tied.min())

    def nearest_distances(self, xs):
        """Vectorised distance-to-sample for an (m, 2) array."""
        d, _ = self.kdtree.query(np.asarray(xs, dtype=float))
        return d

    def cells_containing(self, x, tol=None):
        """Indices i with x in Vor(X_i); more than one index on cell boundaries."""
        x = np.asarray(x, dtype=float)
        k = min(8, self.pointset.n)
        d, idx = self.kdtree.query(x, k=k)
        d = np.atleast_1d(d)
        idx = np.atleast_1d(idx)
        if tol is None:
            tol = 1e-9 * (1.0 + d[0])
        hits = sorted(int(i) for i in idx[d <= d[0] + tol])
        return hits

    def find_simplex(self, xs):
        return self.delaunay.find_simplex(np.asarray(xs, dtype=float))

    # -- Voronoi cells -------------------------------------------------------

    def _clip_box(self, pad):
        x0, y0, x1, y1 = self.pointset.bbox
        return np.array(
            [[x0 - pad, y0 - pad], [x1 + pad, y0 - pad], [x1 + pad, y1 + pad], [x0 - pad, y1 + pad]]
        )

    def neighbors_of(self, i):
        """Delaunay neighbours of sample i (all other samples when collinear)."""
        if self.collinear:
            return [j for j in range(self.pointset.n) if j != i]
        indptr, indices = self.delaunay.vertex_neighbor_vertices
        return list(indices[indptr[i] : indptr[i + 1]])

    def cell_polygon(self, i, pad=None):
        """Voronoi cell of sample i clipped to the inflated bounding box.

        `pad` defaults to twice the sample diameter, matching the largest
        radius the selection loop ever probes.
        """
        if pad is None:
            pad = 2.0 * max(self.pointset.diameter, 1.0e-9)
        pts = self.pointset.points
        poly = self._clip_box(pad)
        xi = pts[i]
        for j in self.neighbors_of(i):
            mid = 0.5 * (xi + pts[j])
            normal = pts[j] - xi
            poly = clip_polygon_halfplane(poly, mid, normal)
            if len(poly) == 0:
                break
        return poly


def build_index(points: PointSet) -> TriangulationIndex:
    """Build the Delaunay/Voronoi index for a sample."""
    return TriangulationIndex(points)
