"""r-convex hulls and convex hulls as arc/segment-bounded regions.

The finite-radius hull is computed from the Delaunay triangulation: a
triangle is kept when its circumradius is below r (no empty disc of radius r
can be centred at its dual Voronoi vertex), and every boundary edge of the
kept complex carries a circular arc of radius r.  The arc centre is the point
of the edge's dual Voronoi edge at distance exactly r from the two samples:
the centre of the empty disc that nestles into the gap.  The region is the
kept complex minus the open "bite" discs around those centres, plus every
sample point (isolated samples are zero-area components).
"""

from __future__ import annotations

import math

import numpy as np
from scipy.spatial import ConvexHull, QhullError, cKDTree

from ..errors import EmptyRegion
from .pointset import PointSet
from .triangulation import TriangulationIndex, build_index

_TWO_PI = 2.0 * math.pi


def _perp_left(v):
    """Rotate v by +90 degrees (counterclockwise)."""
    return np.array([-v[1], v[0]])


class HullRegion:
    """An r-convex hull (finite r) or the convex hull (r = inf) of a sample.

    Boundary loops are cyclic sequences of arcs (finite r) or straight
    segments (convex hull).  Immutable after construction.
    """

    def __init__(self, pointset, index, r):
        self.pointset = pointset
        self.index = index
        self.r = float(r)
        self.kind = "alpha"  # overwritten by the convex-hull constructor
        self.filled = None
        self.arc_centers = np.empty((0, 2))
        self.arc_theta0 = np.empty(0)
        self.arc_sweep = np.empty(0)
        self.arc_va = np.empty(0, dtype=int)
        self.arc_vb = np.empty(0, dtype=int)
        self.loops = []
        self.isolated = np.empty(0, dtype=int)
        self.hull_vertices = None  # convex kind only
        self._center_tree = None
        self._anchor_tree = None
        self._anchor_pts = None
        self._labels = None
        self._area = None

    # -- construction ---------------------------------------------------------

    @classmethod
    def _build_alpha(cls, pointset, index, r):
        reg = cls(pointset, index, r)
        if index.collinear:
            # every non-sample point is covered by an empty disc squeezing
            # through the line, so C_r degenerates to the sample itself
            reg.isolated = np.arange(pointset.n)
            return reg
        filled = index.circumradii < r
        reg.filled = filled
        if not filled.any():
            reg.isolated = np.arange(pointset.n)
            return reg

        tris = index.tris
        pts = pointset.points
        boundary = []  # (a, b, filled_tri) directed with the filled triangle on the left
        for key, adj in index.edge_map.items():
            if len(adj) == 2:
                (t0, _), (t1, _) = adj
                if filled[t0] == filled[t1]:
                    continue
                t = t0 if filled[t0] else t1
                other = t1 if filled[t0] else t0
            else:
                (t, _) = adj[0]
                if not filled[t]:
                    continue
                other = -1
            a, b = cls._directed_in_triangle(tris[t], key)
            boundary.append((a, b, t, other))

        arcs = []
        directed_lookup = {}
        for a, b, t, other in boundary:
            center = cls._arc_center(index, pts, a, b, t, other, r)
            theta0, sweep = cls._arc_span(pts, a, b, center, r)
            directed_lookup[(a, b)] = len(arcs)
            arcs.append((center, theta0, sweep, a, b, t))

        if arcs:
            reg.arc_centers = np.array([a[0] for a in arcs])
            reg.arc_theta0 = np.array([a[1] for a in arcs])
            reg.arc_sweep = np.array([a[2] for a in arcs])
            reg.arc_va = np.array([a[3] for a in arcs], dtype=int)
            reg.arc_vb = np.array([a[4] for a in arcs], dtype=int)
            reg.loops = cls._assemble_loops(index, filled, directed_lookup, [a[5] for a in arcs])

        in_complex = np.zeros(pointset.n, dtype=bool)
        in_complex[tris[filled].ravel()] = True
        reg.isolated = np.nonzero(~in_complex)[0]
        return reg

    @staticmethod
    def _directed_in_triangle(tri, key):
        """Orientation of undirected edge `key` inside the CCW cycle of `tri`."""
        i, j, k = tri
        for a, b in ((i, j), (j, k), (k, i)):
            if (a, b) == key or (b, a) == key:
                return a, b
        raise AssertionError("edge not in triangle")

    @staticmethod
    def _arc_center(index, pts, a, b, t, other, r):
        """Centre of the empty radius-r disc anchored at samples a, b.

        Lies on the dual Voronoi edge of (a, b), at distance exactly r from
        both samples; found as the level-r crossing between the filled
        triangle's circumcentre (distance < r) and the far side (>= r).
        """
        xa = pts[a]
        v0 = index.circumcenters[t]
        w = v0 - xa
        if other >= 0:
            e = index.circumcenters[other] - v0
            aa = float(e @ e)
            bb = float(w @ e)
            cc = float(w @ w) - r * r
            if aa <= 0:
                return v0
            disc = max(bb * bb - aa * cc, 0.0)
            tpar = (-bb + math.sqrt(disc)) / aa
            tpar = min(max(tpar, 0.0), 1.0)
            return v0 + tpar * e
        # hull edge: dual edge is a ray towards the outside
        mid = 0.5 * (pts[a] + pts[b])
        k = [v for v in index.tris[t] if v != a and v != b][0]
        d = _perp_left(pts[b] - pts[a])
        if d @ (mid - pts[k]) < 0:
            d = -d
        d = d / np.hypot(d[0], d[1])
        bb = float(w @ d)
        cc = float(w @ w) - r * r
        disc = max(bb * bb - cc, 0.0)
        tpar = -bb + math.sqrt(disc)
        return v0 + max(tpar, 0.0) * d

    @staticmethod
    def _arc_span(pts, a, b, center, r):
        """Start angle and signed sweep of the boundary arc from sample a to b.

        Of the two arcs of the circle through a and b, the boundary one bulges
        towards the filled (left) side of the directed chord a->b.
        """
        va = pts[a] - center
        vb = pts[b] - center
        theta_a = math.atan2(va[1], va[0])
        theta_b = math.atan2(vb[1], vb[0])
        mid = 0.5 * (pts[a] + pts[b]) - center
        left = _perp_left(pts[b] - pts[a])
        if abs(mid[0]) + abs(mid[1]) < 1e-12 * r or mid @ left < 0:
            mid = left
        theta_m = math.atan2(mid[1], mid[0])
        d_ccw = (theta_b - theta_a) % _TWO_PI
        a_m = (theta_m - theta_a) % _TWO_PI
        if a_m <= d_ccw:
            return theta_a, d_ccw
        return theta_a, d_ccw - _TWO_PI

    @staticmethod
    def _assemble_loops(index, filled, directed_lookup, arc_tris):
        """Chain directed boundary arcs into closed loops by pivoting at vertices."""
        edge_map = index.edge_map
        tris = index.tris

        def next_halfedge(a, b, t):
            prev, cur = a, t
            while True:
                tri = tris[cur]
                k = [v for v in tri if v != b and v != prev][0]
                key = (b, k) if b < k else (k, b)
                other = [tt for (tt, _) in edge_map[key] if tt != cur]
                if not other or not filled[other[0]]:
                    return b, k
                prev, cur = k, other[0]

        loops = []
        used = set()
        for start_edge, start_idx in directed_lookup.items():
            if start_idx in used:
                continue
            loop = []
            a, b = start_edge
            while True:
                idx = directed_lookup[(a, b)]
                used.add(idx)
                loop.append(idx)
                a, b = next_halfedge(a, b, arc_tris[idx])
                if (a, b) == start_edge:
                    break
            loops.append(np.asarray(loop, dtype=int))
        return loops

    @classmethod
    def _build_convex(cls, pointset, index):
        reg = cls(pointset, index, math.inf)
        reg.kind = "convex"
        pts = pointset.points
        if pointset.n >= 3 and not index.collinear:
            hull = ConvexHull(pts)
            reg.hull_vertices = np.asarray(hull.vertices, dtype=int)  # CCW
            reg.filled = np.ones(index.tris.shape[0], dtype=bool)
            reg._area = float(hull.volume)
        else:
            # segment or single point
            origin, direction = index._line
            tpos = (pts - origin) @ direction
            lo, hi = int(np.argmin(tpos)), int(np.argmax(tpos))
            reg.hull_vertices = np.array([lo] if lo == hi else [lo, hi], dtype=int)
            reg._area = 0.0
        return reg

    # -- derived queries --------------------------------------------------------

    @property
    def is_degenerate(self):
        """True when the region carries no 2-dimensional material."""
        if self.kind == "convex":
            return len(self.hull_vertices) < 3
        return self.filled is None or not self.filled.any()

    @property
    def component_count(self):
        return int(self._component_labels().max()) + 1

    def _component_labels(self):
        """Per-sample component ids; material sharing a vertex is connected."""
        if self._labels is None:
            n = self.pointset.n
            if self.kind == "convex":
                self._labels = np.zeros(n, dtype=int)
                return self._labels
            parent = np.arange(n)

            def find(i):
                while parent[i] != i:
                    parent[i] = parent[parent[i]]
                    i = parent[i]
                return i

            if self.filled is not None and self.filled.any():
                for i, j, k in self.index.tris[self.filled]:
                    ri, rj, rk = find(i), find(j), find(k)
                    parent[rj] = ri
                    parent[rk] = ri
            roots = np.array([find(i) for i in range(n)])
            _, labels = np.unique(roots, return_inverse=True)
            self._labels = labels
        return self._labels

    @property
    def area(self):
        """Exact area: arc line integrals over the boundary loops."""
        if self._area is None:
            total = 0.0
            r = self.r
            for loop in self.loops:
                c = self.arc_centers[loop]
                t0 = self.arc_theta0[loop]
                sw = self.arc_sweep[loop]
                t1 = t0 + sw
                seg = r * r * sw + r * (
                    c[:, 0] * (np.sin(t1) - np.sin(t0)) - c[:, 1] * (np.cos(t1) - np.cos(t0))
                )
                total += 0.5 * float(seg.sum())
            self._area = total
        return self._area

    @property
    def boundary_length(self):
        if self.kind == "convex":
            polys = self.boundary_polylines()
            total = 0.0
            for poly, _ in polys:
                if len(poly) > 1:
                    total += float(np.hypot(*(np.diff(poly, axis=0).T)).sum())
            return total
        return float(np.abs(self.arc_sweep).sum() * self.r)

    @property
    def bbox(self):
        # boundary arcs bulge towards the filled side, so the region stays
        # inside the sample bounding box
        return self.pointset.bbox

    def _trees(self):
        if self._center_tree is None and len(self.arc_centers):
            self._center_tree = cKDTree(self.arc_centers)
        if self._anchor_tree is None:
            pts = self.pointset.points
            anchors = []
            if len(self.arc_centers):
                anchors.append(pts[self.arc_va])
                anchors.append(pts[self.arc_vb])
            if len(self.isolated):
                anchors.append(pts[self.isolated])
            if anchors:
                self._anchor_pts = np.vstack(anchors)
                self._anchor_tree = cKDTree(self._anchor_pts)
        return self._center_tree, self._anchor_tree

    def contains(self, xs):
        """Boolean membership for an (m, 2) array (closed-region semantics)."""
        xs = np.atleast_2d(np.asarray(xs, dtype=float))
        if self.kind == "convex":
            return self._convex_contains(xs)
        out = np.zeros(len(xs), dtype=bool)
        if self.filled is not None and self.filled.any():
            simplex = self.index.find_simplex(xs)
            ok = simplex >= 0
            ok[ok] = self.filled[simplex[ok]]
            if ok.any() and len(self.arc_centers):
                tree, _ = self._trees()
                eps = 1e-9 * self.r
                d, _ = tree.query(xs[ok], distance_upper_bound=self.r - eps)
                ok[np.nonzero(ok)[0][np.isfinite(d)]] = False
            out = ok
        # sample points always belong to the hull
        miss = ~out
        if miss.any():
            d = self.index.nearest_distances(xs[miss])
            scale = 1.0 + self.pointset.diameter
            out[np.nonzero(miss)[0][d <= 1e-9 * scale]] = True
        return out

    def _convex_contains(self, xs):
        pts = self.pointset.points
        v = self.hull_vertices
        scale = 1.0 + self.pointset.diameter
        eps = 1e-9 * scale
        if len(v) >= 3:
            a = pts[v]
            b = pts[np.roll(v, -1)]
            edge = b - a
            rel = xs[:, None, :] - a[None, :, :]
            cross = edge[None, :, 0] * rel[:, :, 1] - edge[None, :, 1] * rel[:, :, 0]
            return (cross >= -eps).all(axis=1)
        if len(v) == 2:
            return np.abs(self._segment_distance(xs, pts[v[0]], pts[v[1]])) <= eps
        return np.hypot(*(xs - pts[v[0]]).T) <= eps

    @staticmethod
    def _segment_distance(xs, p, q):
        d = q - p
        denom = float(d @ d)
        if denom == 0:
            return np.hypot(*(xs - p).T)
        t = np.clip(((xs - p) @ d) / denom, 0.0, 1.0)
        proj = p + t[:, None] * d
        return np.hypot(*(xs - proj).T)

    def _arc_distance(self, xs, arc_ids):
        """Distance from each x to its own shortlisted arc (vectorised pairwise)."""
        c = self.arc_centers[arc_ids]
        rel = xs - c
        d = np.hypot(rel[:, 0], rel[:, 1])
        ang = np.arctan2(rel[:, 1], rel[:, 0])
        t0 = self.arc_theta0[arc_ids]
        sw = self.arc_sweep[arc_ids]
        off = (ang - t0) % _TWO_PI
        on_arc = np.where(sw >= 0, off <= sw, off >= _TWO_PI + sw)
        radial = np.abs(d - self.r)
        pts = self.pointset.points
        da = np.hypot(*(xs - pts[self.arc_va[arc_ids]]).T)
        db = np.hypot(*(xs - pts[self.arc_vb[arc_ids]]).T)
        return np.where(on_arc, radial, np.minimum(da, db))

    def boundary_distance_abs(self, xs):
        """Unsigned distance to the region boundary (arcs, segments, isolated points)."""
        xs = np.atleast_2d(np.asarray(xs, dtype=float))
        if self.kind == "convex":
            pts = self.pointset.points
            v = self.hull_vertices
            if len(v) == 1:
                return np.hypot(*(xs - pts[v[0]]).T)
            best = np.full(len(xs), np.inf)
            ring = np.append(v, v[0]) if len(v) >= 3 else v
            for s in range(len(ring) - 1):
                best = np.minimum(best, self._segment_distance(xs, pts[ring[s]], pts[ring[s + 1]]))
            return best

        if self.is_degenerate and len(self.isolated) == self.pointset.n:
            return self.index.nearest_distances(xs)

        tree, anchor_tree = self._trees()
        if anchor_tree is None:
            raise EmptyRegion("region has no boundary material")
        d_up, _ = anchor_tree.query(xs)
        best = np.asarray(d_up, dtype=float).copy()
        if tree is not None:
            groups = tree.query_ball_point(xs, self.r + best + 1e-12)
            flat_x, flat_a = [], []
            for row, ids in enumerate(groups):
                if ids:
                    flat_x.extend([row] * len(ids))
                    flat_a.extend(ids)
            if flat_a:
                flat_x = np.asarray(flat_x)
                dist = self._arc_distance(xs[flat_x], np.asarray(flat_a))
                np.minimum.at(best, flat_x, dist)
        return best

    def distance_to_boundary(self, x):
        """Signed distance to the boundary: positive inside, negative outside."""
        xs = np.atleast_2d(np.asarray(x, dtype=float))
        if self.kind == "alpha" and self.is_degenerate and self.pointset.n == 0:
            raise EmptyRegion("empty region")
        d = self.boundary_distance_abs(xs)
        inside = self.contains(xs)
        signed = np.where(inside, d, -d)
        if np.isscalar(x) or np.asarray(x).ndim == 1:
            return float(signed[0])
        return signed

    def boundary_polylines(self, chord_tol=None):
        """Flatten boundary loops to polylines; returns [(closed polyline, component id)].

        `chord_tol` bounds the sagitta of each flattened arc (default r/256).
        Isolated sample points are returned as single-point polylines.
        """
        labels = self._component_labels()
        pts = self.pointset.points
        out = []
        if self.kind == "convex":
            v = self.hull_vertices
            ring = pts[np.append(v, v[0])] if len(v) >= 3 else pts[v]
            out.append((ring, 0))
            return out
        if chord_tol is None:
            chord_tol = self.r / 256.0
        dtheta = 2.0 * math.acos(max(0.0, min(1.0, 1.0 - chord_tol / self.r)))
        dtheta = max(dtheta, 1e-3)
        for loop in self.loops:
            parts = []
            for k, idx in enumerate(loop):
                c = self.arc_centers[idx]
                t0 = self.arc_theta0[idx]
                sw = self.arc_sweep[idx]
                steps = max(1, int(math.ceil(abs(sw) / dtheta)))
                ang = t0 + sw * np.arange(0, steps + 1) / steps
                arcpts = c + self.r * np.column_stack([np.cos(ang), np.sin(ang)])
                # snap endpoints to the exact sample coordinates
                arcpts[0] = pts[self.arc_va[idx]]
                arcpts[-1] = pts[self.arc_vb[idx]]
                parts.append(arcpts if k == 0 else arcpts[1:])
            ring = np.vstack(parts)
            out.append((ring, int(labels[self.arc_va[loop[0]]])))
        for i in self.isolated:
            out.append((pts[[i]], int(labels[i])))
        return out

    def loop_signed_areas(self):
        """Signed area of each loop (outer loops positive, holes negative)."""
        areas = []
        r = self.r
        for loop in self.loops:
            c = self.arc_centers[loop]
            t0 = self.arc_theta0[loop]
            sw = self.arc_sweep[loop]
            t1 = t0 + sw
            seg = r * r * sw + r * (
                c[:, 0] * (np.sin(t1) - np.sin(t0)) - c[:, 1] * (np.cos(t1) - np.cos(t0))
            )
            areas.append(0.5 * float(seg.sum()))
        return areas


def r_convex_hull(points: PointSet, r: float, index: TriangulationIndex | None = None) -> HullRegion:
    """Smallest r-convex set containing the sample.

    Equals the intersection of complements of all open radius-r discs that
    miss the sample, computed through the Delaunay alpha-complex.
    """
    if not (r > 0):
        raise ValueError("r must be positive")
    if not math.isfinite(r):
        return convex_hull(points, index)
    if index is None:
        index = build_index(points)
    return HullRegion._build_alpha(points, index, r)


def convex_hull(points: PointSet, index: TriangulationIndex | None = None) -> HullRegion:
    """Convex hull as a HullRegion (radius +inf); degenerate hulls have area 0."""
    if index is None:
        index = build_index(points)
    return HullRegion._build_convex(points, index)


def connected_components(region: HullRegion):
    """Component count and per-sample component labels of the closed region."""
    labels = region._component_labels()
    return int(labels.max()) + 1, labels


def area(region: HullRegion) -> float:
    """Exact region area (shoelace over triangles with circular-segment corrections)."""
    return region.area


def distance_to_boundary(x, region: HullRegion):
    """Signed distance from x to the region boundary (positive inside)."""
    return region.distance_to_boundary(x)
