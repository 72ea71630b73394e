"""Point clouds, exact nearest neighbors, and mesh quality measures.

A PointCloud is an immutable set of scattered sites in R^d, optionally
carrying one function value per site, with a k-d tree for exact k-NN
queries.  Distance ties are broken deterministically toward the lower point
index.  Fill distance is estimated against a finite probe set; separation
distance is exact.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial import cKDTree


class PointCloud:
    """Scattered sites (and optional per-site values) with a spatial index."""

    def __init__(self, points, values=None):
        pts = np.array(points, dtype=float, copy=True)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise ValueError(f"points must be a nonempty (N, d) array, got shape {pts.shape}")
        if not np.isfinite(pts).all():
            raise ValueError("points must have finite coordinates")
        pts.setflags(write=False)
        self.points = pts
        self.dim = pts.shape[1]
        if values is not None:
            values = np.array(values, dtype=float, copy=True)
            if values.shape != (pts.shape[0],):
                raise ValueError(
                    f"values must have shape ({pts.shape[0]},), got {values.shape}"
                )
            values.setflags(write=False)
        self.values = values
        self._tree = cKDTree(pts)

    def __len__(self):
        return self.points.shape[0]

    def knn(self, z, k):
        """The k nearest sites to z as [(index, distance), ...], distance ascending.

        Exact; a tie at the k-th distance is resolved toward the lower index.
        """
        z = np.asarray(z, dtype=float)
        if z.shape != (self.dim,):
            raise ValueError(f"query point must have shape ({self.dim},), got {z.shape}")
        if not np.isfinite(z).all():
            raise ValueError("query point must have finite coordinates")
        n = len(self)
        if not 1 <= k <= n:
            raise ValueError(f"k must be in [1, {n}], got {k}")
        # widen until the k-th distance is strictly cleared, so that every
        # candidate tied with it is in view before truncation
        kq = min(n, k + 1)
        while True:
            dist, idx = self._tree.query(z, k=kq)
            dist = np.atleast_1d(dist)
            idx = np.atleast_1d(idx)
            if kq == n or dist[-1] > dist[k - 1]:
                break
            kq = min(n, 2 * kq)
        order = np.lexsort((idx, dist))[:k]
        return [(int(idx[o]), float(dist[o])) for o in order]

    def nearest_site_distances(self, probe):
        """Distance from each probe point to its nearest site."""
        probe = np.atleast_2d(np.asarray(probe, dtype=float))
        if probe.shape[0] < 1 or probe.shape[1] != self.dim:
            raise ValueError(
                f"probe must be a nonempty (M, {self.dim}) array, got shape {probe.shape}"
            )
        if not np.isfinite(probe).all():
            raise ValueError("probe points must have finite coordinates")
        dist, _ = self._tree.query(probe, k=1)
        return np.atleast_1d(dist)


def separation_distance(cloud: PointCloud) -> float:
    """Half the minimum pairwise distance between distinct site indices.

    Exact (each site's nearest other site via the tree); 0.0 for duplicates.
    """
    if len(cloud) < 2:
        raise ValueError("separation distance needs at least 2 points")
    dist, _ = cloud._tree.query(cloud.points, k=2)
    return 0.5 * float(dist[:, 1].min())


def fill_distance(cloud: PointCloud, probe) -> float:
    """max over the probe set of the distance to the nearest site.

    A finite probe set stands in for the continuous domain, so this is a
    lower bound of the true fill distance that is monotone in the probe set.
    """
    return float(cloud.nearest_site_distances(probe).max())


def read_point_file(path, dim):
    """Parse a text point file: one point per line, `dim` coordinates plus an
    optional trailing value field, comma- or whitespace-separated, '#' comments.

    Returns (points, values) where values is None when no line carries one.
    Every data line must have the same field count (dim or dim + 1).
    """
    points = []
    values = []
    width = None
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.replace(",", " ").split()
            if width is None:
                width = len(fields)
                if width not in (dim, dim + 1):
                    raise ValueError(
                        f"{path}:{lineno}: expected {dim} or {dim + 1} fields, got {width}"
                    )
            elif len(fields) != width:
                raise ValueError(
                    f"{path}:{lineno}: inconsistent field count {len(fields)} (expected {width})"
                )
            try:
                nums = [float(f) for f in fields]
            except ValueError:
                raise ValueError(f"{path}:{lineno}: non-numeric field in {line!r}") from None
            points.append(nums[:dim])
            if width == dim + 1:
                values.append(nums[dim])
    if not points:
        raise ValueError(f"{path}: no data lines")
    pts = np.asarray(points, dtype=float)
    vals = np.asarray(values, dtype=float) if values else None
    return pts, vals
