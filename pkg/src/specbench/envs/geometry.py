"""Planar and 3D geometry used for sensing and labeling."""

from __future__ import annotations

import numpy as np


def ray_circle_distances(
    origin: np.ndarray,
    angles: np.ndarray,
    centers: np.ndarray,
    radius: float,
) -> np.ndarray:
    """Distance from ``origin`` along each ray to the nearest disc.

    ``angles``: (B,) ray directions (world frame); ``centers``: (Z, 2).
    Returns (B,) distances to the first intersection point across all
    discs (0 when the origin is inside one), ``inf`` where a ray misses.
    """
    if len(centers) == 0:
        return np.full(len(angles), np.inf)
    d = np.stack([np.cos(angles), np.sin(angles)], axis=1)  # (B, 2)
    u = centers - origin  # (Z, 2)
    proj = d @ u.T  # (B, Z)
    uu = np.sum(u * u, axis=1)
    disc = proj**2 - (uu[None, :] - radius**2)
    valid = disc >= 0.0
    sq = np.sqrt(np.where(valid, disc, 0.0))
    t_near = proj - sq
    t_far = proj + sq
    hit = valid & (t_far >= 0.0)
    dist = np.where(hit, np.maximum(t_near, 0.0), np.inf)
    return dist.min(axis=1)


def lidar_readings(
    pos: np.ndarray,
    heading: float,
    centers: np.ndarray,
    radius: float,
    n_bins: int,
    max_range: float,
) -> np.ndarray:
    """Egocentric lidar over one entity class: bin k covers the sector
    ``[2 pi k / B, 2 pi (k+1) / B)`` relative to the heading and reads
    ``1 - min(d, range) / range`` along the sector's center ray."""
    bin_angles = heading + 2.0 * np.pi * (np.arange(n_bins) + 0.5) / n_bins
    d = ray_circle_distances(pos, bin_angles, centers, radius)
    return 1.0 - np.minimum(d, max_range) / max_range


def range_bearing(point: np.ndarray, centers: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-center distance and unit direction from ``point`` (zero vector
    within 1e-9 of a center)."""
    delta = centers - point[None, :]
    dist = np.linalg.norm(delta, axis=1)
    safe = np.where(dist < 1e-9, 1.0, dist)
    dirs = np.where(dist[:, None] < 1e-9, 0.0, delta / safe[:, None])
    dist = np.where(dist < 1e-9, 0.0, dist)
    return dist, dirs


def segment_point_distance(a: np.ndarray, b: np.ndarray, p: np.ndarray) -> float:
    """Distance from point p to segment ab (closest-point-on-segment)."""
    ab = b - a
    denom = float(np.dot(ab, ab))
    if denom < 1e-18:
        return float(np.linalg.norm(p - a))
    t = float(np.dot(p - a, ab)) / denom
    t = min(1.0, max(0.0, t))
    return float(np.linalg.norm(p - (a + t * ab)))


def reflect_coordinate(x: float, v: float, lo: float, hi: float) -> tuple[float, float]:
    """Specular reflection of one coordinate into [lo, hi]."""
    span = hi - lo
    for _ in range(64):
        if x > hi:
            x = 2.0 * hi - x
            v = -v
        elif x < lo:
            x = 2.0 * lo - x
            v = -v
        else:
            return x, v
        if span <= 0:
            return min(max(x, lo), hi), v
    return min(max(x, lo), hi), v


def wrap_index(i: int, n: int) -> int:
    return i % n
