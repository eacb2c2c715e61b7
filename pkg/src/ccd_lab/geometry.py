"""Planar geometry on complex numbers: convex hulls and smallest enclosing disks."""
from __future__ import annotations

import math

import numpy as np
from scipy.optimize import nnls

_REL = 1e-12


def _cross(o: complex, a: complex, b: complex) -> float:
    return (a.real - o.real) * (b.imag - o.imag) - (a.imag - o.imag) * (b.real - o.real)


def convex_hull(points) -> list[complex]:
    """Counter-clockwise hull vertices (Andrew's monotone chain), collinear points dropped."""
    pts = sorted(set(complex(p) for p in np.ravel(points)), key=lambda z: (z.real, z.imag))
    if len(pts) <= 2:
        return pts
    lower: list[complex] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[complex] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _segment_distance(z: complex, a: complex, b: complex) -> float:
    ab = b - a
    denom = abs(ab) ** 2
    if denom == 0.0:
        return abs(z - a)
    t = ((z - a) * ab.conjugate()).real / denom
    t = min(1.0, max(0.0, t))
    return abs(z - (a + t * ab))


def hull_distance(points, z: complex = 0.0) -> float:
    """Euclidean distance from ``z`` to the convex hull of ``points`` (0 if inside)."""
    hull = convex_hull(points)
    if not hull:
        raise ValueError("empty point set")
    if len(hull) == 1:
        return abs(z - hull[0])
    if len(hull) == 2:
        return _segment_distance(z, hull[0], hull[1])
    m = len(hull)
    if all(_cross(hull[i], hull[(i + 1) % m], z) >= 0 for i in range(m)):
        return 0.0
    return min(_segment_distance(z, hull[i], hull[(i + 1) % m]) for i in range(m))


def hull_contains_zero(points, tol: float = 1e-9) -> bool:
    """True if the origin lies in the convex hull of ``points`` or within ``tol`` of it."""
    pts = np.ravel(np.asarray(points, dtype=complex))
    if pts.size == 0:
        raise ValueError("empty point set")
    return hull_distance(pts, 0.0) <= tol


def unit_circle_hull_contains_zero(angles: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Batched hull test for points exp(i*angle) on the unit circle.

    ``angles`` has shape (batch, m).  The origin is in the hull exactly when no
    angular gap between neighbouring points exceeds pi; a gap of pi + x puts
    the hull at distance sin(x/2) from the origin.
    """
    a = np.sort(np.mod(angles, 2 * np.pi), axis=-1)
    gaps = np.diff(a, axis=-1)
    wrap = 2 * np.pi - (a[..., -1] - a[..., 0])
    biggest = np.maximum(gaps.max(axis=-1, initial=0.0), wrap)
    return biggest <= np.pi + 2 * math.asin(min(tol, 1.0))


def _circle_two(a: complex, b: complex):
    c = (a + b) / 2
    return c, max(abs(a - c), abs(b - c))


def _circle_three(a: complex, b: complex, c: complex):
    ax, ay, bx, by, cx, cy = a.real, a.imag, b.real, b.imag, c.real, c.imag
    ox = (min(ax, bx, cx) + max(ax, bx, cx)) / 2
    oy = (min(ay, by, cy) + max(ay, by, cy)) / 2
    ax, ay, bx, by, cx, cy = ax - ox, ay - oy, bx - ox, by - oy, cx - ox, cy - oy
    d = 2 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    if d == 0.0:
        return None
    x = ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay) + (cx * cx + cy * cy) * (ay - by)) / d
    y = ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx) + (cx * cx + cy * cy) * (bx - ax)) / d
    center = complex(ox + x, oy + y)
    return center, max(abs(center - a), abs(center - b), abs(center - c))


def _inside(circle, p: complex) -> bool:
    c, r = circle
    return abs(p - c) <= r * (1 + _REL) + _REL


def smallest_enclosing_circle(points, seed: int = 0):
    """Minimal enclosing disk (center, radius) by randomized incremental construction.

    Expected linear time; the shuffle is seeded so results are reproducible.
    """
    pts = [complex(p) for p in np.ravel(np.asarray(points, dtype=complex))]
    if not pts:
        raise ValueError("empty point set")
    rng = np.random.default_rng(seed)
    pts = [pts[i] for i in rng.permutation(len(pts))]
    circle = (pts[0], 0.0)
    for i, p in enumerate(pts):
        if _inside(circle, p):
            continue
        circle = (p, 0.0)
        for j in range(i):
            q = pts[j]
            if _inside(circle, q):
                continue
            circle = _circle_two(p, q)
            for k in range(j):
                s = pts[k]
                if _inside(circle, s):
                    continue
                three = _circle_three(p, q, s)
                if three is None:
                    # collinear: the farthest pair spans the disk
                    pairs = [_circle_two(p, q), _circle_two(p, s), _circle_two(q, s)]
                    circle = max(pairs, key=lambda cr: cr[1])
                else:
                    circle = three
    return circle


def chebyshev_weights(points, center: complex, radius: float, tol: float = 1e-9) -> np.ndarray:
    """Convex weights t (t >= 0, sum 1) on boundary points with sum t_j p_j = center.

    Only points within ``tol`` of the circle receive weight.
    """
    pts = np.ravel(np.asarray(points, dtype=complex))
    weights = np.zeros(pts.size)
    on_rim = np.flatnonzero(np.abs(pts - center) >= radius - tol * max(1.0, radius))
    if on_rim.size == 0:
        on_rim = np.arange(pts.size)
    rim = pts[on_rim]
    # rows: real part, imaginary part, and the sum-to-one constraint (weighted up)
    lhs = np.vstack([rim.real, rim.imag, 10.0 * np.ones(rim.size)])
    rhs = np.array([center.real, center.imag, 10.0])
    t, _ = nnls(lhs, rhs)
    total = t.sum()
    if total > 0:
        t /= total
    weights[on_rim] = t
    return weights
