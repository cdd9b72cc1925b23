"""Planar primitives, predicates and rigid motions shared by every problem module.

Two arithmetic regimes are supported and selected by the scalar type of the
inputs:

* exact: ``int`` / ``fractions.Fraction`` coordinates, no rounding at all;
* adaptive: ``mpmath.mpf`` coordinates at a working precision ``p`` bits with a
  snapping epsilon ``2**(-p/2)``.

Plain ``float`` inputs are treated as a double context with default tolerance
``DEFAULT_EPS``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple, Sequence

import mpmath
import numpy as np

DEFAULT_EPS = 1e-9
DEFAULT_PRECISION = 128


class Orientation(IntEnum):
    CW = -1
    COLLINEAR = 0
    CCW = 1


CCW = Orientation.CCW
CW = Orientation.CW
COLLINEAR = Orientation.COLLINEAR


@dataclass(frozen=True)
class Context:
    """Adaptive-precision settings (working precision and snapping epsilon)."""

    precision_bits: int = DEFAULT_PRECISION

    def __post_init__(self):
        if self.precision_bits < 64:
            raise ValueError("precision must be at least 64 bits")

    @property
    def eps_snap(self) -> mpmath.mpf:
        with mpmath.workprec(self.precision_bits):
            return mpmath.ldexp(mpmath.mpf(1), -self.precision_bits // 2)

    def scalar(self, v) -> mpmath.mpf:
        with mpmath.workprec(self.precision_bits):
            if isinstance(v, Fraction):
                return mpmath.mpf(v.numerator) / v.denominator
            return mpmath.mpf(v)

    def point(self, p: "Point") -> "Point":
        return Point(self.scalar(p.x), self.scalar(p.y))


def is_exact(*values) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in values)


def _is_mp(*values) -> bool:
    return any(isinstance(v, mpmath.mpf) for v in values)


def sqrt(v):
    if isinstance(v, mpmath.mpf):
        return mpmath.sqrt(v)
    return math.sqrt(float(v))


def to_fraction(v) -> Fraction:
    """Exact rational value of an int, Fraction, float or decimal string."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, float)):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v.strip())
    if isinstance(v, mpmath.mpf):
        man, exp = v.man_exp
        return Fraction(int(man)) * Fraction(2) ** int(exp)
    return Fraction(str(v))


class Point(NamedTuple):
    x: object
    y: object

    def __sub__(self, other):  # type: ignore[override]
        return Point(self.x - other.x, self.y - other.y)

    def __add__(self, other):  # type: ignore[override]
        return Point(self.x + other.x, self.y + other.y)

    def scale(self, s) -> "Point":
        return Point(self.x * s, self.y * s)

    def as_float(self) -> tuple[float, float]:
        return float(self.x), float(self.y)


def cross(u: Point, v: Point):
    return u.x * v.y - u.y * v.x


def dist(p: Point, q: Point):
    return sqrt((p.x - q.x) ** 2 + (p.y - q.y) ** 2)


def _sign(v) -> Orientation:
    return CCW if v > 0 else (CW if v < 0 else COLLINEAR)


def orientation(p: Point, q: Point, r: Point, eps=None, ctx: Context | None = None) -> Orientation:
    """Sign of (q - p) x (r - p).

    Exact for rational coordinates. For mpf coordinates the determinant is
    recomputed at doubled precision when it falls below the snapping epsilon
    and reported COLLINEAR only if it stays below it. Float coordinates snap
    at ``eps`` (default ``DEFAULT_EPS``).
    """
    coords = (p.x, p.y, q.x, q.y, r.x, r.y)
    if is_exact(*coords):
        return _sign((q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x))
    if _is_mp(*coords):
        ctx = ctx or Context()
        snap = ctx.eps_snap if eps is None else eps
        with mpmath.workprec(ctx.precision_bits):
            det = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)
        if abs(det) >= snap:
            return _sign(det)
        with mpmath.workprec(2 * ctx.precision_bits):
            det = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)
        return COLLINEAR if abs(det) < snap else _sign(det)
    eps = DEFAULT_EPS if eps is None else eps
    det = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)
    return COLLINEAR if abs(det) < eps else _sign(det)


@dataclass(frozen=True)
class Line:
    """Locus a*x + b*y + c = 0 in canonical form.

    Rational lines are scaled to coprime integers; real lines to a unit normal.
    In both cases the leading nonzero of (a, b) is positive.
    """

    a: object
    b: object
    c: object

    def __post_init__(self):
        a, b, c = self.a, self.b, self.c
        if a == 0 and b == 0:
            raise ValueError("degenerate line: a and b both zero")
        if is_exact(a, b, c):
            fa, fb, fc = Fraction(a), Fraction(b), Fraction(c)
            den = math.lcm(fa.denominator, fb.denominator, fc.denominator)
            ia, ib, ic = (int(v * den) for v in (fa, fb, fc))
            g = math.gcd(math.gcd(ia, ib), ic)
            ia, ib, ic = ia // g, ib // g, ic // g
            if ia < 0 or (ia == 0 and ib < 0):
                ia, ib, ic = -ia, -ib, -ic
            vals = (Fraction(ia), Fraction(ib), Fraction(ic))
        else:
            norm = sqrt(a * a + b * b)
            a, b, c = a / norm, b / norm, c / norm
            if a < 0 or (a == 0 and b < 0):
                a, b, c = -a, -b, -c
            vals = (a, b, c)
        object.__setattr__(self, "a", vals[0])
        object.__setattr__(self, "b", vals[1])
        object.__setattr__(self, "c", vals[2])

    @classmethod
    def through(cls, p: Point, q: Point) -> "Line":
        return cls(p.y - q.y, q.x - p.x, p.x * q.y - q.x * p.y)

    @property
    def direction(self) -> Point:
        return Point(self.b, -self.a)

    def value(self, p: Point):
        return self.a * p.x + self.b * p.y + self.c

    def as_float(self) -> tuple[float, float, float]:
        return float(self.a), float(self.b), float(self.c)


def intersect(l1: Line, l2: Line, eps=None, ctx: Context | None = None) -> Point | None:
    """Unique intersection of two lines, or None when parallel."""
    det = l1.a * l2.b - l2.a * l1.b
    coeffs = (l1.a, l1.b, l1.c, l2.a, l2.b, l2.c)
    if is_exact(*coeffs):
        if det == 0:
            return None
    elif _is_mp(*coeffs):
        ctx = ctx or Context()
        if abs(det) < (ctx.eps_snap if eps is None else eps):
            return None
        with mpmath.workprec(ctx.precision_bits):
            det = l1.a * l2.b - l2.a * l1.b
            return Point((l1.b * l2.c - l2.b * l1.c) / det, (l1.c * l2.a - l2.c * l1.a) / det)
    elif abs(det) < (DEFAULT_EPS if eps is None else eps):
        return None
    return Point((l1.b * l2.c - l2.b * l1.c) / det, (l1.c * l2.a - l2.c * l1.a) / det)


@dataclass(frozen=True)
class Polyline:
    vertices: tuple

    def __post_init__(self):
        verts = tuple(Point(*v) for v in self.vertices)
        if len(verts) < 2:
            raise ValueError("a polyline needs at least 2 vertices")
        for u, v in zip(verts, verts[1:]):
            if u == v:
                raise ValueError(f"consecutive vertices coincide at {u}")
        object.__setattr__(self, "vertices", verts)

    @cached_property
    def length(self):
        return sum(dist(u, v) for u, v in zip(self.vertices, self.vertices[1:]))

    def array(self) -> np.ndarray:
        return np.array([p.as_float() for p in self.vertices], dtype=float)


@dataclass(frozen=True)
class Polygon:
    """Closed polygon; the closing edge from the last vertex to the first is implicit."""

    vertices: tuple

    def __post_init__(self):
        verts = tuple(Point(*v) for v in self.vertices)
        if len(verts) < 3:
            raise ValueError("a polygon needs at least 3 vertices")
        object.__setattr__(self, "vertices", verts)
        if self.signed_area == 0:
            raise ValueError("polygon has zero signed area")

    @cached_property
    def signed_area(self):
        v = self.vertices
        s = 0
        for i in range(len(v)):
            p, q = v[i], v[(i + 1) % len(v)]
            s += p.x * q.y - q.x * p.y
        return s / 2

    @cached_property
    def is_simple(self) -> bool:
        return polygon_is_simple(self)

    def array(self) -> np.ndarray:
        return np.array([p.as_float() for p in self.vertices], dtype=float)

    def edges(self):
        v = self.vertices
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]

    def ccw(self) -> "Polygon":
        return self if self.signed_area > 0 else Polygon(self.vertices[::-1])


@dataclass(frozen=True)
class DegenerateHull:
    """Hull of a collinear point set: kind is 'point' or 'segment'."""

    vertices: tuple
    kind: str

    @property
    def area(self):
        return 0


def _segments_cross_exact(p1, p2, q1, q2) -> bool:
    d1 = orientation(q1, q2, p1)
    d2 = orientation(q1, q2, p2)
    d3 = orientation(p1, p2, q1)
    d4 = orientation(p1, p2, q2)
    if d1 * d2 < 0 and d3 * d4 < 0:
        return True

    def on_seg(a, b, c):
        return min(a.x, b.x) <= c.x <= max(a.x, b.x) and min(a.y, b.y) <= c.y <= max(a.y, b.y)

    return ((d1 == 0 and on_seg(q1, q2, p1)) or (d2 == 0 and on_seg(q1, q2, p2))
            or (d3 == 0 and on_seg(p1, p2, q1)) or (d4 == 0 and on_seg(p1, p2, q2)))


def segments_intersect(p1: Point, p2: Point, q1: Point, q2: Point) -> bool:
    """Closed-segment intersection test (touching counts)."""
    return _segments_cross_exact(p1, p2, q1, q2)


def polygon_is_simple(poly: Polygon, eps: float = 1e-12) -> bool:
    """Segment-pair intersection scan; exact for rational vertices."""
    v = poly.vertices
    n = len(v)
    if len(set(v)) != n:
        return False
    if is_exact(*(c for p in v for c in p)) and n <= 400:
        for i in range(n):
            a1, a2 = v[i], v[(i + 1) % n]
            # adjacent edges must not fold back onto each other
            nxt = v[(i + 2) % n]
            if orientation(a1, a2, nxt) == COLLINEAR and (nxt.x - a2.x) * (a2.x - a1.x) + (nxt.y - a2.y) * (a2.y - a1.y) < 0:
                return False
            for j in range(i + 2, n):
                if i == 0 and j == n - 1:
                    continue
                if _segments_cross_exact(a1, a2, v[j], v[(j + 1) % n]):
                    return False
        return True
    return _simple_numeric(poly.array(), eps)


def _simple_numeric(pts: np.ndarray, eps: float) -> bool:
    n = len(pts)
    a = pts
    b = np.roll(pts, -1, axis=0)
    scale = max(1.0, float(np.abs(pts).max()))
    tol = eps * scale * scale
    xmin = np.minimum(a[:, 0], b[:, 0])
    xmax = np.maximum(a[:, 0], b[:, 0])
    order = np.argsort(xmin, kind="stable")
    sorted_xmin = xmin[order]
    for i in range(n):
        hi = np.searchsorted(sorted_xmin, xmax[i] + tol, side="right")
        cand = order[:hi]
        cand = cand[(xmax[cand] >= xmin[i] - tol) & (cand > i)]
        cand = cand[(cand != (i + 1) % n) & ~((i == 0) & (cand == n - 1))]
        if cand.size == 0:
            continue
        p1, p2 = a[i], b[i]
        q1, q2 = a[cand], b[cand]
        d1 = _orient_np(q1, q2, p1)
        d2 = _orient_np(q1, q2, p2)
        d3 = _orient_np(p1, p2, q1)
        d4 = _orient_np(p1, p2, q2)
        proper = (d1 * d2 < -tol * tol) & (d3 * d4 < -tol * tol)
        if proper.any():
            return False
        touch = ((np.abs(d1) <= tol) & _on_seg_np(q1, q2, p1, tol)) | ((np.abs(d2) <= tol) & _on_seg_np(q1, q2, p2, tol)) \
            | ((np.abs(d3) <= tol) & _on_seg_np(p1, p2, q1, tol)) | ((np.abs(d4) <= tol) & _on_seg_np(p1, p2, q2, tol))
        if touch.any():
            return False
    return True


def _orient_np(p, q, r):
    p = np.asarray(p)
    q = np.asarray(q)
    r = np.asarray(r)
    return (q[..., 0] - p[..., 0]) * (r[..., 1] - p[..., 1]) - (q[..., 1] - p[..., 1]) * (r[..., 0] - p[..., 0])


def _on_seg_np(a, b, c, tol):
    a = np.asarray(a)
    b = np.asarray(b)
    c = np.asarray(c)
    return ((np.minimum(a[..., 0], b[..., 0]) - tol <= c[..., 0]) & (c[..., 0] <= np.maximum(a[..., 0], b[..., 0]) + tol)
            & (np.minimum(a[..., 1], b[..., 1]) - tol <= c[..., 1]) & (c[..., 1] <= np.maximum(a[..., 1], b[..., 1]) + tol))


def convex_hull(points: Sequence[Point], eps=None) -> Polygon | DegenerateHull:
    """Monotone-chain hull in CCW order; collinear inputs give a DegenerateHull."""
    pts = sorted(set(Point(*p) for p in points))
    if len(pts) == 1:
        return DegenerateHull((pts[0],), "point")

    def half(seq):
        out: list[Point] = []
        for p in seq:
            while len(out) >= 2 and orientation(out[-2], out[-1], p, eps) != CCW:
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        return DegenerateHull((pts[0], pts[-1]), "segment")
    try:
        return Polygon(tuple(hull))
    except ValueError:  # float shoelace cancels to zero on near-collinear input
        return DegenerateHull((pts[0], pts[-1]), "segment")


def _hull_array(points) -> np.ndarray:
    pts = np.asarray([(float(p[0]), float(p[1])) for p in points], dtype=float)
    hull = convex_hull([Point(*p) for p in pts], eps=0.0)
    return np.array([p.as_float() for p in hull.vertices], dtype=float)


def min_width(points: Sequence[Point]) -> float:
    """Minimum directional extent via rotating calipers over the hull edges."""
    h = _hull_array(points)
    n = len(h)
    if n < 3:
        return 0.0
    best = math.inf
    j = 1
    for i in range(n):
        p, q = h[i], h[(i + 1) % n]
        e = q - p
        elen = math.hypot(e[0], e[1])

        def height(k):
            r = h[k % n] - p
            return (e[0] * r[1] - e[1] * r[0]) / elen

        while height(j + 1) >= height(j) and j < i + 2 * n:
            j += 1
        best = min(best, height(j))
    return best


def antipodal_pairs(points: Sequence[Point]) -> list[tuple[int, int]]:
    """Index pairs (into the hull vertex array) touched by parallel supporting lines."""
    h = _hull_array(points)
    n = len(h)
    if n == 1:
        return [(0, 0)]
    if n == 2:
        return [(0, 1)]
    pairs = set()
    j = 1

    def area2(a, b, c):
        return abs((h[b][0] - h[a][0]) * (h[c][1] - h[a][1]) - (h[b][1] - h[a][1]) * (h[c][0] - h[a][0]))

    for i in range(n):
        i2 = (i + 1) % n
        while area2(i, i2, (j + 1) % n) > area2(i, i2, j % n):
            j += 1
        pairs.add(tuple(sorted((i, j % n))))
        pairs.add(tuple(sorted((i2, j % n))))
        # parallel edge case: next vertex equally far
        if math.isclose(area2(i, i2, (j + 1) % n), area2(i, i2, j % n), rel_tol=1e-12, abs_tol=0.0):
            pairs.add(tuple(sorted((i, (j + 1) % n))))
            pairs.add(tuple(sorted((i2, (j + 1) % n))))
    return sorted(pairs)


def diameter(points: Sequence[Point]) -> tuple[float, Point, Point]:
    """Farthest pair of a point set, found among hull antipodal pairs."""
    h = _hull_array(points)
    best = (-1.0, 0, 0)
    for i, j in antipodal_pairs(points):
        d = math.hypot(*(h[i] - h[j]))
        if d > best[0]:
            best = (d, i, j)
    d, i, j = best
    return d, Point(*h[i]), Point(*h[j])


def diameter_pairs(points: Sequence[Point], tol: float = 0.0) -> list[tuple[float, Point, Point]]:
    """All antipodal pairs within ``tol`` of the diameter, longest first."""
    h = _hull_array(points)
    out = []
    for i, j in antipodal_pairs(points):
        out.append((math.hypot(*(h[i] - h[j])), Point(*h[i]), Point(*h[j])))
    out.sort(key=lambda t: -t[0])
    dmax = out[0][0]
    return [t for t in out if t[0] >= dmax - tol]


def polygon_area(poly: Polygon, check_simple: bool = True):
    """Absolute shoelace area; non-simple polygons are rejected."""
    if check_simple and not poly.is_simple:
        raise ValueError("polygon is not simple")
    return abs(poly.signed_area)


@dataclass(frozen=True)
class RigidMotion:
    """Rotation by ``theta`` about the origin followed by translation (tx, ty).

    ``rotation`` may carry an exact (cos, sin) pair, e.g. from a Pythagorean
    triple, in which case rational inputs stay rational.
    """

    theta: float = 0.0
    tx: object = 0.0
    ty: object = 0.0
    rotation: tuple | None = field(default=None, compare=False)

    @classmethod
    def from_rotation(cls, c, s, tx=0, ty=0) -> "RigidMotion":
        if c * c + s * s != 1:
            raise ValueError("rotation (c, s) must satisfy c^2 + s^2 = 1")
        return cls(math.atan2(float(s), float(c)), tx, ty, (c, s))

    @property
    def cos_sin(self):
        if self.rotation is not None:
            return self.rotation
        return math.cos(self.theta), math.sin(self.theta)

    def apply_point(self, p: Point) -> Point:
        c, s = self.cos_sin
        return Point(c * p.x - s * p.y + self.tx, s * p.x + c * p.y + self.ty)

    def apply_array(self, pts: np.ndarray) -> np.ndarray:
        c, s = (float(v) for v in self.cos_sin)
        pts = np.asarray(pts, dtype=float)
        out = np.empty_like(pts)
        out[..., 0] = c * pts[..., 0] - s * pts[..., 1] + float(self.tx)
        out[..., 1] = s * pts[..., 0] + c * pts[..., 1] + float(self.ty)
        return out

    def compose(self, other: "RigidMotion") -> "RigidMotion":
        """self after other."""
        t = self.apply_point(Point(other.tx, other.ty))
        if self.rotation is not None and other.rotation is not None:
            c1, s1 = self.rotation
            c2, s2 = other.rotation
            return RigidMotion(self.theta + other.theta, t.x, t.y, (c1 * c2 - s1 * s2, s1 * c2 + c1 * s2))
        return RigidMotion(self.theta + other.theta, t.x, t.y)

    def inverse(self) -> "RigidMotion":
        c, s = self.cos_sin
        tx = -(c * self.tx + s * self.ty)
        ty = -(-s * self.tx + c * self.ty)
        rot = (c, -s) if self.rotation is not None else None
        return RigidMotion(-self.theta, tx, ty, rot)


def apply_motion(m: RigidMotion, g):
    """Apply a rigid motion to a Point, Polyline or Polygon."""
    if isinstance(g, Polyline):
        return Polyline(tuple(m.apply_point(p) for p in g.vertices))
    if isinstance(g, Polygon):
        return Polygon(tuple(m.apply_point(p) for p in g.vertices))
    return m.apply_point(Point(*g))


def regular_polygon(n: int, radius: float = 1.0, center=(0.0, 0.0), phase: float = 0.0) -> Polygon:
    cx, cy = center
    return Polygon(tuple(Point(cx + radius * math.cos(phase + 2 * math.pi * k / n),
                               cy + radius * math.sin(phase + 2 * math.pi * k / n)) for k in range(n)))


def point_segment_distance(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Euclidean distance from points ``p`` (..., 2) to segments ab (broadcast)."""
    ab = b - a
    ap = p - a
    denom = np.maximum((ab ** 2).sum(-1), 1e-300)
    t = np.clip((ap * ab).sum(-1) / denom, 0.0, 1.0)
    proj = a + t[..., None] * ab
    return np.sqrt(((p - proj) ** 2).sum(-1))


def points_in_polygon(pts: np.ndarray, poly: np.ndarray) -> np.ndarray:
    """Even-odd rule membership for an (m, 2) array against an (n, 2) polygon."""
    pts = np.atleast_2d(pts)
    x = pts[:, 0][:, None]
    y = pts[:, 1][:, None]
    a = poly
    b = np.roll(poly, -1, axis=0)
    cond = (a[:, 1] > y) != (b[:, 1] > y)
    with np.errstate(divide="ignore", invalid="ignore"):
        xint = a[:, 0] + (y - a[:, 1]) * (b[:, 0] - a[:, 0]) / (b[:, 1] - a[:, 1])
    return (cond & (x < xint)).sum(axis=1) % 2 == 1


def signed_distance_polygon(pts: np.ndarray, poly: np.ndarray) -> np.ndarray:
    """Distance to the polygon boundary, positive inside, negative outside."""
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    a = poly
    b = np.roll(poly, -1, axis=0)
    d = np.empty(len(pts))
    for start in range(0, len(pts), 2048):
        chunk = pts[start:start + 2048]
        d[start:start + 2048] = point_segment_distance(chunk[:, None, :], a[None], b[None]).min(axis=1)
    inside = points_in_polygon(pts, poly)
    return np.where(inside, d, -d)
