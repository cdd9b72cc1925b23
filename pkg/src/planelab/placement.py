"""Rigid placement of point sets inside plane regions.

For a fixed rotation the best translation (largest clearance) inside a convex
region is a small linear program in (tx, ty, margin); the search runs that
program over a jittered rotation grid and refines the most promising angles
with a bounded scalar minimizer. Non-convex polygons fall back to a direct
search over (theta, tx, ty).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog, minimize, minimize_scalar

from .geom import points_in_polygon, signed_distance_polygon

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_ENUM_MAX_EDGES = 12


def rotate(pts: np.ndarray, theta) -> np.ndarray:
    """Rotate (m, 2) points by a scalar angle, or by each of an array of angles -> (R, m, 2)."""
    theta = np.asarray(theta, dtype=float)
    c, s = np.cos(theta), np.sin(theta)
    if theta.ndim == 0:
        return np.stack([c * pts[:, 0] - s * pts[:, 1], s * pts[:, 0] + c * pts[:, 1]], axis=-1)
    x = c[:, None] * pts[None, :, 0] - s[:, None] * pts[None, :, 1]
    y = s[:, None] * pts[None, :, 0] + c[:, None] * pts[None, :, 1]
    return np.stack([x, y], axis=-1)


def densify(pts: np.ndarray, factor: int = 2) -> np.ndarray:
    """Insert ``factor - 1`` evenly spaced points inside every segment of a polyline."""
    out = [pts[:1]]
    for a, b in zip(pts[:-1], pts[1:]):
        t = np.arange(1, factor + 1)[:, None] / factor
        out.append(a + t * (b - a))
    return np.concatenate(out)


class Region:
    convex = True

    def margin(self, pts: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def best_translations(self, rotated: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Max-clearance translation for each rotated copy in an (R, m, 2) batch."""
        raise NotImplementedError

    def min_margin(self, pts: np.ndarray) -> float:
        return float(self.margin(np.atleast_2d(pts)).min())


class HalfPlaneRegion(Region):
    """Convex polygon {p : n_e . p <= b_e} with unit outward normals."""

    def __init__(self, normals: np.ndarray, offsets: np.ndarray):
        self.normals = np.asarray(normals, dtype=float)
        self.offsets = np.asarray(offsets, dtype=float)
        self._triples = None

    @classmethod
    def from_polygon(cls, poly: np.ndarray) -> "HalfPlaneRegion":
        poly = np.asarray(poly, dtype=float)
        area = 0.5 * np.sum(poly[:, 0] * np.roll(poly[:, 1], -1) - np.roll(poly[:, 0], -1) * poly[:, 1])
        if area < 0:
            poly = poly[::-1]
        e = np.roll(poly, -1, axis=0) - poly
        n = np.stack([e[:, 1], -e[:, 0]], axis=1)
        n /= np.linalg.norm(n, axis=1)[:, None]
        return cls(n, (n * poly).sum(axis=1))

    def margin(self, pts):
        return (self.offsets[None, :] - pts @ self.normals.T).min(axis=1)

    def _enum_setup(self):
        if self._triples is None:
            rows = np.hstack([self.normals, np.ones((len(self.normals), 1))])
            keep, invs = [], []
            for tri in itertools.combinations(range(len(rows)), 3):
                a = rows[list(tri)]
                if abs(np.linalg.det(a)) > 1e-12:
                    keep.append(tri)
                    invs.append(np.linalg.inv(a))
            self._triples = (np.array(keep), np.array(invs), rows)
        return self._triples

    def best_translations(self, rotated):
        support = np.einsum("rmk,ek->rme", rotated, self.normals).max(axis=1)
        c = self.offsets[None, :] - support  # (R, E)
        if len(self.normals) <= _ENUM_MAX_EDGES:
            tris, invs, rows = self._enum_setup()
            z = np.einsum("kij,rkj->rki", invs, c[:, tris])  # (R, K, 3)
            lhs = np.einsum("ej,rkj->rke", rows, z)
            slack = c[:, None, :] - lhs
            scale = 1e-12 * (1.0 + np.abs(c).max(axis=1))[:, None]
            ok = (slack >= -scale[:, :, None]).all(axis=2)
            m = np.where(ok, z[:, :, 2], -np.inf)
            best = m.argmax(axis=1)
            idx = np.arange(len(rotated))
            t = z[idx, best, :2]
        else:
            t = np.array([self._solve_cutting_plane(c[r]) for r in range(len(rotated))])
        # recompute exactly at the chosen translations
        margins = (c - t @ self.normals.T).min(axis=1)
        return margins, t

    def _solve_cutting_plane(self, c: np.ndarray) -> np.ndarray:
        """LP over a growing subset of edges; exact once no skipped edge is violated."""
        E = len(self.normals)
        a_ub = np.hstack([self.normals, np.ones((E, 1))])
        active = set(np.linspace(0, E - 1, 16).astype(int).tolist())
        active.update(np.argsort(c, kind="stable")[:16].tolist())
        while True:
            idx = np.array(sorted(active))
            res = linprog([0, 0, -1], A_ub=a_ub[idx], b_ub=c[idx], bounds=[(None, None)] * 3, method="highs")
            if res.status != 0:
                idx = np.arange(E)
                res = linprog([0, 0, -1], A_ub=a_ub, b_ub=c, bounds=[(None, None)] * 3, method="highs")
                return res.x[:2]
            z = res.x
            viol = a_ub @ z - c
            viol[idx] = -np.inf
            bad = np.flatnonzero(viol > 1e-10)
            if len(bad) == 0:
                return self._polish(a_ub, c, z)
            active.update(bad[np.argsort(-viol[bad], kind="stable")][:16].tolist())

    @staticmethod
    def _polish(a_ub: np.ndarray, c: np.ndarray, z: np.ndarray, k: int = 8) -> np.ndarray:
        """Exact LP vertex among the rows tightest at the solver's point (solver tolerances are ~1e-7)."""
        slack = c - a_ub @ z
        tight = np.argsort(slack, kind="stable")[:k]
        best, best_m = z, float((c - a_ub[:, :2] @ z[:2]).min())
        for tri in itertools.combinations(tight, 3):
            a = a_ub[list(tri)]
            if abs(np.linalg.det(a)) < 1e-12:
                continue
            cand = np.linalg.solve(a, c[list(tri)])
            m = float((c - a_ub[:, :2] @ cand[:2]).min())
            if m > best_m:
                best, best_m = cand, m
        return best[:2]


class DiskRegion(Region):
    def __init__(self, center, radius: float):
        self.center = np.asarray(center, dtype=float)
        self.radius = float(radius)

    def margin(self, pts):
        return self.radius - np.linalg.norm(pts - self.center, axis=1)

    def best_translations(self, rotated):
        margins = np.empty(len(rotated))
        t = np.empty((len(rotated), 2))
        for r, pts in enumerate(rotated):
            c, rad = min_enclosing_circle(pts)
            t[r] = self.center - c
            margins[r] = self.min_margin(pts + t[r])
        return margins, t


class SectorRegion(Region):
    """Circular sector with apex at the origin, symmetric about the +x axis."""

    def __init__(self, angle: float, radius: float = 1.0, chords: int = 32):
        if not 0 < angle <= math.pi:
            raise ValueError("sector angle must lie in (0, pi]")
        self.angle = float(angle)
        self.radius = float(radius)
        h = angle / 2
        self.n1 = np.array([-math.sin(h), math.cos(h)])
        self.n2 = np.array([-math.sin(h), -math.cos(h)])
        arc = np.linspace(-h, h, chords + 1)
        pts = np.vstack([[0.0, 0.0], np.stack([radius * np.cos(arc), radius * np.sin(arc)], axis=1)])
        self._inner = HalfPlaneRegion.from_polygon(pts)

    def margin(self, pts):
        return np.minimum.reduce([-(pts @ self.n1), -(pts @ self.n2), self.radius - np.linalg.norm(pts, axis=1)])

    def best_translations(self, rotated):
        _, t = self._inner.best_translations(rotated)
        margins = np.array([self.min_margin(p + tt) for p, tt in zip(rotated, t)])
        return margins, t


class StripRegion(Region):
    """Infinite band 0 <= y <= width."""

    def __init__(self, width: float):
        self.width = float(width)

    def margin(self, pts):
        return np.minimum(pts[:, 1], self.width - pts[:, 1])

    def best_translations(self, rotated):
        lo = rotated[:, :, 1].min(axis=1)
        hi = rotated[:, :, 1].max(axis=1)
        ty = (self.width - hi - lo) / 2
        t = np.stack([np.zeros_like(ty), ty], axis=1)
        return (self.width - (hi - lo)) / 2, t


class PolygonRegion(Region):
    """Simple polygon, possibly non-convex; margin is the signed boundary distance."""

    def __init__(self, poly: np.ndarray):
        self.poly = np.asarray(poly, dtype=float)
        self.convex = _is_convex(self.poly)
        self._hp = HalfPlaneRegion.from_polygon(self.poly) if self.convex else None

    def margin(self, pts):
        if self._hp is not None:
            return self._hp.margin(pts)
        return signed_distance_polygon(pts, self.poly)

    def path_margin(self, pts: np.ndarray) -> float:
        """Clearance of a whole polyline; a segment leaving a non-convex polygon counts as outside."""
        m = self.min_margin(pts)
        if self.convex or m < 0:
            return m
        if _polyline_crosses(pts, self.poly):
            return -1e-9 if m == 0 else -abs(m)
        return m

    def best_translations(self, rotated):
        if self._hp is not None:
            return self._hp.best_translations(rotated)
        raise TypeError("non-convex polygons have no closed-form translation step")


def _is_convex(poly: np.ndarray) -> bool:
    e = np.roll(poly, -1, axis=0) - poly
    cr = e[:, 0] * np.roll(e[:, 1], -1) - e[:, 1] * np.roll(e[:, 0], -1)
    return bool((cr >= -1e-12).all() or (cr <= 1e-12).all())


def _polyline_crosses(path: np.ndarray, poly: np.ndarray) -> bool:
    a, b = path[:-1], path[1:]
    c, d = poly, np.roll(poly, -1, axis=0)

    def orient(p, q, r):
        return (q[..., 0] - p[..., 0]) * (r[..., 1] - p[..., 1]) - (q[..., 1] - p[..., 1]) * (r[..., 0] - p[..., 0])

    A, B = a[:, None], b[:, None]
    C, D = c[None], d[None]
    d1, d2 = orient(C, D, A), orient(C, D, B)
    d3, d4 = orient(A, B, C), orient(A, B, D)
    return bool(((d1 * d2 < 0) & (d3 * d4 < 0)).any())


def min_enclosing_circle(pts: np.ndarray) -> tuple[np.ndarray, float]:
    """Smallest enclosing circle (Welzl, iterative, deterministic order)."""
    p = [tuple(x) for x in np.asarray(pts, dtype=float)]
    rng = np.random.default_rng(0)
    p = [p[i] for i in rng.permutation(len(p))]

    def circle2(a, b):
        c = ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
        return c, math.dist(a, c)

    def circle3(a, b, c):
        ax, ay = a
        bx, by = b
        cx, cy = c
        d = 2 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
        if abs(d) < 1e-18:
            pairs = [circle2(a, b), circle2(a, c), circle2(b, c)]
            return max(pairs, key=lambda t: t[1])
        ux = ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay) + (cx * cx + cy * cy) * (ay - by)) / d
        uy = ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx) + (cx * cx + cy * cy) * (bx - ax)) / d
        return (ux, uy), math.dist((ux, uy), a)

    def inside(circ, q):
        return math.dist(circ[0], q) <= circ[1] * (1 + 1e-14) + 1e-15

    circ = (p[0], 0.0)
    for i in range(1, len(p)):
        if inside(circ, p[i]):
            continue
        circ = (p[i], 0.0)
        for j in range(i):
            if inside(circ, p[j]):
                continue
            circ = circle2(p[i], p[j])
            for k in range(j):
                if not inside(circ, p[k]):
                    circ = circle3(p[i], p[j], p[k])
    return np.array(circ[0]), circ[1]


@dataclass(frozen=True)
class Placement:
    margin: float
    theta: float
    tx: float
    ty: float
    evaluations: int


def _eval_angles(pts, region, angles):
    rotated = rotate(pts, np.asarray(angles, dtype=float))
    return region.best_translations(rotated)


def search_placement(pts: np.ndarray, region: Region, grid: int = 720, target: float | None = None,
                     extra_angles=(), refine: int = 4, chunk: int = 90) -> Placement:
    """Largest-clearance rigid placement of ``pts`` inside ``region``.

    Stops as soon as a placement with margin >= ``target`` is seen. ``grid``
    rotations are spread with a golden-ratio offset; the ``refine`` best grid
    angles are then polished by a bounded Brent search on the clearance.
    """
    pts = np.asarray(pts, dtype=float)
    if not region.convex:
        return _search_nonconvex(pts, region, grid, target, extra_angles)
    best = Placement(-math.inf, 0.0, 0.0, 0.0, 0)
    evals = 0
    tried_theta: list[float] = []
    tried_margin: list[float] = []

    def consider(angles):
        nonlocal best, evals
        if len(angles) == 0:
            return False
        m, t = _eval_angles(pts, region, angles)
        evals += len(angles)
        tried_theta.extend(float(a) for a in angles)
        tried_margin.extend(float(x) for x in m)
        k = int(np.argmax(m))
        if m[k] > best.margin:
            best = Placement(float(m[k]), float(angles[k]), float(t[k, 0]), float(t[k, 1]), evals)
        return target is not None and best.margin >= target

    if consider(np.asarray(extra_angles, dtype=float)):
        return _with_evals(best, evals)
    if grid > 0:
        step = 2 * math.pi / grid
        angles = (np.arange(grid) + GOLDEN) * step
        for start in range(0, grid, chunk):
            if consider(angles[start:start + chunk]):
                return _with_evals(best, evals)
        order = np.argsort(-np.asarray(tried_margin), kind="stable")
        seen = []
        for idx in order:
            th = tried_theta[idx]
            if any(abs(math.remainder(th - s, 2 * math.pi)) < step for s in seen):
                continue
            seen.append(th)
            res = minimize_scalar(lambda a: -float(_eval_angles(pts, region, [a])[0][0]),
                                  bounds=(th - step, th + step), method="bounded",
                                  options={"xatol": 1e-13, "maxiter": 200})
            evals += int(res.nfev)
            if consider(np.array([res.x])):
                return _with_evals(best, evals)
            if len(seen) >= refine:
                break
    return _with_evals(best, evals)


def _with_evals(p: Placement, evals: int) -> Placement:
    return Placement(p.margin, math.remainder(p.theta, 2 * math.pi), p.tx, p.ty, evals)


def _search_nonconvex(pts, region: PolygonRegion, grid, target, extra_angles) -> Placement:
    poly = region.poly
    centroid = poly.mean(axis=0)
    dense = densify(pts, 4)
    lo, hi = poly.min(axis=0), poly.max(axis=0)
    lattice = [lo + (hi - lo) * np.array([i, j]) / 4 for i in range(1, 4) for j in range(1, 4)]
    lattice.append(centroid)

    def value(x):
        th, tx, ty = x
        moved = rotate(dense, th) + np.array([tx, ty])
        return region.path_margin(moved)

    coarse = max(8, min(grid, 72))
    angles = list(extra_angles) + [(k + GOLDEN) * 2 * math.pi / coarse for k in range(coarse)]
    evals = 0
    cands = []
    for th in angles:
        rp = rotate(dense, th)
        for anchor in lattice:
            t = anchor - rp.mean(axis=0)
            v = value((th, t[0], t[1]))
            evals += 1
            cands.append((v, th, t[0], t[1]))
    cands.sort(key=lambda c: -c[0])
    best = Placement(*cands[0], evals)
    if target is not None and best.margin >= target:
        return _with_evals(best, evals)
    for v, th, tx, ty in cands[:6]:
        res = minimize(lambda x: -value(x), [th, tx, ty], method="Nelder-Mead",
                       options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 600})
        evals += int(res.nfev)
        if -res.fun > best.margin:
            best = Placement(float(-res.fun), float(res.x[0]), float(res.x[1]), float(res.x[2]), evals)
        if target is not None and best.margin >= target:
            break
    return _with_evals(best, evals)


def contains_points(region: Region, pts: np.ndarray, tol: float) -> bool:
    if isinstance(region, PolygonRegion):
        return region.path_margin(pts) >= -tol
    return region.min_margin(pts) >= -tol


__all__ = [
    "DiskRegion", "HalfPlaneRegion", "Placement", "PolygonRegion", "Region", "SectorRegion", "StripRegion",
    "contains_points", "densify", "min_enclosing_circle", "points_in_polygon", "rotate", "search_placement",
]
