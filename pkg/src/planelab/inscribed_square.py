"""Squares inscribed in closed polygonal curves.

Curves are parametrized by normalized arclength u in [0, 1) and oriented
counterclockwise at construction (vertex 0 kept first), so parameters taken
in increasing cyclic order give counterclockwise squares.

An empty result means nothing was found at the given grid and budget; it is
never evidence against the curve. Only polygonal input is accepted: curves
that are not rectifiable are beyond a numerical method.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources
from typing import NamedTuple

import numpy as np
from scipy.spatial import cKDTree

from .geom import Point, Polygon, RigidMotion, point_segment_distance, polygon_is_simple

DEGENERATE_FRACTION = 1e-6  # squares with side below this fraction of the length are ignored
NEWTON_ITERS = 60


class ClosedCurve:
    def __init__(self, vertices):
        v = np.asarray([(float(p[0]), float(p[1])) for p in vertices], dtype=float)
        if len(v) > 1 and np.array_equal(v[0], v[-1]):
            v = v[:-1]
        if len(v) < 3:
            raise ValueError("a closed curve needs at least 3 distinct vertices")
        poly = Polygon(tuple(Point(*p) for p in v))
        if not polygon_is_simple(poly):
            raise ValueError("curve is not simple")
        if poly.signed_area < 0:
            v = np.vstack([v[:1], v[:0:-1]])
        self.vertices = v
        seg = np.linalg.norm(np.roll(v, -1, axis=0) - v, axis=1)
        self.cum = np.concatenate([[0.0], np.cumsum(seg)])
        self.length = float(self.cum[-1])
        self._tree = None

    def __len__(self):
        return len(self.vertices)

    def _locate(self, u):
        s = np.mod(np.asarray(u, dtype=float), 1.0) * self.length
        k = np.clip(np.searchsorted(self.cum, s, side="right") - 1, 0, len(self.vertices) - 1)
        return s, k

    def point_at(self, u) -> np.ndarray:
        s, k = self._locate(u)
        a = self.vertices[k]
        b = self.vertices[(k + 1) % len(self.vertices)]
        seg = self.cum[k + 1] - self.cum[k]
        f = ((s - self.cum[k]) / seg)[..., None]
        return a + f * (b - a)

    def tangent_at(self, u) -> np.ndarray:
        """d point / du (length times the unit direction of the segment)."""
        _, k = self._locate(u)
        a = self.vertices[k]
        b = self.vertices[(k + 1) % len(self.vertices)]
        seg = (self.cum[k + 1] - self.cum[k])[..., None]
        return (b - a) / seg * self.length

    def refined(self, factor: int) -> "ClosedCurve":
        """Same curve with ``factor - 1`` extra points per edge (parametrization unchanged)."""
        v = self.vertices
        w = np.roll(v, -1, axis=0)
        f = (np.arange(factor) / factor)[None, :, None]
        return ClosedCurve((v[:, None, :] + f * (w - v)[:, None, :]).reshape(-1, 2))

    def distance(self, pts: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(pts)
        a = self.vertices
        b = np.roll(a, -1, axis=0)
        out = np.empty(len(pts))
        for i in range(0, len(pts), 512):
            out[i:i + 512] = point_segment_distance(pts[i:i + 512, None, :], a[None], b[None]).min(axis=1)
        return out

    def project(self, pts: np.ndarray) -> np.ndarray:
        """Approximate parameter of the nearest curve point (dense arclength samples)."""
        if self._tree is None:
            m = max(4096, 8 * len(self.vertices))
            self._us = np.arange(m) / m
            self._tree = cKDTree(self.point_at(self._us))
        _, idx = self._tree.query(pts)
        return self._us[idx]

    def transformed(self, m: RigidMotion) -> "ClosedCurve":
        return ClosedCurve(m.apply_array(self.vertices))

    def scaled(self, s: float) -> "ClosedCurve":
        return ClosedCurve(self.vertices * s)

    def to_json(self) -> dict:
        return {"vertices": self.vertices.tolist()}


class SquareCheck(NamedTuple):
    flag: bool
    residual: float


def _residuals(p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Relative square residual and mean side for (..., 4, 2) point sets."""
    sides = np.linalg.norm(np.roll(p, -1, axis=-2) - p, axis=-1)
    diags = np.stack([np.linalg.norm(p[..., 2, :] - p[..., 0, :], axis=-1),
                      np.linalg.norm(p[..., 3, :] - p[..., 1, :], axis=-1)], axis=-1)
    mean = sides.mean(axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        rs = np.abs(sides - mean[..., None]).max(axis=-1) / mean
        rd = np.abs(diags - math.sqrt(2) * mean[..., None]).max(axis=-1) / (math.sqrt(2) * mean)
        res = np.where(mean > 0, np.maximum(rs, rd), np.inf)
    return res, mean


def is_square(p1, p2, p3, p4, tol: float = 1e-9) -> SquareCheck:
    """Four equal sides and two diagonals equal to sqrt(2) times the side, relative to the side."""
    pts = np.array([p1, p2, p3, p4], dtype=float)
    res, _ = _residuals(pts)
    res = float(res)
    return SquareCheck(res <= tol, res)


@dataclass(frozen=True)
class SquareCandidate:
    params: tuple
    vertices: tuple
    side: float
    residual: float

    def to_json(self) -> dict:
        return {"params": list(self.params), "vertices": [list(v) for v in self.vertices],
                "side": self.side, "residual": self.residual}


@dataclass(frozen=True)
class SquareSearch:
    candidates: list
    passing_offsets: int
    grid: int

    @property
    def family_detected(self) -> bool:
        return self.passing_offsets > self.grid / 2


def _system(c: ClosedCurve, u: np.ndarray):
    """Square-completion residual F (S, 4) and Jacobian (S, 4, 4) for p1-p3 as the diagonal."""
    p = c.point_at(u)  # (S, 4, 2)
    t = c.tangent_at(u)

    def rot(v):
        return np.stack([-v[..., 1], v[..., 0]], axis=-1)

    m = (p[:, 0] + p[:, 2]) / 2
    h = rot(p[:, 0] - p[:, 2]) / 2
    F = np.concatenate([p[:, 1] - m - h, p[:, 3] - m + h], axis=1)
    J = np.zeros((len(u), 4, 4))
    t1, t2, t3, t4 = t[:, 0], t[:, 1], t[:, 2], t[:, 3]
    J[:, 0:2, 0] = -t1 / 2 - rot(t1) / 2
    J[:, 0:2, 1] = t2
    J[:, 0:2, 2] = -t3 / 2 + rot(t3) / 2
    J[:, 2:4, 0] = -t1 / 2 + rot(t1) / 2
    J[:, 2:4, 2] = -t3 / 2 - rot(t3) / 2
    J[:, 2:4, 3] = t4
    return F, J


def _refine(c: ClosedCurve, u: np.ndarray, pinned: bool = False, iters: int = NEWTON_ITERS) -> np.ndarray:
    """Batched Levenberg-Marquardt on the completion residual; u1 held fixed when ``pinned``."""
    u = u.copy()
    lam = np.full(len(u), 1e-3)
    F, J = _system(c, u)
    cost = (F ** 2).sum(axis=1)
    free = slice(1, 4) if pinned else slice(0, 4)
    for _ in range(iters):
        Jf = J[:, :, free]
        JT = np.transpose(Jf, (0, 2, 1))
        A = JT @ Jf
        g = (JT @ F[:, :, None])[:, :, 0]
        diag = np.einsum("sii->si", A)
        A = A + (lam[:, None] * (diag + 1e-12 * c.length ** 2))[:, :, None] * np.eye(A.shape[1])[None]
        step = -np.linalg.solve(A, g[:, :, None])[:, :, 0]
        trial = u.copy()
        trial[:, free] = u[:, free] + step
        Ft, Jt = _system(c, trial)
        ct = (Ft ** 2).sum(axis=1)
        better = ct < cost
        u[better], F[better], J[better], cost[better] = trial[better], Ft[better], Jt[better], ct[better]
        lam = np.where(better, lam * 0.3, lam * 10.0)
        lam = np.clip(lam, 1e-12, 1e12)
        if (cost <= (1e-15 * c.length) ** 2).all():
            break
    return np.mod(u, 1.0)


def _seeds(c: ClosedCurve, grid: int) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic grid triples (i, j, k) with the fourth parameter from square completion."""
    us = np.arange(grid) / grid
    pts = c.point_at(us)
    tri = []
    for i in range(grid):
        for dj in range(1, grid - 1):
            for dk in range(dj + 1, grid):
                tri.append((i, (i + dj) % grid, (i + dk) % grid))
    tri = np.array(tri)
    p1, p2, p3 = pts[tri[:, 0]], pts[tri[:, 1]], pts[tri[:, 2]]
    p4 = p1 + p3 - p2  # reflection of the u2 vertex through the diagonal midpoint
    u4 = c.project(p4)
    u = np.column_stack([us[tri], u4])
    return u, tri[:, 0]


def _cyclic(u: np.ndarray) -> np.ndarray:
    gaps = np.mod(np.roll(u, -1, axis=1) - u, 1.0)
    return np.abs(gaps.sum(axis=1) - 1.0) < 1e-9


def _canonical(u: np.ndarray) -> tuple:
    k = int(np.argmin(u))
    return tuple(float(x) for x in np.roll(u, -k))


def _circ(a, b):
    d = np.abs(np.asarray(a) - np.asarray(b)) % 1.0
    return np.minimum(d, 1.0 - d)


def square_search(c: ClosedCurve, grid: int = 64, tol: float = 1e-6, budget: int = 100000) -> SquareSearch:
    """Seed, refine and deduplicate inscribed squares; also count passing offsets.

    ``budget`` caps seed refinements times Newton iterations. The offset
    count refines, for each grid value of u1, the best seed starting there
    with u1 pinned; more than grid/2 passing offsets signals a continuous
    family of squares.
    """
    if grid < 8:
        raise ValueError("grid must be >= 8")
    seeds, first = _seeds(c, grid)
    coarse, _ = _residuals(c.point_at(seeds))
    coarse = np.where(_cyclic(seeds), coarse, np.inf)
    order = np.lexsort((np.arange(len(seeds)), coarse))
    n_refine = max(1, min(len(seeds), budget // NEWTON_ITERS))
    chosen = order[:n_refine]
    chosen = chosen[np.isfinite(coarse[chosen])]
    refined = _refine(c, seeds[chosen])
    found = _collect(c, refined, tol)

    # one pinned refinement per offset
    best_per_offset = np.full(grid, -1)
    for idx in order:
        if not np.isfinite(coarse[idx]):
            break
        if best_per_offset[first[idx]] < 0:
            best_per_offset[first[idx]] = idx
    offsets = best_per_offset[best_per_offset >= 0]
    passing = 0
    if len(offsets):
        pinned = _refine(c, seeds[offsets], pinned=True)
        res, side = _residuals(c.point_at(pinned))
        ok = (res <= tol) & (side >= DEGENERATE_FRACTION * c.length) & _cyclic(pinned)
        passing = int(ok.sum())

    unique: list[SquareCandidate] = []
    dedup = 1.0 / (4 * grid)
    for cand in sorted(found, key=lambda s: (s.residual, s.params[0])):
        if any(_circ(cand.params, q.params).max() < dedup for q in unique):
            continue
        unique.append(cand)
    unique.sort(key=lambda s: (s.residual, s.params[0]))
    return SquareSearch(unique, passing, grid)


def _collect(c: ClosedCurve, u: np.ndarray, tol: float) -> list[SquareCandidate]:
    pts = c.point_at(u)
    res, side = _residuals(pts)
    ok = (res <= tol) & (side >= DEGENERATE_FRACTION * c.length) & _cyclic(u)
    out = []
    for row in np.flatnonzero(ok):
        params = _canonical(u[row])
        verts = c.point_at(np.array(params))
        r, s = _residuals(verts)
        out.append(SquareCandidate(params, tuple((float(x), float(y)) for x, y in verts), float(s), float(r)))
    return out


def find_inscribed_squares(c: ClosedCurve, grid: int = 64, tol: float = 1e-6,
                           budget: int = 100000) -> list[SquareCandidate]:
    return square_search(c, grid, tol, budget).candidates


def verify_candidate(c: ClosedCurve, cand: SquareCandidate, tol: float = 1e-6) -> bool:
    """Recompute on a 4x refined copy of the curve and check vertices lie on the original."""
    fine = c.refined(4)
    pts = fine.point_at(np.array(cand.params))
    check = is_square(*pts, tol=tol)
    if not check.flag:
        return False
    side = _residuals(pts)[1]
    return bool(c.distance(pts).max() <= tol * max(float(side), 1e-300))


def circle_curve(n: int = 4096, radius: float = 1.0) -> ClosedCurve:
    a = 2 * math.pi * np.arange(n) / n
    return ClosedCurve(np.column_stack([radius * np.cos(a), radius * np.sin(a)]))


def ellipse_curve(n: int = 4096, a: float = 2.0, b: float = 1.0) -> ClosedCurve:
    t = 2 * math.pi * np.arange(n) / n
    return ClosedCurve(np.column_stack([a * np.cos(t), b * np.sin(t)]))


def load_curve(name: str) -> ClosedCurve:
    """Bundled curve fixture, e.g. ``circle_4096``, ``ellipse_2to1_4096`` or ``arrow``."""
    with resources.files("planelab.data").joinpath(f"{name}.json").open() as fh:
        data = json.load(fh)
    return ClosedCurve(np.asarray(data["vertices"] if isinstance(data, dict) else data, dtype=float))
