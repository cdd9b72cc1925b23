"""Worms and cages.

A worm is a unit-length polyline; a cage must accommodate every worm under
rotation and translation. Only the easy direction is decidable here: a found
placement is rechecked and certified, a missing one is evidence at the given
search budget.

Sector cages have their apex at the origin and radius 1 unless stated; the
radius is a normalization choice, not a given.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .geom import Point, Polygon, Polyline, RigidMotion, apply_motion, diameter_pairs, polygon_area
from .parallel import pmap
from .placement import (DiskRegion, HalfPlaneRegion, PolygonRegion, Region, SectorRegion, contains_points,
                        densify, search_placement)

FIT_TOL = 1e-9  # a placement counts when every checked point has margin >= -FIT_TOL
ESCALATION = 4
DEFAULT_GRID = 720
RECORD_CAGE_AREA = 0.2604  # best known non-convex cage, approximate


@dataclass(frozen=True)
class Worm:
    """Polyline rescaled to total length 1 at construction."""

    path: Polyline

    def __post_init__(self):
        length = float(self.path.length)
        if length <= 0:
            raise ValueError("worm has zero length")
        if abs(length - 1.0) > 1e-12:
            pts = self.path.array()
            pts = (pts - pts[0]) / length + pts[0]
            object.__setattr__(self, "path", Polyline(tuple(Point(*p) for p in pts)))

    @classmethod
    def from_points(cls, pts) -> "Worm":
        return cls(Polyline(tuple(Point(float(x), float(y)) for x, y in pts)))

    def array(self) -> np.ndarray:
        return self.path.array()

    @property
    def length(self) -> float:
        return float(self.path.length)

    def arclength_midpoint(self) -> np.ndarray:
        pts = self.array()
        seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
        cum = np.concatenate([[0.0], np.cumsum(seg)])
        half = cum[-1] / 2
        k = min(int(np.searchsorted(cum, half, side="right")) - 1, len(seg) - 1)
        t = (half - cum[k]) / seg[k]
        return pts[k] + t * (pts[k + 1] - pts[k])


@dataclass(frozen=True)
class Cage:
    kind: str
    params: tuple = ()
    polygon: Polygon | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in ("disk", "rhombus", "sector", "polygon"):
            raise ValueError(f"unknown cage kind {self.kind!r}")
        if self.kind == "polygon":
            if self.polygon is None or not self.polygon.is_simple:
                raise ValueError("polygon cage must be a simple polygon")
        elif any(float(v) <= 0 for v in self.params):
            raise ValueError("cage dimensions must be positive")

    @classmethod
    def disk(cls, diameter) -> "Cage":
        return cls("disk", (diameter,))

    @classmethod
    def rhombus(cls, d1, d2) -> "Cage":
        return cls("rhombus", (d1, d2))

    @classmethod
    def sector(cls, angle, radius=1.0) -> "Cage":
        if not 0 < float(angle) <= math.pi:
            raise ValueError("sector angle must lie in (0, pi]")
        return cls("sector", (angle, radius))

    @classmethod
    def square(cls, side) -> "Cage":
        s = float(side)
        return cls.from_polygon(Polygon(((0.0, 0.0), (s, 0.0), (s, s), (0.0, s))))

    @classmethod
    def from_polygon(cls, poly: Polygon) -> "Cage":
        return cls("polygon", (), poly)

    def region(self) -> Region:
        if self.kind == "disk":
            return DiskRegion((0.0, 0.0), float(self.params[0]) / 2)
        if self.kind == "sector":
            return SectorRegion(float(self.params[0]), float(self.params[1]))
        if self.kind == "rhombus":
            return HalfPlaneRegion.from_polygon(self.outline())
        return PolygonRegion(self.polygon.array())

    def outline(self, samples: int = 256) -> np.ndarray:
        """Boundary polygon, curved parts sampled (for drawing and axis guesses)."""
        if self.kind == "disk":
            r = float(self.params[0]) / 2
            a = np.linspace(0, 2 * math.pi, samples, endpoint=False)
            return np.stack([r * np.cos(a), r * np.sin(a)], axis=1)
        if self.kind == "rhombus":
            h1, h2 = float(self.params[0]) / 2, float(self.params[1]) / 2
            return np.array([[h1, 0.0], [0.0, h2], [-h1, 0.0], [0.0, -h2]])
        if self.kind == "sector":
            ang, r = float(self.params[0]), float(self.params[1])
            a = np.linspace(-ang / 2, ang / 2, max(2, samples // 4) + 1)
            return np.vstack([[0.0, 0.0], np.stack([r * np.cos(a), r * np.sin(a)], axis=1)])
        return self.polygon.array()

    def to_json(self) -> dict:
        if self.kind == "polygon":
            return {"kind": "polygon", "vertices": self.polygon.array().tolist()}
        names = {"disk": ("diameter",), "rhombus": ("d1", "d2"), "sector": ("angle", "radius")}[self.kind]
        return {"kind": self.kind, **{k: float(v) for k, v in zip(names, self.params)}}


def cage_area(c: Cage):
    """Closed-form area; shoelace for polygon cages."""
    if c.kind == "disk":
        return math.pi * float(c.params[0]) ** 2 / 4
    if c.kind == "rhombus":
        return c.params[0] * c.params[1] / 2
    if c.kind == "sector":
        return float(c.params[0]) / 2 * float(c.params[1]) ** 2
    return polygon_area(c.polygon)


def _axis_angles(pts: np.ndarray) -> list[float]:
    pairs = diameter_pairs([Point(*p) for p in pts], tol=1e-12)[:2]
    out = []
    for _, p, q in pairs:
        out.append(math.atan2(q.y - p.y, q.x - p.x))
    return out


def canonical_angles(w: Worm, c: Cage) -> list[float]:
    """Rotations aligning the worm's diameter with the cage's long directions."""
    if c.kind == "disk":
        return [0.0]
    cage_dirs = _axis_angles(c.outline(64))
    if c.kind == "sector":
        half = float(c.params[0]) / 2
        cage_dirs += [0.0, half, -half]
    worm_dirs = _axis_angles(w.array())
    out = []
    for a in cage_dirs:
        for b in worm_dirs:
            out += [a - b, a - b + math.pi]
    return out


@dataclass(frozen=True)
class Fit:
    motion: RigidMotion | None
    margin: float
    certified: bool
    evaluations: int

    @property
    def found(self) -> bool:
        return self.motion is not None


def _certify(w: Worm, region: Region, m: RigidMotion) -> bool:
    pts = m.apply_array(densify(w.array(), 2))
    return contains_points(region, pts, FIT_TOL)


def fit(w: Worm, c: Cage, budget: int = DEFAULT_GRID) -> Fit:
    """Search for a placement of ``w`` in ``c``; ``budget`` is the rotation grid size."""
    region = c.region()
    pts = w.array()
    if c.kind == "disk":
        # midpoint centering: every point is within arclength 1/2 of the midpoint
        mid = w.arclength_midpoint()
        m = RigidMotion(0.0, float(-mid[0]), float(-mid[1]))
        margin = region.min_margin(m.apply_array(pts))
        if margin < -FIT_TOL and budget > 0:
            p = search_placement(pts, region, grid=1)
            m, margin = RigidMotion(p.theta, p.tx, p.ty), p.margin
        if margin >= -FIT_TOL and _certify(w, region, m):
            return Fit(m, margin, True, 1)
        return Fit(None, margin, False, 1)
    p = search_placement(pts, region, grid=budget, target=0.0, extra_angles=canonical_angles(w, c))
    m = RigidMotion(p.theta, p.tx, p.ty)
    if p.margin >= -FIT_TOL and _certify(w, region, m):
        return Fit(m, p.margin, True, p.evaluations)
    return Fit(None, p.margin, False, p.evaluations)


def accommodate(w: Worm, c: Cage, budget: int = DEFAULT_GRID) -> RigidMotion | None:
    """Motion placing the worm inside the cage, or None if none was found at this budget."""
    return fit(w, c, budget).motion


def random_worm(seed: int, segments: int) -> Worm:
    """Random polyline (turning angles in (-pi/2, pi/2), lengths in [0.5, 1.5)) of length 1."""
    if segments < 1:
        raise ValueError("segments must be >= 1")
    rng = np.random.default_rng(seed)
    heading = rng.uniform(0, 2 * math.pi)
    turns = np.concatenate([[heading], rng.uniform(-math.pi / 2, math.pi / 2, segments - 1)])
    lengths = rng.uniform(0.5, 1.5, segments)
    ang = np.cumsum(turns)
    steps = lengths[:, None] * np.stack([np.cos(ang), np.sin(ang)], axis=1)
    pts = np.vstack([[0.0, 0.0], np.cumsum(steps, axis=0)]) / lengths.sum()
    return Worm.from_points(pts)


def three_segment_worms(grid_steps: int) -> list[Worm]:
    """Three-segment unit chains on a simplex grid of lengths and a uniform grid of turns.

    Lengths are (i, j, k) / grid_steps with i + j + k = grid_steps; turning
    angles are 2*pi*m / grid_steps wrapped to (-pi, pi]. Zero-length segments
    are dropped and chains with the same vertices are listed once.
    """
    if grid_steps < 2:
        raise ValueError("grid_steps must be >= 2")
    g = grid_steps
    turns = [math.remainder(2 * math.pi * m / g, 2 * math.pi) for m in range(g)]
    seen = set()
    out = []
    for i in range(g + 1):
        for j in range(g + 1 - i):
            k = g - i - j
            for a1, a2 in itertools.product(turns, turns):
                segs = [(i / g, 0.0), (j / g, a1), (k / g, a2)]
                pts = [(0.0, 0.0)]
                heading = 0.0
                pending = 0.0
                for length, turn in segs:
                    pending += turn
                    if length == 0:
                        continue
                    if len(pts) > 1:
                        heading += pending
                    pending = 0.0
                    x, y = pts[-1]
                    pts.append((x + length * math.cos(heading), y + length * math.sin(heading)))
                key = tuple((round(x, 9) + 0.0, round(y, 9) + 0.0) for x, y in pts)
                if key in seen:
                    continue
                seen.add(key)
                out.append(Worm.from_points(pts))
    return out


@dataclass(frozen=True)
class Falsification:
    index: int
    worm: Worm
    margin: float
    escalated_margin: float


def cage_falsify(c: Cage, family: list[Worm], budget: int = DEFAULT_GRID) -> Falsification | None:
    """First worm that fails at ``budget`` and again at an escalated budget.

    Worms are screened in parallel; the reported worm is the first failure in
    family order, so the answer does not depend on the thread count.
    """
    fits = pmap(lambda w: fit(w, c, budget), family)
    for idx, (w, f) in enumerate(zip(family, fits)):
        if f.found:
            continue
        retry = fit(w, c, max(budget, 1) * ESCALATION)
        if not retry.found:
            return Falsification(idx, w, f.margin, retry.margin)
    return None


def sweep(c: Cage, family: list[Worm], budget: int = DEFAULT_GRID) -> dict:
    """Fit every worm; report counts and the worst margin seen."""
    fits = pmap(lambda w: fit(w, c, budget), family)
    failed = [i for i, f in enumerate(fits) if not f.found]
    return {
        "cage": c.to_json(),
        "worms": len(family),
        "accommodated": len(family) - len(failed),
        "failed": failed,
        "min_margin": min(f.margin for f in fits) if fits else None,
    }


def placed_worm(w: Worm, m: RigidMotion) -> Polyline:
    return apply_motion(m, w.path)
