"""Escape paths from forests.

A path guarantees escape from a forest when no rigid placement keeps the
whole path inside it. For an infinite strip this reduces to the minimal
width of the path; for polygons the falsifier searches placements, and a
trapped placement found is a proof that the path fails.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geom import Point, Polygon, Polyline, RigidMotion, diameter_pairs, min_width, signed_distance_polygon
from .placement import PolygonRegion, StripRegion, _polyline_crosses, densify, search_placement

TRAP_TOL = 1e-12  # a placement traps the path only with clearance above this
DEFAULT_ORIENTATIONS = 360


@dataclass(frozen=True)
class Forest:
    kind: str
    width: float | None = None
    polygon: Polygon | None = None

    def __post_init__(self):
        if self.kind == "strip":
            if self.width is None or self.width <= 0:
                raise ValueError("strip width must be positive")
        elif self.kind == "polygon":
            if self.polygon is None or not self.polygon.is_simple:
                raise ValueError("forest polygon must be simple")
        else:
            raise ValueError(f"unknown forest kind {self.kind!r}")

    @classmethod
    def strip(cls, width: float) -> "Forest":
        return cls("strip", width=float(width))

    @classmethod
    def from_polygon(cls, poly: Polygon) -> "Forest":
        return cls("polygon", polygon=poly)

    def region(self):
        if self.kind == "strip":
            return StripRegion(self.width)
        return PolygonRegion(self.polygon.array())


@dataclass(frozen=True)
class EscapePath:
    path: Polyline

    def __post_init__(self):
        if float(self.path.length) <= 0:
            raise ValueError("escape path must have positive length")

    @classmethod
    def from_points(cls, pts) -> "EscapePath":
        return cls(Polyline(tuple(Point(float(x), float(y)) for x, y in pts)))

    def array(self) -> np.ndarray:
        return self.path.array()

    @property
    def length(self) -> float:
        return float(self.path.length)


def strip_escape_certifies(p: EscapePath, width: float, densify_factor: int = 4) -> bool:
    """True iff the path's minimal width is at least ``width``.

    A placement inside the strip exists exactly when some direction has
    extent below the width, so a minimal width >= width rules all out.
    """
    if width <= 0:
        raise ValueError("width must be positive")
    pts = densify(p.array(), densify_factor)
    return min_width([Point(*q) for q in pts]) >= width


def _rhombus_on(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    m = (p + q) / 2
    d = q - p
    L = float(np.hypot(*d))
    n = np.array([-d[1], d[0]]) / L
    h = L / (2 * math.sqrt(3))
    return np.array([p, m + h * n, q, m - h * n])


def _polygon_contains(outer: np.ndarray, inner: np.ndarray, tol: float) -> bool:
    if signed_distance_polygon(inner, outer).min() < -tol:
        return False
    if signed_distance_polygon(inner.mean(axis=0, keepdims=True), outer)[0] < -tol:
        return False
    closed = np.vstack([inner, inner[:1]])
    return not _polyline_crosses(closed, outer)


def is_fat_forest(f: Forest, tol: float = 1e-9) -> float | None:
    """Diameter L if the rhombus with diagonals L and L/sqrt(3) on a diameter segment fits."""
    if f.kind != "polygon":
        raise ValueError("fatness is defined for polygon forests")
    poly = f.polygon.array()
    pairs = diameter_pairs(list(f.polygon.vertices), tol=tol)
    for L, p, q in pairs[:16]:
        rh = _rhombus_on(np.array(p.as_float()), np.array(q.as_float()))
        if _polygon_contains(poly, rh, tol):
            return float(L)
    return None


def best_path_fat(L: float) -> EscapePath:
    """Straight segment of length L."""
    if L <= 0:
        raise ValueError("L must be positive")
    return EscapePath.from_points([(0.0, 0.0), (float(L), 0.0)])


@dataclass(frozen=True)
class Trap:
    motion: RigidMotion
    margin: float


def escape_falsify(f: Forest, p: EscapePath, samples: int = DEFAULT_ORIENTATIONS) -> Trap | None:
    """Search for a placement keeping the whole path inside the forest.

    ``samples`` orientations are scanned; for convex forests the translation
    at each orientation is the exact clearance optimum, so no translation grid
    is needed. A returned placement is a proof the path does not guarantee
    escape; None is only evidence.
    """
    region = f.region()
    pts = p.array()
    if f.kind == "strip":
        pts = densify(pts, 2)
    place = search_placement(pts, region, grid=samples, target=1e-9)
    if place.margin <= TRAP_TOL:
        return None
    m = RigidMotion(place.theta, place.tx, place.ty)
    dense = m.apply_array(densify(pts, 4))
    if f.kind == "strip":
        margin = region.min_margin(dense)
    else:
        margin = region.path_margin(dense)
    if margin <= TRAP_TOL:
        return None
    return Trap(m, float(margin))
