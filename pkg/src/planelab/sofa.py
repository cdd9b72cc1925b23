"""Sofas moving around the corner of the unit-width L-shaped hallway.

The hallway is {x <= 1, y <= 1, and x >= 0 or y >= 0}: a vertical leg
going down and a horizontal leg going left, with the inner corner at the
origin. A plan is a list of timed rigid motions; between consecutive samples
the pose is interpolated linearly in (theta, tx, ty), and the check runs on
sub-steps no vertex crosses faster than ``step``. Reports state the sampling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geom import Point, Polygon, RigidMotion, polygon_area
from .parallel import pmap

GERVER_AREA = 2.2195  # conjectured optimum
UPPER_BOUND_AREA = 2.37  # proven upper bound
HAMMERSLEY_AREA = math.pi / 2 + 2 / math.pi
HAMMERSLEY_AREA_ROUNDED = 2.2074
VALID_TOL = 1e-9
STEP_FRACTION = 1e-3  # default step, as a fraction of the motion range
TELEPORT_FACTOR = 10  # a sample jump above this many steps breaks continuity


class PlanError(ValueError):
    pass


def hallway_contains(p) -> bool:
    x, y = p[0], p[1]
    return x <= 1 and y <= 1 and (x >= 0 or y >= 0)


def hallway_margin(pts: np.ndarray) -> np.ndarray:
    """Signed clearance to the hallway boundary (negative outside)."""
    x, y = pts[..., 0], pts[..., 1]
    vertical = np.minimum(np.minimum(x, 1 - x), 1 - y)
    horizontal = np.minimum(np.minimum(y, 1 - y), 1 - x)
    return np.maximum(vertical, horizontal)


@dataclass(frozen=True)
class SofaShape:
    boundary: Polygon
    nominal_area: float | None = None
    name: str = "sofa"

    def __post_init__(self):
        if not self.boundary.is_simple:
            raise ValueError("sofa boundary must be a simple polygon")

    def array(self) -> np.ndarray:
        return self.boundary.array()

    @property
    def area(self) -> float:
        return float(polygon_area(self.boundary, check_simple=False))

    def to_json(self) -> dict:
        out = {"name": self.name, "vertices": self.array().tolist()}
        if self.nominal_area is not None:
            out["nominal_area"] = self.nominal_area
        return out

    @classmethod
    def from_json(cls, data: dict) -> "SofaShape":
        poly = Polygon(tuple(Point(float(x), float(y)) for x, y in data["vertices"]))
        return cls(poly, data.get("nominal_area"), data.get("name", "sofa"))


@dataclass(frozen=True)
class MotionPlan:
    samples: tuple  # ((t, RigidMotion), ...)

    def __post_init__(self):
        ts = [float(t) for t, _ in self.samples]
        if len(ts) < 2 or ts[0] != 0.0 or ts[-1] != 1.0:
            raise PlanError("plan must start at t=0 and end at t=1")
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise PlanError("plan times must be strictly increasing")

    @classmethod
    def from_poses(cls, poses, times=None) -> "MotionPlan":
        poses = np.asarray(poses, dtype=float)
        ts = np.linspace(0.0, 1.0, len(poses)) if times is None else np.asarray(times, dtype=float)
        return cls(tuple((float(t), RigidMotion(float(th), float(x), float(y))) for t, (th, x, y) in zip(ts, poses)))

    def poses(self) -> np.ndarray:
        return np.array([[m.theta, float(m.tx), float(m.ty)] for _, m in self.samples])

    def times(self) -> np.ndarray:
        return np.array([t for t, _ in self.samples])

    def to_json(self) -> dict:
        return {"samples": [{"t": t, "theta": m.theta, "tx": float(m.tx), "ty": float(m.ty)} for t, m in self.samples]}

    @classmethod
    def from_json(cls, data: dict) -> "MotionPlan":
        return cls(tuple((float(s["t"]), RigidMotion(float(s["theta"]), float(s["tx"]), float(s["ty"])))
                         for s in data["samples"]))


def _placed(pts: np.ndarray, poses: np.ndarray) -> np.ndarray:
    """(P, 3) poses applied to (m, 2) points -> (P, m, 2)."""
    c, s = np.cos(poses[:, :1]), np.sin(poses[:, :1])
    x = c * pts[None, :, 0] - s * pts[None, :, 1] + poses[:, 1:2]
    y = s * pts[None, :, 0] + c * pts[None, :, 1] + poses[:, 2:3]
    return np.stack([x, y], axis=-1)


def _jumps(pts: np.ndarray, poses: np.ndarray) -> np.ndarray:
    placed = _placed(pts, poses)
    return np.linalg.norm(np.diff(placed, axis=0), axis=2).max(axis=1)


def motion_range(s: SofaShape, plan: MotionPlan) -> float:
    """Longest vertex trajectory through the samples."""
    placed = _placed(s.array(), plan.poses())
    return float(np.linalg.norm(np.diff(placed, axis=0), axis=2).sum(axis=0).max())


def _densify_closed(poly: np.ndarray, step: float) -> np.ndarray:
    out = []
    for a, b in zip(poly, np.roll(poly, -1, axis=0)):
        k = max(1, math.ceil(float(np.hypot(*(b - a))) / step))
        out.append(a + (np.arange(k)[:, None] / k) * (b - a))
    return np.concatenate(out)


def _substeps(poses: np.ndarray, jumps: np.ndarray, step: float) -> tuple[np.ndarray, np.ndarray]:
    """Interpolated poses so no vertex moves more than ``step``; also returns the owning sample index."""
    parts, owner = [poses[:1]], [np.zeros(1, dtype=int)]
    for i, j in enumerate(jumps):
        k = max(1, math.ceil(j / step))
        f = (np.arange(1, k + 1) / k)[:, None]
        parts.append(poses[i] + f * (poses[i + 1] - poses[i]))
        owner.append(np.full(k, i + 1))
    return np.vstack(parts), np.concatenate(owner)


def verify_motion(s: SofaShape, plan: MotionPlan, step: float | None = None, chunk: int = 256) -> dict:
    """Check a plan against the hallway.

    ``step`` (default 1e-3 of the motion range) bounds vertex travel between
    checked poses and the spacing of boundary points. A sample jump larger
    than ten steps is a teleport and raises PlanError.
    """
    verts = s.array()
    poses = plan.poses()
    rng = motion_range(s, plan)
    if step is None:
        step = STEP_FRACTION * rng if rng > 0 else 1e-3
    if step <= 0:
        raise PlanError("step must be positive")
    jumps = _jumps(verts, poses)
    if len(jumps) and jumps.max() > TELEPORT_FACTOR * step:
        k = int(jumps.argmax())
        raise PlanError(f"samples {k} and {k + 1} move a vertex by {jumps.max():.3g} (step {step:.3g})")
    fine, owner = _substeps(poses, jumps, step)
    dense = _densify_closed(verts, step)
    blocks = [fine[i:i + chunk] for i in range(0, len(fine), chunk)]
    fine_margins = np.concatenate(pmap(lambda b: hallway_margin(_placed(dense, b)).min(axis=1), blocks))
    # margin per plan sample: the worst over the sub-steps leading into it
    sample_margins = np.full(len(poses), np.inf)
    np.minimum.at(sample_margins, owner, fine_margins)
    placed_ends = _placed(verts, poses[[0, -1]])
    min_margin = float(fine_margins.min())
    return {
        "valid": min_margin >= -VALID_TOL,
        "traversal": bool(placed_ends[0, :, 1].max() <= -1 + 1e-12 and placed_ends[1, :, 0].max() <= -1 + 1e-12),
        "min_margin": min_margin,
        "sample_margins": sample_margins,
        "step": step,
        "samples": len(poses),
        "checked_poses": len(fine),
        "boundary_points": len(dense),
    }


def _arc(center, radius, a0, a1, tol, outside=False) -> np.ndarray:
    """Arc from angle a0 to a1 within ``tol``: chords inside the circle, or tangents outside it."""
    span = abs(a1 - a0)
    sgn = 1.0 if a1 >= a0 else -1.0
    cx, cy = center
    if outside:
        k = max(1, math.ceil(span / (2 * math.acos(1 / (1 + tol / radius)))))
        h = span / (2 * k)
        ang = a0 + sgn * (2 * np.arange(k) + 1) * h
        rr = radius / math.cos(h)
        mids = np.stack([cx + rr * np.cos(ang), cy + rr * np.sin(ang)], axis=1)
        ends = np.array([[cx + radius * math.cos(a), cy + radius * math.sin(a)] for a in (a0, a1)])
        return np.vstack([ends[:1], mids, ends[1:]])
    k = max(1, math.ceil(span / (2 * math.acos(1 - tol / radius))))
    ang = np.linspace(a0, a1, k + 1)
    return np.stack([cx + radius * np.cos(ang), cy + radius * np.sin(ang)], axis=1)


def _phase_plan(verts: np.ndarray, phases, samples: int, resolution: int = 2000) -> MotionPlan:
    """Chain one-parameter phases into ``samples`` exact poses.

    Phase boundaries are always samples (linear interpolation across a
    velocity kink would cut corners); inside a phase the samples are evenly
    spaced in vertex travel.
    """
    u = np.linspace(0.0, 1.0, resolution + 1)
    travel, cums = [], []
    for fn in phases:
        poses = np.array([fn(x) for x in u])
        cum = np.concatenate([[0.0], np.cumsum(_jumps(verts, poses))])
        travel.append(cum[-1])
        cums.append(cum)
    total = sum(travel)
    intervals = samples - 1
    if intervals < len(phases):
        raise ValueError("need at least one interval per phase")
    share = [max(1, int(round(intervals * t / total))) if total > 0 else 1 for t in travel]
    while sum(share) > intervals:
        share[int(np.argmax(share))] -= 1
    while sum(share) < intervals:
        share[int(np.argmax(np.array(travel) / np.array(share)))] += 1
    out = [phases[0](0.0)]
    for fn, cum, k in zip(phases, cums, share):
        targets = np.linspace(0.0, cum[-1], k + 1)[1:]
        for x in np.interp(targets, cum, u):
            out.append(fn(float(x)))
        out[-1] = fn(1.0)
    return MotionPlan.from_poses(out)


def hammersley_sofa(tess: float = 1e-4, samples: int = 1000) -> tuple[SofaShape, MotionPlan]:
    """Hammersley's sofa with its standard corner motion.

    Exact shape, local frame: the block [-r, r] x [0, 1] (r = 2/pi) minus a
    radius-r half-disk notch at the origin, flanked by unit quarter-disks
    centred at (+-r, 0). The polygon is that shape eroded by tess/4, then
    tessellated at 3*tess/4 (chords on the outer arcs, tangents on the notch),
    so it lies inside the exact shape within Hausdorff distance tess and keeps
    tess/4 clearance from every wall the exact motion touches.

    The turn rotates theta from -pi/2 to 0 while (-r, 0) rides y = 0 and
    (r, 0) rides x = 0; by Thales the corner then stays on the notch circle.
    """
    if tess <= 0:
        raise ValueError("tess must be positive")
    r = 2 / math.pi
    d = tess / 4
    chord = tess - d
    R = 1.0 - d  # eroded outer arcs
    q = r + d  # eroded notch
    a_out = math.asin(d / R)
    a_in = math.asin(d / q)
    right = _arc((r, 0.0), R, a_out, math.pi / 2, chord)
    left = _arc((-r, 0.0), R, math.pi / 2, math.pi - a_out, chord)
    notch = _arc((0.0, 0.0), q, math.pi - a_in, a_in, chord, outside=True)
    verts = np.vstack([right, left, notch])
    keep = np.concatenate([[True], np.linalg.norm(np.diff(verts, axis=0), axis=1) > 1e-15])
    verts = verts[keep]
    shape = SofaShape(Polygon(tuple(Point(*p) for p in verts)), HAMMERSLEY_AREA, "hammersley")

    def approach(u):
        return (-math.pi / 2, 0.0, -r - 2 + 2 * u)

    def turn(u):
        th = -math.pi / 2 * (1 - u)
        return (th, -r * math.cos(th), r * math.sin(th))

    def leave(u):
        return (0.0, -r - 2 * u, 0.0)

    return shape, _phase_plan(verts, [approach, turn, leave], samples)


def unit_square() -> SofaShape:
    return SofaShape(Polygon(((0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0))), 1.0, "unit square")


def unit_square_plan(samples: int = 1000) -> MotionPlan:
    """Slide up into the corner square, then slide left; the square needs no rotation."""
    phases = [lambda u: (0.0, 0.0, -2.0 + 2.0 * u), lambda u: (0.0, -2.0 * u, 0.0)]
    return _phase_plan(unit_square().array(), phases, samples)


def half_disk(tess: float = 1e-4) -> SofaShape:
    arc = _arc((0.0, 0.0), 1.0, 0.0, math.pi, tess)
    return SofaShape(Polygon(tuple(Point(*p) for p in arc)), math.pi / 2, "half disk")


def half_disk_plan(tess: float = 1e-4, samples: int = 1000) -> MotionPlan:
    """Flat side on x = 0 going up, a quarter turn about the corner, then left."""
    phases = [
        lambda u: (-math.pi / 2, 0.0, -2.0 + 2.0 * u),
        lambda u: (-math.pi / 2 * (1 - u), 0.0, 0.0),
        lambda u: (0.0, -2.0 * u, 0.0),
    ]
    return _phase_plan(half_disk(tess).array(), phases, samples)


def rectangle(width: float, height: float) -> SofaShape:
    return SofaShape(Polygon(((0.0, 0.0), (width, 0.0), (width, height), (0.0, height))),
                     width * height, f"{width:g}x{height:g} rectangle")


def rectangle_battery(samples: int = 1000) -> list[tuple[str, SofaShape, MotionPlan]]:
    """Corner attempts for the 1 x 2 rectangle (long side vertical at the start)."""
    rect = rectangle(1.0, 2.0)
    v = rect.array()
    approach = lambda u: (0.0, 0.0, -3.0 + 2.0 * u)  # noqa: E731  ends with local (0, 0) at (0, -1)
    plans = [("slide up then left", [approach, lambda u: (0.0, -3.0 * u, -1.0)])]
    for p in (0.0, 0.5, 1.0):
        def turn(u, p=p):
            th = math.pi / 2 * u
            c, s = math.cos(th), math.sin(th)
            x0, y0 = -p, -1.0 - p
            return (th, p + c * x0 - s * y0, p + s * x0 + c * y0)

        th1, x1, y1 = turn(1.0)
        plans.append((f"quarter turn about ({p:g}, {p:g})",
                      [approach, turn, lambda u, x1=x1, y1=y1: (math.pi / 2, x1 - 3.0 * u, y1)]))

    return [(name, rect, _phase_plan(v, ph, samples)) for name, ph in plans]


def bracket_position(area: float) -> str:
    if area < GERVER_AREA:
        return "below Gerver"
    if area <= UPPER_BOUND_AREA:
        return "between Gerver and upper bound"
    return "above upper bound"


def sofa_report(s: SofaShape, plan: MotionPlan, step: float | None = None) -> dict:
    v = verify_motion(s, plan, step)
    area = s.area
    margins = v["sample_margins"]
    return {
        "name": s.name,
        "area": area,
        "nominal_area": s.nominal_area,
        "valid": v["valid"],
        "traversal": v["traversal"],
        "margins": {
            "min": v["min_margin"],
            "max_consecutive_change": float(np.abs(np.diff(margins)).max()) if len(margins) > 1 else 0.0,
        },
        "sampling": {"samples": v["samples"], "checked_poses": v["checked_poses"], "step": v["step"],
                     "boundary_points": v["boundary_points"]},
        "bracket_position": bracket_position(area),
        "numerical_error": bool(v["valid"] and v["traversal"] and area > UPPER_BOUND_AREA),
    }
