"""Line arrangements, Kobon triangle counting and the Furedi-Palasti construction.

A Kobon triangle is a bounded face of the arrangement whose boundary has
exactly three edges. Faces are enumerated on the planar graph obtained by
closing every ray at a bounding box that strictly contains all vertices.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from importlib import resources
from typing import Sequence

import mpmath

from .geom import Context, Line, Point, intersect, is_exact
from .jsonio import decode_lines

log = logging.getLogger(__name__)

# K(1)..K(9)
KNOWN_K = {1: 0, 2: 0, 3: 1, 4: 2, 5: 5, 6: 7, 7: 11, 8: 15, 9: 21}
# best configurations known where K(n) itself is open
BEST_KNOWN = {10: 25}


class ArrangementError(ValueError):
    pass


class ConstructionError(RuntimeError):
    pass


@dataclass(frozen=True)
class Vertex:
    point: Point
    lines: tuple[int, ...]


@dataclass(frozen=True)
class Edge:
    """Piece of ``line`` between two vertices; ``None`` marks the end of a ray."""

    line: int
    start: int | None
    end: int | None

    @property
    def is_ray(self) -> bool:
        return self.start is None or self.end is None


@dataclass(frozen=True)
class Face:
    bounded: bool
    edges: tuple[int, ...]


@dataclass
class Arrangement:
    lines: tuple[Line, ...]
    vertices: list[Vertex]
    edges: list[Edge]
    faces: list[Face]
    closure_counts: tuple[int, int, int]
    exact: bool
    merges: list[dict] = field(default_factory=list)

    @property
    def euler_characteristic(self) -> int:
        v, e, f = self.closure_counts
        return v - e + f

    @property
    def bounded_faces(self) -> list[Face]:
        return [f for f in self.faces if f.bounded]

    def face_polygon(self, face: Face) -> list[Point]:
        """Vertex points of a bounded face in boundary order."""
        pts = []
        for ei in face.edges:
            e = self.edges[ei]
            pts.append(self.vertices[e.start].point)
        return pts


def _dir_cmp(u, v) -> int:
    """Angular order of direction vectors on [0, 2*pi)."""
    hu = 0 if (u[1] > 0 or (u[1] == 0 and u[0] > 0)) else 1
    hv = 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1
    if hu != hv:
        return hu - hv
    c = u[0] * v[1] - u[1] * v[0]
    return -1 if c > 0 else (1 if c < 0 else 0)


def _check_duplicates(lines: Sequence[Line], exact: bool, snap) -> None:
    for i in range(len(lines)):
        for j in range(i + 1, len(lines)):
            a, b = lines[i], lines[j]
            if exact:
                same = (a.a, a.b, a.c) == (b.a, b.b, b.c)
            else:
                same = abs(a.a - b.a) < snap and abs(a.b - b.b) < snap and abs(a.c - b.c) < snap
            if same:
                raise ArrangementError(f"duplicate lines {i} and {j}")


def _to_context(lines: Sequence[Line], ctx: Context) -> tuple[tuple[Line, ...], bool]:
    if all(is_exact(l.a, l.b, l.c) for l in lines):
        return tuple(lines), True
    with mpmath.workprec(ctx.precision_bits):
        out = tuple(Line(ctx.scalar(l.a), ctx.scalar(l.b), ctx.scalar(l.c)) for l in lines)
    return out, False


def build_arrangement(lines: Sequence[Line], ctx: Context | None = None) -> Arrangement:
    """Full incidence structure of a finite set of distinct lines.

    Rational lines are processed exactly. Otherwise coordinates are lifted to
    mpf at the context precision and intersection points closer than the
    snapping epsilon are merged into one vertex; every merge of three or more
    lines is recorded in ``Arrangement.merges``.
    """
    if not lines:
        raise ArrangementError("an arrangement needs at least one line")
    ctx = ctx or Context()
    lines, exact = _to_context(lines, ctx)
    snap = None if exact else ctx.eps_snap
    _check_duplicates(lines, exact, snap)
    n = len(lines)

    with mpmath.workprec(ctx.precision_bits):
        raw: list[tuple[Point, int, int]] = []
        for i in range(n):
            for j in range(i + 1, n):
                p = intersect(lines[i], lines[j], ctx=ctx)
                if p is not None:
                    raw.append((p, i, j))

        # cluster intersection points into vertices
        vertices: list[Vertex] = []
        if exact:
            index: dict[Point, set[int]] = {}
            for p, i, j in raw:
                index.setdefault(p, set()).update((i, j))
            for p in sorted(index):
                vertices.append(Vertex(p, tuple(sorted(index[p]))))
        else:
            parent = list(range(len(raw)))

            def find(a):
                while parent[a] != a:
                    parent[a] = parent[parent[a]]
                    a = parent[a]
                return a

            order = sorted(range(len(raw)), key=lambda k: raw[k][0].x)
            for oi, a in enumerate(order):
                pa = raw[a][0]
                for b in order[oi + 1:]:
                    pb = raw[b][0]
                    if pb.x - pa.x >= snap:
                        break
                    if abs(pb.y - pa.y) < snap:
                        parent[find(a)] = find(b)
            groups: dict[int, list[int]] = {}
            for k in range(len(raw)):
                groups.setdefault(find(k), []).append(k)
            merges = []
            for members in groups.values():
                inc = tuple(sorted({raw[k][1] for k in members} | {raw[k][2] for k in members}))
                p = raw[members[0]][0]
                vertices.append(Vertex(p, inc))
                if len(inc) >= 3:
                    spread = max(max(abs(raw[k][0].x - p.x), abs(raw[k][0].y - p.y)) for k in members)
                    merges.append({"lines": list(inc), "point": [float(p.x), float(p.y)], "spread": float(spread)})
                    log.debug("merged near-concurrent lines %s (spread %.3g)", inc, float(spread))
            vertices.sort(key=lambda v: (v.point.x, v.point.y))
            merges.sort(key=lambda m: m["lines"])
        if exact:
            merges = []

        # edges along every line, ordered by the line parameter
        on_line: list[list[int]] = [[] for _ in range(n)]
        for vi, v in enumerate(vertices):
            for li in v.lines:
                on_line[li].append(vi)
        edges: list[Edge] = []
        line_edges: list[list[int]] = []
        for li, line in enumerate(lines):
            d = line.direction
            vs = sorted(on_line[li], key=lambda vi: vertices[vi].point.x * d.x + vertices[vi].point.y * d.y)
            on_line[li] = vs
            ids = []
            if not vs:
                ids.append(len(edges))
                edges.append(Edge(li, None, None))
            else:
                ids.append(len(edges))
                edges.append(Edge(li, None, vs[0]))
                for a, b in zip(vs, vs[1:]):
                    ids.append(len(edges))
                    edges.append(Edge(li, a, b))
                ids.append(len(edges))
                edges.append(Edge(li, vs[-1], None))
            line_edges.append(ids)

        faces, counts = _enumerate_faces(lines, vertices, edges, on_line, exact, ctx)
    return Arrangement(tuple(lines), vertices, edges, faces, counts, exact, merges)


def _box_bound(lines, vertices, exact):
    m = 0
    for v in vertices:
        m = max(m, abs(v.point.x), abs(v.point.y))
    for l in lines:
        # foot of the perpendicular from the origin keeps a lone line inside the box
        m = max(m, abs(l.c) / (l.a * l.a + l.b * l.b) * max(abs(l.a), abs(l.b)))
    if exact:
        return Fraction(int(m) + 1) * 2
    return mpmath.ceil(m) * 2 + 2


def _box_hits(line: Line, B, exact):
    """The two points where ``line`` meets the box boundary, by increasing parameter."""
    hits = []
    a, b, c = line.a, line.b, line.c
    if b != 0:
        for x in (-B, B):
            y = -(a * x + c) / b
            if -B <= y <= B:
                hits.append(Point(x, y))
    if a != 0:
        for y in (-B, B):
            x = -(b * y + c) / a
            if -B <= x <= B:
                hits.append(Point(x, y))
    d = line.direction
    uniq: dict = {}
    for p in hits:
        key = p if exact else (mpmath.nstr(p.x, 30), mpmath.nstr(p.y, 30))
        uniq.setdefault(key, p)
    pts = sorted(uniq.values(), key=lambda p: p.x * d.x + p.y * d.y)
    return pts[0], pts[-1]


def _perimeter_param(p: Point, B):
    if p.y == -B:
        return p.x + B
    if p.x == B:
        return 2 * B + p.y + B
    if p.y == B:
        return 4 * B + B - p.x
    return 6 * B + B - p.y


def _enumerate_faces(lines, vertices, edges, on_line, exact, ctx):
    B = _box_bound(lines, vertices, exact)
    nodes: list[Point] = [v.point for v in vertices]
    box_ids: dict = {}

    def box_node(p: Point) -> int:
        key = p if exact else (p.x, p.y)
        if key not in box_ids:
            box_ids[key] = len(nodes)
            nodes.append(p)
        return box_ids[key]

    for corner in (Point(-B, -B), Point(B, -B), Point(B, B), Point(-B, B)):
        box_node(corner)

    # half-edges: (tail, head, direction, edge id or -1 for box, ccw-box flag)
    graph_edges: list[tuple[int, int, tuple, int]] = []
    for ei, e in enumerate(edges):
        line = lines[e.line]
        d = line.direction
        lo, hi = _box_hits(line, B, exact)
        s = e.start if e.start is not None else box_node(lo)
        t = e.end if e.end is not None else box_node(hi)
        graph_edges.append((s, t, (d.x, d.y), ei))

    box_list = sorted(box_ids.values(), key=lambda k: _perimeter_param(nodes[k], B))
    box_edge_ids = []
    for k in range(len(box_list)):
        a, b = box_list[k], box_list[(k + 1) % len(box_list)]
        pa, pb = nodes[a], nodes[b]
        dx, dy = pb.x - pa.x, pb.y - pa.y
        box_edge_ids.append(len(graph_edges))
        graph_edges.append((a, b, (dx, dy), -1))

    # half-edge h = 2*g (forward) or 2*g+1 (backward)
    out: list[list[int]] = [[] for _ in nodes]
    hdir = {}
    for g, (s, t, d, _) in enumerate(graph_edges):
        out[s].append(2 * g)
        hdir[2 * g] = d
        out[t].append(2 * g + 1)
        hdir[2 * g + 1] = (-d[0], -d[1])
    pos = {}
    for node, hs in enumerate(out):
        hs.sort(key=cmp_to_key(lambda h1, h2: _dir_cmp(hdir[h1], hdir[h2])))
        for k, h in enumerate(hs):
            pos[h] = (node, k)

    def head(h):
        s, t, _, _ = graph_edges[h // 2]
        return t if h % 2 == 0 else s

    seen = set()
    faces: list[Face] = []
    nfaces = 0
    for h0 in range(2 * len(graph_edges)):
        if h0 in seen:
            continue
        cycle = []
        h = h0
        while h not in seen:
            seen.add(h)
            cycle.append(h)
            v = head(h)
            twin = h ^ 1
            _, k = pos[twin]
            h = out[v][(k - 1) % len(out[v])]
        nfaces += 1
        real = [graph_edges[x // 2][3] for x in cycle if graph_edges[x // 2][3] >= 0]
        box_half = [x for x in cycle if graph_edges[x // 2][3] < 0]
        if box_half and all(x % 2 == 1 for x in box_half) and len(real) == 0:
            continue  # outer face beyond the box
        bounded = not box_half
        faces.append(Face(bounded, tuple(real)))
    counts = (len(nodes), len(graph_edges), nfaces)
    return faces, counts


def count_triangles(arr: Arrangement) -> int:
    """Number of bounded faces with exactly three edges (uncut triangles)."""
    return sum(1 for f in arr.faces if f.bounded and len(f.edges) == 3)


def triangles(arr: Arrangement) -> list[list[Point]]:
    return [arr.face_polygon(f) for f in arr.faces if f.bounded and len(f.edges) == 3]


def furedi_palasti(n: int, ctx: Context | None = None) -> list[Line]:
    """n lines through diagonals of the regular 2n-gon.

    Line k joins polygon vertices 2k and 3 - 4k (mod 2n), an even and an odd
    vertex, so no chord degenerates; the family is tangent to a deltoid. The
    result is checked against floor(n(n-3)/3).
    """
    if n < 3:
        raise ValueError("furedi_palasti needs n >= 3")
    ctx = ctx or Context()
    with mpmath.workprec(ctx.precision_bits):
        verts = [Point(mpmath.cospi(mpmath.mpf(k) / n), mpmath.sinpi(mpmath.mpf(k) / n)) for k in range(2 * n)]
        lines = []
        for k in range(n):
            lines.append(Line.through(verts[2 * k % (2 * n)], verts[(3 - 4 * k) % (2 * n)]))
    arr = build_arrangement(lines, ctx)
    got = count_triangles(arr)
    need = n * (n - 3) // 3
    if got < need:
        raise ConstructionError(f"Furedi-Palasti rule gave {got} < {need} triangles for n={n}")
    return lines


@dataclass(frozen=True)
class KobonBounds:
    n: int
    lower: int
    upper: int
    known: int | None = None

    def to_json(self) -> dict:
        out = {"n": self.n, "lower": self.lower, "upper": self.upper}
        if self.known is not None:
            out["known"] = self.known
        return out


def kobon_bounds(n: int, mod6_correction: bool = False) -> KobonBounds:
    """Lower bound floor(n(n-3)/3), upper bound floor(n(n-2)/3).

    With ``mod6_correction`` the upper bound drops by one when n = 0 or 2 mod 6
    (the sharper Clement-Bader form).
    """
    if n < 1:
        raise ValueError("n must be positive")
    lower = max(0, n * (n - 3) // 3)
    upper = max(0, n * (n - 2) // 3)
    if mod6_correction and n % 6 in (0, 2) and upper > 0:
        upper -= 1
    return KobonBounds(n, lower, upper, KNOWN_K.get(n))


def best_known(n: int) -> int | None:
    return KNOWN_K.get(n, BEST_KNOWN.get(n))


def verify_configuration(lines: Sequence[Line], ctx: Context | None = None) -> dict:
    arr = build_arrangement(lines, ctx)
    count = count_triangles(arr)
    bounds = kobon_bounds(len(lines))
    best = best_known(len(lines))
    report = {
        "n": len(lines),
        "triangle_count": count,
        "bounds": bounds.to_json(),
        "is_record": best is not None and count > best,
        "exact": arr.exact,
    }
    if arr.merges:
        report["merges"] = arr.merges
    return report


def load_fixture(n: int) -> list[Line]:
    """Bundled best-known configuration with ``n`` lines."""
    with resources.files("planelab.data").joinpath(f"kobon_{n}.json").open() as fh:
        data = json.load(fh)
    return decode_lines(data)
