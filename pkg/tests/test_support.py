"""SVG output, JSON codecs, the parallel map and the placement engine."""

import math
import xml.etree.ElementTree as ET
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from planelab import jsonio, parallel, placement
from planelab.geom import Line, RigidMotion
from planelab.svg import Figure


def test_svg_viewbox_contains_geometry():
    fig = Figure().polygon([[0, 0], [3, 0], [3, 2]]).polyline([[-1, -1], [4, 5]]).points([[2, 2]])
    root = ET.fromstring(fig.to_string())
    x, y, w, h = map(float, root.get("viewBox").split())
    assert x <= -1 and x + w >= 4
    # y is flipped on output
    assert y <= -5 and y + h >= 1
    assert {el.tag.split("}")[1] for el in root} == {"polygon", "polyline", "circle"}


def test_svg_empty_figure_is_valid():
    assert ET.fromstring(Figure().to_string()).get("viewBox")


def test_scalar_codec():
    assert jsonio.decode_scalar("3/4") == Fraction(3, 4)
    assert jsonio.decode_scalar(0.1) == Fraction("0.1")
    assert jsonio.decode_scalar(2, exact=False) == 2.0
    assert jsonio.encode_scalar(Fraction(6, 3)) == 2
    assert jsonio.encode_scalar(Fraction(1, 3)) == "1/3"
    assert jsonio.encode_scalar(mpmath.mpf(1) / 3).startswith("0.333333")
    with pytest.raises(TypeError):
        jsonio.decode_scalar(True)
    with pytest.raises(ValueError):
        jsonio.encode_scalar(float("nan"))


def test_line_and_motion_codec():
    l = Line(Fraction(1, 2), Fraction(-3), Fraction(5, 7))
    assert jsonio.decode_line(jsonio.encode_line(l)) == l
    m = RigidMotion(0.5, 1.25, -2.0)
    assert jsonio.decode_motion(jsonio.encode_motion(m)) == m


def test_dumps_is_canonical():
    a = jsonio.dumps({"b": 1, "a": [1.5, {"z": 0, "y": 1}]})
    b = jsonio.dumps({"a": [1.5, {"y": 1, "z": 0}], "b": 1})
    assert a == b and a.endswith("\n")
    with pytest.raises(ValueError):
        jsonio.dumps({"x": float("inf")})


def test_pmap_preserves_order(monkeypatch):
    monkeypatch.setenv("PLANELAB_THREADS", "8")
    assert parallel.pmap(lambda i: i * i, range(50)) == [i * i for i in range(50)]
    monkeypatch.setenv("PLANELAB_THREADS", "junk")
    assert parallel.thread_count() == 1
    monkeypatch.delenv("PLANELAB_THREADS")
    assert parallel.thread_count() == 1


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.floats(-3, 3), st.floats(-3, 3)), min_size=1, max_size=30))
def test_min_enclosing_circle(pts):
    arr = np.array(pts)
    center, r = placement.min_enclosing_circle(arr)
    assert np.hypot(*(arr - center).T).max() <= r + 1e-9
    # no smaller circle centered at any input point or pair midpoint beats it
    cands = [arr[i] for i in range(len(arr))] + [(arr[i] + arr[j]) / 2 for i in range(len(arr))
                                                 for j in range(i + 1, len(arr))]
    assert all(np.hypot(*(arr - c).T).max() >= r - 1e-9 for c in cands)


def test_halfplane_translation_is_optimal():
    square = np.array([[0, 0], [1, 0], [1, 1], [0, 1]], dtype=float)
    region = placement.HalfPlaneRegion.from_polygon(square)
    seg = np.array([[[0.0, 0.0], [0.5, 0.0]]])
    margins, t = region.best_translations(seg)
    assert margins[0] == pytest.approx(0.25)
    assert region.margin(seg[0] + t[0]).min() == pytest.approx(0.25)


def test_many_edged_region_beats_translation_grid():
    poly = np.array([[math.cos(a), math.sin(a)] for a in np.linspace(0, 2 * math.pi, 40, endpoint=False)])
    region = placement.HalfPlaneRegion.from_polygon(poly)
    worm = np.array([[0.1, 0.2], [1.1, 0.25], [0.9, 0.9]]) - 0.4
    margins, t = region.best_translations(worm[None])
    placed = worm + t[0]
    assert region.margin(placed).min() == pytest.approx(margins[0], abs=1e-12)
    # edge distances of a convex polygon: recompute from the vertices directly
    edges = np.roll(poly, -1, axis=0) - poly
    normals = np.column_stack([-edges[:, 1], edges[:, 0]]) / np.hypot(*edges.T)[:, None]
    g = np.linspace(-0.3, 0.3, 121)
    best = -np.inf
    for dx in g:
        for dy in g:
            q = worm + t[0] + (dx, dy)
            best = max(best, float((((q[:, None, :] - poly[None]) * normals[None]).sum(-1)).min()))
    assert margins[0] >= best - 1e-12


def test_search_placement_matches_shapely():
    tri = np.array([[0, 0], [2, 0], [1, 1.2]], dtype=float)
    region = placement.PolygonRegion(tri)
    worm = np.array([[0, 0], [0.6, 0.2], [1.1, 0.0]])
    best = placement.search_placement(worm, region, grid=180)
    assert best.margin > 0
    m = RigidMotion(best.theta, best.tx, best.ty)
    assert oracles.covered(tri, m.apply_array(worm), 0.0)


def test_sector_region_exact_recheck():
    region = placement.SectorRegion(math.pi / 6, 1.0)
    inside = np.array([[0.5, 0.0], [0.9, 0.1]])
    outside = np.array([[1.01, 0.0]])
    assert region.margin(inside).min() >= 0
    assert region.margin(outside).max() < 0


def test_strip_region():
    region = placement.StripRegion(1.0)
    rotated = placement.rotate(np.array([[0, 0], [0, 2.0]]), np.array([0.0, math.pi / 2]))
    margins, _ = region.best_translations(rotated)
    assert margins[0] < 0 and margins[1] == pytest.approx(0.5)
