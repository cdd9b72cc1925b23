import math
from fractions import Fraction

import numpy as np
import pytest
import shapely
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from planelab.geom import (CCW, COLLINEAR, CW, Context, DegenerateHull, Line, Point, Polygon, RigidMotion,
                           convex_hull, diameter, intersect, min_width, orientation, points_in_polygon,
                           polygon_area, polygon_is_simple, regular_polygon, signed_distance_polygon)

coords = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
clouds = st.lists(st.tuples(coords, coords), min_size=3, max_size=25)


def test_orientation_exact():
    p, q = Point(Fraction(0), Fraction(0)), Point(Fraction(1), Fraction(1, 3))
    assert orientation(p, q, Point(Fraction(3), Fraction(1))) == COLLINEAR
    assert orientation(p, q, Point(Fraction(3), Fraction(1) + Fraction(1, 10**30))) == CCW
    assert orientation(p, q, Point(Fraction(3), Fraction(1) - Fraction(1, 10**30))) == CW


def test_orientation_float_eps():
    p, q, r = Point(0.0, 0.0), Point(1.0, 0.0), Point(0.5, 1e-13)
    assert orientation(p, q, r, eps=1e-9) == COLLINEAR
    ctx = Context(precision_bits=128)
    mp = [ctx.point(v) for v in (p, q, r)]
    assert orientation(*mp, ctx=ctx) == CCW


def test_line_canonical_form():
    assert Line(2, 4, -6) == Line(-1, -2, 3)
    with pytest.raises(ValueError):
        Line(0, 0, 1)


def test_intersect():
    assert intersect(Line(1, 0, -2), Line(0, 1, -3)) == Point(2, 3)
    assert intersect(Line(1, 1, 0), Line(2, 2, 5)) is None


def test_hull_and_degenerate():
    pts = [Point(0, 0), Point(2, 0), Point(2, 2), Point(0, 2), Point(1, 1)]
    hull = convex_hull(pts)
    assert isinstance(hull, Polygon) and len(hull.vertices) == 4
    assert polygon_area(hull) == 4
    assert isinstance(convex_hull([Point(0, 0), Point(1, 1), Point(2, 2)]), DegenerateHull)


@settings(max_examples=60, deadline=None)
@given(clouds)
def test_width_and_diameter_match_oracle(pts):
    arr = np.array(pts)
    if np.linalg.matrix_rank(arr[1:] - arr[0], tol=1e-6) < 2:
        return
    try:
        oracle_w = oracles.hull_width(arr)
    except Exception:  # qhull rejects near-degenerate clouds
        return
    w = min_width([Point(*p) for p in pts])
    assert w == pytest.approx(oracle_w, rel=1e-9, abs=1e-9)
    d, _, _ = diameter([Point(*p) for p in pts])
    assert d == pytest.approx(oracles.hull_diameter(arr), rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(clouds, st.floats(-math.pi, math.pi), coords, coords)
def test_width_rigid_invariance(pts, theta, tx, ty):
    m = RigidMotion(theta, tx, ty)
    moved = m.apply_array(np.array(pts))
    a = min_width([Point(*p) for p in pts])
    b = min_width([Point(*p) for p in moved])
    assert b == pytest.approx(a, abs=1e-9)


def test_motion_compose_inverse():
    m = RigidMotion(0.7, 1.5, -2.0)
    ident = m.compose(m.inverse())
    pts = np.random.default_rng(0).normal(size=(10, 2))
    assert np.allclose(ident.apply_array(pts), pts, atol=1e-12)


def test_exact_rotation_stays_rational():
    m = RigidMotion.from_rotation(Fraction(3, 5), Fraction(4, 5), Fraction(1), Fraction(0))
    p = m.apply_point(Point(Fraction(1), Fraction(2)))
    assert p == Point(Fraction(3, 5) - Fraction(8, 5) + 1, Fraction(4, 5) + Fraction(6, 5))
    with pytest.raises(ValueError):
        RigidMotion.from_rotation(Fraction(1, 2), Fraction(1, 2))


def test_simplicity():
    assert polygon_is_simple(Polygon((Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1))))
    assert not polygon_is_simple(Polygon((Point(0, 0), Point(2, 2), Point(2, 0), Point(0, 1))))


def test_point_queries_match_shapely():
    poly = np.array([[0, 0], [4, 0], [4, 3], [2, 1.2], [0, 3]], dtype=float)
    rng = np.random.default_rng(1)
    pts = rng.uniform(-1, 5, size=(300, 2))
    shp = shapely.Polygon(poly)
    inside = np.array([shp.contains(shapely.Point(p)) for p in pts])
    assert np.array_equal(points_in_polygon(pts, poly), inside)
    dist = np.array([shp.exterior.distance(shapely.Point(p)) for p in pts])
    sd = signed_distance_polygon(pts, poly)
    assert np.allclose(np.abs(sd), dist, atol=1e-12)
    assert np.all((sd > 0) == inside)


def test_regular_polygon_area():
    assert float(polygon_area(regular_polygon(4096))) == pytest.approx(math.pi, abs=2e-6)
