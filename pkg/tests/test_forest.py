import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from planelab import forest
from planelab.geom import Point, Polygon, RigidMotion, regular_polygon

pts_st = st.lists(st.tuples(st.floats(-2, 2), st.floats(-2, 2)), min_size=2, max_size=6).filter(
    lambda pts: all(np.hypot(a[0] - b[0], a[1] - b[1]) > 1e-6 for a, b in zip(pts, pts[1:])))


def _path(pts):
    return forest.EscapePath.from_points(pts)


@settings(max_examples=50, deadline=None)
@given(pts_st, st.floats(0.05, 3))
def test_strip_certifier_matches_width_oracle(pts, width):
    arr = np.array(pts)
    try:
        w = oracles.hull_width(arr)
    except Exception:  # collinear clouds have width 0
        w = 0.0
    if abs(w - width) < 1e-9:
        return
    assert forest.strip_escape_certifies(_path(pts), width) == (w > width)


@settings(max_examples=30, deadline=None)
@given(pts_st, st.floats(0.05, 2), st.floats(0.05, 2))
def test_certifier_monotone_in_width(pts, w1, w2):
    lo, hi = sorted((w1, w2))
    p = _path(pts)
    if forest.strip_escape_certifies(p, hi):
        assert forest.strip_escape_certifies(p, lo)


def test_certifier_rigid_invariance():
    pts = np.array([[0, 0], [1, 0], [1, 1], [0, 1], [0, 0]], dtype=float)
    for theta in np.linspace(0, math.pi, 7):
        moved = RigidMotion(theta, 3.0, -1.0).apply_array(pts)
        assert forest.strip_escape_certifies(_path(moved), 1.0 - 1e-9)
        assert not forest.strip_escape_certifies(_path(moved), 1.0 + 1e-6)


def test_fatness():
    assert forest.is_fat_forest(forest.Forest.from_polygon(regular_polygon(256, 1.0))) == pytest.approx(2.0)
    thin = Polygon((Point(0, 0), Point(4, 0), Point(4, 0.2), Point(0, 0.2)))
    assert forest.is_fat_forest(forest.Forest.from_polygon(thin)) is None
    h = 1 / (2 * math.sqrt(3))
    rhombus = Polygon((Point(0, 0), Point(0.5, -h), Point(1, 0), Point(0.5, h)))
    assert forest.is_fat_forest(forest.Forest.from_polygon(rhombus)) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        forest.is_fat_forest(forest.Forest.strip(1))


def test_best_path_for_fat_forest():
    p = forest.best_path_fat(2.0)
    assert p.length == pytest.approx(2.0)
    with pytest.raises(ValueError):
        forest.best_path_fat(0)


def test_strip_falsifier():
    strip = forest.Forest.strip(1.0)
    square = _path([[0, 0], [1.2, 0], [1.2, 1.2], [0, 1.2]])
    assert forest.escape_falsify(strip, square) is None
    trap = forest.escape_falsify(strip, _path([[0, 0], [5, 0.5]]))
    assert trap is not None and trap.margin > 0


def test_trap_placement_is_inside():
    disk = forest.Forest.from_polygon(regular_polygon(512, 1.0))
    p = _path([[0, 0], [1.0, 0], [1.0, 0.6]])
    trap = forest.escape_falsify(disk, p, samples=90)
    assert trap is not None
    placed = trap.motion.apply_array(p.array())
    assert oracles.covered(regular_polygon(512, 1.0).array(), placed, 0.0)


def test_forest_validation():
    with pytest.raises(ValueError):
        forest.Forest.strip(0)
    with pytest.raises(ValueError):
        forest.EscapePath.from_points([[1, 1], [1, 1]])
