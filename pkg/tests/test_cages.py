import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from planelab import cages
from planelab.geom import Point, Polygon, RigidMotion


def test_worm_normalized_to_unit_length():
    w = cages.Worm.from_points([[0, 0], [3, 0], [3, 4]])
    assert w.length == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(w.arclength_midpoint(), [3 / 7, 1 / 14])
    with pytest.raises(ValueError):
        cages.Worm.from_points([[1, 1], [1, 1]])


def test_random_worms_are_reproducible_unit_curves():
    a, b = cages.random_worm(5, 20), cages.random_worm(5, 20)
    assert np.array_equal(a.array(), b.array())
    assert len(a.array()) == 21 and a.length == pytest.approx(1.0, abs=1e-12)


def test_three_segment_family():
    family = cages.three_segment_worms(10)
    assert len(family) == 3691
    assert all(2 <= len(w.array()) <= 4 and abs(w.length - 1) < 1e-12 for w in family)
    # one straight segment, 90 two-segment chains, the rest genuinely three segments
    assert sorted(len(w.array()) for w in family)[:91] == [2] + [3] * 90


def test_areas_closed_forms():
    assert cages.cage_area(cages.Cage.disk(1)) == pytest.approx(math.pi / 4)
    assert cages.cage_area(cages.Cage.rhombus(1, 1 / math.sqrt(3))) == pytest.approx(1 / (2 * math.sqrt(3)))
    assert cages.cage_area(cages.Cage.sector(math.pi / 6)) == pytest.approx(math.pi / 12)
    sq = cages.Cage.from_polygon(Polygon((Point(0, 0), Point(2, 0), Point(2, 1), Point(0, 1))))
    assert float(cages.cage_area(sq)) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        cages.Cage.sector(4.0)


def test_sector_cage_holds_random_worms():
    c = cages.Cage.sector(math.pi / 6)
    outline = c.outline(4096)
    for seed in range(25):
        w = cages.random_worm(seed, 8)
        f = cages.fit(w, c)
        assert f.found
        # the sampled arc lies inside the true sector, so allow its sagitta
        assert oracles.covered(outline, cages.placed_worm(w, f.motion).array(), 1e-6)


def test_small_cages_are_falsified_by_the_segment():
    family = [cages.Worm.from_points([[0, 0], [1, 0]]), cages.random_worm(0, 5)]
    for c in (cages.Cage.disk(0.5), cages.Cage.square(0.4), cages.Cage.rhombus(0.9, 0.9 / math.sqrt(3))):
        bad = cages.cage_falsify(c, family)
        assert bad is not None and bad.index == 0
        assert bad.margin < 0 and bad.escalated_margin < 0
    assert cages.cage_falsify(cages.Cage.disk(1), family) is None


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 12), st.floats(-math.pi, math.pi), st.floats(-5, 5))
def test_fit_is_rigid_motion_invariant(seed, segments, theta, shift):
    w = cages.random_worm(seed, segments)
    moved = cages.Worm.from_points(RigidMotion(theta, shift, -shift).apply_array(w.array()))
    for c in (cages.Cage.rhombus(1, 1 / math.sqrt(3)), cages.Cage.square(0.6)):
        a, b = cages.fit(w, c), cages.fit(moved, c)
        assert a.found == b.found
        if b.found:
            assert oracles.covered(c.outline(), cages.placed_worm(moved, b.motion).array(), 1e-9)


def test_found_monotone_in_scale():
    w = cages.Worm.from_points([[0, 0], [0.5, 0.3], [1, 0]])
    # the minimum enclosing circle of this worm has diameter about 0.8575
    found = [cages.fit(w, cages.Cage.disk(d)).found for d in (0.7, 0.85, 0.86, 1.0, 1.2)]
    assert found == [False, False, True, True, True]


def test_sweep_report_shape():
    family = [cages.random_worm(s, 3) for s in range(5)]
    out = cages.sweep(cages.Cage.disk(1), family)
    assert out["worms"] == 5 and out["accommodated"] == 5 and out["failed"] == []
    assert out["cage"] == {"kind": "disk", "diameter": 1.0}
