import math

import numpy as np
import pytest
import shapely

import oracles
from planelab import sofa
from planelab.geom import Point, Polygon


def test_hallway_membership():
    assert sofa.hallway_contains((0.5, -10)) and sofa.hallway_contains((-10, 0.5))
    assert sofa.hallway_contains((1, 1)) and sofa.hallway_contains((0, 0))
    assert not sofa.hallway_contains((-0.1, -0.1))
    assert not sofa.hallway_contains((1.01, 0.5))


def test_hallway_margin_sign_and_bound():
    rng = np.random.default_rng(2)
    pts = rng.uniform(-3, 1.5, size=(2000, 2))
    margin = sofa.hallway_margin(pts)
    hall = oracles.hallway(10)
    for p, m in zip(pts, margin):
        q = shapely.Point(p)
        if abs(m) < 1e-12:
            continue
        assert (m > 0) == hall.contains(q)
        if m > 0:
            assert m <= hall.exterior.distance(q) + 1e-12


def test_shape_and_plan_roundtrip():
    shape = sofa.unit_square()
    assert sofa.SofaShape.from_json(shape.to_json()).array().tolist() == shape.array().tolist()
    plan = sofa.unit_square_plan(50)
    back = sofa.MotionPlan.from_json(plan.to_json())
    assert np.array_equal(back.poses(), plan.poses()) and np.array_equal(back.times(), plan.times())


def test_plan_validation():
    with pytest.raises(sofa.PlanError):
        sofa.MotionPlan.from_poses([[0, 0, 0], [0, 1, 0]], times=[0.0, 0.5])
    with pytest.raises(sofa.PlanError):
        sofa.MotionPlan.from_poses([[0, 0, 0], [0, 1, 0], [0, 2, 0]], times=[0.0, 0.7, 0.7])


def test_teleport_rejected():
    plan = sofa.MotionPlan.from_poses([[0, 0, -3], [0, 0, -3.0001], [0, -3, 0]])
    with pytest.raises(sofa.PlanError):
        sofa.verify_motion(sofa.unit_square(), plan, step=1e-3)


def test_half_disk_traverses():
    shape, plan = sofa.half_disk(1e-4), sofa.half_disk_plan(1e-4)
    v = sofa.verify_motion(shape, plan)
    assert v["valid"] and v["traversal"]
    assert shape.area == pytest.approx(math.pi / 2, abs=(math.pi + 2) * 1e-4)


def test_hammersley_area_converges():
    errors = [abs(sofa.hammersley_sofa(tess=t, samples=200)[0].area - oracles.hammersley_area()) for t in (1e-2, 1e-3, 1e-4)]
    assert errors[0] > errors[1] > errors[2]
    assert errors[2] <= 1e-3


def test_shifted_plan_fails():
    plan = sofa.unit_square_plan(400)
    shifted = sofa.MotionPlan.from_poses(plan.poses() + [0, 0.01, 0], plan.times())
    v = sofa.verify_motion(sofa.unit_square(), shifted)
    assert not v["valid"] and v["min_margin"] == pytest.approx(-0.01, abs=1e-9)


@pytest.mark.parametrize("alpha", [0.3, -1.1, math.pi])
def test_verify_invariant_under_body_frame_rotation(alpha):
    shape, plan = sofa.hammersley_sofa(tess=1e-3, samples=400)
    c, s = math.cos(alpha), math.sin(alpha)
    body = shape.array() @ np.array([[c, s], [-s, c]])
    turned = sofa.SofaShape(Polygon(tuple(Point(*p) for p in body)), shape.nominal_area)
    poses = plan.poses() - [alpha, 0, 0]
    a = sofa.verify_motion(shape, plan)
    b = sofa.verify_motion(turned, sofa.MotionPlan.from_poses(poses, plan.times()), step=a["step"])
    assert a["valid"] == b["valid"] and a["traversal"] == b["traversal"]
    assert b["min_margin"] == pytest.approx(a["min_margin"], abs=1e-6)


def test_brackets():
    assert sofa.bracket_position(2.0) == "below Gerver"
    assert sofa.bracket_position(2.3) == "between Gerver and upper bound"
    assert sofa.bracket_position(2.5) == "above upper bound"


def test_report_fields():
    rep = sofa.sofa_report(sofa.unit_square(), sofa.unit_square_plan())
    assert rep["valid"] and rep["traversal"] and rep["area"] == pytest.approx(1.0)
    assert rep["bracket_position"] == "below Gerver" and not rep["numerical_error"]
    assert rep["sampling"]["samples"] == 1000


def test_battery_shapes_are_1x2():
    battery = sofa.rectangle_battery()
    assert len(battery) == 4
    for name, shape, plan in battery:
        v = sofa.verify_motion(shape, plan)
        assert not v["valid"], name
