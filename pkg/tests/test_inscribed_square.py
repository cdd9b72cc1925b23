import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from planelab import inscribed_square as isq
from planelab.geom import RigidMotion


@settings(max_examples=100, deadline=None)
@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(0.01, 10), st.floats(-math.pi, math.pi),
       st.floats(-0.05, 0.05))
def test_is_square_matches_oracle(cx, cy, side, theta, wobble):
    z0 = complex(cx, cy)
    rot = complex(math.cos(theta), math.sin(theta)) * side
    corners = [z0, z0 + rot, z0 + rot * (1 + 1j), z0 + rot * 1j]
    corners[2] += wobble * side
    pts = [(z.real, z.imag) for z in corners]
    check = isq.is_square(*pts, tol=1e-6)
    if abs(wobble) > 1e-5:
        assert not check.flag
    if abs(wobble) < 1e-9:
        assert check.flag
    assert check.flag == oracles.is_square_oracle(pts, 1e-6) or abs(wobble) < 1e-5


def test_is_square_rejects_rhombus_and_point():
    assert not isq.is_square((0, 0), (1, 0), (1.5, 0.8), (0.5, 0.8)).flag
    assert not isq.is_square((0, 0), (0, 0), (0, 0), (0, 0)).flag


def test_curve_orientation_and_validation():
    cw = isq.ClosedCurve([[0, 0], [0, 1], [1, 1], [1, 0]])
    assert cw.vertices[0].tolist() == [0, 0]
    x, y = cw.vertices[:, 0], cw.vertices[:, 1]
    assert np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y) > 0
    with pytest.raises(ValueError):
        isq.ClosedCurve([[0, 0], [1, 1], [1, 0], [0, 1]])
    closed = isq.ClosedCurve([[0, 0], [1, 0], [1, 1], [0, 0]])
    assert len(closed) == 3


def test_point_at_and_length():
    sq = isq.ClosedCurve([[0, 0], [1, 0], [1, 1], [0, 1]])
    assert sq.length == pytest.approx(4.0)
    assert np.allclose(sq.point_at(np.array([0.0, 0.125, 0.5, 0.999999])), [[0, 0], [0.5, 0], [1, 1], [0, 4e-6]],
                       atol=1e-9)


def test_circle_family_and_side():
    res = isq.square_search(isq.circle_curve(1024), grid=32)
    assert res.family_detected
    best = res.candidates[0]
    assert best.side == pytest.approx(math.sqrt(2), abs=1e-3)
    assert oracles.is_square_oracle(best.vertices, 1e-6)


def test_scaling_equivariance():
    base = isq.ellipse_curve(1024)
    a = isq.find_inscribed_squares(base, grid=32)[0]
    b = isq.find_inscribed_squares(base.scaled(2.5), grid=32)[0]
    assert b.side == pytest.approx(2.5 * a.side, rel=1e-6)


@pytest.mark.parametrize("theta,tx,ty", [(0.4, 1.0, -2.0), (2.0, -3.0, 0.5)])
def test_rigid_equivariance(theta, tx, ty):
    m = RigidMotion(theta, tx, ty)
    base = isq.ellipse_curve(1024)
    a = isq.find_inscribed_squares(base, grid=32)[0]
    moved = isq.find_inscribed_squares(base.transformed(m), grid=32)
    assert moved
    mapped = m.apply_array(np.array(a.vertices))
    target = np.mean(mapped, axis=0)
    best = min(moved, key=lambda c: np.linalg.norm(np.mean(c.vertices, axis=0) - target))
    assert best.side == pytest.approx(a.side, rel=1e-6)
    assert np.linalg.norm(np.mean(best.vertices, axis=0) - target) < 1e-5


def test_resampling_invariance():
    base = isq.ellipse_curve(1024)
    a = isq.find_inscribed_squares(base, grid=32)[0]
    b = isq.find_inscribed_squares(base.refined(2), grid=32)[0]
    assert b.side == pytest.approx(a.side, rel=1e-6)


def test_nonconvex_candidates_verify():
    curve = isq.load_curve("arrow")
    cands = isq.find_inscribed_squares(curve)
    assert cands
    for c in cands:
        assert c.residual <= 1e-6 and isq.verify_candidate(curve, c)
        assert oracles.is_square_oracle(c.vertices, 1e-6)


def test_verify_rejects_perturbed_candidate():
    curve = isq.load_curve("arrow")
    c = isq.find_inscribed_squares(curve)[0]
    bad = isq.SquareCandidate((c.params[0] + 0.01,) + tuple(c.params[1:]), c.vertices, c.side, c.residual)
    assert not isq.verify_candidate(curve, bad)


def test_candidate_json():
    c = isq.find_inscribed_squares(isq.load_curve("arrow"))[0]
    data = c.to_json()
    assert set(data) == {"params", "vertices", "side", "residual"} and len(data["vertices"]) == 4
