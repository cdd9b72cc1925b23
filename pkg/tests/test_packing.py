import math

import numpy as np
import pytest

import oracles
from planelab import packing


@pytest.mark.parametrize("k", [1, 2, 3, 4, 6])
def test_hexagonal_packing_is_valid(k):
    inst = packing.optimal_triangular_packing(k)
    assert inst.n == k * (k + 1) // 2
    assert inst.side == pytest.approx(oracles.hex_packing_side(k), abs=1e-12)
    assert packing.verify_packing(inst)["valid"]
    wall, pair = oracles.triangle_clearances(inst.side, inst.array())
    assert wall >= -1e-12 and pair >= -1e-12


def test_hexagonal_packing_is_tight():
    inst = packing.optimal_triangular_packing(3)
    assert packing.verify_packing(inst)["worst_margin"] == pytest.approx(0, abs=1e-12)
    assert not packing.verify_packing(packing.PackingInstance(inst.side - 1e-3, inst.centers))["valid"]


def test_verify_detects_overlap():
    inst = packing.PackingInstance(20.0, ((5.0, 2.0), (6.0, 2.0)))
    report = packing.verify_packing(inst)
    assert not report["valid"] and report["worst_margin"] == pytest.approx(-1.0)
    with pytest.raises(ValueError):
        packing.verify_packing(packing.PackingInstance(5.0, ()))


def test_json_roundtrip():
    inst = packing.optimal_triangular_packing(3)
    assert packing.PackingInstance.from_json(inst.to_json()) == inst


def test_triangular_index():
    assert packing.triangular_index(10).k == 4
    assert packing.triangular_index(11) is None
    assert packing.triangular_index(0) is None


def test_two_circles_match_three():
    inst = packing.optimize_packing(2, seed=3)
    assert inst.side == pytest.approx(2 + 2 * math.sqrt(3), abs=1e-3)
    assert packing.verify_packing(inst)["valid"]


def test_optimizer_is_seed_deterministic():
    a = packing.optimize_packing(4, seed=7, budget=40000)
    b = packing.optimize_packing(4, seed=7, budget=40000)
    assert a == b
    wall, pair = oracles.triangle_clearances(a.side, a.array())
    assert min(wall, pair) >= -1e-7


def test_enlarged_keeps_validity():
    inst = packing.optimal_triangular_packing(2).enlarged(8.0)
    assert inst.side == 8.0 and packing.verify_packing(inst)["valid"]
    assert np.allclose(inst.without(0).array(), inst.array()[1:])


def test_budget_errors():
    with pytest.raises(packing.PackingSearchError):
        packing.optimize_packing(3, budget=1)
    with pytest.raises(ValueError):
        packing.optimize_packing(0)
    with pytest.raises(ValueError):
        packing.erdos_oler_check(1)
