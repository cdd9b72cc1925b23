"""Unit circles packed in an equilateral triangle.

The triangle has its base on the x-axis, apex up and left vertex at the
origin; the side length is the only free size since every radius is 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .parallel import pmap

SQRT3 = math.sqrt(3.0)
INCIRCLE_SIDE = 2.0 * SQRT3  # smallest triangle containing one unit circle


class PackingSearchError(RuntimeError):
    pass


@dataclass(frozen=True)
class PackingInstance:
    side: float
    centers: tuple[tuple[float, float], ...]

    @classmethod
    def from_array(cls, side: float, centers: np.ndarray) -> "PackingInstance":
        return cls(float(side), tuple((float(x), float(y)) for x, y in np.asarray(centers)))

    def array(self) -> np.ndarray:
        return np.array(self.centers, dtype=float).reshape(-1, 2)

    @property
    def n(self) -> int:
        return len(self.centers)

    def enlarged(self, side: float) -> "PackingInstance":
        """Same circles in a larger triangle, shifted so the incenter is kept."""
        d = side - self.side
        return PackingInstance.from_array(side, self.array() + np.array([d / 2, d / (2 * SQRT3)]))

    def without(self, index: int) -> "PackingInstance":
        return PackingInstance(self.side, self.centers[:index] + self.centers[index + 1:])

    def to_json(self) -> dict:
        return {"side": self.side, "centers": [list(c) for c in self.centers]}

    @classmethod
    def from_json(cls, data: dict) -> "PackingInstance":
        return cls(float(data["side"]), tuple((float(x), float(y)) for x, y in data["centers"]))


@dataclass(frozen=True)
class TriangularNumber:
    k: int

    @property
    def value(self) -> int:
        return self.k * (self.k + 1) // 2


def _slacks(side: float, c: np.ndarray) -> np.ndarray:
    x, y = c[:, 0], c[:, 1]
    walls = np.concatenate([y - 1.0, (SQRT3 * x - y) / 2 - 1.0, (SQRT3 * (side - x) - y) / 2 - 1.0])
    if len(c) < 2:
        return walls
    i, j = np.triu_indices(len(c), 1)
    pair = np.hypot(c[i, 0] - c[j, 0], c[i, 1] - c[j, 1]) - 2.0
    return np.concatenate([walls, pair])


def verify_packing(inst: PackingInstance, tol: float = 1e-7) -> dict:
    """Containment and non-overlap check; worst_margin < 0 measures the violation."""
    if inst.n < 1:
        raise ValueError("a packing needs at least one circle")
    worst = float(_slacks(inst.side, inst.array()).min())
    return {"valid": worst >= -tol, "worst_margin": worst}


def triangular_index(n: int) -> TriangularNumber | None:
    if n < 1:
        return None
    k = (math.isqrt(8 * n + 1) - 1) // 2
    return TriangularNumber(k) if k * (k + 1) // 2 == n else None


def optimal_triangular_packing(k: int) -> PackingInstance:
    """Hexagonal arrangement of k(k+1)/2 circles, side 2(k-1) + 2*sqrt(3)."""
    if k < 1:
        raise ValueError("k must be positive")
    side = 2.0 * (k - 1) + INCIRCLE_SIDE
    centers = []
    for row in range(k):
        y = 1.0 + row * SQRT3
        x0 = SQRT3 + row
        for j in range(k - row):
            centers.append((x0 + 2.0 * j, y))
    return PackingInstance(side, tuple(centers))


def _penalty(flat: np.ndarray, side: float, pairs) -> tuple[float, np.ndarray]:
    c = flat.reshape(-1, 2)
    x, y = c[:, 0], c[:, 1]
    g = np.zeros_like(c)
    val = 0.0

    v = np.maximum(0.0, 1.0 - y)
    val += (v ** 2).sum()
    g[:, 1] -= 2 * v

    v = np.maximum(0.0, 1.0 - (SQRT3 * x - y) / 2)
    val += (v ** 2).sum()
    g[:, 0] -= 2 * v * SQRT3 / 2
    g[:, 1] += 2 * v / 2

    v = np.maximum(0.0, 1.0 - (SQRT3 * (side - x) - y) / 2)
    val += (v ** 2).sum()
    g[:, 0] += 2 * v * SQRT3 / 2
    g[:, 1] += 2 * v / 2

    if pairs is not None:
        i, j = pairs
        d = c[i] - c[j]
        r = np.maximum(np.hypot(d[:, 0], d[:, 1]), 1e-12)
        v = np.maximum(0.0, 2.0 - r)
        val += (v ** 2).sum()
        w = (-2 * v / r)[:, None] * d
        np.add.at(g, i, w)
        np.add.at(g, j, -w)
    return val, g.ravel()


def _feasible_scale(side: float, c: np.ndarray) -> float:
    """Largest radius the centers admit in the triangle of this side."""
    x, y = c[:, 0], c[:, 1]
    r = min(y.min(), ((SQRT3 * x - y) / 2).min(), ((SQRT3 * (side - x) - y) / 2).min())
    if len(c) > 1:
        i, j = np.triu_indices(len(c), 1)
        r = min(r, np.hypot(c[i, 0] - c[j, 0], c[i, 1] - c[j, 1]).min() / 2)
    return float(r)


@dataclass(frozen=True)
class _SearchPlan:
    bisection_steps: int = 30
    descent_iters: int = 100

    @property
    def cost(self) -> int:
        return self.bisection_steps * self.descent_iters


def _one_start(n: int, seed: int, start: int, plan: _SearchPlan) -> tuple[float, np.ndarray]:
    rng = np.random.default_rng([seed, start])
    pairs = np.triu_indices(n, 1) if n > 1 else None
    hi = 2.0 * math.ceil(math.sqrt(2 * n)) + INCIRCLE_SIDE
    # random centers in the triangle of side `hi`
    u = rng.random((n, 2))
    flip = u.sum(axis=1) > 1
    u[flip] = 1 - u[flip]
    c = u[:, :1] * np.array([hi, 0.0]) + u[:, 1:] * np.array([hi / 2, hi * SQRT3 / 2])
    lo = INCIRCLE_SIDE
    best_side, best_c = math.inf, c

    def descend(side, start_c):
        res = minimize(_penalty, start_c.ravel(), args=(side, pairs), jac=True, method="L-BFGS-B",
                       options={"maxiter": plan.descent_iters, "gtol": 1e-14, "ftol": 1e-16})
        return res.x.reshape(-1, 2)

    c = descend(hi, c)
    r = _feasible_scale(hi, c)
    if r > 0:
        best_side, best_c = hi / r, c / r
    else:
        best_side, best_c = math.inf, c
    hi = min(hi, best_side)
    for _ in range(plan.bisection_steps):
        if hi - lo < 1e-12:
            break
        mid = 0.5 * (lo + hi)
        c = descend(mid, best_c * (mid / best_side) if math.isfinite(best_side) else c)
        r = _feasible_scale(mid, c)
        cand = mid / r if r > 0 else math.inf
        if cand < best_side:
            best_side, best_c = cand, c / r
        if cand <= mid * (1 + 1e-12):
            hi = min(cand, hi)
        else:
            lo = mid
            hi = min(hi, best_side)
    return best_side, best_c


def optimize_packing(n: int, seed: int = 0, budget: int = 100000) -> PackingInstance:
    """Multi-start penalty descent with bisection on the side length.

    Each start costs a fixed share of ``budget`` (bisection steps times descent
    iterations), so a larger budget runs a superset of the same starts and the
    result never gets worse. Starts are independent and seeded by
    ``(seed, start index)``; the smallest side wins, ties broken by the
    serialized centers.
    """
    if n < 1:
        raise ValueError("n must be positive")
    plan = _SearchPlan()
    starts = budget // plan.cost
    if starts < 1:
        raise PackingSearchError(f"budget {budget} exhausted before any feasible instance (need {plan.cost})")
    results = pmap(lambda s: _one_start(n, seed, s, plan), range(starts))
    feasible = [(side, c) for side, c in results if math.isfinite(side)]
    if not feasible:
        raise PackingSearchError("no feasible instance found within budget")
    side, c = min(feasible, key=lambda t: (t[0], tuple(np.round(t[1], 12).ravel())))
    # canonical order of centers so equal searches serialize identically
    order = np.lexsort((c[:, 0], c[:, 1]))
    return PackingInstance.from_array(side, c[order])


def erdos_oler_check(k: int, seed: int = 0, budget: int = 100000) -> dict:
    """Compare the hexagonal side for n = k(k+1)/2 with a searched side for n - 1."""
    if k < 2:
        raise ValueError("k must be at least 2")
    n = k * (k + 1) // 2
    side_n = optimal_triangular_packing(k).side
    found = optimize_packing(n - 1, seed, budget)
    return {
        "k": k,
        "n": n,
        "side_n": side_n,
        "side_n_minus_1": found.side,
        "gap": side_n - found.side,
    }
