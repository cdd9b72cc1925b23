"""JSON encodings shared by every module and the CLI.

Scalars are JSON numbers or strings; strings hold exact rationals ("p/q") or
decimals ("0.125") and decode to ``Fraction``. Points are ``[x, y]``, lines
``{"a", "b", "c"}``, polylines/polygons ``{"vertices": [...]}`` and rigid motions
``{"theta", "tx", "ty"}``.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction

import mpmath

from .geom import Line, Point, Polygon, Polyline, RigidMotion


def decode_scalar(v, exact: bool = True):
    if isinstance(v, bool):
        raise TypeError("boolean is not a scalar")
    if isinstance(v, str):
        f = Fraction(v.strip())
        return f if exact else float(f)
    if isinstance(v, int):
        return Fraction(v) if exact else float(v)
    if isinstance(v, float):
        return Fraction(repr(v)) if exact else v
    raise TypeError(f"cannot decode scalar from {v!r}")


def encode_scalar(v):
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, mpmath.mpf):
        return mpmath.nstr(v, 40)
    if isinstance(v, int):
        return v
    v = float(v)
    if not math.isfinite(v):
        raise ValueError("non-finite scalar")
    return v


def decode_point(v, exact: bool = False) -> Point:
    x, y = v
    return Point(decode_scalar(x, exact), decode_scalar(y, exact))


def encode_point(p) -> list:
    return [encode_scalar(p[0]), encode_scalar(p[1])]


def decode_line(d: dict) -> Line:
    data = [d["a"], d["b"], d["c"]]
    exact = not any(isinstance(v, float) for v in data)
    return Line(*(decode_scalar(v, True) if exact else decode_scalar(v, False) for v in data))


def decode_lines(data) -> list[Line]:
    if isinstance(data, dict):
        data = data["lines"]
    return [decode_line(d) for d in data]


def encode_line(l: Line) -> dict:
    return {"a": encode_scalar(l.a), "b": encode_scalar(l.b), "c": encode_scalar(l.c)}


def _vertices(data):
    if isinstance(data, dict):
        data = data["vertices"]
    return [decode_point(v) for v in data]


def decode_polyline(data) -> Polyline:
    return Polyline(tuple(_vertices(data)))


def decode_polygon(data) -> Polygon:
    return Polygon(tuple(_vertices(data)))


def encode_vertices(g) -> dict:
    return {"vertices": [encode_point(p) for p in g.vertices]}


def decode_motion(d: dict) -> RigidMotion:
    return RigidMotion(float(decode_scalar(d["theta"], False)), decode_scalar(d["tx"], False),
                       decode_scalar(d["ty"], False))


def encode_motion(m: RigidMotion) -> dict:
    return {"theta": float(m.theta), "tx": encode_scalar(m.tx), "ty": encode_scalar(m.ty)}


def dumps(obj) -> str:
    """Canonical serialization: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"
