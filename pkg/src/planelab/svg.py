"""Minimal SVG figures: polygons, polylines, points and lines in world coordinates.

The y axis is flipped on output so figures read like the usual plane; the
viewBox always contains every drawn element.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET

import numpy as np


class Figure:
    def __init__(self, pad: float = 0.05):
        self.pad = pad
        self._items: list[tuple[str, np.ndarray, dict]] = []

    def polygon(self, pts, stroke="black", fill="none", width=1.0, opacity=1.0):
        self._items.append(("polygon", np.asarray(pts, dtype=float), dict(stroke=stroke, fill=fill, width=width,
                                                                          opacity=opacity)))
        return self

    def polyline(self, pts, stroke="black", width=1.0):
        self._items.append(("polyline", np.asarray(pts, dtype=float), dict(stroke=stroke, fill="none", width=width,
                                                                           opacity=1.0)))
        return self

    def points(self, pts, color="red", radius=None):
        self._items.append(("points", np.atleast_2d(np.asarray(pts, dtype=float)), dict(fill=color, r=radius)))
        return self

    def bounds(self) -> tuple[float, float, float, float]:
        allpts = np.vstack([p for _, p, _ in self._items]) if self._items else np.zeros((1, 2))
        lo, hi = allpts.min(axis=0), allpts.max(axis=0)
        span = float(max(hi[0] - lo[0], hi[1] - lo[1], 1e-9))
        m = self.pad * span
        return float(lo[0] - m), float(lo[1] - m), float(hi[0] + m), float(hi[1] + m)

    def to_string(self, size: int = 600) -> str:
        x0, y0, x1, y1 = self.bounds()
        w, h = x1 - x0, y1 - y0
        scale = max(w, h)
        root = ET.Element("svg", xmlns="http://www.w3.org/2000/svg", width=str(size),
                          height=str(max(1, round(size * h / w))),
                          viewBox=f"{_f(x0)} {_f(-y1)} {_f(w)} {_f(h)}")
        line = scale / 400
        for kind, pts, style in self._items:
            flipped = np.column_stack([pts[:, 0], -pts[:, 1]])
            if kind == "points":
                r = style["r"] or scale / 150
                for x, y in flipped:
                    ET.SubElement(root, "circle", cx=_f(x), cy=_f(y), r=_f(r), fill=style["fill"])
                continue
            attrs = {
                "points": " ".join(f"{_f(x)},{_f(y)}" for x, y in flipped),
                "stroke": style["stroke"],
                "fill": style["fill"],
                "stroke-width": _f(line * style["width"]),
            }
            if style["opacity"] != 1.0:
                attrs["fill-opacity"] = _f(style["opacity"])
            ET.SubElement(root, kind, **attrs)
        return ET.tostring(root, encoding="unicode") + "\n"

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_string())


def _f(v: float) -> str:
    return f"{float(v):.6g}"
