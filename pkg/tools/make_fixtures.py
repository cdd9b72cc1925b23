#!/usr/bin/env python3
"""Regenerate the curve fixtures under src/planelab/data (Kobon fixtures come from search_kobon.py)."""

import json
import math
from pathlib import Path

DATA = Path(__file__).resolve().parents[1] / "src" / "planelab" / "data"


def ring(n, a, b):
    return [[a * math.cos(2 * math.pi * k / n), b * math.sin(2 * math.pi * k / n)] for k in range(n)]


def write(name, vertices, **extra):
    with open(DATA / name, "w") as fh:
        json.dump({"vertices": vertices, **extra}, fh)
        fh.write("\n")


def main():
    write("circle_4096.json", ring(4096, 1.0, 1.0), note="regular 4096-gon, circumradius 1")
    write("ellipse_2to1_4096.json", ring(4096, 2.0, 1.0), note="4096 points of the ellipse with semi-axes 2 and 1")
    write("arrow.json", [[0, 0], [4, 0], [4, 3], [2, 1.2], [0, 3]], note="non-convex pentagon")


if __name__ == "__main__":
    main()
