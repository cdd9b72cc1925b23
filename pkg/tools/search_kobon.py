#!/usr/bin/env python3
"""Heuristic search for line configurations with many Kobon triangles.

Used to produce the bundled fixtures under src/planelab/data. Lines are kept
in robust general position (no near-parallels, well separated crossings) so
that rounding the coefficients to small rationals preserves the count; the
rational result is then re-counted exactly by planelab before it is written.

    python tools/search_kobon.py --n 7 --target 11 --seed 1 --out kobon_7.json
"""

import argparse
import json
import math
import random
import sys
from fractions import Fraction

from planelab.arrangements import build_arrangement, count_triangles
from planelab.geom import Line


def fast_count(lines, sep=1e-3):
    """Triangle count for lines in general position, or -1 if degenerate."""
    n = len(lines)
    params = [[] for _ in range(n)]
    for i in range(n):
        a1, b1, c1 = lines[i]
        for j in range(i + 1, n):
            a2, b2, c2 = lines[j]
            det = a1 * b2 - a2 * b1
            if abs(det) < 1e-2:
                return -1
            x = (b1 * c2 - b2 * c1) / det
            y = (c1 * a2 - c2 * a1) / det
            if abs(x) > 50 or abs(y) > 50:
                return -1
            params[i].append((b1 * x - a1 * y, j))
            params[j].append((b2 * x - a2 * y, i))
    nxt = [dict() for _ in range(n)]
    for i in range(n):
        ps = sorted(params[i])
        for (t1, j), (t2, k) in zip(ps, ps[1:]):
            if t2 - t1 < sep:
                return -1
            nxt[i][j] = nxt[i].get(j, set()) | {k}
            nxt[i][k] = nxt[i].get(k, set()) | {j}
    count = 0
    for i in range(n):
        for j, ks in nxt[i].items():
            for k in ks:
                if j < k and i < j and k in nxt[j].get(i, ()) and j in nxt[k].get(i, ()):
                    count += 1
    return count


def to_lines(state):
    return [(math.cos(t), math.sin(t), -c) for t, c in state]


def anneal(n, target, seed, steps):
    rng = random.Random(seed)
    state = [(rng.uniform(0, math.pi), rng.uniform(-1, 1)) for _ in range(n)]
    cur = fast_count(to_lines(state))
    best, best_state = cur, list(state)
    temp = 1.0
    for step in range(steps):
        temp = max(0.02, 1.0 - step / steps)
        i = rng.randrange(n)
        t, c = state[i]
        scale = 0.3 * temp
        cand = list(state)
        cand[i] = ((t + rng.gauss(0, scale)) % math.pi, max(-3, min(3, c + rng.gauss(0, scale))))
        val = fast_count(to_lines(cand))
        if val < 0:
            continue
        if val >= cur or rng.random() < math.exp((val - cur) / temp):
            state, cur = cand, val
            if cur > best:
                best, best_state = cur, list(state)
                if best >= target:
                    break
    return best, best_state


def rationalize(state, den=10**4):
    out = []
    for t, c in state:
        a = Fraction(round(math.cos(t) * den), den)
        b = Fraction(round(math.sin(t) * den), den)
        out.append(Line(a, b, Fraction(round(-c * den), den)))
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, required=True)
    ap.add_argument("--target", type=int, required=True)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--steps", type=int, default=200000)
    ap.add_argument("--restarts", type=int, default=50)
    ap.add_argument("--out")
    args = ap.parse_args(argv)
    for r in range(args.restarts):
        best, state = anneal(args.n, args.target, args.seed * 1000 + r, args.steps)
        print(f"restart {r}: {best}", file=sys.stderr)
        if best >= args.target:
            lines = rationalize(state)
            exact = count_triangles(build_arrangement(lines))
            print(f"exact recount: {exact}", file=sys.stderr)
            if exact >= args.target:
                data = {"n": args.n, "triangles": exact,
                        "lines": [{"a": str(l.a), "b": str(l.b), "c": str(l.c)} for l in lines]}
                text = json.dumps(data, indent=1)
                if args.out:
                    with open(args.out, "w") as fh:
                        fh.write(text + "\n")
                else:
                    print(text)
                return 0
    return 1


if __name__ == "__main__":
    sys.exit(main())
