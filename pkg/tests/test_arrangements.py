from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from planelab import arrangements as ar
from planelab.geom import Context, Line
from planelab.jsonio import decode_lines, encode_line

small = st.integers(-5, 5)
line_st = st.tuples(small, small, small).filter(lambda t: t[0] != 0 or t[1] != 0)


def _distinct(triples):
    out = {Line(*t) for t in triples}
    return sorted(out, key=lambda l: (l.a, l.b, l.c))


@settings(max_examples=80, deadline=None)
@given(st.lists(line_st, min_size=1, max_size=8))
def test_counts_match_brute_force(triples):
    lines = _distinct(triples)
    arr = ar.build_arrangement(lines)
    assert arr.euler_characteristic == 2
    assert len(arr.faces) == oracles.region_count(lines)
    assert ar.count_triangles(arr) == oracles.brute_force_triangles(lines)


@settings(max_examples=40, deadline=None)
@given(st.lists(line_st, min_size=3, max_size=7), st.integers(1, 4), st.integers(-4, 4), st.integers(-3, 3))
def test_affine_invariance(triples, p, q, shift):
    lines = _distinct(triples)
    m = ((p, q), (1, p + 1)) if p * (p + 1) - q != 0 else ((1, 0), (0, 1))
    image = [Line(*abc) for abc in oracles.affine_image(lines, m, (Fraction(shift, 3), Fraction(1, 7)))]
    assert ar.count_triangles(ar.build_arrangement(image)) == ar.count_triangles(ar.build_arrangement(lines))


def test_small_cases():
    three = [Line(1, 0, 0), Line(0, 1, 0), Line(1, 1, -1)]
    assert ar.count_triangles(ar.build_arrangement(three)) == 1
    concurrent = [Line(1, 0, 0), Line(0, 1, 0), Line(1, -1, 0)]
    assert ar.count_triangles(ar.build_arrangement(concurrent)) == 0
    single = ar.build_arrangement([Line(1, 2, 3)])
    assert len(single.vertices) == 0 and len(single.faces) == 2


def test_triangle_polygons_are_triangles():
    arr = ar.build_arrangement(ar.load_fixture(7))
    tris = ar.triangles(arr)
    assert len(tris) == 11 and all(len(t) == 3 for t in tris)


def test_duplicate_lines_rejected():
    with pytest.raises(ar.ArrangementError):
        ar.build_arrangement([Line(1, 2, 3), Line(0, 1, 0), Line(2, 4, 6)])
    with pytest.raises(ar.ArrangementError):
        ar.build_arrangement([Line(1.0, 2.0, 3.0), Line(2.0, 4.0, 6.0)])
    # 128-bit lifting keeps lines 1e-15 apart distinct
    ar.build_arrangement([Line(1.0, 2.0, 3.0), Line(1.0, 2.0, 3.0 + 1e-15)])


def test_float_and_exact_agree():
    lines = ar.load_fixture(9)
    floats = [Line(*l.as_float()) for l in lines]
    assert ar.count_triangles(ar.build_arrangement(floats, Context(precision_bits=128))) == 21


def test_furedi_palasti_precision_stable():
    for n in (8, 11, 14):
        lo = ar.count_triangles(ar.build_arrangement(ar.furedi_palasti(n, Context(precision_bits=96))))
        hi = ar.count_triangles(ar.build_arrangement(ar.furedi_palasti(n, Context(precision_bits=256))))
        assert lo == hi >= n * (n - 3) // 3


def test_furedi_palasti_small_n():
    with pytest.raises(ValueError):
        ar.furedi_palasti(2)


def test_bounds():
    b = ar.kobon_bounds(10)
    assert (b.lower, b.upper) == (23, 26)
    assert b.to_json() == {"n": 10, "lower": 23, "upper": 26}
    assert ar.kobon_bounds(8, mod6_correction=True).upper == ar.kobon_bounds(8).upper - 1
    assert ar.kobon_bounds(7).to_json()["known"] == 11
    for n, k in ar.KNOWN_K.items():
        b = ar.kobon_bounds(n)
        assert k <= b.upper
    with pytest.raises(ValueError):
        ar.kobon_bounds(0)


def test_known_values_match_published_terms():
    assert [ar.KNOWN_K[n] for n in range(1, 10)] == [0, 0, 1, 2, 5, 7, 11, 15, 21]


def test_verify_configuration_report():
    report = ar.verify_configuration(ar.load_fixture(10))
    assert report["triangle_count"] == 25 and report["exact"] and not report["is_record"]
    assert report["bounds"]["upper"] == 26


def test_fixture_lines_roundtrip_exact():
    for n in (3, 4, 5, 6, 7, 9, 10):
        lines = ar.load_fixture(n)
        assert all(isinstance(v, Fraction) for l in lines for v in (l.a, l.b, l.c))
        assert decode_lines({"lines": [encode_line(l) for l in lines]}) == lines


def test_mp_lines_accepted():
    with mpmath.workprec(128):
        lines = [Line(mpmath.mpf(1), mpmath.mpf(0), mpmath.mpf(0)), Line(mpmath.mpf(0), mpmath.mpf(1), mpmath.mpf(0)),
                 Line(mpmath.mpf(1), mpmath.mpf(1), mpmath.mpf(-1))]
    assert ar.count_triangles(ar.build_arrangement(lines)) == 1
