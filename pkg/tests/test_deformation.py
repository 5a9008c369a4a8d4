import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lsboundary import (CurveFamily, EarthquakeError, EarthquakePath, MulticurveLamination, curve_length,
                        earthquake_path_sample, length_spectrum, parse_curve_word, twist_earthquake)
from lsboundary.spectra import intersection_number

from conftest import flute

MU = MulticurveLamination({"a5": 1.0, "a10": 0.5, "a15": 2.0})


def test_zero_time_is_identity(flute20):
    assert twist_earthquake(flute20, MU, 0.0) is flute20
    assert twist_earthquake(flute20, MulticurveLamination(), 3.0) is flute20


def test_twists_move_by_weight(flute20):
    s = twist_earthquake(flute20, MU, 2.5)
    for k in flute20.graph.interior_labels():
        assert s.fn.twist(k) == flute20.fn.twist(k) + 2.5 * MU.weight(k)
    assert dict(s.fn.lengths) == dict(flute20.fn.lengths)
    assert s.base_fn == flute20.base_fn


@given(st.floats(0, 50), st.floats(0, 50))
def test_flow_composes_exactly(a, b):
    s = flute(8)
    mu = MulticurveLamination({"a2": 1.0, "a5": 0.3})
    assert twist_earthquake(twist_earthquake(s, mu, a), mu, b) == twist_earthquake(s, mu, a + b)


def test_free_cuff_support_rejected(flute20):
    with pytest.raises(EarthquakeError):
        twist_earthquake(flute20, MulticurveLamination({"a0": 1.0}), 1.0)
    with pytest.raises(EarthquakeError):
        EarthquakePath(flute20, MulticurveLamination({"b3": 1.0}), (0, 1))


@pytest.mark.parametrize("grid", [(1, 1), (2, 1), (-1, 0)])
def test_bad_grid(flute20, grid):
    with pytest.raises(EarthquakeError):
        EarthquakePath(flute20, MU, grid)


def test_path_sample(flute20):
    p = EarthquakePath(flute20, MU, (0, 1, 10))
    ss = earthquake_path_sample(p)
    assert ss[0] is flute20
    assert [s.fn.twist("a15") for s in ss] == [0.0, 2.0, 20.0]


def test_disjoint_curves_unchanged(flute20):
    w = parse_curve_word("path a3 a3 +0 | a3 a3 +0", flute20.graph)
    assert intersection_number(MU, w) == 0
    assert curve_length(twist_earthquake(flute20, MU, 100.0), w) == curve_length(flute20, w)


def test_length_grows_like_t_times_intersection(flute20):
    w = parse_curve_word("path a5 a5 +0 | a5 a5 +0", flute20.graph)
    i = intersection_number(MU, w)
    assert i == 2.0
    l0 = curve_length(flute20, w)
    for t in (1.0, 10.0, 1e3, 1e5):
        lt = curve_length(twist_earthquake(flute20, MU, t), w)
        assert t * i - l0 - 1e-9 <= lt <= t * i + l0 + 1e-9


def test_spectrum_after_quake_keeps_base(flute20):
    fam = CurveFamily([parse_curve_word("path a5 a5 +0 | a5 a5 +0", flute20.graph)])
    u = length_spectrum(twist_earthquake(flute20, MU, 7.0), fam)
    v = length_spectrum(flute20, fam)
    assert np.array_equal(u.base, v.values)
    assert u.values[0] > v.values[0]
    assert math.isfinite(u.values[0])
