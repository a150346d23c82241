import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from newtonres import Body, ConvexProfile, body_resistance, critical_slope, front, rear, resistance_functional
from newtonres.errors import InvalidProfileError
from newtonres.pressure import Medium


def test_flat_profile_resistance_is_p0():
    ps = front(1.0)
    assert resistance_functional(ps, ConvexProfile.flat(0.7)) == pytest.approx(ps.eval(0.0), rel=1e-15)


def test_trapezium_resistance():
    ps = front(1.0)
    d = critical_slope(ps)
    h = 0.5 * d.u0
    t0 = 1 - h / d.u0
    prof = ConvexProfile([0.0, t0, 1.0], [-h, -h, 0.0])
    expect = d.p0 + (h / d.u0) * (d.p_u0 - d.p0)
    assert resistance_functional(ps, prof) == pytest.approx(expect, rel=1e-14)
    assert expect == pytest.approx(d.p0 - d.B * h, rel=1e-14)


def test_refinement_does_not_change_resistance():
    prof = ConvexProfile([0.0, 0.3, 1.0], [-2.0, -1.5, 0.0])
    ps = rear(2.0)
    fine = prof.refine(np.linspace(0.05, 0.95, 19))
    assert fine.t.size > prof.t.size
    assert resistance_functional(ps, fine) == pytest.approx(resistance_functional(ps, prof), rel=1e-14)


def test_body_resistance_sums_sides():
    body = Body(ConvexProfile([0.0, 1.0], [-1.0, 0.0]), ConvexProfile.flat(0.0))
    m = Medium(1.0)
    expect = front(1.0).eval(1.0) + rear(1.0).eval(0.0)
    assert body_resistance(body, m) == pytest.approx(expect, rel=1e-14)
    assert body.h == 1.0


@pytest.mark.parametrize(
    "t,f",
    [
        ([0.0, 0.5], [-1.0, 0.0]),                  # does not reach t = 1
        ([0.0, 0.6, 0.4, 1.0], [-1, -1, -1, 0]),    # abscissae not increasing
        ([0.0, 0.5, 1.0], [-1.0, -0.2, 0.0]),       # concave
        ([0.0, 0.5, 1.0], [-1.0, -1.2, 0.0]),       # decreasing
        ([0.0, 1.0], [0.5, 1.0]),                   # positive
        ([0.0, 1.0], [-1.0, np.nan]),
    ],
)
def test_rejects_inadmissible(t, f):
    with pytest.raises(InvalidProfileError):
        ConvexProfile(t, f)


def test_arrays_read_only():
    prof = ConvexProfile([0.0, 1.0], [-1.0, 0.0])
    with pytest.raises(ValueError):
        prof.f[0] = 3.0


def test_csv_round_trip_byte_identical():
    prof = ConvexProfile([0.0, 1 / 3, 1.0], [-np.pi, -np.pi, 0.0])
    text = prof.to_csv()
    again = ConvexProfile.from_csv(text)
    assert again.to_csv() == text
    assert np.array_equal(again.f, prof.f)
    with pytest.raises(InvalidProfileError):
        ConvexProfile.from_csv("x,y\n0,0\n")


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(0.0, 5.0), min_size=1, max_size=6), st.floats(0.01, 3.0))
def test_random_convex_profile_bounds(slopes, V):
    slopes = np.sort(np.array(slopes))
    t = np.linspace(0.0, 1.0, slopes.size + 1)
    f = np.concatenate([[0.0], np.cumsum(slopes * np.diff(t))])
    f = f - f[-1]
    prof = ConvexProfile(t, f)
    ps = front(V)
    r = resistance_functional(ps, prof)
    p = ps.eval(slopes)
    assert p.min() - 1e-13 <= r <= p.max() + 1e-13
    assert_allclose(prof.widths.sum(), 1.0)
