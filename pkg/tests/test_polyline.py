from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gboxdim.errors import DomainError
from gboxdim.polyline import PiecewiseLinear, floor_rows, floor_rows_of_sum

F = Fraction


def test_interpolates_and_extends_constantly():
    f = PiecewiseLinear.from_points([(F(1, 4), 1), (F(3, 4), 3)])
    assert f(0) == 1 and f(1) == 3
    assert f(F(1, 2)) == 2
    assert f(F(5, 8)) == F(5, 2)


def test_breakpoints_must_increase():
    with pytest.raises(ValueError):
        PiecewiseLinear((F(0), F(0)), (F(1), F(2)))
    with pytest.raises(ValueError):
        PiecewiseLinear((), ())


def test_sum_merges_breakpoints():
    f = PiecewiseLinear.from_points([(0, 0), (1, 1)])
    g = PiecewiseLinear.from_points([(0, 0), (F(1, 2), 1), (1, 0)])
    h = f + g
    assert h.xs == (0, F(1, 2), 1)
    assert h.ys == (0, F(3, 2), 1)


def test_norm_slopes_and_minimum():
    f = PiecewiseLinear.from_points([(0, F(1, 2)), (F(1, 4), 0), (1, 3)])
    assert f.sup_norm == 3
    assert f.min_value == 0
    assert f.slopes() == [-2, 4]
    assert f.max_abs_slope() == 4
    assert PiecewiseLinear.constant(5).max_abs_slope() == 0


def test_values_at_is_exact():
    f = PiecewiseLinear.from_points([(0, F(1, 3)), (1, F(2, 3))])
    P, Q = f.values_at([0, 1, 2], 2)
    assert [F(int(p), int(q)) for p, q in zip(P, Q)] == [F(1, 3), F(1, 2), F(2, 3)]


def test_rows_fall_back_to_sweep_for_huge_denominators():
    pts = [F(1, 3 ** 700), F(1, 2 ** 1500), F(1, 2), F(19, 20)]
    f = PiecewiseLinear.from_points([(0, 0), (1, 1)])
    assert f.rows_at(pts, 10).tolist() == [0, 0, 5, 9]


def test_floor_rows_of_sum_matches_fractions():
    rng = np.random.default_rng(3)
    P1, Q1 = rng.integers(0, 10 ** 6, 200), rng.integers(1, 10 ** 6, 200)
    P2, Q2 = rng.integers(0, 10 ** 6, 200), rng.integers(1, 10 ** 6, 200)
    got = floor_rows_of_sum(P1, Q1, P2, Q2, 7)
    want = [int((F(int(a), int(b)) + F(int(c), int(d))) * 7) for a, b, c, d in zip(P1, Q1, P2, Q2)]
    top = max(want)
    if all((F(int(a), int(b)) + F(int(c), int(d))) * 7 == top for a, b, c, d, w in zip(P1, Q1, P2, Q2, want) if w == top):
        want = [w - 1 if w == top else w for w in want]
    assert got.tolist() == want


def test_floor_rows_promotes_to_python_ints():
    P = np.array([2 ** 61], dtype=np.int64)
    Q = np.array([3], dtype=np.int64)
    assert floor_rows(P, Q, 1000).tolist() == [(2 ** 61 * 1000) // 3]


def test_column_profile_rejects_breakpoints_outside():
    with pytest.raises(DomainError):
        PiecewiseLinear.from_points([(0, 0), (2, 1)]).column_profile(4)


def test_column_profile_excluded_right_endpoint():
    # f = 4x on [0, 1/4]: column 0 of m = 4 sees values [0, 1) -> rows 0..3
    f = PiecewiseLinear.from_points([(0, 0), (F(1, 4), 1), (1, 1)])
    prof = f.column_profile(4).tolist()
    assert prof[0] == 4
    # columns 1..3 are flat at the top of the range
    assert prof[1:] == [1, 1, 1]


def test_column_profile_interior_peak():
    f = PiecewiseLinear.from_points([(0, 0), (F(1, 8), F(3, 4)), (F(1, 4), 0), (1, 0)])
    assert f.column_profile(4).tolist() == [3, 1, 1, 1]


dyadic = st.integers(min_value=0, max_value=64).map(lambda n: F(n, 64))


@st.composite
def polylines(draw):
    xs = sorted(set(draw(st.lists(dyadic, min_size=1, max_size=8))))
    ys = draw(st.lists(st.integers(0, 256).map(lambda n: F(n, 128)), min_size=len(xs), max_size=len(xs)))
    return PiecewiseLinear(tuple(xs), tuple(ys))


def _brute_column_rows(f, m):
    """Rows met in each column, from exact witness points.

    Candidates are the column ends, the breakpoints and every point where a
    segment crosses a row boundary ``j/m``; midpoints between consecutive
    candidates cover the open stretches in between. The right end of a
    column only counts for the last column.
    """
    top = max(f.ys)
    top_row = max(-(-(top * m).numerator // (top * m).denominator) - 1, 0)
    cand = {F(k, m) for k in range(m + 1)} | set(f.xs)
    for x0, x1, y0, y1 in zip(f.xs, f.xs[1:], f.ys, f.ys[1:]):
        if y0 == y1:
            continue
        lo, hi = sorted((y0, y1))
        for j in range(int(lo * m), int(hi * m) + 2):
            t = (F(j, m) - y0) / (y1 - y0)
            if 0 <= t <= 1:
                cand.add(x0 + t * (x1 - x0))
    cand = sorted(c for c in cand if 0 <= c <= 1)
    cand = sorted(set(cand) | {(a + b) / 2 for a, b in zip(cand, cand[1:])})
    rows = [set() for _ in range(m)]
    for x in cand:
        col = min(int(x * m), m - 1)
        rows[col].add(min(int(f(x) * m), top_row))
    return [len(r) for r in rows]


@settings(max_examples=150, deadline=None)
@given(polylines(), st.sampled_from([1, 2, 3, 4, 5, 8, 13]))
def test_column_profile_matches_exact_witness_points(f, m):
    assert f.column_profile(m).tolist() == _brute_column_rows(f, m)


@settings(max_examples=60, deadline=None)
@given(polylines(), st.sampled_from([1, 2, 3, 5, 8, 16]))
def test_column_profile_respects_slope_bound(f, m):
    k = f.max_abs_slope()
    ceil_k = -(-k.numerator // k.denominator)
    assert max(f.column_profile(m)) <= ceil_k + 1
