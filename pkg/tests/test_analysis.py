import math
from fractions import Fraction as F

import pytest

from gboxdim.analysis import (
    RatioSeries,
    construction_report,
    estimate_dimension,
    explicit_schedule,
    finite_bounds_check,
    geometric_schedule,
    gm,
    gm_capped,
    log_log_slope,
    parse_schedule,
    ratio_series,
    scale_schedule,
)
from gboxdim.errors import EmptySetError, ResolutionError, ScheduleError
from gboxdim.sets import PaperSetParams, PowerSet, cantor_set, explicit_from_points, paper_set

EMPTY = explicit_from_points([])


def test_gm_examples():
    assert gm(EMPTY, 7) == 0
    assert gm(explicit_from_points([0.1]), 5) == 1
    assert gm(PowerSet(1), 4) == 8
    assert gm(PowerSet(1), 3) == 6


def test_gm_capped_examples():
    assert gm_capped(PowerSet(1), 4, 1) == 4
    assert gm_capped(PowerSet(1), 4, 2) == 6
    X = explicit_from_points([F(k, 97) for k in range(97)])
    assert gm_capped(X, 5, None) == 97


def test_gm_past_resolution():
    with pytest.raises(ResolutionError):
        gm(paper_set(PaperSetParams(F(1, 2), 0, 1)), 10 ** 6)


def test_schedules():
    assert geometric_schedule(2, 4, 32) == [4, 8, 16, 32]
    assert explicit_schedule([10, 10, 3]) == [3, 10]
    assert geometric_schedule(3, 3, 3 ** 6) == [3, 9, 27, 81, 243, 729]
    assert scale_schedule("geometric", 2, 4, 8) == [4, 8]
    assert scale_schedule("explicit", [5, 2]) == [2, 5]
    assert parse_schedule("geo:2:4:8") == [4, 8]
    assert parse_schedule("list:9,3") == [3, 9]


@pytest.mark.parametrize("bad", [lambda: geometric_schedule(1, 4, 8), lambda: geometric_schedule(2, 8, 4),
                                 lambda: explicit_schedule([]), lambda: explicit_schedule([1, 4]),
                                 lambda: parse_schedule("geo:2:x:8"), lambda: parse_schedule("log:2"),
                                 lambda: scale_schedule("random")])
def test_bad_schedules(bad):
    with pytest.raises(ScheduleError):
        bad()


def test_ratio_series_two_points():
    s = ratio_series(explicit_from_points([0, 1]), [10], "box")
    assert s.values == (2,)
    assert s.ratios[0] == pytest.approx(math.log(2) / math.log(10))


def test_ratio_series_power_box_rows():
    s = ratio_series(PowerSet(1), geometric_schedule(2, 4, 8), "box")
    assert s.scales == (4, 8)
    assert s.values == (4, 5)


def test_ratio_series_empty_set():
    with pytest.raises(EmptySetError, match="empty set has no ratio"):
        ratio_series(EMPTY, [4], "box")


def test_ratio_series_parallel_matches_serial():
    sched = geometric_schedule(2, 4, 2 ** 12)
    serial = ratio_series(PowerSet(F(1, 2)), sched, "gm")
    parallel = ratio_series(PowerSet(F(1, 2)), sched, "gm", workers=3)
    assert serial == parallel


def test_estimate_limsup_and_slope():
    series = RatioSeries("gm", (4, 8, 16, 32), (16, 64, 256, 1024))
    est = estimate_dimension(series, fraction=0.5, window=4)
    assert est.slope == pytest.approx(2.0)
    assert est.limsup_proxy == pytest.approx(2.0)
    assert est.tail_scales == (16, 32)


def test_estimate_default_window_is_top_decade():
    series = RatioSeries("box", tuple(2 ** j for j in range(2, 12)), tuple(range(1, 11)))
    est = estimate_dimension(series)
    assert est.slope_scales == (256, 512, 1024, 2048)


def test_estimate_window_larger_than_series():
    series = RatioSeries("box", (4, 8), (2, 3))
    with pytest.raises(ScheduleError):
        estimate_dimension(series, window=3)


def test_estimate_single_point_is_degenerate():
    series = ratio_series(explicit_from_points([F(1, 3)]), [4, 8, 16], "gm")
    est = estimate_dimension(series)
    assert est.degenerate
    assert est.limsup_proxy == 0
    assert est.notes


def test_log_log_slope_single_point():
    assert log_log_slope([100], [10]) == pytest.approx(0.5)


def test_finite_bounds_on_generators():
    for X in (PowerSet(1), cantor_set(F(1, 3), 8)):
        for m in (4, 9, 100, 729):
            rep = finite_bounds_check(X, m)
            assert rep.ok, rep


def test_finite_bounds_need_m_at_least_four():
    with pytest.raises(ValueError):
        finite_bounds_check(PowerSet(1), 3)


def test_construction_report_default_parameters():
    rep = construction_report(paper_set(PaperSetParams(F(1, 2), F(1, 3), 3)))
    assert rep.ok
    assert rep.blocks == rep.ordering_ok == rep.diameter_ok
    feasible = [s for s in rep.special if s.feasible]
    assert [s.m for s in feasible] == [6, 1625]
    assert all(s.g >= s.lower_bound for s in feasible)
    assert rep.deepest_feasible.ratio == pytest.approx(1.25, abs=0.1)


def test_construction_report_with_c_zero():
    rep = construction_report(paper_set(PaperSetParams(F(1, 2), 0, 2)))
    assert rep.ok
    assert rep.predicted_gdim == 1.0
