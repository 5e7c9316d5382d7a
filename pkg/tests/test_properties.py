"""Invariants of the counters and witnesses on randomly drawn finite sets."""

import math
from collections import Counter
from fractions import Fraction

import numpy as np
from hypothesis import given, settings, strategies as st

from gboxdim.analysis import finite_bounds_check, gm, gm_capped
from gboxdim.grid import box_count_1d, box_index, graph_box_count, occupancy
from gboxdim.lemmas import TrialConfig, check_lemma_A1, check_lemma_A2, random_piecewise_linear
from gboxdim.sets import ExplicitSet
from gboxdim.witness import build_witness

DEN = 2 ** 12

point_sets = st.lists(st.integers(0, DEN), min_size=1, max_size=300, unique=True).map(
    lambda nums: ExplicitSet(Fraction(n, DEN) for n in nums)
)
scales = st.integers(1, 2048)


@given(point_sets, scales)
def test_every_point_lands_in_exactly_one_box(X, m):
    for x in X:
        k = box_index(x, m)
        assert 0 <= k < m
        inside = [
            j for j in range(max(k - 1, 0), min(k + 2, m))
            if Fraction(j, m) <= x < Fraction(j + 1, m) or (j == m - 1 and x == 1)
        ]
        assert inside == [k]


@given(point_sets, scales)
def test_occupancy_conserves_mass(X, m):
    prof = occupancy(X, m, cap=None)
    assert prof.total == len(X)
    assert dict(prof.entries) == dict(Counter(box_index(x, m) for x in X))


@given(point_sets, st.integers(1, 1024))
def test_dyadic_refinement_sandwich(X, m):
    n, n2 = box_count_1d(X, m), box_count_1d(X, 2 * m)
    assert n <= n2 <= 2 * n
    g, g2 = gm(X, m), gm(X, 2 * m)
    assert g <= g2 <= 4 * g


@given(point_sets, scales)
def test_g_between_N_and_its_ceilings(X, m):
    n, g = box_count_1d(X, m), gm(X, m)
    assert n <= g <= min(m * n, m * m)


@given(point_sets, st.integers(4, 4096))
def test_coarse_scale_keeps_half_the_boxes(X, m):
    assert finite_bounds_check(X, m).ok


@given(st.integers(1, 64), st.data())
def test_saturated_sets_give_m_times_N(m, data):
    boxes = data.draw(st.lists(st.integers(0, m - 1), min_size=1, max_size=min(m, 8), unique=True))
    den = m * (m + 1)
    nums = sorted({k * (m + 1) + j for k in boxes for j in range(m)})
    X = ExplicitSet.from_grid(nums, den)
    assert gm(X, m) == m * box_count_1d(X, m) == m * len(boxes)


@given(point_sets, scales, st.integers(1, 64), st.integers(0, 64))
def test_capped_count_is_monotone_in_cap(X, m, c1, extra):
    assert gm_capped(X, m, c1) <= gm_capped(X, m, c1 + extra) <= gm_capped(X, m, None)
    assert gm_capped(X, m, m) == gm(X, m)


@settings(max_examples=60, deadline=None)
@given(point_sets, st.integers(2, 512), st.sampled_from([Fraction(1, 4), Fraction(1, 2), Fraction(1)]))
def test_witness_meets_its_bound_in_distinct_rows(X, m, h):
    if math.floor(h * m) < 1:
        return
    w = build_witness(X, m, h)
    assert w.ok
    for k, ys in w.heights.items():
        rows = [math.floor(y * m) for y in ys]
        assert len(set(rows)) == len(rows)
        assert all(box_index(x, m) == k for x in w.selected[k])
    # every selected sample is a vertex of the polygon, at its assigned height
    assert all(w.function(x) == y for x, y in w.samples())
    assert graph_box_count(list(w.samples()), m) == w.bound


CONFIG = TrialConfig(breakpoints=(1, 12))


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from([8, 64, 512]))
def test_small_perturbation_keeps_half_the_cells(seed, m):
    rng = np.random.default_rng(seed)
    f = random_piecewise_linear(rng, CONFIG)
    g = random_piecewise_linear(rng, CONFIG, y_max=Fraction(1, m))
    assert check_lemma_A1(f, g, m, strict=False).status != "fail"


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from([8, 64, 512]))
def test_sum_keeps_share_of_rougher_summand(seed, m):
    rng = np.random.default_rng(seed)
    f = random_piecewise_linear(rng, CONFIG)
    g = random_piecewise_linear(rng, CONFIG)
    assert check_lemma_A2(f, g, m).passed
