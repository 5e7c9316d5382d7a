import math
from fractions import Fraction as F

import pytest

from gboxdim.oracles import (
    MAX_ORACLE_SCALE,
    BudgetExceeded,
    brute_force_occupancy,
    enumerate_power_points,
    explicit_profile,
    gm_of,
    power_N_closed_form,
    power_g_closed_form,
)


def test_power_p1_m4_cap4():
    assert brute_force_occupancy(("power", 1), 4, 4).as_dict() == {0: 4, 1: 2, 2: 1, 3: 1}


def test_power_p2_m100_box_count():
    prof = brute_force_occupancy(("power", 2), 100, 1)
    assert prof.indices == [0, 1, 2, 4, 6, 11, 25, 99]


def test_power_half_against_literal_square_roots():
    # 1/sqrt(n) >= k/m  <=>  n <= (m/k)^2, so box k >= 1 holds the n with
    # (m/(k+1))^2 < n <= (m/k)^2
    m = 30
    prof = brute_force_occupancy(("power", F(1, 2)), m).as_dict()
    for k in range(1, m):
        lo, hi = (m * m) // ((k + 1) ** 2), (m * m) // (k * k)
        if k == m - 1:
            lo = 0
        if hi > lo:
            assert prof[k] == hi - lo


def test_explicit_rule_matches_hand_count():
    assert explicit_profile([0, F(1, 8), F(1, 2)], 2).as_dict() == {0: 2, 1: 1}
    assert explicit_profile([1], 3).as_dict() == {2: 1}


def test_gm_from_uncapped_profile():
    assert gm_of(brute_force_occupancy(("power", 1), 4)) == 8


def test_literal_points():
    assert enumerate_power_points(2, 3) == [1, F(1, 4), F(1, 9)]
    with pytest.raises(ValueError):
        enumerate_power_points(F(1, 2), 3)


def test_budget():
    with pytest.raises(BudgetExceeded):
        brute_force_occupancy(("power", 1), MAX_ORACLE_SCALE + 1)
    with pytest.raises(BudgetExceeded):
        brute_force_occupancy(("power", F(17, 3)), 10)


@pytest.mark.parametrize("p, m", [(1, 100), (2, 100), (F(1, 2), 400), (3, 1000)])
def test_closed_forms_are_close_to_truth(p, m):
    truth = brute_force_occupancy(("power", F(p)), m)
    assert abs(power_N_closed_form(p, m) - len(truth)) <= 2
    assert abs(power_g_closed_form(p, m) - gm_of(truth)) <= 2 * m


def test_closed_form_n0():
    # p = 2, m = 100: n0 = floor(200^(1/3)) = 5, N = 5 + floor(100/25) = 9 vs truth 8
    assert power_N_closed_form(2, 100) == 9
