"""Ground truth for the counting code, kept on separate arithmetic paths.

``brute_force_occupancy`` never touches the set classes' counting: explicit
points are placed by bisecting exact box boundaries, and the power sequence
is counted box by box through integer roots (``#{n : n^-p >= k/m}`` is an
integer root of ``floor((m/k)^t)`` for ``p = s/t``). Visiting points one by
one is hopeless here; ``p = 1/2`` at ``m = 10^4`` already has 10^8 of them
above ``1/m``. :func:`enumerate_power_points` gives the literal point list
for small cross-checks.

The closed forms are the asymptotic counts from the derivation for
``{1/n^p}``; they are waypoints with additive slack, not exact counts.
"""

from __future__ import annotations

import bisect
import math
from fractions import Fraction
from typing import Iterable

import numpy as np

from ._exact import iroot, to_fraction
from .errors import GBoxDimError
from .grid import OccupancyProfile, cap_counts

MAX_ORACLE_SCALE = 10 ** 6


class BudgetExceeded(GBoxDimError):
    pass


def _int_root_vec(q: np.ndarray, s: int) -> np.ndarray:
    """Elementwise largest r with r**s <= q."""
    if s == 1:
        return q.copy()
    if q.dtype == object:
        return np.array([iroot(int(v), s) for v in q], dtype=object)
    r = np.floor(np.power(q.astype(float), 1.0 / s)).astype(np.int64)
    r = np.maximum(r, 0)
    for _ in range(4):
        r = np.where(r ** s > q, r - 1, r)
        r = np.where((r + 1) ** s <= q, r + 1, r)
    return r


def _power_boundary_counts(p: Fraction, m: int) -> np.ndarray:
    """C[k] = #{n >= 1 : n^-p >= k/m} for k = 1..m (index 0 unused)."""
    s, t = p.numerator, p.denominator
    k = np.arange(1, m + 1)
    mt = m ** t
    # n^s * k^t <= m^t  <=>  n^s <= floor(m^t / k^t)
    if mt * max(1, m) < (1 << 62):
        q = mt // (k.astype(np.int64) ** t)
    else:
        q = np.array([mt // int(v) ** t for v in k], dtype=object)
    c = _int_root_vec(q, s)
    out = np.zeros(m + 1, dtype=c.dtype)
    out[1:] = c
    return out


def brute_force_occupancy(rule, m: int, cap=None) -> OccupancyProfile:
    """Exact capped occupancy from first principles.

    ``rule`` is either an iterable of points (explicit set) or
    ``("power", p)`` with a rational ``p``.
    """
    if m > MAX_ORACLE_SCALE:
        raise BudgetExceeded(f"oracle budget is m <= {MAX_ORACLE_SCALE}")
    if isinstance(rule, tuple) and rule and rule[0] == "power":
        p = to_fraction(rule[1])
        if p <= 0 or p.numerator > 16 or p.denominator > 16:
            raise BudgetExceeded("oracle handles rational p with small terms only")
        C = _power_boundary_counts(p, m)
        upper = np.concatenate([C[2:m], np.zeros(1, dtype=C.dtype)])
        per_box = C[1:m] - upper
        nz = np.nonzero(per_box)[0]
        keys = [0] + (nz + 1).tolist()
        counts = [math.inf] + [int(v) for v in per_box[nz]]
        return cap_counts(keys, counts, m, cap)
    bounds = [Fraction(k, m) for k in range(1, m)]
    tally: dict[int, int] = {}
    for x in rule:
        q = to_fraction(x)
        k = bisect.bisect_right(bounds, q)
        tally[k] = tally.get(k, 0) + 1
    keys = sorted(tally)
    return cap_counts(keys, [tally[k] for k in keys], m, cap)


def enumerate_power_points(p, n_max: int) -> list[Fraction]:
    """Literal points n^-p for n <= n_max; integer p only (exact rationals)."""
    p = to_fraction(p)
    if p.denominator != 1:
        raise ValueError("literal enumeration needs an integer exponent")
    return [Fraction(1, n ** p.numerator) for n in range(1, n_max + 1)]


def power_N_closed_form(p, m: int) -> int:
    """n0 + floor(m * n0^-p) with n0 = floor((m p)^(1/(p+1)))."""
    pf = float(to_fraction(p))
    n0 = max(1, math.floor((m * pf) ** (1.0 / (pf + 1.0))))
    return n0 + math.floor(m * n0 ** -pf)


def power_g_closed_form(p, m: int) -> int:
    """n0' + m * floor(m * n0'^-p) with n0' = floor((m^2 p)^(1/(p+1)))."""
    pf = float(to_fraction(p))
    n0 = max(1, math.floor((m * m * pf) ** (1.0 / (pf + 1.0))))
    return n0 + m * math.floor(m * n0 ** -pf)


def box_count_of(profile: OccupancyProfile) -> int:
    return len(profile)


def gm_of(profile_uncapped: OccupancyProfile) -> int:
    m = profile_uncapped.m
    return int(sum(min(m, c) for c in profile_uncapped.counts))


def explicit_profile(points: Iterable, m: int, cap=None) -> OccupancyProfile:
    return brute_force_occupancy(list(points), m, cap)
