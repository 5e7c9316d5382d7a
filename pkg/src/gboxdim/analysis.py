"""The g_m occupancy sum, log-ratio series, and dimension estimates.

``g_m(X) = sum_k min(m, #(X ∩ B_k))`` over the boxes at scale ``m``. Its
log-ratio ``log g_m / log m`` tracks the graph box dimension of X in the same
way ``log N_{1/m} / log m`` tracks the box dimension.
"""

from __future__ import annotations

import math
from fractions import Fraction
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import EmptySetError, ScheduleError
from .grid import box_count_1d, check_scale, occupancy

COUNTERS = ("box", "gm")


def gm_capped(counted_set, m: int, cap) -> int:
    """sum_k min(cap, #(X ∩ B_k)); ``cap=None`` sums the raw counts."""
    total = occupancy(counted_set, m, cap).total
    return total


def gm(counted_set, m: int) -> int:
    return gm_capped(counted_set, m, cap=m)


def geometric_schedule(base: int, m_min: int, m_max: int) -> list[int]:
    if base < 2:
        raise ScheduleError("geometric base must be at least 2")
    if not (2 <= m_min <= m_max):
        raise ScheduleError("need 2 <= m_min <= m_max")
    out, m = [], m_min
    while m <= m_max:
        out.append(m)
        m *= base
    return out


def explicit_schedule(scales: Sequence[int]) -> list[int]:
    out = sorted({check_scale(int(m)) for m in scales})
    if not out:
        raise ScheduleError("empty schedule")
    if out[0] < 2:
        raise ScheduleError("scales must be at least 2")
    return out


def scale_schedule(kind: str, *args) -> list[int]:
    """``scale_schedule("geometric", base, m_min, m_max)`` or ``("explicit", scales)``."""
    if kind == "geometric":
        return geometric_schedule(*args)
    if kind == "explicit":
        return explicit_schedule(*args)
    raise ScheduleError(f"unknown schedule kind {kind!r}")


def parse_schedule(text: str) -> list[int]:
    """``geo:<base>:<min>:<max>`` or ``list:<m1>,<m2>,...``."""
    kind, _, body = text.partition(":")
    try:
        if kind == "geo":
            base, lo, hi = (int(v) for v in body.split(":"))
            return geometric_schedule(base, lo, hi)
        if kind == "list":
            return explicit_schedule([int(v) for v in body.split(",") if v])
    except ValueError as exc:
        raise ScheduleError(f"bad schedule {text!r}: {exc}") from exc
    raise ScheduleError(f"unknown schedule {text!r}")


@dataclass(frozen=True)
class RatioSeries:
    counter: str
    scales: tuple[int, ...]
    values: tuple[int, ...]

    @property
    def ratios(self) -> tuple[float, ...]:
        return tuple(math.log(v) / math.log(m) for m, v in zip(self.scales, self.values))

    def rows(self):
        return list(zip(self.scales, self.values, self.ratios))

    def __len__(self) -> int:
        return len(self.scales)


def count_at(counted_set, m: int, counter: str) -> int:
    if counter == "box":
        return box_count_1d(counted_set, m)
    if counter == "gm":
        return gm(counted_set, m)
    raise ValueError(f"unknown counter {counter!r}")


def _count_job(args):
    counted_set, m, counter = args
    return count_at(counted_set, m, counter)


def ratio_series(counted_set, schedule: Sequence[int], counter: str = "box",
                 workers: int = 1) -> RatioSeries:
    """Counts and log-ratios along a schedule.

    With ``workers > 1`` the scales are evaluated in separate processes; the
    result is merged in schedule order either way.
    """
    if counter not in COUNTERS:
        raise ValueError(f"counter must be one of {COUNTERS}")
    if counted_set.is_empty():
        raise EmptySetError("empty set has no ratio")
    scales = explicit_schedule(schedule)
    jobs = [(counted_set, m, counter) for m in scales]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(_count_job, jobs))
    else:
        values = [_count_job(j) for j in jobs]
    return RatioSeries(counter, tuple(scales), tuple(int(v) for v in values))


@dataclass(frozen=True)
class DimensionEstimate:
    limsup_proxy: float
    slope: float
    tail_scales: tuple[int, ...]
    slope_scales: tuple[int, ...]
    target: Optional[float] = None
    degenerate: bool = False
    notes: tuple[str, ...] = field(default=())


def log_log_slope(scales: Sequence[int], values: Sequence[int]) -> float:
    x = np.log(np.asarray(scales, dtype=float))
    y = np.log(np.asarray(values, dtype=float))
    if len(x) < 2:
        return float(y[0] / x[0])
    return float(np.polyfit(x, y, 1)[0])


def estimate_dimension(series: RatioSeries, fraction: float = 0.5,
                       window: Optional[int] = None,
                       target: Optional[float] = None) -> DimensionEstimate:
    """Limsup proxy over the last ``ceil(fraction * len)`` ratios and a log-log slope.

    ``window`` counts trailing entries for the slope; by default the slope
    uses every scale within a factor 10 of the largest one.
    """
    n = len(series)
    if n == 0:
        raise ScheduleError("empty series")
    if not (0 < fraction <= 1):
        raise ValueError("fraction must lie in (0, 1]")
    tail = max(1, math.ceil(fraction * n))
    ratios = series.ratios
    limsup = max(ratios[-tail:])
    if window is None:
        top = series.scales[-1]
        start = next(i for i, m in enumerate(series.scales) if 10 * m >= top)
        start = min(start, max(n - 2, 0))
    else:
        if window > n or window < 1:
            raise ScheduleError(f"window {window} larger than series of length {n}")
        start = n - window
    slope = log_log_slope(series.scales[start:], series.values[start:])
    degenerate = max(series.values) <= 1
    notes = ("degenerate: bounds assume an infinite set",) if degenerate else ()
    return DimensionEstimate(
        limsup_proxy=limsup,
        slope=slope,
        tail_scales=series.scales[-tail:],
        slope_scales=series.scales[start:],
        target=target,
        degenerate=degenerate,
        notes=notes,
    )


@dataclass(frozen=True)
class BoundsReport:
    m: int
    coarse: int
    box_count: int
    g: int
    g_coarse: int
    sandwich_ok: bool
    coarse_ok: bool

    @property
    def ok(self) -> bool:
        return self.sandwich_ok and self.coarse_ok


def finite_bounds_check(counted_set, m: int) -> BoundsReport:
    """Finite-scale forms of ``1 <= gdim <= dim + 1`` and ``gdim >= 2 dim``.

    Checks ``N <= g_m <= min(m N, m^2)`` and ``g_s >= N / 2`` for
    ``s = floor(sqrt(m))``.
    """
    m = check_scale(m)
    if m < 4:
        raise ValueError("finite bounds need m >= 4")
    s = math.isqrt(m)
    n = box_count_1d(counted_set, m)
    g = gm(counted_set, m)
    g_s = gm(counted_set, s)
    sandwich = n <= g <= min(m * n, m * m)
    return BoundsReport(m, s, n, g, g_s, sandwich, 2 * g_s >= n)


@dataclass(frozen=True)
class SpecialScaleCheck:
    level: int
    m: int
    feasible: bool
    g: Optional[int]
    lower_bound: Optional[float]
    bound_ok: Optional[bool]
    ratio: Optional[float]


@dataclass(frozen=True)
class ConstructionReport:
    blocks: int
    ordering_ok: int
    diameter_ok: int
    level_sizes_ok: bool
    special: tuple[SpecialScaleCheck, ...]
    predicted_gdim: float

    @property
    def deepest_feasible(self) -> Optional[SpecialScaleCheck]:
        feasible = [s for s in self.special if s.feasible]
        return feasible[-1] if feasible else None

    @property
    def ok(self) -> bool:
        return (
            self.ordering_ok == self.blocks
            and self.diameter_ok == self.blocks
            and self.level_sizes_ok
            and all(s.bound_ok for s in self.special if s.feasible)
        )


def construction_report(construction) -> ConstructionReport:
    """Block geometry and special-scale lower bounds of a block construction.

    Every block ``X_{n,i}`` must sit in ``[(i-1)/x_n, i/x_n]`` with
    ``ceil(x_n inf X_{n,i}) = i`` and have diameter at most ``1/x_{n+1}``;
    each level holds at most ``x_n^2`` points. At a special scale
    ``m_n = floor(x_{n+1}^((1+c)/2))`` whose next level was generated,
    ``g_{m_n} >= x_{n+1}^(a+c) / (16 x_n)`` is checked in exact integers.
    """
    P = construction.construction
    blocks = ordering = diameter = 0
    per_level: dict[int, int] = {}
    for n, i, pts in construction.blocks():
        xn, xn1 = P.gap(n), P.gap(n + 1)
        lo, hi = min(pts), max(pts)
        blocks += 1
        if Fraction(i - 1, xn) <= lo and hi <= Fraction(i, xn) and math.ceil(lo * xn) == i:
            ordering += 1
        if hi - lo <= Fraction(1, xn1):
            diameter += 1
        per_level[n] = per_level.get(n, 0) + len(pts)
    sizes_ok = all(cnt <= P.gap(n) ** 2 for n, cnt in per_level.items())

    e = P.a + P.c
    special = []
    for s in construction.special_scales():
        if not s.feasible:
            special.append(SpecialScaleCheck(s.level, s.m, False, None, None, None, None))
            continue
        xn, xn1 = P.gap(s.level), P.gap(s.level + 1)
        g = gm(construction, s.m)
        # g >= xn1^e / (16 xn)  <=>  (16 g xn)^den >= xn1^num
        ok = (16 * g * xn) ** e.denominator >= xn1 ** e.numerator
        bound = math.exp(float(e) * math.log(xn1) - math.log(16 * xn))
        special.append(SpecialScaleCheck(s.level, s.m, True, g, bound, ok, math.log(g) / math.log(s.m)))
    return ConstructionReport(blocks, ordering, diameter, sizes_ok, tuple(special), float(P.predicted_gdim))
