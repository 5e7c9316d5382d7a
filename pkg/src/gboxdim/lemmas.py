"""Seeded randomized checks of the three counting lemmas for polygonal graphs.

* A1: adding ``0 < g <= 1/m`` to ``f`` keeps at least half of f's cells.
* A2: ``f + g`` meets at least ``N(g) / (2 n_f)`` cells, where ``n_f`` is the
  largest number of rows f's graph meets in a single column.
* A3: a graph whose slopes are bounded by ``k`` meets at most ``k + 1`` rows
  per column.

A1 and A2 count cells on a shared dyadic sample lattice; A3 uses the exact
continuum column ranges. Every random function has dyadic breakpoints and
dyadic values, so all arithmetic is exact integer arithmetic.

Trial ``t`` of a suite draws from ``default_rng([seed, suite_id, t])``, so a
trial can be replayed alone and the aggregate does not depend on order.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import PreconditionError
from .polyline import PiecewiseLinear, floor_rows, floor_rows_of_sum

SEEDS = (7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
SUITES = ("A1", "A1-weak", "A2", "A2-swapped", "A3")
_SUITE_IDS = {name: i for i, name in enumerate(SUITES)}


@dataclass(frozen=True)
class TrialConfig:
    seed: int = 7
    trials: int = 1000
    breakpoints: tuple[int, int] = (1, 16)
    slope_bound: int = 4
    scales: tuple[int, ...] = (8, 64, 512)
    a3_scale_max: int = 1024
    x_bits: int = 10
    y_bits: int = 20
    sample_bits: int = 10

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        lo, hi = self.breakpoints
        if not (1 <= lo <= hi <= 2 ** self.x_bits + 1):
            raise ValueError("breakpoint range must satisfy 1 <= lo <= hi <= lattice size")
        if self.slope_bound < 0:
            raise ValueError("slope bound must be non-negative")
        if any(m < 1 for m in self.scales) or self.a3_scale_max < 1:
            raise ValueError("scales must be positive")
        if self.sample_bits > self.x_bits + 10:
            raise ValueError("sample lattice is needlessly fine")


def trial_rng(seed: int, suite: str, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, _SUITE_IDS[suite], trial])


def random_piecewise_linear(rng: np.random.Generator, config: TrialConfig,
                            slope_bound: Optional[int] = None,
                            y_max: Fraction = Fraction(1),
                            y_min: Fraction = Fraction(0)) -> PiecewiseLinear:
    """Random polygon on the dyadic lattice, values in ``[y_min, y_max]``.

    With ``slope_bound`` the walk between breakpoints is clamped so every
    segment slope stays within ``[-k, k]``.
    """
    xden, yden = 2 ** config.x_bits, 2 ** config.y_bits
    lo, hi = config.breakpoints
    n = int(rng.integers(lo, hi + 1))
    xs = np.sort(rng.choice(xden + 1, size=n, replace=False))
    ylo = math.ceil(y_min * yden)
    yhi = math.floor(y_max * yden)
    if slope_bound is None:
        ys = rng.integers(ylo, yhi + 1, size=n)
    else:
        ys = np.empty(n, dtype=np.int64)
        ys[0] = rng.integers(ylo, yhi + 1)
        per_x = slope_bound * (yden // xden)
        for j in range(1, n):
            step = per_x * int(xs[j] - xs[j - 1])
            d = int(rng.integers(-step, step + 1))
            ys[j] = min(max(int(ys[j - 1]) + d, ylo), yhi)
    return PiecewiseLinear(
        tuple(Fraction(int(x), xden) for x in xs),
        tuple(Fraction(int(y), yden) for y in ys),
    )


@dataclass(frozen=True)
class LemmaOutcome:
    status: str  # "pass", "fail" or "skip"
    counts: dict

    @property
    def passed(self) -> bool:
        return self.status == "pass"


class _Lattice:
    """Sample points ``i / 2^bits`` with their columns at one scale."""

    def __init__(self, bits: int, m: int):
        self.den = 2 ** bits
        self.nums = np.arange(self.den + 1, dtype=np.int64)
        self.m = m
        self.cols = np.minimum(self.nums * m // self.den, m - 1)

    def count(self, rows: np.ndarray) -> int:
        rows = np.asarray(rows, dtype=np.int64)
        return int(np.unique(self.cols * (int(rows.max(initial=0)) + 2) + rows).size)


def _lattice_for(m: int, sample_bits: int) -> _Lattice:
    return _Lattice(sample_bits, m)


def check_lemma_A1(f: PiecewiseLinear, g: PiecewiseLinear, m: int,
                   sample_bits: int = 10, strict: bool = True) -> LemmaOutcome:
    """``N(f + g) >= ceil(N(f) / 2)`` when ``0 < g <= 1/m`` on the samples.

    ``strict=False`` allows ``g = 0`` somewhere, the tail form used when the
    lemma is applied to a convergent sum.
    """
    lat = _lattice_for(m, sample_bits)
    Pf, Qf = f.values_at(lat.nums, lat.den)
    Pg, Qg = g.values_at(lat.nums, lat.den)
    g_ok = np.all(Pg * m <= Qg) and (np.all(Pg > 0) if strict else np.all(Pg >= 0))
    if not g_ok or np.any(Pf < 0):
        return LemmaOutcome("skip", {"reason": "g outside (0, 1/m] or f negative"})
    nf = lat.count(floor_rows(Pf, Qf, m))
    nsum = lat.count(floor_rows_of_sum(Pf, Qf, Pg, Qg, m))
    ok = nsum >= -(-nf // 2)
    return LemmaOutcome("pass" if ok else "fail", {"N_f": nf, "N_f_plus_g": nsum})


def check_lemma_A2(f: PiecewiseLinear, g: PiecewiseLinear, m: int,
                   sample_bits: int = 10) -> LemmaOutcome:
    """``N(f + g) >= N(g) / (2 n_f)`` with ``n_f = max column_profile(f)``."""
    if f.min_value < 0 or g.min_value < 0:
        return LemmaOutcome("skip", {"reason": "negative function"})
    lat = _lattice_for(m, sample_bits)
    n_f = int(f.column_profile(m).max())
    Pf, Qf = f.values_at(lat.nums, lat.den)
    Pg, Qg = g.values_at(lat.nums, lat.den)
    ng = lat.count(floor_rows(Pg, Qg, m))
    nsum = lat.count(floor_rows_of_sum(Pf, Qf, Pg, Qg, m))
    ok = 2 * n_f * nsum >= ng
    return LemmaOutcome("pass" if ok else "fail", {"n_f": n_f, "N_g": ng, "N_f_plus_g": nsum})


def check_lemma_A3(f: PiecewiseLinear, k, m: int) -> LemmaOutcome:
    """Every column meets at most ``ceil(k) + 1`` rows when ``|f'| <= k``."""
    k = Fraction(k)
    if f.max_abs_slope() > k:
        raise PreconditionError(f"slope {f.max_abs_slope()} exceeds bound {k}")
    worst = int(f.column_profile(m).max())
    ok = worst <= math.ceil(k) + 1
    return LemmaOutcome("pass" if ok else "fail", {"max_column": worst, "bound": math.ceil(k) + 1})


def run_trial(suite: str, config: TrialConfig, trial: int) -> LemmaOutcome:
    rng = trial_rng(config.seed, suite, trial)
    if suite == "A3":
        m = int(rng.integers(1, config.a3_scale_max + 1))
        f = random_piecewise_linear(rng, config, slope_bound=config.slope_bound)
        try:
            return check_lemma_A3(f, config.slope_bound, m)
        except PreconditionError as exc:
            return LemmaOutcome("skip", {"reason": str(exc)})
    m = int(rng.choice(config.scales))
    f = random_piecewise_linear(rng, config)
    if suite in ("A1", "A1-weak"):
        g = random_piecewise_linear(rng, config, y_max=Fraction(1, m))
        return check_lemma_A1(f, g, m, config.sample_bits, strict=(suite == "A1"))
    g = random_piecewise_linear(rng, config)
    if suite == "A2":
        return check_lemma_A2(f, g, m, config.sample_bits)
    if suite == "A2-swapped":
        return check_lemma_A2(g, f, m, config.sample_bits)
    raise ValueError(f"unknown suite {suite!r}")


@dataclass
class SuiteReport:
    suite: str
    trials: int
    passes: int
    skips: int
    failures: int
    seed: int
    failing_trials: list[int] = field(default_factory=list)

    @property
    def skip_rate(self) -> float:
        return self.skips / self.trials

    def to_json(self) -> str:
        return json.dumps(asdict(self))


def run_suite(suite: str, config: TrialConfig) -> SuiteReport:
    if suite not in SUITES:
        raise ValueError(f"suite must be one of {SUITES}")
    report = SuiteReport(suite, config.trials, 0, 0, 0, config.seed)
    for t in range(config.trials):
        outcome = run_trial(suite, config, t)
        if outcome.status == "pass":
            report.passes += 1
        elif outcome.status == "skip":
            report.skips += 1
        else:
            report.failures += 1
            report.failing_trials.append(t)
    return report
