"""Polygonal functions on [0, 1] with exact rational breakpoints.

All row computations go through an integer kernel: every function value is
carried as an exact pair ``P / Q`` of integer arrays, so ``floor(f(x) * m)``
never depends on floating point rounding. Arrays are int64 when the operands
provably fit, Python-int object arrays otherwise.

Rows follow the same rule as columns: the value range ``[0, ceil(M m)/m]``
(``M`` the largest value) is cut into half-open rows ``[j/m, (j+1)/m)``
except the top one, which is closed. A value sitting exactly on the top of
the range therefore shares the row below it, just as ``x = 1`` shares the
last column.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from ._exact import lcm_of_denominators, to_fraction
from .errors import DomainError

_INT64_SAFE = 1 << 62
# Common denominators beyond this many bits are evaluated point by point.
_KERNEL_MAX_BITS = 2048


def _as_array(values: Sequence[int], bound: int) -> np.ndarray:
    if bound < _INT64_SAFE:
        return np.asarray(values, dtype=np.int64)
    return np.array([int(v) for v in values], dtype=object)


def _divmod(a: np.ndarray, b: np.ndarray):
    q = a // b
    return q, a - q * b


def close_top_row(rows: np.ndarray, exact: np.ndarray) -> np.ndarray:
    """Move values lying exactly on the top of the range into the row below."""
    if rows.size == 0:
        return rows
    top = rows.max()
    on_top = rows == top
    if top > 0 and np.all(exact[on_top]):
        rows = rows.copy()
        rows[on_top] = top - 1
    return rows


def floor_rows(P: np.ndarray, Q: np.ndarray, m: int) -> np.ndarray:
    """Row index of ``P/Q`` at scale ``m`` for every entry (``Q > 0``)."""
    if P.dtype != object:
        bound = int(np.max(np.abs(P), initial=0)) * m
        if bound >= _INT64_SAFE:
            P = P.astype(object)
            Q = Q.astype(object)
    rows, rem = _divmod(P * m, Q)
    return close_top_row(rows, rem == 0)


def floor_rows_of_sum(P1, Q1, P2, Q2, m: int) -> np.ndarray:
    """Row index of ``P1/Q1 + P2/Q2`` without forming the cross products in full.

    Splits each term into an integer part and a remainder, so only
    ``r1 * Q2 + r2 * Q1`` has to be compared against ``Q1 * Q2``.
    """
    def big(*arrs):
        return any(a.dtype == object for a in arrs)

    if not big(P1, Q1, P2, Q2):
        qmax = int(max(np.max(Q1, initial=1), np.max(Q2, initial=1)))
        pmax = int(max(np.max(np.abs(P1), initial=0), np.max(np.abs(P2), initial=0)))
        if 2 * qmax * qmax >= _INT64_SAFE or pmax * m >= _INT64_SAFE:
            P1, Q1, P2, Q2 = (a.astype(object) for a in (P1, Q1, P2, Q2))
    a1, r1 = _divmod(P1 * m, Q1)
    a2, r2 = _divmod(P2 * m, Q2)
    frac = r1 * Q2 + r2 * Q1
    whole = Q1 * Q2
    carry = frac >= whole
    rows = a1 + a2 + carry.astype(a1.dtype if a1.dtype != object else np.int64)
    return close_top_row(rows, (frac == 0) | (frac == whole))


@dataclass(frozen=True)
class PiecewiseLinear:
    """Linear interpolation through sorted breakpoints, constant outside them."""

    xs: tuple[Fraction, ...]
    ys: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.xs) == 0 or len(self.xs) != len(self.ys):
            raise ValueError("need at least one breakpoint and matching ys")
        if any(b <= a for a, b in zip(self.xs, self.xs[1:])):
            raise ValueError("breakpoint x values must be strictly increasing")

    @classmethod
    def from_points(cls, points: Iterable[tuple]) -> "PiecewiseLinear":
        pairs = sorted((to_fraction(x), to_fraction(y)) for x, y in points)
        xs = tuple(p[0] for p in pairs)
        ys = tuple(p[1] for p in pairs)
        return cls(xs, ys)

    @classmethod
    def constant(cls, value) -> "PiecewiseLinear":
        return cls((Fraction(0),), (to_fraction(value),))

    @classmethod
    def linear(cls, slope, intercept=0) -> "PiecewiseLinear":
        slope, intercept = to_fraction(slope), to_fraction(intercept)
        return cls((Fraction(0), Fraction(1)), (intercept, intercept + slope))

    def __len__(self) -> int:
        return len(self.xs)

    def __call__(self, x) -> Fraction:
        x = to_fraction(x)
        xs, ys = self.xs, self.ys
        if x <= xs[0]:
            return ys[0]
        if x >= xs[-1]:
            return ys[-1]
        j = bisect.bisect_right(xs, x) - 1
        x0, x1, y0, y1 = xs[j], xs[j + 1], ys[j], ys[j + 1]
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0)

    def __add__(self, other: "PiecewiseLinear") -> "PiecewiseLinear":
        if not isinstance(other, PiecewiseLinear):
            return NotImplemented
        xs = tuple(sorted(set(self.xs) | set(other.xs)))
        return PiecewiseLinear(xs, tuple(self(x) + other(x) for x in xs))

    @property
    def sup_norm(self) -> Fraction:
        return max(abs(y) for y in self.ys)

    @property
    def min_value(self) -> Fraction:
        return min(self.ys)

    def slopes(self) -> list[Fraction]:
        return [
            (y1 - y0) / (x1 - x0)
            for x0, x1, y0, y1 in zip(self.xs, self.xs[1:], self.ys, self.ys[1:])
        ]

    def max_abs_slope(self) -> Fraction:
        return max((abs(s) for s in self.slopes()), default=Fraction(0))

    # -- integer kernel -------------------------------------------------

    @cached_property
    def _integer_form(self):
        dx = lcm_of_denominators(self.xs)
        dy = lcm_of_denominators(self.ys)
        X = [int(x * dx) for x in self.xs]
        Y = [int(y * dy) for y in self.ys]
        return dx, dy, X, Y

    def values_at(self, nums: Sequence[int], den: int) -> tuple[np.ndarray, np.ndarray]:
        """Exact values at ``nums[i] / den`` as integer arrays ``(P, Q)``."""
        dx, dy, X, Y = self._integer_form
        c = math.lcm(dx, den)
        sx, sp = c // dx, c // den
        Xc = [v * sx for v in X]
        xspan = max(abs(Xc[0]), abs(Xc[-1]), c) + 1
        ymax = max(abs(v) for v in Y) + 1
        bound = max(xspan * ymax * 4, dy * xspan * 2, c * (max(map(abs, nums), default=0) + 1))
        xa = _as_array([int(v) * sp for v in nums], bound)
        Xa = _as_array(Xc, bound)
        Ya = _as_array(Y, bound)
        n = len(X)
        if n == 1:
            P = np.full(len(xa), Y[0], dtype=Xa.dtype) if Xa.dtype != object else np.array([Y[0]] * len(xa), dtype=object)
            Q = np.full(len(xa), dy, dtype=Xa.dtype) if Xa.dtype != object else np.array([dy] * len(xa), dtype=object)
            return P, Q
        j = np.searchsorted(Xa, xa, side="right") - 1
        j = np.clip(j, 0, n - 2).astype(np.int64)
        x0, x1 = Xa[j], Xa[j + 1]
        y0, y1 = Ya[j], Ya[j + 1]
        xc = np.minimum(np.maximum(xa, Xa[0]), Xa[-1])
        P = y0 * (x1 - xc) + y1 * (xc - x0)
        Q = (x1 - x0) * dy
        return P, Q

    def rows_at(self, points: Sequence, m: int) -> np.ndarray:
        """floor(f(x) * m) for every point, exactly."""
        pts = [to_fraction(p) for p in points]
        if not pts:
            return np.zeros(0, dtype=np.int64)
        den = lcm_of_denominators(pts, _KERNEL_MAX_BITS)
        if den is None or self._kernel_too_wide:
            return self._rows_by_sweep(pts, m)
        nums = [int(p * den) for p in pts]
        P, Q = self.values_at(nums, den)
        return np.asarray(floor_rows(P, Q, m), dtype=np.int64)

    @cached_property
    def _kernel_too_wide(self) -> bool:
        return (lcm_of_denominators(self.xs, _KERNEL_MAX_BITS) is None
                or lcm_of_denominators(self.ys, _KERNEL_MAX_BITS) is None)

    def _rows_by_sweep(self, pts: list[Fraction], m: int) -> np.ndarray:
        """Exact rows by walking sorted points through the segments once."""
        xs, ys = self.xs, self.ys
        n = len(xs)
        out = np.empty(len(pts), dtype=np.int64)
        exact = np.empty(len(pts), dtype=bool)
        j = 0
        for idx in sorted(range(len(pts)), key=pts.__getitem__):
            x = pts[idx]
            while j + 1 < n and xs[j + 1] <= x:
                j += 1
            if x == xs[j] or j == n - 1:
                y = ys[j]
            elif x < xs[0]:
                y = ys[0]
            else:
                x0, x1, y0, y1 = xs[j], xs[j + 1], ys[j], ys[j + 1]
                y = y0 + (y1 - y0) * (x - x0) / (x1 - x0)
            ym = y * m
            out[idx] = math.floor(ym)
            exact[idx] = ym.denominator == 1
        return close_top_row(out, exact)

    def column_profile(self, m: int) -> np.ndarray:
        """Exact number of grid rows met by the graph over each column.

        Column ``i`` is ``[i/m, (i+1)/m)``, the last one closed at 1. A value
        approached only at an excluded right end does not add its row.
        """
        if self.xs[0] < 0 or self.xs[-1] > 1:
            raise DomainError("breakpoints must lie in [0, 1]")
        P, Q = self.values_at(range(m + 1), m)
        mP = P * m
        lo_b = np.asarray(mP // Q, dtype=np.int64)
        ceil_b = np.asarray(-((-mP) // Q), dtype=np.int64)
        lo = np.minimum(lo_b[:-1], lo_b[1:])
        hi = np.maximum(lo_b[:-1], ceil_b[1:] - 1)
        hi[-1] = max(hi[-1], lo_b[-1])
        for x, y in zip(self.xs, self.ys):
            xm = x * m
            if xm.denominator == 1 and xm.numerator <= m:
                continue  # on a column boundary, already evaluated
            col = min(math.floor(xm), m - 1)
            r = math.floor(y * m)
            lo[col] = min(lo[col], r)
            hi[col] = max(hi[col], r)
        top = max(math.ceil(max(self.ys) * m) - 1, 0)
        return np.minimum(hi, top) - np.minimum(lo, top) + 1
