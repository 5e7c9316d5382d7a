"""Integer-scale grids on [0, 1] and the occupancy counts built on them.

At scale ``m`` the boxes are ``B_k = [k/m, (k+1)/m)`` for ``k < m - 1`` and
``B_{m-1} = [(m-1)/m, 1]``; they partition [0, 1]. Graph cells use the same
rule in the vertical direction over the range ``[0, ceil(M m)/m]`` of the
sampled values (``M`` their maximum): half-open rows, the top one closed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from ._exact import to_fraction
from .errors import DomainError, ResolutionError
from .polyline import close_top_row

UNBOUNDED = None


def check_scale(m) -> int:
    if isinstance(m, bool) or not isinstance(m, (int, np.integer)) or m < 1:
        raise DomainError(f"scale must be a positive integer, got {m!r}")
    return int(m)


def box_index(x, m: int) -> int:
    """Index of the box at scale ``m`` that contains ``x``."""
    m = check_scale(m)
    q = to_fraction(x)
    if q < 0 or q > 1:
        raise DomainError(f"point {x!r} outside [0, 1]")
    return min(q.numerator * m // q.denominator, m - 1)


def box_indices(nums, den: int, m: int) -> np.ndarray:
    """Vectorised :func:`box_index` for points ``nums[i] / den`` already in [0, 1]."""
    if den * m < (1 << 62) and (len(nums) == 0 or isinstance(nums, np.ndarray) and nums.dtype != object):
        idx = (np.asarray(nums, dtype=np.int64) * m) // den
    else:
        idx = np.array([int(n) * m // den for n in nums], dtype=np.int64)
    return np.minimum(idx, m - 1)


@dataclass(frozen=True)
class OccupancyProfile:
    """Occupied boxes at one scale with their (possibly capped) point counts.

    ``cap`` is ``None`` for unbounded counts; a count may then be ``math.inf``
    for a box that holds infinitely many points of an analytic set.
    """

    m: int
    cap: Optional[int]
    entries: tuple[tuple[int, object], ...]

    def __post_init__(self):
        prev = -1
        for k, c in self.entries:
            if not (prev < k <= self.m - 1) or c < 1:
                raise ValueError("malformed occupancy entries")
            if self.cap is not None and c > self.cap:
                raise ValueError("count exceeds cap")
            prev = k

    @property
    def indices(self) -> list[int]:
        return [k for k, _ in self.entries]

    @property
    def counts(self) -> list:
        return [c for _, c in self.entries]

    @property
    def total(self):
        return sum(self.counts)

    def as_dict(self) -> dict:
        return dict(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


def cap_counts(indices, counts, m: int, cap) -> OccupancyProfile:
    if cap is None or cap == math.inf:
        entries = tuple((int(k), c if c == math.inf else int(c)) for k, c in zip(indices, counts))
        return OccupancyProfile(m, None, entries)
    cap = int(cap)
    if cap < 1:
        raise DomainError("cap must be at least 1")
    entries = tuple((int(k), int(min(cap, c))) for k, c in zip(indices, counts))
    return OccupancyProfile(m, cap, entries)


def occupancy(counted_set, m: int, cap=UNBOUNDED) -> OccupancyProfile:
    """Capped occupancy ``min(cap, #(X ∩ B_k))`` of every box meeting X."""
    m = check_scale(m)
    limit = counted_set.valid_scale_max
    if m > limit:
        raise ResolutionError(m, limit)
    indices, counts = counted_set.box_counts(m)
    return cap_counts(indices, counts, m, cap)


def box_count_1d(counted_set, m: int) -> int:
    """N_{1/m}(X): the number of boxes at scale ``m`` meeting X."""
    return len(occupancy(counted_set, m, cap=1))


@dataclass(frozen=True)
class CellSet2D:
    m: int
    cells: frozenset

    def __len__(self) -> int:
        return len(self.cells)


def graph_cells(samples: Iterable[tuple], m: int) -> CellSet2D:
    m = check_scale(m)
    cols, rows, exact = [], [], []
    for x, y in samples:
        yq = to_fraction(y)
        if yq < 0:
            raise DomainError(f"negative height {y!r}")
        ym = yq * m
        cols.append(box_index(x, m))
        rows.append(math.floor(ym))
        exact.append(ym.denominator == 1)
    rows = close_top_row(np.asarray(rows, dtype=object), np.asarray(exact, dtype=bool))
    return CellSet2D(m, frozenset(zip(cols, (int(r) for r in rows))))


def graph_box_count(samples: Iterable[tuple], m: int) -> int:
    """Number of distinct grid cells hit by the sampled graph points.

    A lower bound on N_{1/m} of any continuous graph through the samples.
    """
    return len(graph_cells(samples, m))


def graph_box_count_of(f, points, m: int) -> int:
    """Cells met by ``f`` restricted to a finite point set, counted exactly."""
    m = check_scale(m)
    pts = [to_fraction(p) for p in points]
    if not pts:
        return 0
    rows = f.rows_at(pts, m)
    if np.any(rows < 0):
        raise DomainError("function takes negative values on the samples")
    cols = [box_index(p, m) for p in pts]
    return len(set(zip(cols, rows.tolist())))


def column_profile(f, m: int) -> np.ndarray:
    """Rows met by the full-interval graph of ``f`` in each of the ``m`` columns."""
    return f.column_profile(check_scale(m))
