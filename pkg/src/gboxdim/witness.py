"""Polygonal witnesses whose graphs fill as many grid cells as X allows.

At scale ``m`` with height cap ``h`` the witness keeps the ``min(h m, n_k)``
smallest points of each box and lifts the j-th of them to height
``(j + 1/2) / m``. Points of one column then sit in distinct rows, every
height stays below ``h``, and the graph meets at least
``sum_k min(h m, #(X ∩ B_k))`` cells.

:func:`iterate_theorem1` stacks such witnesses into ``F = f_1 + ... + f_S``
with shrinking norms, recording the stage conditions of the limsup
construction.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from ._exact import to_fraction
from .analysis import estimate_dimension, explicit_schedule, gm, gm_capped, ratio_series
from .errors import CapacityError, EmptySetError, ScheduleError
from .grid import box_index, check_scale, graph_box_count, graph_box_count_of
from .polyline import PiecewiseLinear


def _height_capacity(m: int, h: Fraction) -> int:
    return math.floor(h * m)


def select_points(counted_set, m: int, cap: int) -> dict[int, list[Fraction]]:
    """The ``min(cap, count)`` smallest points of every occupied box."""
    m = check_scale(m)
    cap = int(cap)
    if cap < 1:
        raise CapacityError("cap must be at least 1")
    explicit = counted_set.to_explicit(m, cap)
    out = {}
    for k, pts in sorted(explicit.points_by_box(m).items()):
        out[k] = pts[:cap]
    return out


def assign_heights(selected: dict[int, list], m: int, h) -> dict[int, list[Fraction]]:
    """Heights ``(j + 1/2)/m`` for the j-th selected point of each box."""
    h = to_fraction(h)
    heights = {}
    for k, pts in selected.items():
        if len(pts) > h * m:
            raise CapacityError(
                f"box {k} holds {len(pts)} points but h*m = {h * m}"
            )
        heights[k] = [Fraction(2 * j + 1, 2 * m) for j in range(len(pts))]
    return heights


@dataclass(frozen=True)
class WitnessResult:
    m: int
    h: Fraction
    selected: dict
    heights: dict
    function: PiecewiseLinear
    bound: int
    achieved: int

    @property
    def ok(self) -> bool:
        return self.achieved >= self.bound and self.function.sup_norm < self.h

    def samples(self):
        for k in sorted(self.selected):
            yield from zip(self.selected[k], self.heights[k])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "height", "box_column", "box_row"])
        for x, y in self.samples():
            w.writerow([_rat(x), _rat(y), box_index(x, self.m), math.floor(y * self.m)])
        return buf.getvalue()


def _rat(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def build_witness(counted_set, m: int, h) -> WitnessResult:
    m = check_scale(m)
    h = to_fraction(h)
    if counted_set.is_empty():
        raise EmptySetError("cannot build a witness on an empty set")
    cap = _height_capacity(m, h)
    if cap < 1:
        raise CapacityError(f"h*m = {h * m} leaves no room for a single row")
    selected = select_points(counted_set, m, cap)
    heights = assign_heights(selected, m, h)
    pairs = [(x, y) for k in selected for x, y in zip(selected[k], heights[k])]
    f = PiecewiseLinear.from_points(pairs)
    return WitnessResult(
        m=m,
        h=h,
        selected=selected,
        heights=heights,
        function=f,
        bound=gm_capped(counted_set, m, cap),
        achieved=graph_box_count(pairs, m),
    )


def shifted_sum_count(f: PiecewiseLinear, g: PiecewiseLinear, samples, m: int):
    """Cell counts of ``f``, ``g`` and ``f + g`` on the same sample points."""
    samples = list(samples)
    return (
        graph_box_count_of(f, samples, m),
        graph_box_count_of(g, samples, m),
        graph_box_count_of(f + g, samples, m),
    )


# -- iterative construction --------------------------------------------------


def norm_bound(deltas: Sequence[Fraction], i: int) -> Fraction:
    """min{delta_1/2^i, delta_2/2^(i-1), ..., delta_i/2, 1/2^i} (1-based ``i``)."""
    terms = [deltas[j - 1] / 2 ** (i - j + 1) for j in range(1, i + 1)]
    terms.append(Fraction(1, 2 ** i))
    return min(terms)


@dataclass(frozen=True)
class StageRecord:
    stage: int
    m: int
    delta: Fraction
    height_cap: Fraction
    design_scale: int
    norm: Fraction
    count: int
    ratio: float
    final_count: int
    g: int


@dataclass
class Theorem1Result:
    function: PiecewiseLinear
    records: list[StageRecord]
    partial_sums: list[PiecewiseLinear]
    pieces: list[PiecewiseLinear]
    target: float
    degenerate: bool = False
    notes: list[str] = field(default_factory=list)

    def condition_report(self) -> list[dict]:
        """Per-stage truth values of the four stage conditions and the tail checks."""
        out = []
        deltas = [r.delta for r in self.records]
        for idx, r in enumerate(self.records):
            i = r.stage
            prev = self.records[idx - 1].delta if idx else None
            partial = self.pieces[0]
            for piece in self.pieces[1:i]:
                partial = partial + piece
            same = all(partial(x) == self.partial_sums[idx](x) for x in self.partial_sums[idx].xs)
            tail = sum((rr.norm for rr in self.records[idx + 1:]), Fraction(0))
            out.append({
                "stage": i,
                "sum": same,
                "ratio": r.ratio >= self.target - 1 / i - 1e-12,
                "delta": r.delta < min(Fraction(1, i), prev if prev is not None else Fraction(1)) or (i == 1 and r.delta < 1),
                "norm": r.norm <= norm_bound(deltas, i),
                "final_half": 2 * r.final_count >= r.count,
                "tail": tail < r.delta,
                "upper": r.final_count <= r.g,
            })
        return out

    @property
    def ok(self) -> bool:
        return all(all(v for k, v in row.items() if k != "stage") for row in self.condition_report())


def _ratio(value: int, m: int) -> float:
    return math.log(value) / math.log(m) if value > 0 else float("-inf")


def _stage_ratios(X, pool: list[int], target: float):
    """Predicted log-ratio of stage counts for every (m_1, m) pair.

    At the first scale the pieces stay below half a row, so the count is about
    ``N_{1/m_1}``. At a later scale the tallest piece, capped at
    ``h_1 = min(1/(2 m_1), 1/2)``, can lift each box's points into at most
    ``floor(h_1 m)`` distinct rows.
    """
    first = {m: _ratio(occupancy_size(X, m), m) for m in pool}
    later = {}
    for m1 in pool:
        h1 = norm_bound([Fraction(1, m1)], 1)
        for m in pool:
            if m > m1:
                later[m1, m] = _ratio(gm_capped(X, m, max(1, math.floor(h1 * m))), m)
    return first, later


def occupancy_size(X, m: int) -> int:
    return gm_capped(X, m, 1)


def _choose_scales(X, sched: list[int], stages: int, target: float):
    """Stage scales maximising the smallest predicted slack over ``a - 1/i``.

    The last stage needs one larger schedule scale on which the final piece
    can be laid out; every earlier piece is laid out at the last stage scale.
    """
    pool = [m for m in sched if m >= 2]
    first, later = _stage_ratios(X, pool, target)
    best, best_key = None, None
    for combo in itertools.combinations(pool, stages):
        if any(m <= i + 1 for i, m in enumerate(combo[1:], 1)):
            continue  # m_i > i
        deltas = [Fraction(1, m) for m in combo]
        caps = [norm_bound(deltas, i) for i in range(1, stages + 1)]
        last = combo[-1]
        if stages > 1 and any(h * last < 1 for h in caps[:-1]):
            continue
        lookahead = next((M for M in sched if M > last and caps[-1] * M >= 1), None)
        if lookahead is None:
            continue
        slack = [first[combo[0]] - (target - 1)]
        slack += [later[combo[0], m] - (target - 1 / i) for i, m in enumerate(combo[1:], 2)]
        key = (min(slack), tuple(-m for m in combo))
        if best_key is None or key > best_key:
            best, best_key = (list(combo), caps, lookahead), key
    if best is None:
        raise ScheduleError(f"schedule too short for {stages} stages")
    return best


def iterate_theorem1(counted_set, stages: int, schedule: Sequence[int],
                     target: Optional[float] = None, fraction: float = 0.5) -> Theorem1Result:
    """Build ``F = f_1 + ... + f_S`` with ``||f_i|| <= min{delta_j/2^(i-j+1), 1/2^i}``.

    The norm bound keeps ``f_i`` below half a row at its own scale
    ``delta_i = 1/m_i``, so the cells counted at ``m_i`` have to come from
    the taller earlier pieces. Every piece but the last is therefore a
    witness laid out at the last stage scale ``m_S``: its heights
    ``(j + 1/2)/m_S`` rise with the point rank inside each box, which spreads
    the points of a coarse column over up to ``h m_i`` rows, and pieces
    sharing that layout add up without merging rows. The last piece uses the
    next schedule scale that leaves room for one row.

    The scales are chosen together, maximising the smallest predicted slack
    of ``log N_{delta_i}(F_i) / log m_i`` over ``a - 1/i``, where ``a`` is
    the limsup proxy of ``log g_m / log m`` along the schedule unless
    ``target`` is given.
    """
    if stages < 1:
        raise ValueError("need at least one stage")
    sched = explicit_schedule(schedule)
    top = sched[-1]
    X = counted_set.to_explicit(top, top)
    if X.is_empty():
        raise EmptySetError("cannot iterate on an empty set")
    if target is None:
        target = estimate_dimension(ratio_series(X, sched, "gm"), fraction=fraction).limsup_proxy
    points = X.points

    scales, caps, lookahead = _choose_scales(X, sched, stages, target)
    design = [scales[-1]] * (stages - 1) + [lookahead]
    pieces = [build_witness(X, design[i], caps[i]).function for i in range(stages)]
    partial_sums = []
    acc = None
    for f in pieces:
        acc = f if acc is None else acc + f
        partial_sums.append(acc)
    F = partial_sums[-1]

    records = []
    for i in range(1, stages + 1):
        m = scales[i - 1]
        count = graph_box_count_of(partial_sums[i - 1], points, m)
        final = graph_box_count_of(F, points, m)
        records.append(StageRecord(
            stage=i,
            m=m,
            delta=Fraction(1, m),
            height_cap=caps[i - 1],
            design_scale=design[i - 1],
            norm=pieces[i - 1].sup_norm,
            count=count,
            ratio=_ratio(count, m),
            final_count=final,
            g=gm(X, m),
        ))
    degenerate = len(X) <= 1
    notes = ["degenerate: bounds assume an infinite set"] if degenerate else []
    return Theorem1Result(F, records, partial_sums, pieces, target, degenerate, notes)
