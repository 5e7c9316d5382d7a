"""Point sets in [0, 1] exposed through per-box counts.

Every set answers ``box_counts(m)``: the occupied box indices at scale ``m``
in increasing order with their uncapped point counts. Explicit sets count
their stored rationals; the power sequence counts analytically, so scales far
beyond any enumerable truncation stay exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Iterable, Optional

import mpmath
import numpy as np

from ._exact import SMALL_RATIONAL, floor_rational_power, iroot, to_fraction
from .errors import DomainError, GBoxDimError
from .grid import box_indices

POWER_SCALE_MAX = 2 ** 40
_GRID_FORM_MAX_BITS = 4096


class CountedSet:
    """Common interface of every set the counting code accepts."""

    kind: str = "abstract"
    valid_scale_max: float = math.inf

    def box_counts(self, m: int) -> tuple[list[int], list]:
        raise NotImplementedError

    def to_explicit(self, m: int, cap: int) -> "ExplicitSet":
        """A finite set whose capped occupancy at ``m`` matches this one."""
        raise NotImplementedError

    def is_empty(self) -> bool:
        raise NotImplementedError


class ExplicitSet(CountedSet):
    """A finite, sorted, duplicate-free set of rationals in [0, 1]."""

    kind = "explicit"

    def __init__(self, points: Iterable, kind: str = "explicit", params: Optional[dict] = None):
        pts = sorted({to_fraction(p) for p in points})
        if pts and (pts[0] < 0 or pts[-1] > 1):
            raise DomainError("explicit points must lie in [0, 1]")
        self.points: tuple[Fraction, ...] = tuple(pts)
        self.kind = kind
        self.params = dict(params or {})

    @classmethod
    def from_grid(cls, nums, den: int, kind: str = "explicit", params=None) -> "ExplicitSet":
        """Build from sorted, distinct numerators over one denominator."""
        obj = cls.__new__(cls)
        nums = np.asarray(nums)
        if len(nums) and (nums[0] < 0 or nums[-1] > den):
            raise DomainError("explicit points must lie in [0, 1]")
        obj.kind = kind
        obj.params = dict(params or {})
        obj.__dict__["_grid_form"] = (nums, den)
        obj.__dict__["_lazy_points"] = True
        return obj

    def __getattr__(self, name):
        if name == "points" and self.__dict__.get("_lazy_points"):
            nums, den = self.__dict__["_grid_form"]
            pts = tuple(Fraction(int(n), den) for n in nums)
            self.__dict__["points"] = pts
            return pts
        raise AttributeError(name)

    def __len__(self) -> int:
        if "points" not in self.__dict__ and self.__dict__.get("_lazy_points"):
            return len(self.__dict__["_grid_form"][0])
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __repr__(self) -> str:
        return f"ExplicitSet(kind={self.kind!r}, size={len(self)})"

    def is_empty(self) -> bool:
        return len(self) == 0

    @cached_property
    def _grid_form(self):
        den = 1
        for p in self.points:
            den = math.lcm(den, p.denominator)
            if den.bit_length() > _GRID_FORM_MAX_BITS:
                return None
        nums = [p.numerator * (den // p.denominator) for p in self.points]
        if den < (1 << 62):
            return np.asarray(nums, dtype=np.int64), den
        return np.array(nums, dtype=object), den

    def box_counts(self, m: int):
        if len(self) == 0:
            return [], []
        form = self._grid_form
        if form is None:
            idx = np.array(
                [min(p.numerator * m // p.denominator, m - 1) for p in self.points],
                dtype=np.int64,
            )
        else:
            idx = box_indices(form[0], form[1], m)
        # points are sorted, so box indices are non-decreasing
        keys, counts = np.unique(idx, return_counts=True)
        return keys.tolist(), counts.tolist()

    def points_by_box(self, m: int) -> dict[int, list[Fraction]]:
        out: dict[int, list[Fraction]] = {}
        for p in self.points:
            out.setdefault(min(p.numerator * m // p.denominator, m - 1), []).append(p)
        return out

    def to_explicit(self, m: int, cap: int) -> "ExplicitSet":
        return self


def explicit_from_points(points: Iterable) -> ExplicitSet:
    return ExplicitSet(points)


class PowerSet(CountedSet):
    """A = {n^-p : n >= 1} ∪ {0}, counted without enumeration.

    The number of points at or above a bound ``b`` is ``#{n : n^-p >= b}``;
    it is located from a floating estimate and then corrected with an exact
    comparison. Rational exponents with small terms compare by integer
    powers, anything else by 50-digit logarithms.
    """

    kind = "power"
    valid_scale_max = POWER_SCALE_MAX

    def __init__(self, p):
        q = to_fraction(p)
        if q <= 0:
            raise DomainError("exponent p must be positive")
        self.p = q
        self._pf = float(q)
        self.exact = q.numerator <= SMALL_RATIONAL and q.denominator <= SMALL_RATIONAL
        self.params = {"p": q}
        self._st = (q.numerator, q.denominator)

    def __repr__(self) -> str:
        return f"PowerSet(p={self.p})"

    def is_empty(self) -> bool:
        return False

    def _at_least(self, n: int, num: int, den: int) -> bool:
        """n^-p >= num/den."""
        if num <= 0:
            return True
        if self.exact:
            s, t = self._st
            if t == 1:
                return n ** s * num <= den
            return n ** s * num ** t <= den ** t
        with mpmath.workdps(50):
            return -self.p_mp * mpmath.log(n) >= mpmath.log(num) - mpmath.log(den)

    @cached_property
    def p_mp(self):
        with mpmath.workdps(50):
            return mpmath.mpf(self.p.numerator) / self.p.denominator

    def count_at_least(self, num: int, den: int) -> int:
        """#{n >= 1 : n^-p >= num/den} for 0 < num/den."""
        if num > den:
            return 0
        at_least = self._at_least
        n = int((den / num) ** (1.0 / self._pf))
        if n > 0 and at_least(n, num, den):
            if not at_least(n + 1, num, den):
                return n
            n += 1
            while at_least(n + 1, num, den):
                n += 1
            return n
        while n > 0 and not at_least(n, num, den):
            n -= 1
        return n

    def point_box(self, n: int, m: int) -> int:
        k = min(int(m * n ** -self._pf), m)
        while k > 0 and not self._at_least(n, k, m):
            k -= 1
        while k + 1 <= m and self._at_least(n, k + 1, m):
            k += 1
        return min(k, m - 1)

    @lru_cache(maxsize=64)
    def box_counts(self, m: int):
        # Sparse head: points far enough apart to be placed one at a time.
        n1 = max(1, int((m * self._pf) ** (1.0 / (self._pf + 1.0))))
        counts: dict[int, object] = {}
        for n in range(1, n1):
            k = self.point_box(n, m)
            counts[k] = counts.get(k, 0) + 1
        # Dense tail: count n >= n1 box by box from boundary counts.
        top = self.point_box(n1, m)
        above = 0
        count_at_least = self.count_at_least
        for k in range(top, 0, -1):
            at_or_above = max(0, count_at_least(k, m) - (n1 - 1))
            c = at_or_above - above
            if c > 0:
                counts[k] = counts.get(k, 0) + c
            above = at_or_above
        counts[0] = math.inf
        keys = sorted(counts)
        return keys, [counts[k] for k in keys]

    def point(self, n: int) -> Fraction:
        """n^-p exactly when it is rational, else its floor on the 2^-96 lattice."""
        s, t = self.p.numerator, self.p.denominator
        if t == 1:
            return Fraction(1, n ** s)
        if self.exact:
            r = iroot(n ** s, t)
            if r ** t == n ** s:
                return Fraction(1, r)
        with mpmath.workdps(60):
            v = mpmath.power(n, -self.p_mp)
            return Fraction(int(mpmath.floor(v * 2 ** 96)), 2 ** 96)

    def truncated(self, n_max: int, include_zero: bool = True) -> ExplicitSet:
        pts = [self.point(n) for n in range(1, n_max + 1)]
        if include_zero:
            pts.append(Fraction(0))
        return ExplicitSet(pts, kind="power", params={"p": self.p, "n_max": n_max})

    def to_explicit(self, m: int, cap: int) -> ExplicitSet:
        """Enough leading terms for every box at ``m`` to reach ``min(cap, count)``."""
        head = self.count_at_least(1, m)
        return self.truncated(head + int(cap))


def power_sequence(p) -> PowerSet:
    return PowerSet(p)


def cantor_set(ratio, depth: int) -> ExplicitSet:
    """Endpoints of the level-``depth`` intervals of a two-piece Cantor construction.

    Each interval keeps its left and right ``ratio`` fractions. All points
    share the denominator ``v**depth`` where ``ratio = u/v``.
    """
    lam = to_fraction(ratio)
    if not (0 < lam <= Fraction(1, 2)):
        raise DomainError("ratio must lie in (0, 1/2]")
    if depth < 0:
        raise DomainError("depth must be non-negative")
    u, v = lam.numerator, lam.denominator
    den = v ** depth
    big = den >= (1 << 62)
    starts = np.array([0], dtype=object if big else np.int64)
    length = 1
    for _ in range(depth):
        # units shrink by v each level; children keep u of v sub-units
        left = starts * v
        right = starts * v + length * (v - u)
        starts = np.concatenate([left, right])
        length *= u
    ends = starts + length
    nums = np.unique(np.concatenate([starts, ends]))
    return ExplicitSet.from_grid(nums, den, kind="cantor", params={"ratio": lam, "depth": depth})


@dataclass(frozen=True)
class PaperSetParams:
    a: Fraction
    c: Fraction
    levels: int
    x1: int = 2
    gamma: int = 4

    def __post_init__(self):
        object.__setattr__(self, "a", to_fraction(self.a))
        object.__setattr__(self, "c", to_fraction(self.c))
        if not (0 < self.a <= 1):
            raise DomainError("a must lie in (0, 1]")
        if not (0 <= self.c < 1):
            raise DomainError("c must lie in [0, 1)")
        if self.levels < 1 or self.x1 < 2 or self.gamma < 2:
            raise DomainError("need levels >= 1, x1 >= 2, gamma >= 2")

    def gap(self, n: int) -> int:
        """x_n = x1 ** (gamma ** (n - 1))."""
        return self.x1 ** (self.gamma ** (n - 1))

    def blocks_per_level(self, n: int) -> int:
        return floor_rational_power(self.gap(n), self.a)

    def block_size(self, n: int) -> int:
        return floor_rational_power(self.gap(n), self.c)

    @property
    def predicted_dim(self) -> Fraction:
        return self.a

    @property
    def predicted_gdim(self) -> Fraction:
        return max(Fraction(1), 2 * (self.a + self.c) / (1 + self.c))


@dataclass(frozen=True)
class SpecialScale:
    level: int
    m: int
    feasible: bool  # X_{level+1} is part of the generated levels


class PaperSet(ExplicitSet):
    """Finite-depth version of the block construction with a fast gap sequence."""

    MAX_POINTS = 5_000_000

    def __init__(self, params: PaperSetParams):
        total = sum(params.blocks_per_level(n) * params.block_size(n) for n in range(1, params.levels + 1))
        if total + 1 > self.MAX_POINTS:
            raise DomainError(f"construction would hold {total + 1} points")
        self.construction = params
        L = params.levels
        den = params.gap(L + 2)
        nums = [0]
        for n, i, block in self.blocks():
            nums.extend(int(q * den) for q in block)
        nums = sorted(set(nums))
        super().__init__([], kind="paper", params={
            "a": params.a, "c": params.c, "levels": L, "x1": params.x1, "gamma": params.gamma,
        })
        arr = np.asarray(nums, dtype=np.int64) if den < (1 << 62) else np.array(nums, dtype=object)
        self.__dict__.pop("points", None)
        self.__dict__["_grid_form"] = (arr, den)
        self.__dict__["_lazy_points"] = True
        self.valid_scale_max = den

    def blocks(self):
        """Yield ``(n, i, points)`` for every block X_{n,i}."""
        P = self.construction
        for n in range(1, P.levels + 1):
            xn, xn2 = P.gap(n), P.gap(n + 2)
            step = xn2 // xn
            size = P.block_size(n)
            for i in range(1, P.blocks_per_level(n) + 1):
                yield n, i, tuple(Fraction(i * step - j, xn2) for j in range(1, size + 1))

    def special_scales(self) -> list[SpecialScale]:
        P = self.construction
        e = (1 + P.c) / 2
        return [
            SpecialScale(n, floor_rational_power(P.gap(n + 1), e), n + 1 <= P.levels)
            for n in range(1, P.levels + 1)
        ]

    @property
    def metadata(self) -> dict:
        P = self.construction
        return {
            "gaps": [P.gap(n) for n in range(1, P.levels + 3)],
            "special_scales": self.special_scales(),
            "predicted_dim": P.predicted_dim,
            "predicted_gdim": P.predicted_gdim,
        }


def paper_set(params: PaperSetParams) -> PaperSet:
    return PaperSet(params)


def valid_scale_range(counted_set: CountedSet):
    return counted_set.valid_scale_max


# -- set-spec mini-language ---------------------------------------------


class SetSpecError(GBoxDimError):
    """A set description could not be parsed or loaded."""


def read_point_file(path) -> ExplicitSet:
    """One value per line, decimal or ``num/den``; ``#`` starts a comment line."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SetSpecError(f"cannot read point file {path}: {exc}") from exc
    pts = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            pts.append(Fraction(line))
        except (ValueError, ZeroDivisionError) as exc:
            raise SetSpecError(f"{path}:{lineno}: bad value {line!r}") from exc
    try:
        return ExplicitSet(pts)
    except DomainError as exc:
        raise SetSpecError(f"{path}: {exc}") from exc


def _kv(body: str) -> dict[str, str]:
    out = {}
    for part in filter(None, body.split(",")):
        if "=" not in part:
            raise SetSpecError(f"expected key=value, got {part!r}")
        k, v = part.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def parse_set_spec(spec: str) -> CountedSet:
    """Parse ``power:p=..``, ``cantor:ratio=..,depth=..``, ``paper:..`` or ``file:<path>``."""
    kind, _, body = spec.partition(":")
    try:
        if kind == "file":
            return read_point_file(body)
        args = _kv(body)
        if kind == "power":
            return PowerSet(Fraction(args["p"]))
        if kind == "cantor":
            return cantor_set(Fraction(args["ratio"]), int(args["depth"]))
        if kind == "paper":
            return paper_set(PaperSetParams(
                a=Fraction(args["a"]), c=Fraction(args.get("c", "0")),
                levels=int(args["levels"]), x1=int(args.get("x1", 2)),
                gamma=int(args.get("gamma", 4)),
            ))
    except KeyError as exc:
        raise SetSpecError(f"missing parameter {exc} in {spec!r}") from exc
    except (ValueError, ZeroDivisionError, DomainError) as exc:
        raise SetSpecError(f"bad set spec {spec!r}: {exc}") from exc
    raise SetSpecError(f"unknown set kind {kind!r}")
