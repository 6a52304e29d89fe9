"""Integer points near y^2 = x^11 and u^2 = 5 x^22.

A near-point at abscissa x is an integer y whose square lands within the
defect band around the central value (x^11, or 5 x^22 with band 4X): the
defect k = y^2 - central is nonzero and |k| stays inside the band.  Prime
defects are exactly the parameters of the degree-11 twists with an integer
point; defects 4*prime play that role for the degree-22 family.

Enumeration per x walks the integer square roots of the admissible band, so
each abscissa costs O(band / x^(11/2)) candidate checks; past the sub-unit
cutoff that is O(1) per x.  Counting splits the same set into the three
regimes (small / mid / sub-unit) whose boundaries are evaluated with exact
integer power comparisons, never floats.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum

from .errors import ResourceLimitError
from .primes import is_prime

# Widest per-x candidate run a single call may scan (resource guard, not a
# correctness parameter: the enumerated set never depends on it).
FULL_SCAN_CEILING = 100_000_000


class CurveKind(Enum):
    DEG11 = "deg11"
    DEG22 = "deg22"

    def central(self, x: int) -> int:
        return x ** 11 if self is CurveKind.DEG11 else 5 * x ** 22

    def band(self, X: int) -> int:
        return X if self is CurveKind.DEG11 else 4 * X

    def in_small_regime(self, x: int, X: int) -> bool:
        # deg11: x <= (2X)^(1/11);  deg22: x <= X^(1/22)
        if self is CurveKind.DEG11:
            return x ** 11 <= 2 * X
        return x ** 22 <= X

    def past_subunit_cutoff(self, x: int, X: int) -> bool:
        # deg11: x > X^(2/11);  deg22: x > X^(1/11)
        if self is CurveKind.DEG11:
            return x ** 11 > X * X
        return x ** 11 > X


@dataclass(frozen=True)
class NearPoint:
    """One admissible pair; y doubles as the u-coordinate for DEG22."""

    kind: CurveKind
    x: int
    y: int
    k: int

    def recomputed_defect(self) -> int:
        return self.y * self.y - self.kind.central(self.x)


@dataclass(frozen=True)
class RegimeReport:
    kind: CurveKind
    X: int
    x_max: int
    small: int
    mid: int
    subunit: int

    @property
    def total(self) -> int:
        return self.small + self.mid + self.subunit


def _scan_x(kind: CurveKind, X: int, x: int, ceiling: int) -> list[NearPoint]:
    """All near-points at one abscissa, y ascending with -y before +y."""
    central = kind.central(x)
    band = kind.band(X)
    lo = central - band
    y_lo = 0 if lo <= 0 else math.isqrt(lo - 1) + 1
    y_hi = math.isqrt(central + band)
    if y_hi - y_lo + 1 > ceiling:
        raise ResourceLimitError(
            f"x={x}: {y_hi - y_lo + 1} y-candidates exceed the scan ceiling {ceiling}"
        )
    points = []
    for y in range(y_lo, y_hi + 1):
        k = y * y - central
        if k == 0:
            continue
        if y:
            points.append(NearPoint(kind, x, -y, k))
        points.append(NearPoint(kind, x, y, k))
    return points


def _scan_range(
    kind: CurveKind, X: int, x_min: int, x_max: int, ceiling: int
) -> list[NearPoint]:
    points = []
    for x in range(x_min, x_max + 1):
        points.extend(_scan_x(kind, X, x, ceiling))
    return points


def _scan_shard(args: tuple[str, int, int, int, int]) -> list[NearPoint]:
    tag, X, lo, hi, ceiling = args
    return _scan_range(CurveKind(tag), X, lo, hi, ceiling)


def near_points(
    kind: CurveKind,
    X: int,
    x_min: int,
    x_max: int,
    *,
    workers: int = 1,
    ceiling: int = FULL_SCAN_CEILING,
) -> list[NearPoint]:
    """All near-points with x in [x_min, x_max], canonically sorted by (x, y).

    Both signs of y are distinct points; y = 0 appears once.  With
    workers > 1 the x-range is split into contiguous shards computed in
    separate processes; the merged, sorted result is identical to the serial
    one by construction.
    """
    if X < 1:
        raise ValueError("X must be >= 1")
    if x_min < 1:
        raise ValueError("x_min must be >= 1")
    if x_min > x_max:
        return []
    span = x_max - x_min + 1
    if workers <= 1 or span < 2 * workers:
        points = _scan_range(kind, X, x_min, x_max, ceiling)
    else:
        step = -(-span // workers)
        shards = [
            (kind.value, X, lo, min(lo + step - 1, x_max), ceiling)
            for lo in range(x_min, x_max + 1, step)
        ]
        points = []
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_scan_shard, shards):
                points.extend(part)
    points.sort(key=lambda pt: (pt.x, pt.y))
    return points


def exact_count(
    kind: CurveKind,
    X: int,
    x_max: int,
    *,
    workers: int = 1,
    ceiling: int = FULL_SCAN_CEILING,
) -> RegimeReport:
    """Near-point count over 1 <= x <= x_max, dissected into the three regimes.

    The dissection is bookkeeping only: the total always equals the plain
    count of near_points on the same domain.
    """
    counts = {"small": 0, "mid": 0, "subunit": 0}
    for pt in near_points(kind, X, 1, x_max, workers=workers, ceiling=ceiling):
        if kind.in_small_regime(pt.x, X):
            counts["small"] += 1
        elif kind.past_subunit_cutoff(pt.x, X):
            counts["subunit"] += 1
        else:
            counts["mid"] += 1
    return RegimeReport(kind, X, x_max, counts["small"], counts["mid"], counts["subunit"])


def window_count(
    kind: CurveKind,
    X: int,
    x_max: int,
    *,
    workers: int = 1,
    ceiling: int = FULL_SCAN_CEILING,
) -> int:
    """Near-points past the sub-unit cutoff, windowed to x <= x_max.

    The unbounded-x quantity this approximates cannot be enumerated on a
    finite machine, so the result is a lower bound for it.
    """
    return exact_count(kind, X, x_max, workers=workers, ceiling=ceiling).subunit


def prime_parameters(
    kind: CurveKind,
    X: int,
    x_max: int,
    *,
    workers: int = 1,
    ceiling: int = FULL_SCAN_CEILING,
) -> set[int]:
    """Primes ell <= X realized as twist parameters by some near-point.

    DEG11 takes ell = |k|; DEG22 needs |k| = 4 * ell, so only defects
    divisible by 4 with prime quarter qualify.
    """
    params = set()
    for pt in near_points(kind, X, 1, x_max, workers=workers, ceiling=ceiling):
        mag = abs(pt.k)
        if kind is CurveKind.DEG22:
            if mag % 4:
                continue
            mag //= 4
        if mag <= X and mag not in params and is_prime(mag):
            params.add(mag)
    return params
