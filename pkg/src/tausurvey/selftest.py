"""Reduced-scale oracle equivalence checks, runnable from the CLI.

The oracles here are deliberately naive and share no logic with the fast
paths they judge: the series oracle multiplies out the 24th power factor by
factor, and the near-point oracle tests every admissible defect directly.
They double as the independent reference implementations for the test suite.
"""

from __future__ import annotations

import math
from typing import IO

from .curves import CurveKind, NearPoint, exact_count, near_points
from .delta import delta_coefficients, tau_parity
from .hecke import tau_of
from .satotate import angle_cdf


def naive_delta_coefficients(N: int) -> list[int]:
    """tau(1..N) by multiplying out prod (1-q^n)^24 one factor at a time."""
    top = N - 1
    poly = [0] * (top + 1)
    poly[0] = 1
    for n in range(1, top + 1):
        for _ in range(24):
            for i in range(top, n - 1, -1):
                poly[i] -= poly[i - n]
    return poly


def naive_near_points(kind: CurveKind, X: int, x_min: int, x_max: int) -> list[NearPoint]:
    """Near-points by testing every defect in the band for squareness."""
    band = kind.band(X)
    points = []
    for x in range(x_min, x_max + 1):
        central = kind.central(x)
        for k in range(-band, band + 1):
            if k == 0:
                continue
            target = central + k
            if target < 0:
                continue
            y = math.isqrt(target)
            if y * y == target:
                if y:
                    points.append(NearPoint(kind, x, -y, k))
                points.append(NearPoint(kind, x, y, k))
    points.sort(key=lambda pt: (pt.x, pt.y))
    return points


def run_self_test(stream: IO[str]) -> bool:
    """Run the reduced-scale suite, printing one PASS/FAIL line per check."""
    failures = 0

    def check(ok: bool, label: str) -> None:
        nonlocal failures
        if not ok:
            failures += 1
        stream.write(f"{'PASS' if ok else 'FAIL'}  {label}\n")

    table = delta_coefficients(500)
    check(list(table.coeffs) == naive_delta_coefficients(500), "series vs naive 24th-power product, N=500")
    check(
        all((table.tau(n) % 2 == 1) == tau_parity(n) for n in range(1, 501)),
        "parity of tau(n) vs odd-square rule, n <= 500",
    )
    pairs_ok = all(
        tau_of(m * n, table) == tau_of(m, table) * tau_of(n, table)
        for m in range(2, 23)
        for n in range(m + 1, 500 // m)
        if math.gcd(m, n) == 1
    )
    check(pairs_ok, "multiplicativity on coprime pairs, mn < 500")
    for kind in CurveKind:
        agree = all(
            near_points(kind, X, 1, 12) == naive_near_points(kind, X, 1, 12)
            for X in (1, 10, 100, 1000)
        )
        check(agree, f"near-point enumeration vs defect-scan oracle, {kind.value}")
    check(exact_count(CurveKind.DEG11, 10, 2).total == 5, "regime dissection total, deg11 X=10")
    check(abs(angle_cdf(math.pi) - 1.0) < 1e-12, "sin^2 measure normalization")
    stream.write(("self-test FAILED\n" if failures else "self-test OK\n"))
    return failures == 0
