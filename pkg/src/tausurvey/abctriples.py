"""abc-triples built from near-points: normalization, radicals, quality.

A near-point (x, y) with defect k gives the additive relation

    x^11 + k = y^2        (or  5 x^22 + k = u^2),

and dividing by d = gcd of the first two legs produces a coprime triple
a1 + b1 = c1 ready for the abc inequality |c1| <= C * rad(a1 b1 c1)^(1+eps).
Radicals come from a budgeted factorization (trial division, then Brent's
cycle-finding rho with a deterministic seed); when the budget runs out the
reported radical is an upper bound and the triple is flagged incomplete.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .curves import NearPoint
from .primes import cached_primes, iroot, is_prime

TRIAL_LIMIT = 1_000_000
DEFAULT_BUDGET = 200_000

# Relative slack for float comparisons of logarithms: rounded outward so a
# borderline inequality is never reported false due to rounding alone.
_LOG_SLACK = 1e-9


@dataclass(frozen=True)
class AbcTriple:
    a: int
    b: int
    c: int
    d: int
    a1: int
    b1: int
    c1: int
    rad: int
    rad_complete: bool
    quality: float | None


def _rho_brent(n: int, rng: random.Random, budget: int) -> tuple[int | None, int]:
    """One Brent-rho attempt on odd composite n; returns (factor, iterations)."""
    used = 0
    while used < budget:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        ys = x = y
        while g == 1 and used < budget:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1 and used < budget:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                used += min(m, r - k)
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1 and used < budget:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
                used += 1
        if 1 < g < n:
            return g, used
    return None, used


def _peel_perfect_power(n: int) -> int:
    """Smallest r with r^k = n for some k >= 1."""
    for k in cached_primes(n.bit_length()):
        r = iroot(n, k)
        while r ** k == n:
            n = r
            r = iroot(n, k)
    return n


def radical_budgeted(n: int, budget: int = DEFAULT_BUDGET, seed: int = 0) -> tuple[int, bool]:
    """Product of the distinct primes dividing n, under a factoring budget.

    Trial division runs up to TRIAL_LIMIT; remaining composite cofactors go
    through Brent rho with a deterministic RNG seeded by `seed`, spending at
    most `budget` iterations in total.  When some cofactor resists, it is
    multiplied into the result as-is, so the returned value is an upper bound
    on the true radical and the flag is False.  Cofactors surviving the
    probable-prime test are treated as prime.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return 1, True
    found, cofactor = _trial_primes(n)
    stubborn: set[int] = set()
    if cofactor > 1:
        rng = random.Random(seed)
        remaining = budget
        stack = [_peel_perfect_power(cofactor)]
        while stack:
            m = stack.pop()
            if m in found:
                continue
            if is_prime(m):
                found.add(m)
                continue
            factor, used = _rho_brent(m, rng, remaining)
            remaining -= used
            if factor is None:
                stubborn.add(m)
                continue
            stack.append(_peel_perfect_power(factor))
            stack.append(_peel_perfect_power(m // factor))
    rad = 1
    for p in found:
        rad *= p
    for m in stubborn:
        rad *= m
    return rad, not stubborn


def _trial_primes(n: int) -> tuple[set[int], int]:
    found: set[int] = set()
    m = n
    for p in cached_primes(min(TRIAL_LIMIT, math.isqrt(n) + 1)):
        if p * p > m:
            break
        if m % p == 0:
            found.add(p)
            while m % p == 0:
                m //= p
    if m > 1 and m <= TRIAL_LIMIT:
        found.add(m)
        m = 1
    return found, m


def make_triple(a: int, b: int, *, budget: int = DEFAULT_BUDGET, seed: int = 0) -> AbcTriple:
    """gcd-normalize the relation a + b = c and attach radical and quality."""
    if a == 0 or b == 0 or a + b == 0:
        raise ValueError("all three legs must be nonzero")
    c = a + b
    d = math.gcd(abs(a), abs(b))
    a1, b1, c1 = a // d, b // d, c // d
    # a1, b1, c1 are pairwise coprime (a shared prime of any two divides the
    # third leg of a1 + b1 = c1), so the radical splits over the legs.
    rad = 1
    complete = True
    for leg in (a1, b1, c1):
        leg_rad, leg_ok = radical_budgeted(abs(leg), budget=budget, seed=seed)
        rad *= leg_rad
        complete = complete and leg_ok
    quality = _quality(a1, b1, c1, rad, complete)
    return AbcTriple(a, b, c, d, a1, b1, c1, rad, complete, quality)


def _quality(a1: int, b1: int, c1: int, rad: int, complete: bool) -> float | None:
    if not complete or rad <= 1:
        return None
    top = max(abs(a1), abs(b1), abs(c1))
    return math.log(top) / math.log(rad)


def from_near_point(pt: NearPoint, *, budget: int = DEFAULT_BUDGET, seed: int = 0) -> AbcTriple:
    """Triple (central, defect, y^2) for a near-point with y and k nonzero."""
    if pt.y == 0:
        raise ValueError("y = 0 near-points do not generate a triple")
    if pt.k == 0:
        raise ValueError("defect must be nonzero")
    return make_triple(pt.kind.central(pt.x), pt.k, budget=budget, seed=seed)


def triple_quality(t: AbcTriple) -> float | None:
    """ln(max |leg|) / ln(radical); None when the radical is unusable."""
    return _quality(t.a1, t.b1, t.c1, t.rad, t.rad_complete)


def abc_check(t: AbcTriple, epsilon: float, C: float) -> bool:
    """Whether |c1| <= C * rad^(1+epsilon), rounded outward.

    Requires a complete radical; epsilon and C must be positive.
    """
    if not t.rad_complete:
        raise ValueError("abc_check needs a complete radical")
    if epsilon <= 0 or C <= 0:
        raise ValueError("epsilon and C must be positive")
    lhs = math.log(abs(t.c1))
    rhs = math.log(C) + (1.0 + epsilon) * math.log(t.rad)
    return lhs <= rhs + _LOG_SLACK * max(1.0, abs(rhs))
