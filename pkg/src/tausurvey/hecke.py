"""tau at prime powers and composites via the Hecke relations.

tau is multiplicative on coprime arguments, and at prime powers it obeys

    tau(p^(r+1)) = tau(p) * tau(p^r) - p^11 * tau(p^(r-1)),

so a table of tau at primes determines tau everywhere the table covers.
"""

from __future__ import annotations

import math

from .delta import TauTable
from .errors import OutOfRangeError
from .primes import cached_primes, factor_trial, is_prime


def tau_prime_power(tau_p: int, p: int, e: int) -> int:
    """tau(p^e) from the seed tau(p) by the second-order recurrence.

    The caller supplies the true tau(p); this function only checks that p is
    prime.  e = 0 gives 1, e = 1 gives the seed back.
    """
    if e < 0:
        raise ValueError("exponent must be >= 0")
    if not is_prime(p):
        raise ValueError(f"p={p} is not prime")
    if e == 0:
        return 1
    prev, cur = 1, tau_p
    p11 = p ** 11
    for _ in range(e - 1):
        prev, cur = cur, tau_p * cur - p11 * prev
    return cur


def tau_of(n: int, table: TauTable) -> int:
    """tau(n) for any n whose prime factors are all covered by the table.

    Factors n by trial division against the sieved primes up to table.N,
    evaluates each prime power by the recurrence, and multiplies.  Raises
    OutOfRangeError when some prime factor exceeds table coverage.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    factors, cofactor = factor_trial(n, table.N)
    if cofactor > 1:
        raise OutOfRangeError(f"n={n} has a prime factor beyond table coverage N={table.N}")
    result = 1
    for p, e in factors.items():
        result *= tau_prime_power(table.tau(p), p, e)
    return result


def quartic_identity_check(p: int, tau_p: int) -> bool:
    """Recurrence at exponent 4 versus its closed quartic form.

    tau(p^4) = tau(p)^4 - 3 p^11 tau(p)^2 + p^22 holds as a polynomial
    identity in the seed, so this is true for any integer tau_p.
    """
    p11 = p ** 11
    closed = tau_p ** 4 - 3 * p11 * tau_p ** 2 + p11 * p11
    return tau_prime_power(tau_p, p, 4) == closed


def is_ordinary(ell: int, tau_ell: int) -> bool:
    """True when the odd prime ell does not divide tau(ell)."""
    if ell == 2 or not is_prime(ell):
        raise ValueError(f"ell={ell} must be an odd prime")
    return tau_ell % ell != 0


def admissible_exponents(ell: int) -> set[int]:
    """Odd primes d dividing ell * (ell^2 - 1).

    Solutions of tau(n) = +-ell^m with ell ordinary are forced into the shape
    n = p^(d-1) with d drawn from this set, so it drives survey layering.
    """
    if ell == 2 or not is_prime(ell):
        raise ValueError(f"ell={ell} must be an odd prime")
    out = {ell}
    for part in (ell - 1, ell + 1):
        m = part
        for q in cached_primes(math.isqrt(part) + 1):
            if q * q > m:
                break
            if m % q == 0:
                while m % q == 0:
                    m //= q
                if q != 2:
                    out.add(q)
        if m > 2:
            out.add(m)
    return out
