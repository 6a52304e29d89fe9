"""Shared integer arithmetic: sieving, primality verdicts, exact roots.

Everything downstream (series build, factorization, survey windows) routes
through this module so the exactness rules live in one place.  No floats are
used for any correctness-bearing comparison; float seeds for root finding are
always verified and corrected with integer arithmetic.
"""

from __future__ import annotations

import math
from enum import Enum


class PrimalityVerdict(Enum):
    COMPOSITE = "composite"
    PRIME = "prime"
    PROBABLE_PRIME = "probable_prime"


# Largest n for which the fixed Miller-Rabin battery below is known to be a
# deterministic primality test.
DETERMINISTIC_LIMIT = 3_317_044_064_679_887_385_961_981

# (bound, bases): for n < bound the listed bases are a deterministic witness
# set.  Ordered so the first matching row applies.
_MR_BASE_TABLE = (
    (2_047, (2,)),
    (1_373_653, (2, 3)),
    (9_080_191, (31, 73)),
    (25_326_001, (2, 3, 5)),
    (3_215_031_751, (2, 3, 5, 7)),
    (4_759_123_141, (2, 7, 61)),
    (1_122_004_669_633, (2, 13, 23, 1_662_803)),
    (2_152_302_898_747, (2, 3, 5, 7, 11)),
    (3_474_749_660_383, (2, 3, 5, 7, 11, 13)),
    (341_550_071_728_321, (2, 3, 5, 7, 11, 13, 17)),
    (3_825_123_056_546_413_051, (2, 3, 5, 7, 11, 13, 17, 19, 23)),
    (318_665_857_834_031_151_167_461, (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)),
    (DETERMINISTIC_LIMIT, (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)),
)

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def sieve_primes(limit: int) -> list[int]:
    """All primes <= limit via a bytearray Eratosthenes sieve."""
    if limit < 2:
        return []
    flags = bytearray(b"\x01") * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            start = p * p
            flags[start :: p] = b"\x00" * ((limit - start) // p + 1)
    return [i for i, f in enumerate(flags) if f]


_sieve_cache: dict[int, list[int]] = {}


def cached_primes(limit: int) -> list[int]:
    """Sieve up to limit, memoized on the exact limit value."""
    got = _sieve_cache.get(limit)
    if got is None:
        got = sieve_primes(limit)
        if len(_sieve_cache) > 8:
            _sieve_cache.clear()
        _sieve_cache[limit] = got
    return got


def _mr_composite_witness(n: int, a: int) -> bool:
    """True when base a proves n composite (n odd, > 2)."""
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return False
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return False
    return True


def jacobi_symbol(a: int, n: int) -> int:
    """Jacobi symbol (a|n) for odd n >= 1."""
    if n <= 0 or n % 2 == 0:
        raise ValueError("jacobi symbol needs odd positive n")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def is_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def _strong_lucas_prp(n: int) -> bool:
    """Strong Lucas test with Selfridge parameters (n odd, > 2, non-square)."""
    d_param = 5
    while True:
        j = jacobi_symbol(d_param, n)
        if j == -1:
            break
        if j == 0 and abs(d_param) != n:
            return False
        d_param = -(d_param + 2) if d_param > 0 else -(d_param - 2)
    p_param = 1
    q_param = (1 - d_param) // 4

    d = n + 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1

    # Compute U_d, V_d, Q^d (mod n) by a left-to-right binary ladder.
    u, v, qk = 1, p_param, q_param % n
    for bit in bin(d)[3:]:
        u = u * v % n
        v = (v * v - 2 * qk) % n
        qk = qk * qk % n
        if bit == "1":
            u, v = p_param * u + v, d_param * u + p_param * v
            if u & 1:
                u += n
            if v & 1:
                v += n
            u = (u >> 1) % n
            v = (v >> 1) % n
            qk = qk * q_param % n
    if u == 0 or v == 0:
        return True
    for _ in range(s - 1):
        v = (v * v - 2 * qk) % n
        qk = qk * qk % n
        if v == 0:
            return True
    return False


def classify_prime(n: int) -> PrimalityVerdict:
    """Primality verdict for n >= 1.

    Below DETERMINISTIC_LIMIT the fixed Miller-Rabin battery decides
    prime/composite outright.  Above it, a base-2 strong-pseudoprime test
    combined with a strong Lucas test (Selfridge parameters) yields
    probable_prime/composite.  n = 1 is reported composite: the verdict set
    has no separate tag for units.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return PrimalityVerdict.COMPOSITE
    for p in _SMALL_PRIMES:
        if n == p:
            return PrimalityVerdict.PRIME
        if n % p == 0:
            return PrimalityVerdict.COMPOSITE
    if n < DETERMINISTIC_LIMIT:
        for bound, bases in _MR_BASE_TABLE:
            if n < bound:
                break
        for a in bases:
            if _mr_composite_witness(n, a):
                return PrimalityVerdict.COMPOSITE
        return PrimalityVerdict.PRIME
    if _mr_composite_witness(n, 2):
        return PrimalityVerdict.COMPOSITE
    if is_square(n):
        return PrimalityVerdict.COMPOSITE
    if not _strong_lucas_prp(n):
        return PrimalityVerdict.COMPOSITE
    return PrimalityVerdict.PROBABLE_PRIME


def is_prime(n: int) -> bool:
    """True when classify_prime does not say composite."""
    if n < 1:
        return False
    return classify_prime(n) is not PrimalityVerdict.COMPOSITE


def iroot(n: int, k: int) -> int:
    """Exact floor(n^(1/k)) for n >= 0, k >= 1."""
    if n < 0 or k < 1:
        raise ValueError("iroot needs n >= 0 and k >= 1")
    if k == 1 or n < 2:
        return n
    if k == 2:
        return math.isqrt(n)
    # Integer seed from the bit length, then Newton steps; both directions of
    # the final correction loop keep the result exact regardless of the seed.
    r = 1 << -(-n.bit_length() // k)
    while True:
        nxt = ((k - 1) * r + n // r ** (k - 1)) // k
        if nxt >= r:
            break
        r = nxt
    while r ** k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


def iroot_ceil(n: int, k: int) -> int:
    """Exact ceil(n^(1/k))."""
    r = iroot(n, k)
    return r if r ** k == n else r + 1


def factor_trial(n: int, limit: int) -> tuple[dict[int, int], int]:
    """Trial-divide n by sieved primes <= limit.

    Returns (exponents of primes found, remaining cofactor).  The cofactor is
    1, a prime > limit, or a composite with no prime factor <= limit.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    found: dict[int, int] = {}
    m = n
    for p in cached_primes(limit):
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            found[p] = e
    if m > 1 and m <= limit:
        found[m] = found.get(m, 0) + 1
        m = 1
    return found, m
