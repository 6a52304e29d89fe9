"""Exact q-expansion of the discriminant cusp form Delta.

Delta = q * prod_{n>=1} (1 - q^n)^24, so its coefficients tau(n) are obtained
from the cube of the product: by Jacobi's identity

    prod (1 - q^n)^3 = sum_{k>=0} (-1)^k (2k+1) q^{k(k+1)/2},

raising that sparse series to the 8th power (three squarings) and shifting by
one power of q yields tau(1..N).  All coefficients are exact integers.  The
dense squarings use Kronecker substitution: coefficients are packed into one
big integer, squared with CPython's subquadratic multiply, and unpacked with
a balanced-digit borrow pass, so no Python-level O(N^2) loop is needed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import IO, Iterator

from .errors import ResourceLimitError
from .primes import cached_primes

# Series builds beyond this order are refused (quadratic memory/time guard).
SERIES_MAX_DEFAULT = 200_000


@dataclass(frozen=True)
class SparseSeries:
    """Sparse integer power series: (exponent, coefficient) pairs.

    Exponents strictly increase and zero coefficients are never stored.
    """

    terms: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        last = -1
        for e, c in self.terms:
            if e <= last:
                raise ValueError("exponents must strictly increase")
            if c == 0:
                raise ValueError("zero coefficients must not be stored")
            last = e

    def coefficient(self, exponent: int) -> int:
        for e, c in self.terms:
            if e == exponent:
                return c
            if e > exponent:
                break
        return 0


@dataclass(frozen=True)
class TauTable:
    """Exact tau(1..N); 1-indexed, tau(0) does not exist."""

    N: int
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.N < 1 or len(self.coeffs) != self.N:
            raise ValueError("coefficient count must equal N >= 1")

    def tau(self, n: int) -> int:
        if not 1 <= n <= self.N:
            raise ValueError(f"n={n} outside table range 1..{self.N}")
        return self.coeffs[n - 1]

    def iter_records(self) -> Iterator[tuple[int, int]]:
        for i, t in enumerate(self.coeffs, start=1):
            yield i, t

    def export_json_lines(self, stream: IO[str]) -> None:
        """One line per n: {"n": <int>, "tau": "<decimal string>"}."""
        for n, t in self.iter_records():
            stream.write(json.dumps({"n": n, "tau": str(t)}, separators=(",", ":")))
            stream.write("\n")


def jacobi_series(order: int) -> SparseSeries:
    """prod (1-q^n)^3 truncated to exponent <= order.

    Terms sit at the triangular numbers k(k+1)/2 with coefficient
    (-1)^k (2k+1).  order = 0 leaves only the constant term.
    """
    if order < 0:
        raise ValueError("order must be >= 0")
    terms = []
    k = 0
    while k * (k + 1) // 2 <= order:
        coeff = 2 * k + 1
        terms.append((k * (k + 1) // 2, -coeff if k & 1 else coeff))
        k += 1
    return SparseSeries(tuple(terms))


def _square_truncated(coeffs: list[int], max_exp: int) -> list[int]:
    """Exact truncated square of a signed integer polynomial.

    Kronecker substitution: evaluate at 2^b with b wide enough that every
    product coefficient fits in a signed slot, square the resulting integer,
    then read slots back with a balanced-digit borrow pass.
    """
    peak = max((abs(c) for c in coeffs), default=0)
    if peak == 0:
        return [0] * (max_exp + 1)
    bound = len(coeffs) * peak * peak
    b = bound.bit_length() + 2
    b += -b % 8
    width = b // 8

    zero = bytes(width)
    pos_parts = []
    neg_parts = []
    for c in coeffs:
        if c >= 0:
            pos_parts.append(c.to_bytes(width, "little"))
            neg_parts.append(zero)
        else:
            pos_parts.append(zero)
            neg_parts.append((-c).to_bytes(width, "little"))
    packed = int.from_bytes(b"".join(pos_parts), "little") - int.from_bytes(
        b"".join(neg_parts), "little"
    )

    square = packed * packed  # non-negative by construction
    nbytes = max(square.bit_length() // 8 + 1, width * (max_exp + 2))
    buf = square.to_bytes(nbytes, "little")

    half = 1 << (b - 1)
    full = 1 << b
    out = []
    carry = 0
    for k in range(max_exp + 1):
        limb = int.from_bytes(buf[k * width : (k + 1) * width], "little") + carry
        if limb >= half:
            limb -= full
            carry = 1
        else:
            carry = 0
        out.append(limb)
    return out


def delta_coefficients(N: int, *, series_max: int = SERIES_MAX_DEFAULT) -> TauTable:
    """Exact tau(1..N) via three squarings of the cube series.

    Raises ResourceLimitError when N exceeds series_max.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if N > series_max:
        raise ResourceLimitError(f"series order {N} exceeds configured maximum {series_max}")
    top = N - 1  # exponent budget before the q-shift
    dense = [0] * (top + 1)
    for e, c in jacobi_series(top).terms:
        dense[e] = c
    power = _square_truncated(dense, top)  # prod^6
    power = _square_truncated(power, top)  # prod^12
    power = _square_truncated(power, top)  # prod^24
    return TauTable(N, tuple(power))


def tau_parity(n: int) -> bool:
    """True iff tau(n) is odd, i.e. n is an odd square."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n % 2 == 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def verify_deligne(table: TauTable) -> list[tuple[int, int]]:
    """Check tau(p)^2 <= 4 p^11 for every prime p <= N, exactly.

    Returns the list of violating (p, tau(p)) pairs; empty means the whole
    table satisfies the Deligne bound.
    """
    violations = []
    for p in cached_primes(table.N):
        t = table.tau(p)
        if t * t > 4 * p ** 11:
            violations.append((p, t))
    return violations
