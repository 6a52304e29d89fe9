"""Angle statistics for tau(p) and the sparse-prime-value heuristic.

Writing tau(p) = 2 p^(11/2) cos(theta_p) (legal by the Deligne bound), the
angles equidistribute with density (2/pi) sin^2(theta) on [0, pi], and
tau(p^r) = p^(11r/2) U_r(cos theta_p) with U_r the Chebyshev polynomial of
the second kind.  This module produces the angle samples, checks the
Chebyshev identity against the exact recurrence, bins angles against the
sin^2 measure, and evaluates the layered predictor C X^(1/(11m)) / (ln X)^2.

Floats are fine for statistics; the only correctness gate (the Deligne
inequality itself) is checked in exact integer arithmetic first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from scipy.stats import chi2 as _chi2_dist

from .delta import TauTable
from .errors import DeligneViolationError
from .hecke import tau_prime_power
from .primes import cached_primes

CHEBYSHEV_MAX_ORDER = 20  # float-range guard for the identity check


@dataclass(frozen=True)
class AngleSample:
    p: int
    cos_theta: float
    theta: float


@dataclass(frozen=True)
class Histogram:
    edges: tuple[float, ...]
    observed: tuple[int, ...]
    expected_mass: tuple[float, ...]
    chi_square: float
    p_value: float

    @property
    def sample_size(self) -> int:
        return sum(self.observed)


def angle(p: int, tau_p: int) -> AngleSample:
    """Angle sample for one prime; requires tau_p^2 <= 4 p^11 exactly."""
    if tau_p * tau_p > 4 * p ** 11:
        raise DeligneViolationError(f"tau({p})={tau_p} violates the Deligne bound")
    cos_theta = float(tau_p) / (2.0 * math.exp(5.5 * math.log(p)))
    cos_theta = max(-1.0, min(1.0, cos_theta))
    return AngleSample(p, cos_theta, math.acos(cos_theta))


def angles_from_table(table: TauTable, p_min: int = 2, p_max: int | None = None) -> list[AngleSample]:
    """Angle samples for all primes in [p_min, min(p_max, N)]."""
    top = table.N if p_max is None else min(p_max, table.N)
    return [angle(p, table.tau(p)) for p in cached_primes(top) if p >= p_min]


def chebyshev_u(r: int, x: float) -> float:
    """U_r(x) by the three-term recurrence."""
    if r < 0:
        raise ValueError("r must be >= 0")
    prev, cur = 1.0, 2.0 * x
    if r == 0:
        return prev
    for _ in range(r - 1):
        prev, cur = cur, 2.0 * x * cur - prev
    return cur


def chebyshev_check(p: int, tau_p: int, r: int, tol: float) -> bool:
    """Exact tau(p^r) versus p^(11r/2) U_r(cos theta_p), within tol*(r+1).

    Both sides are compared after dividing by p^(11r/2); the exact side is
    scaled with Fraction so the quotient is correctly rounded even when the
    raw integers dwarf the float range.
    """
    if r > CHEBYSHEV_MAX_ORDER:
        raise ValueError(f"r must be <= {CHEBYSHEV_MAX_ORDER}")
    sample = angle(p, tau_p)
    exact = tau_prime_power(tau_p, p, r)
    if r % 2 == 0:
        scaled = float(Fraction(exact, p ** (11 * r // 2)))
    else:
        magnitude = math.sqrt(float(Fraction(exact * exact, p ** (11 * r))))
        scaled = math.copysign(magnitude, exact)
    return abs(scaled - chebyshev_u(r, sample.cos_theta)) <= tol * (r + 1)


def angle_cdf(theta: float) -> float:
    """Mass of [0, theta] under (2/pi) sin^2: (2/pi)(theta/2 - sin(2 theta)/4)."""
    return (2.0 / math.pi) * (theta / 2.0 - math.sin(2.0 * theta) / 4.0)


def st_histogram(samples: list[AngleSample], bins: int) -> Histogram:
    """Equal-width histogram on [0, pi] with sin^2-measure expected masses."""
    if bins < 2:
        raise ValueError("bins must be >= 2")
    if not samples:
        raise ValueError("samples must be nonempty")
    edges = tuple(math.pi * i / bins for i in range(bins + 1))
    expected = tuple(angle_cdf(edges[i + 1]) - angle_cdf(edges[i]) for i in range(bins))
    if min(expected) <= 0.0:
        raise ValueError("degenerate binning: zero expected mass")
    observed = [0] * bins
    for s in samples:
        idx = min(int(s.theta / math.pi * bins), bins - 1)
        observed[idx] += 1
    n = len(samples)
    chi_square = sum(
        (observed[i] - n * expected[i]) ** 2 / (n * expected[i]) for i in range(bins)
    )
    p_value = float(_chi2_dist.sf(chi_square, bins - 1))
    return Histogram(edges, tuple(observed), expected, chi_square, p_value)


def chebyshev_magnitude_proportion(samples: list[AngleSample], m: int, threshold: float) -> float:
    """Fraction of samples with |U_{2m}(cos theta_p)| >= threshold.

    Exposes, as a measurable statistic, how often the layer-m Chebyshev
    factor is of unit size.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if not samples:
        raise ValueError("samples must be nonempty")
    hits = sum(1 for s in samples if abs(chebyshev_u(2 * m, s.cos_theta)) >= threshold)
    return hits / len(samples)


@dataclass(frozen=True)
class HeuristicPrediction:
    X: float
    C: float
    layers: tuple[tuple[int, float], ...]

    @property
    def total(self) -> float:
        return sum(v for _, v in self.layers)


def heuristic_prediction(X: float, m_max: int, C: float = 1.0) -> HeuristicPrediction:
    """Layered estimates C X^(1/(11m)) / (ln X)^2 for m = 1..m_max."""
    if X <= math.e:
        raise ValueError("X must exceed e so that log X > 1")
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    log_sq = math.log(X) ** 2
    layers = tuple((m, C * X ** (1.0 / (11.0 * m)) / log_sq) for m in range(1, m_max + 1))
    return HeuristicPrediction(X, C, layers)
