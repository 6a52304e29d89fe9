"""Empirical survey of prime values |tau(n)| up to X.

Odd tau-values force n to be an odd square, so prime values can only appear
at n = p^(2m) with p an odd prime.  Each layer m scans the p-window where
|tau(p^(2m))| can stay below X (the generic magnitude is (2m+1) p^(11m), via
the Deligne bound), keeps the values that pass the magnitude gate and the
primality test, and the survey deduplicates primes across layers.

No finite window is provably exhaustive (absent a lower bound on |tau|), so
every count reported here is an observed lower bound, and the reports say so.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import curves
from .delta import TauTable
from .hecke import is_ordinary, tau_prime_power
from .primes import PrimalityVerdict, cached_primes, classify_prime, iroot_ceil

is_probable_prime = classify_prime

WINDOW_CAVEAT = (
    "observed lower bound: finite p-window per layer and a layer cap sized for "
    "generic magnitudes; sporadic smaller values outside the window are not ruled out"
)

# Known small odd values that tau never takes at n >= 2.
OMITTED_VALUES = frozenset(
    {1, -1, 3, -3, 5, -5, 7, -7, 13, -13, 17, -17, -19, 23, -23, 37, -37, 691, -691}
)


@dataclass(frozen=True)
class SurveyRecord:
    """One candidate |tau(p^(2m))| = ell that survived the primality test."""

    ell: int
    p: int
    m: int
    sign: int
    verdict: PrimalityVerdict
    ordinary: bool | None


@dataclass(frozen=True)
class SurveyLayer:
    m: int
    p_window: int
    truncated: bool
    records: tuple[SurveyRecord, ...]

    @property
    def primes(self) -> set[int]:
        return {r.ell for r in self.records}


@dataclass(frozen=True)
class SurveyReport:
    X: int
    m_max: int
    layers: tuple[SurveyLayer, ...]
    primes: tuple[int, ...]
    truncated: bool
    terms: dict[str, float] = field(default_factory=dict)
    windowed: bool = True
    caveat: str = WINDOW_CAVEAT

    @property
    def count(self) -> int:
        return len(self.primes)


@dataclass(frozen=True)
class ReductionReport:
    """Survey plus the windowed near-point tail counts, for tabulation."""

    survey: SurveyReport
    x_max: int
    e2_windowed: int
    e4_windowed: int


def layer_window(m: int, X: int) -> int:
    """ceil(((2m+1) X)^(1/(11m))): where generic |tau(p^(2m))| passes X."""
    if m < 1 or X < 1:
        raise ValueError("m and X must be >= 1")
    return iroot_ceil((2 * m + 1) * X, 11 * m)


def survey_layer(m: int, X: int, table: TauTable) -> SurveyLayer:
    """Scan layer m: odd primes p up to the window, clamped to the table.

    Records keep only values passing both 1 <= |tau| <= X and the primality
    test; the layer is flagged truncated when the window exceeds coverage.
    """
    window = layer_window(m, X)
    truncated = window > table.N
    records = []
    for p in cached_primes(min(window, table.N)):
        if p == 2:
            continue
        value = tau_prime_power(table.tau(p), p, 2 * m)
        mag = abs(value)
        if not 1 <= mag <= X:
            continue
        verdict = classify_prime(mag)
        if verdict is PrimalityVerdict.COMPOSITE:
            continue
        if mag % 2 == 0:
            raise AssertionError(f"even survey value {value} at p={p}, m={m}")
        ordinary = is_ordinary(mag, table.tau(mag)) if mag <= table.N else None
        records.append(
            SurveyRecord(mag, p, m, 1 if value > 0 else -1, verdict, ordinary)
        )
    return SurveyLayer(m, window, truncated, tuple(records))


def layer_cap(X: int) -> int:
    """Largest layer worth scanning: generic magnitudes start at 3^(11m)."""
    return int(math.log(X) / (11 * math.log(3))) + 1


def comparison_terms(X: int) -> dict[str, float]:
    """The analytic reduction terms reported next to the observed count."""
    x = float(X)
    return {
        "x_9_10_log_x": x ** 0.9 * math.log(x),
        "x_13_22": x ** (13 / 22),
        "x_6_11": x ** (6 / 11),
    }


def survey(X: int, table: TauTable) -> SurveyReport:
    """Union of all layers m = 1 .. layer_cap(X), primes deduplicated."""
    if X < 3:
        raise ValueError("X must be >= 3")
    m_max = layer_cap(X)
    layers = tuple(survey_layer(m, X, table) for m in range(1, m_max + 1))
    primes = sorted(set().union(*(layer.primes for layer in layers)))
    return SurveyReport(
        X=X,
        m_max=m_max,
        layers=layers,
        primes=tuple(primes),
        truncated=any(layer.truncated for layer in layers),
        terms=comparison_terms(X),
    )


def omitted_values_check(table: TauTable) -> list[tuple[int, int]]:
    """Scan 2 <= n <= N for tau(n) in the known omitted-value set."""
    return [
        (n, t) for n, t in table.iter_records() if n >= 2 and t in OMITTED_VALUES
    ]


def reduction_report(X: int, table: TauTable, x_max: int, *, workers: int = 1) -> ReductionReport:
    """Observed S(X) side by side with the analytic terms and the windowed
    near-point tail counts of both curve families."""
    base = survey(X, table)
    e2 = curves.window_count(curves.CurveKind.DEG11, X, x_max, workers=workers)
    e4 = curves.window_count(curves.CurveKind.DEG22, X, x_max, workers=workers)
    return ReductionReport(base, x_max, e2, e4)
