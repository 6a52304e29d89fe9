import io
import json
import math

import pytest

from tausurvey.delta import (
    SparseSeries,
    TauTable,
    delta_coefficients,
    jacobi_series,
    tau_parity,
    verify_deligne,
)
from tausurvey.errors import ResourceLimitError
from tausurvey.primes import cached_primes
from tausurvey.selftest import naive_delta_coefficients


def test_jacobi_small_orders():
    assert jacobi_series(3).terms == ((0, 1), (1, -3), (3, 5))
    assert jacobi_series(0).terms == ((0, 1),)


def test_jacobi_exponents_are_triangular():
    series = jacobi_series(10)
    assert series.coefficient(2) == 0
    for e, c in series.terms:
        k = (math.isqrt(8 * e + 1) - 1) // 2
        assert k * (k + 1) // 2 == e
        assert abs(c) == 2 * k + 1


def test_jacobi_rejects_negative_order():
    with pytest.raises(ValueError):
        jacobi_series(-1)


def test_sparse_series_invariants():
    with pytest.raises(ValueError):
        SparseSeries(((1, 2), (1, 3)))
    with pytest.raises(ValueError):
        SparseSeries(((0, 1), (2, 0)))


def test_first_coefficients_match_brute_force():
    # frozen from the naive 24th-power product expansion
    table = delta_coefficients(5)
    assert table.coeffs == (1, -24, 252, -1472, 4830)


def test_matches_naive_product_oracle():
    table = delta_coefficients(500)
    assert list(table.coeffs) == naive_delta_coefficients(500)


def test_table_indexing():
    table = delta_coefficients(10)
    assert table.tau(1) == 1
    with pytest.raises(ValueError):
        table.tau(0)
    with pytest.raises(ValueError):
        table.tau(11)


def test_table_constructor_validates():
    with pytest.raises(ValueError):
        TauTable(3, (1, -24))


def test_series_ceiling():
    with pytest.raises(ResourceLimitError):
        delta_coefficients(1001, series_max=1000)


def test_parity_rule():
    assert tau_parity(9)
    assert not tau_parity(2)
    assert tau_parity(25)
    assert not tau_parity(16)
    with pytest.raises(ValueError):
        tau_parity(0)


def test_parity_agrees_with_table(table500):
    for n, t in table500.iter_records():
        assert (t % 2 == 1) == tau_parity(n)


def test_multiplicativity_on_table(table500):
    for m in range(2, 23):
        for n in range(m + 1, 500 // m + 1):
            if math.gcd(m, n) == 1 and m * n <= 500:
                assert table500.tau(m * n) == table500.tau(m) * table500.tau(n)


def test_prime_square_relation(table500):
    for p in cached_primes(22):
        assert table500.tau(p * p) == table500.tau(p) ** 2 - p ** 11


def test_deligne_clean(table500):
    assert verify_deligne(table500) == []
    # frozen single-prime checks
    assert (-24) ** 2 == 576 <= 4 * 2 ** 11 == 8192
    assert 252 ** 2 == 63504 <= 4 * 3 ** 11 == 708588


def test_deligne_planted_violation(table500):
    coeffs = list(table500.coeffs)
    coeffs[1] = 10 ** 6  # fake tau(2)
    fake = TauTable(table500.N, tuple(coeffs))
    assert verify_deligne(fake) == [(2, 10 ** 6)]


def test_json_lines_export():
    table = delta_coefficients(3)
    buf = io.StringIO()
    table.export_json_lines(buf)
    lines = [json.loads(line) for line in buf.getvalue().splitlines()]
    assert lines == [
        {"n": 1, "tau": "1"},
        {"n": 2, "tau": "-24"},
        {"n": 3, "tau": "252"},
    ]
