import math
from fractions import Fraction

import pytest

from hypersum.oracle import OracleError, auto_window, oracle_check_recurrence, oracle_sum
from hypersum.parsing import parse_polynomial
from hypersum.term import parse_term
from hypersum.zeilberger import RecurrenceOperator


def op(*coeffs):
    return RecurrenceOperator(tuple(parse_polynomial(c) for c in coeffs))


def delannoy(n):
    return sum(math.comb(n, k) * math.comb(n + k, k) for k in range(n + 1))


def test_row_sum():
    assert oracle_sum(parse_term("binomial(n,k)"), [5]) == [32]


def test_delannoy_values():
    assert oracle_sum(parse_term("binomial(n,k)*binomial(n+k,k)"), range(4)) == [1, 3, 13, 63]
    assert oracle_sum(parse_term("binomial(n,k)*binomial(n+k,k)"), range(15)) == [delannoy(n) for n in range(15)]


def test_new_identity_vanishes():
    sums = oracle_sum(parse_term("(3k-2n)*binomial(n,k)^2*binomial(2k,k)"), range(21))
    assert sums == [0] * 21


def test_auto_window():
    assert auto_window(3, {"b": -7}) == range(-60, 61)
    assert auto_window(0, {}) == range(-50, 51)


def test_explicit_window():
    assert oracle_sum(parse_term("binomial(n,k)"), [4], range(0, 2)) == [5]


def test_parameters_required():
    with pytest.raises(OracleError):
        oracle_sum(parse_term("binomial(b,k)"), [0])
    assert oracle_sum(parse_term("binomial(b,k)"), [0], "auto", {"b": 6}) == [64]


def test_undefined_point_named():
    with pytest.raises(OracleError) as info:
        oracle_sum(parse_term("(k-n)!/k!"), [2])
    assert info.value.point["n"] == 2


def test_recurrence_checks():
    assert oracle_check_recurrence(op("-2", "1"), [Fraction(2**i) for i in range(21)])
    assert not oracle_check_recurrence(op("-2", "1"), [1, 2, 5])
    fib = oracle_sum(parse_term("binomial(n-k,k)"), range(31))
    assert oracle_check_recurrence(op("-1", "-1", "1"), fib)
    with pytest.raises(ValueError):
        oracle_check_recurrence(op("-2", "1"), [1])


def test_recurrence_with_parameters():
    F = parse_term("binomial(n,k)*binomial(b,k)")
    vals = oracle_sum(F, range(10), "auto", {"b": 5})
    assert vals == [math.comb(n + 5, n) for n in range(10)]
    assert oracle_check_recurrence(op("-(n+b+1)", "n+1"), vals, 0, {"b": 5})
