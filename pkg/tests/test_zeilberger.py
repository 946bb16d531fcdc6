from fractions import Fraction

import pytest

from hypersum.algebra import Polynomial, RationalFunction
from hypersum.errors import BoundExhausted
from hypersum.oracle import oracle_check_recurrence, oracle_sum
from hypersum.parsing import parse_polynomial, parse_rational
from hypersum.term import parse_term
from hypersum.zeilberger import (
    RecurrenceOperator,
    TelescopeCertificate,
    UnevaluatedProduct,
    creative_telescope,
    solve_first_order,
    verify_certificate,
)

DIXON = "(-1)^k/((n+k)!*(n-k)!*(b+k)!*(b-k)!*(a+k)!*(a-k)!)"


def op(*coeffs):
    return RecurrenceOperator(tuple(parse_polynomial(c) for c in coeffs))


def fib(m):
    a, b = 0, 1
    for _ in range(m):
        a, b = b, a + b
    return a


def test_fast_algorithm_example():
    F = parse_term("1/(k!*(n-k)!)")
    cert = creative_telescope(F)
    assert cert.operator.is_proportional(op("2", "-(n+1)"))
    assert verify_certificate(F, cert)
    # the same identity written with the opposite overall sign
    flipped = TelescopeCertificate(op("2", "-(n+1)"), parse_rational("k/(n-k+1)"))
    assert verify_certificate(F, flipped)


def test_vandermonde():
    F = parse_term("binomial(n,k)*binomial(b,k)")
    cert = creative_telescope(F)
    assert cert.operator.order == 1
    assert cert.operator.is_proportional(op("-(n+b+1)", "n+1"))
    assert verify_certificate(F, cert)


def test_vandermonde_unreduced_certificate():
    F = parse_term("binomial(n,k)*binomial(b,k)")
    S = op("-(n+1)*(n+b+1)", "(n+1)^2")
    G = parse_term("-(n+1)!*b!/((k-1)!^2*(n-k+1)!*(b-k)!)")
    R = (G / F).as_rational()
    assert R == parse_rational("-(n+1)*k^2/(n-k+1)")
    assert verify_certificate(F, TelescopeCertificate(S, R))


def test_dixon_explicit_g():
    F = parse_term(DIXON)
    S = op("-2*(n+a+b+1)", "2*(n+1)*(n+a+1)*(n+b+1)")
    G = parse_term("(-1)^(k-1)/((n+k)!*(n+1-k)!*(b+k-1)!*(b-k)!*(a+k-1)!*(a-k)!)")
    R = (G / F).as_rational()
    assert R is not None
    assert verify_certificate(F, TelescopeCertificate(S, R))
    assert not verify_certificate(F, TelescopeCertificate(S, R + 1))


def test_dixon_found():
    F = parse_term(DIXON)
    cert = creative_telescope(F)
    assert cert.operator.is_proportional(op("-(n+a+b+1)", "(n+1)*(n+a+1)*(n+b+1)"))


def test_perturbed_certificate_fails():
    F = parse_term("binomial(n,k)")
    cert = creative_telescope(F)
    assert verify_certificate(F, cert)
    assert not verify_certificate(F, TelescopeCertificate(cert.operator, cert.certificate + 1))


def test_fibonacci():
    F = parse_term("binomial(n-k,k)")
    cert = creative_telescope(F)
    assert cert.operator.is_proportional(op("-1", "-1", "1"))
    values = oracle_sum(F, range(31))
    assert values == [fib(m + 1) for m in range(31)]
    assert oracle_check_recurrence(cert.operator, values)


def test_scaling_invariance():
    F = parse_term("binomial(n,k)^2")
    a = creative_telescope(F).operator
    b = creative_telescope(F * Fraction(-5, 3)).operator
    assert a.coefficients == b.coefficients


@pytest.mark.parametrize(
    "term,params,known_order",
    [
        ("binomial(n,k)", {}, 1),
        ("binomial(n,k)^2", {}, 1),
        ("binomial(n,k)*binomial(b,k)", {"b": 4}, 1),
        ("binomial(n,k)*binomial(n+k,k)", {}, 2),
        (DIXON, {"a": 2, "b": 3}, 1),
    ],
)
def test_oracle_consistency(term, params, known_order):
    F = parse_term(term)
    cert = creative_telescope(F)
    assert cert.operator.order <= known_order
    values = oracle_sum(F, range(26), "auto", params)
    assert oracle_check_recurrence(cert.operator, values, 0, params)


def test_bound_exhausted():
    with pytest.raises(BoundExhausted) as info:
        creative_telescope(parse_term("binomial(n,k)"), max_order=0)
    assert info.value.bounds == {"max_order": 0}


def test_operator_printing():
    assert str(op("-(n+b+1)", "n+1")) == "(n + 1)*N - (n + b + 1)"
    assert str(op("-1", "-1", "1")) == "N^2 - N - 1"


def test_solve_first_order_examples():
    assert solve_first_order(op("-(n+b+1)", "n+1"), 1) == parse_term("(n+b)!/(n!*b!)")
    assert solve_first_order(op("-2", "1"), 1) == parse_term("2^n")


def test_solve_first_order_dixon():
    S = op("-2*(n+a+b+1)", "2*(n+1)*(n+a+1)*(n+b+1)")
    a0 = parse_term("1/(a!^2*b!^2)")
    want = parse_term("(n+a+b)!/(n!*a!*b!*(n+a)!*(n+b)!*(a+b)!)")
    assert solve_first_order(S, a0).equals(want)


def test_solve_first_order_matches_oracle():
    F = parse_term("1/(k!*(n-k)!)")
    closed = solve_first_order(creative_telescope(F).operator, 1)
    assert closed.equals(parse_term("2^n/n!"))


def test_solve_first_order_degenerate():
    with pytest.raises(ValueError, match="3"):
        solve_first_order(op("1", "n-3"), 1)


def test_solve_first_order_unevaluated():
    res = solve_first_order(op("-1", "n^2+1"), 1)
    assert isinstance(res, UnevaluatedProduct)
    assert res.ratio == RationalFunction(1, Polynomial.var("n") ** 2 + 1)


def test_rejects_zero_leading_coefficient():
    with pytest.raises(ValueError):
        RecurrenceOperator((Polynomial.one(), Polynomial.zero()))
