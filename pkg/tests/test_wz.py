import math
from fractions import Fraction

import pytest

from hypersum.parsing import parse_rational
from hypersum.term import affine_substitute, evaluate, parse_term
from hypersum.wz import DualError, WZPair, dualize, make_wz_pair, shadow_pair, verify_wz


@pytest.fixture(scope="module")
def binomial_pair():
    return make_wz_pair(parse_term("binomial(n,k)"), parse_term("2^n"))


def test_binomial_pair(binomial_pair):
    assert binomial_pair.G.equals(parse_term("-binomial(n,k-1)/2^(n+1)"))
    assert binomial_pair.R == parse_rational("-k/(2*(n-k+1))")
    assert verify_wz(binomial_pair)


def test_negated_g_fails(binomial_pair):
    p = binomial_pair
    assert not verify_wz(WZPair(p.F, -p.G, -p.R))


def test_shadow_pair_verifies(binomial_pair):
    assert verify_wz(shadow_pair(binomial_pair))


@pytest.mark.parametrize(
    "raw,nice",
    [("binomial(n,k)*x^k", "(1+x)^n"), ("binomial(n,k)^2", "binomial(2n,n)"), ("binomial(n,k)*binomial(b,k)", "binomial(n+b,n)")],
)
def test_pairs_exist_and_verify(raw, nice):
    pair = make_wz_pair(parse_term(raw), parse_term(nice))
    assert pair is not None
    assert verify_wz(pair, params={"x": 3, "b": 4})


def test_false_identity_has_no_pair():
    assert make_wz_pair(parse_term("binomial(n,k)"), parse_term("3^n")) is None


def test_scaling_invariance():
    a = make_wz_pair(parse_term("binomial(n,k)^2"), parse_term("binomial(2n,n)"))
    b = make_wz_pair(parse_term("-7*binomial(n,k)^2"), parse_term("-7*binomial(2n,n)"))
    assert a.R == b.R


def test_closed_form_must_not_depend_on_sumvar():
    with pytest.raises(ValueError):
        make_wz_pair(parse_term("binomial(n,k)"), parse_term("2^k"))


def test_telescoping_sanity(binomial_pair):
    F, G = binomial_pair.F, binomial_pair.G
    for n in range(21):
        lhs = sum(evaluate(F, {"n": n + 1, "k": k}) - evaluate(F, {"n": n, "k": k}) for k in range(-1, n + 2))
        rhs = sum(evaluate(G, {"n": n, "k": k + 1}) - evaluate(G, {"n": n, "k": k}) for k in range(-1, n + 2))
        assert lhs == rhs == 0
        # a(n) = sum_k binomial(n,k)/2^n = 1
        assert sum(evaluate(F, {"n": n, "k": k}) for k in range(n + 1)) == 1


def test_binomial_dual(binomial_pair):
    claim = dualize(binomial_pair, None, {"n": "-n-1", "k": "-k"})
    core, rhs = claim.split()
    assert (claim.sumvar, claim.freevar) == ("n", "k")
    assert core.equals(parse_term("(-2)^n*binomial(k,n)"))
    assert rhs.equals(parse_term("(-1)^k"))
    assert claim.window == tuple(range(1, 13))
    for k in range(1, 13):
        assert sum((-2) ** n * math.comb(k, n) for n in range(k + 1)) == (-1) ** k


def test_specialize_and_dualize():
    pair = make_wz_pair(parse_term("binomial(n,k)^2"), parse_term("binomial(2n,n)"))
    claim = dualize(pair, None, {"n": "-k-1", "k": "-n"}, tuple(range(0, 21)))
    assert claim.constant == 0
    assert (claim.sumvar, claim.freevar) == ("k", "n")
    target = parse_term("(3k-2n)*binomial(n,k)^2*binomial(2k,k)")
    assert (claim.summand / target).as_rational().is_constant()
    for n in range(21):
        assert sum((3 * k - 2 * n) * math.comb(n, k) ** 2 * math.comb(2 * k, k) for k in range(n + 1)) == 0


def test_non_compact_dual_is_reported(binomial_pair):
    # sum_n G(n,k) has infinitely many nonzero terms; a finite window cannot certify it
    with pytest.raises(DualError) as info:
        dualize(binomial_pair, "none")
    assert info.value.counterexample is not None


def test_broken_pair_gives_nonconstant_sums(binomial_pair):
    p = binomial_pair
    broken = WZPair(p.F, p.G * parse_term("k"), p.R)
    with pytest.raises(DualError, match="not constant") as info:
        dualize(broken, None, {"n": "-n-1", "k": "-k"})
    assert "sum" in info.value.counterexample


def test_plain_restatement_and_idempotence():
    # a G compactly supported in n: sum_n (3n-2k) binomial(k,n)^2 binomial(2n,n) = 0
    G = parse_term("(3n-2k)*binomial(k,n)^2*binomial(2n,n)")
    pair = WZPair(G, G, parse_rational("1"))
    claim = dualize(pair, "none", None, tuple(range(0, 10)))
    assert claim.summand == G and claim.constant == 0
    again = dualize(WZPair(G, claim.summand, parse_rational("1")), "none", None, tuple(range(0, 10)))
    assert again.summand == claim.summand


def test_dual_of_binomial_theorem():
    pair = make_wz_pair(parse_term("binomial(n,k)*x^k"), parse_term("(1+x)^n"))
    claim = dualize(pair, None, {"n": "-n-1", "k": "-k"}, params={"x": 2})
    core, rhs = claim.split()
    assert core.equals(parse_term("(-1)^n*(1+x)^n*binomial(k,n)"))
    assert rhs.equals(parse_term("(-1)^k*x^k"))
    for x in (2, 5):
        for k in range(1, 13):
            assert sum((-(1 + x)) ** n * math.comb(k, n) for n in range(k + 1)) == (-x) ** k
