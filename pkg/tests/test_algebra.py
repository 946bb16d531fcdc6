import random
from fractions import Fraction

import pytest
import sympy

from hypersum.algebra import (
    Polynomial,
    RationalFunction,
    factor_list,
    integer_roots,
    linear_solve,
    poly_gcd,
    resultant,
)
from hypersum.parsing import parse_polynomial, parse_rational

n, k, a, b, x = (Polynomial.var(s) for s in "nkabx")


def to_sympy(p: Polynomial):
    return sympy.sympify(str(p).replace("^", "**"))


def random_poly(rng, names=("n", "k"), deg=2):
    p = Polynomial.zero()
    for _ in range(rng.randint(1, 4)):
        m = Polynomial.const(rng.randint(-5, 5))
        for v in names:
            m = m * Polynomial.var(v) ** rng.randint(0, deg)
        p = p + m
    return p if not p.is_zero() else Polynomial.var(names[0]) + 1


def test_ring_arithmetic_and_printing():
    p = (n + 1) * (n - 1)
    assert p == n**2 - 1
    assert str(p) == "n^2 - 1"
    assert str(Polynomial.const(Fraction(-3, 2)) * k) == "-3/2*k"
    assert (n + k) - k == n


def test_variables_and_degrees():
    p = n**3 * k + 2 * k**2 + 5
    assert p.variables() == {"n", "k"}
    assert p.degree("n") == 3 and p.degree("k") == 2
    assert p.coeff("k", 2) == 2
    assert Polynomial.zero().degree("n") < 0


def test_shift_and_compose():
    p = k**2 + k
    assert p.shift("k", -1) == k**2 - k
    assert p.compose({"k": n - k}) == (n - k) ** 2 + n - k


def test_evaluate_exact():
    assert (n**2 + Fraction(1, 3)).evaluate({"n": 2}) == Fraction(13, 3)


def test_exact_division():
    assert ((n + 1) * (k - 2)).exact_div(k - 2) == n + 1
    with pytest.raises(ArithmeticError):
        (n + 1).exact_div(k)


@pytest.mark.parametrize("seed", range(25))
def test_gcd_matches_sympy(seed):
    rng = random.Random(seed)
    common = random_poly(rng)
    p = common * random_poly(rng)
    q = common * random_poly(rng)
    g = poly_gcd(p, q)
    expected = sympy.gcd(to_sympy(p), to_sympy(q))
    assert sympy.simplify(to_sympy(g) / expected).is_number


def test_rational_function_normal_form():
    r = RationalFunction((n + 1) * (n - 1), 2 * (n - 1))
    assert r == RationalFunction(n + 1, 2)
    assert r.den.lc() > 0
    assert RationalFunction(1, -n) == RationalFunction(-1, n)
    assert str(RationalFunction(k, n - k + 1)) == "k/(n - k + 1)"


def test_rational_function_field_operations():
    r = RationalFunction(n, n + 1)
    s = RationalFunction(1, n)
    assert r + s == RationalFunction(n**2 + n + 1, n * (n + 1))
    assert (r * r.inverse()) == 1
    assert r.shift("n", 1) == RationalFunction(n + 1, n + 2)
    with pytest.raises(ZeroDivisionError):
        RationalFunction(n, 0)


@pytest.mark.parametrize(
    "p,q,var",
    [
        ("a*x^2 + b*x + c", "2*a*x + b", "x"),
        ("k^2 + n*k + 1", "k - n + 3", "k"),
        ("(k+1)*(k+n)", "(k-j+n)*(k-j+4)", "k"),
        ("x^3 - 2", "x^2 + a", "x"),
    ],
)
def test_resultant_matches_sympy(p, q, var):
    P, Q = parse_polynomial(p), parse_polynomial(q)
    ours = to_sympy(resultant(P, Q, var))
    theirs = sympy.resultant(to_sympy(P), to_sympy(Q), sympy.Symbol(var))
    assert sympy.expand(ours - theirs) == 0


def test_resultant_vanishes_on_common_root():
    assert resultant((x - 1) * (x + a), (x - 1) * (x - 2), "x").is_zero()


def test_integer_roots():
    j = Polynomial.var("j")
    assert integer_roots((j - 3) * (j + 2) * (2 * j - 1)) == [-2, 3]
    assert integer_roots(j**2 + 1) == []


def test_linear_solve_unique_and_parametric():
    sol = linear_solve([[1, 1], [1, -1]], [3, 1])
    assert sol.status == "unique"
    assert sol.particular == [RationalFunction(2), RationalFunction(1)]
    sol = linear_solve([[n, 1], [2 * n, 2]])
    assert sol.status == "parametric"
    (v,) = sol.nullspace
    assert v[0] * n + v[1] == 0
    assert linear_solve([[1], [1]], [1, 2]).status == "unsolvable"


def test_linear_solve_over_function_field():
    # (n+1) x - y = 0 ; x + y = n
    sol = linear_solve([[n + 1, -1], [1, 1]], [0, n])
    xs, ys = sol.particular
    assert (n + 1) * xs - ys == 0
    assert xs + ys == RationalFunction(n)


def test_factor_list_reconstructs():
    p = parse_polynomial("6*(n+1)^2*(k-n)*(n^2+1)")
    c, factors = factor_list(p)
    back = Polynomial.const(c)
    for f, m in factors:
        back = back * f**m
    assert back == p
    assert sorted(m for _, m in factors) == [1, 1, 2]


def test_parse_rational_roundtrip():
    r = parse_rational("(n^2 - 1)/(2*n - 2)")
    assert r == RationalFunction(n + 1, 2)
    assert parse_rational(str(r)) == r
