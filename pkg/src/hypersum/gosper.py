"""Gosper's decision procedure for indefinite hypergeometric summation.

Convention: an antidifference ``T`` of ``t`` satisfies ``T(k) - T(k-1) = t(k)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .algebra import (
    Polynomial,
    RationalFunction,
    integer_roots,
    linear_solve,
    poly_gcd,
    resultant,
)
from .term import HypergeometricTerm, shift_ratio

__all__ = [
    "GosperDecomposition",
    "GosperResult",
    "decompose",
    "degree_bound",
    "solve_functional",
    "gosper_sum",
]

_J = "_j"


@dataclass(frozen=True)
class GosperDecomposition:
    p: Polynomial
    q: Polynomial
    r: Polynomial
    var: str = "k"


@dataclass(frozen=True)
class GosperResult:
    status: str  # "summable" | "not-summable"
    f: Polynomial | None = None
    antidifference: HypergeometricTerm | None = None
    multiplier: RationalFunction | None = None
    decomposition: GosperDecomposition | None = None
    degree: int | None = None

    @property
    def summable(self) -> bool:
        return self.status == "summable"


def _shift(p: Polynomial, var: str, amount: int) -> Polynomial:
    return p.shift(var, amount) if amount else p


def _nonnegative_shift_roots(q: Polynomial, r: Polynomial, var: str) -> list[int]:
    """Non-negative integers j with ``resultant_var(q(var), r(var + j))`` identically zero."""
    if q.degree(var) <= 0 or r.degree(var) <= 0:
        return []
    rj = r.compose({var: Polynomial.var(var) + Polynomial.var(_J)})
    res = resultant(q, rj, var)
    if res.is_zero():
        raise ArithmeticError("q and r share a factor for every shift")
    # a root must kill every coefficient with respect to the other symbols
    univariate = None
    for coeff_poly in _group_by_other(res, _J).values():
        univariate = coeff_poly if univariate is None else poly_gcd(univariate, coeff_poly)
        if univariate.is_constant():
            return []
    return [j for j in integer_roots(univariate) if j >= 0]


def _group_by_other(p: Polynomial, keep: str) -> dict[tuple, Polynomial]:
    groups: dict[tuple, dict] = {}
    for mon, c in p.terms():
        d = dict(mon)
        e = d.pop(keep, 0)
        key = tuple(sorted(d.items()))
        groups.setdefault(key, {})[((keep, e),) if e else ()] = c
    return {key: Polynomial.from_terms(terms) for key, terms in groups.items()}


def extract_shifts(q: Polynomial, r: Polynomial, var: str) -> tuple[Polynomial, Polynomial, Polynomial]:
    """Move shifted common factors of ``q`` and ``r`` into a polynomial ``E``.

    Returns ``(E, q', r')`` with ``q/r = (E(var)/E(var-1)) * q'/r'`` and
    ``gcd(q'(var), r'(var+j)) = 1`` for all ``j >= 0``.
    """
    E = Polynomial.one()
    while True:
        changed = False
        for j in _nonnegative_shift_roots(q, r, var):
            g = poly_gcd(q, _shift(r, var, j))
            if g.degree(var) <= 0:
                continue
            q = q.exact_div(g)
            r = r.exact_div(_shift(g, var, -j))
            for i in range(j):
                E = E * _shift(g, var, -i)
            changed = True
        if not changed:
            return E, q, r


def decompose(rho: RationalFunction, initial: Polynomial | int = 1, var: str = "k") -> GosperDecomposition:
    """Split the backward ratio ``rho = a(k)/a(k-1)`` as ``p(k)/p(k-1) * q(k)/r(k)``.

    >>> from hypersum.parsing import parse_rational
    >>> d = decompose(parse_rational("(k+1)/(k-1)"), 1, "k")
    >>> str(d.p), str(d.q), str(d.r)
    ('k^2 + k', '1', '1')
    """
    rho = RationalFunction.coerce(rho)
    initial = Polynomial.coerce(initial)
    qr = rho * RationalFunction(_shift(initial, var, -1), initial)
    E, q, r = extract_shifts(qr.num, qr.den, var)
    return GosperDecomposition(initial * E, q, r, var)


def _degree(p: Polynomial, var: str) -> int:
    return -1 if p.is_zero() else p.degree(var)


def _bound(p_degree: int, q: Polynomial, r: Polynomial, var: str) -> int | None:
    sigma = _shift(q, var, 1) + r
    delta = _shift(q, var, 1) - r
    ds, dd = _degree(sigma, var), _degree(delta, var)
    if dd >= ds:
        L = p_degree - dd
    else:
        ell = ds
        candidate = p_degree - ell + 1
        u = RationalFunction(-2 * delta.coeff(var, ell - 1), sigma.coeff(var, ell)) if ell >= 1 else RationalFunction(0)
        L = candidate
        if u.is_constant():
            uv = u.constant_value()
            if uv.denominator == 1 and uv >= 0:
                L = max(int(uv), candidate)
    return L if L >= 0 else None


def degree_bound(d: GosperDecomposition) -> int | None:
    """Upper bound for ``deg f`` in the functional equation, or ``None`` when no ``f`` can exist."""
    return _bound(_degree(d.p, d.var), d.q, d.r, d.var)


def functional_system(
    q: Polynomial, r: Polynomial, p: Polynomial, var: str, L: int, unknowns: Sequence[str] = ()
) -> tuple[list[str], list[list[Polynomial]], list[Polynomial]]:
    """Coefficient equations of ``q(k+1) f(k) - r(k) f(k-1) = p(k)``.

    ``f = sum f_i k^i`` with fresh unknowns ``_f0 .. _fL``; ``p`` may itself
    be linear in the extra ``unknowns``, which are then also columns of the
    (homogeneous part of the) system.
    """
    fs = [f"_f{i}" for i in range(L + 1)]
    kv = Polynomial.var(var)
    f = Polynomial.zero()
    for i, name in enumerate(fs):
        f = f + Polynomial.var(name) * kv**i
    expr = _shift(q, var, 1) * f - r * _shift(f, var, -1) - p
    cols = fs + list(unknowns)
    zero_map = {u: Polynomial.zero() for u in cols}
    matrix, rhs = [], []
    for _, c in sorted(expr.coefficients(var).items()):
        row = [c.coeff(u, 1) for u in cols]
        matrix.append(row)
        rhs.append(-c.compose(zero_map))
    return cols, matrix, rhs


def solve_functional(d: GosperDecomposition, L: int) -> Polynomial | None:
    """A polynomial ``f`` of degree at most ``L`` solving the functional equation, or ``None``."""
    if L is None or L < 0:
        return None
    cols, matrix, rhs = functional_system(d.q, d.r, d.p, d.var, L)
    sol = linear_solve(matrix, rhs)
    if not sol.solvable:
        return None
    kv = Polynomial.var(d.var)
    f = Polynomial.zero()
    for i, value in enumerate(sol.particular):
        if not value.is_polynomial():
            # coefficients may be rational in the parameters; keep exact
            return _rational_f(sol.particular, d.var)
        f = f + value.as_polynomial() * kv**i
    return f


def _rational_f(values, var):
    kv = Polynomial.var(var)
    den = Polynomial.one()
    for v in values:
        den = den * v.den.exact_div(poly_gcd(den, v.den))
    f = Polynomial.zero()
    for i, v in enumerate(values):
        f = f + (v * den).as_polynomial() * kv**i
    return RationalFunction(f, den)


def backward_ratio(t: HypergeometricTerm, var: str) -> RationalFunction:
    return shift_ratio(t, {var: -1}).inverse()


def verify_antidifference(t: HypergeometricTerm, multiplier: RationalFunction, var: str) -> bool:
    """Check ``T(k) - T(k-1) = t(k)`` for ``T = multiplier * t``."""
    back = shift_ratio(t, {var: -1})
    return multiplier - multiplier.shift(var, -1) * back == 1


def gosper_sum(t: HypergeometricTerm, var: str = "k") -> GosperResult:
    """Decide whether ``t`` has a hypergeometric antidifference in ``var``.

    >>> from hypersum.term import parse_term
    >>> str(gosper_sum(parse_term("(n-1)*(n-1)!"), "n").antidifference)
    'n!'
    """
    initial = t.rational.num
    rho = backward_ratio(t, var)
    d = decompose(rho, initial, var)
    L = degree_bound(d)
    if L is None:
        return GosperResult("not-summable", decomposition=d)
    f = solve_functional(d, L)
    if f is None:
        return GosperResult("not-summable", decomposition=d, degree=L)
    f_rf = RationalFunction.coerce(f)
    # T = t * q(k+1) f / p, and t carries p_init in its numerator
    multiplier = f_rf * RationalFunction(_shift(d.q, var, 1), d.p)
    if multiplier.is_zero() or not verify_antidifference(t, multiplier, var):
        return GosperResult("not-summable", decomposition=d, degree=L)
    T = (t * multiplier).simplify()
    f_poly = f if isinstance(f, Polynomial) else None
    return GosperResult("summable", f_poly if f_poly is not None else f, T, multiplier, d, L)

