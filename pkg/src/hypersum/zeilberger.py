"""Creative telescoping: recurrence operators with rational certificates.

Certificates use the forward convention ``S(N,n) F(n,k) = G(n,k+1) - G(n,k)``
with ``G = R(n,k) F(n,k)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import (
    Polynomial,
    RationalFunction,
    factor_list,
    linear_solve,
    poly_gcd,
)
from .errors import BoundExhausted
from .gosper import _bound, _degree, _shift, extract_shifts, functional_system
from .term import FactorialFactor, HypergeometricTerm, LinearForm, shift_ratio

__all__ = [
    "RecurrenceOperator",
    "TelescopeCertificate",
    "UnevaluatedProduct",
    "creative_telescope",
    "verify_certificate",
    "solve_first_order",
]

DEFAULT_MAX_ORDER = 6


def _coeff_text(p: Polynomial, power: int, first: bool, shift: str) -> str:
    mono = "" if power == 0 else (shift if power == 1 else f"{shift}^{power}")
    negative = p.lc() < 0
    mag = -p if negative else p
    if not mono:
        body = str(mag)
        body = body if len(mag.terms()) == 1 or first and not negative else f"({body})"
    elif mag == 1:
        body = mono
    elif len(mag.terms()) == 1:
        body = f"{mag}*{mono}"
    else:
        body = f"({mag})*{mono}"
    if first:
        return ("-" if negative else "") + body
    return (" - " if negative else " + ") + body


@dataclass(frozen=True)
class RecurrenceOperator:
    """``sum_i coefficients[i](n) N^i``."""

    coefficients: tuple[Polynomial, ...]
    recvar: str = "n"

    def __post_init__(self):
        if not self.coefficients or self.coefficients[-1].is_zero():
            raise ValueError("leading coefficient of a recurrence operator must be nonzero")

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def __str__(self):
        parts = []
        for i in range(self.order, -1, -1):
            c = self.coefficients[i]
            if not c.is_zero():
                parts.append(_coeff_text(c, i, not parts, "N"))
        return "".join(parts)

    def apply_to_values(self, values: Sequence[Fraction], n0: int = 0, assignment=None) -> list[Fraction]:
        """Residuals ``sum_i s_i(n) a(n+i)`` for each admissible ``n``."""
        out = []
        assignment = dict(assignment or {})
        for idx in range(len(values) - self.order):
            assignment[self.recvar] = n0 + idx
            total = Fraction(0)
            for i, c in enumerate(self.coefficients):
                total += Fraction(c.evaluate(assignment)) * values[idx + i]
            out.append(total)
        return out

    def normalized(self) -> "RecurrenceOperator":
        return RecurrenceOperator(_normalize_coefficients(self.coefficients), self.recvar)

    def is_proportional(self, other: "RecurrenceOperator") -> bool:
        if self.order != other.order:
            return False
        return self.normalized().coefficients == other.normalized().coefficients or tuple(
            -c for c in self.normalized().coefficients
        ) == other.normalized().coefficients


def _normalize_coefficients(coeffs: Sequence[Polynomial]) -> tuple[Polynomial, ...]:
    g = Polynomial.zero()
    for c in coeffs:
        g = poly_gcd(g, c)
    out = [c.exact_div(g) for c in coeffs]
    lead = out[-1].lc()
    if lead < 0:
        out = [-c for c in out]
    return tuple(out)


@dataclass(frozen=True)
class TelescopeCertificate:
    operator: RecurrenceOperator
    certificate: RationalFunction
    sumvar: str = "k"
    recvar: str = "n"
    convention: str = "forward"

    def g_term(self, F: HypergeometricTerm) -> HypergeometricTerm | None:
        if self.certificate.is_zero():
            return None
        return (F * self.certificate).simplify()


def telescoping_residual(
    F: HypergeometricTerm, coefficients: Sequence, R: RationalFunction, sumvar: str = "k", recvar: str = "n"
) -> RationalFunction:
    """``sum s_i F(n+i,k)/F(n,k) - (R(k+1) F(k+1)/F(k) - R(k))``; zero for a valid certificate."""
    lhs = RationalFunction(0)
    for i, s in enumerate(coefficients):
        if not RationalFunction.coerce(s).is_zero():
            lhs = lhs + RationalFunction.coerce(s) * shift_ratio(F, {recvar: i})
    R = RationalFunction.coerce(R)
    rho_k = shift_ratio(F, {sumvar: 1})
    return lhs - (R.shift(sumvar, 1) * rho_k - R)


def verify_certificate(F: HypergeometricTerm, cert: TelescopeCertificate) -> bool:
    """Exact check of ``S F = G(k+1) - G(k)`` through rational-function normal forms."""
    if cert.convention != "forward":
        return False
    return telescoping_residual(F, cert.operator.coefficients, cert.certificate, cert.sumvar, cert.recvar).is_zero()


def _lcm(a: Polynomial, b: Polynomial) -> Polynomial:
    return a * b.exact_div(poly_gcd(a, b))


def _attempt(F: HypergeometricTerm, order: int, sumvar: str, recvar: str):
    ratios = [shift_ratio(F, {recvar: i}) for i in range(order + 1)]
    D = Polynomial.one()
    for rt in ratios:
        D = _lcm(D, rt.den)
    P = [(rt * D).as_polynomial() for rt in ratios]
    # backward k-ratio of F/D
    rho = shift_ratio(F, {sumvar: -1}).inverse() * RationalFunction(_shift(D, sumvar, -1), D)
    E, q, r = extract_shifts(rho.num, rho.den, sumvar)
    s_names = [f"_s{i}" for i in range(order + 1)]
    p = Polynomial.zero()
    for name, Pi in zip(s_names, P):
        p = p + Polynomial.var(name) * Pi
    p = p * E
    p_degree = max(_degree(Pi, sumvar) for Pi in P) + _degree(E, sumvar)
    L = _bound(p_degree, q, r, sumvar)
    if L is None:
        return None
    cols, matrix, _ = functional_system(q, r, p, sumvar, L, s_names)
    sol = linear_solve(matrix)
    if not sol.solvable:
        return None
    nf = L + 1
    candidates = []
    for vec in sol.nullspace:
        s_part = vec[nf:]
        nonzero = [i for i, s in enumerate(s_part) if not s.is_zero()]
        if nonzero:
            candidates.append((max(nonzero), vec))
    if not candidates:
        return None
    candidates.sort(key=lambda iv: iv[0])
    top, vec = candidates[0]
    vec = _scale_vector(vec, nf, top)
    s = [v.as_polynomial() for v in vec[nf : nf + top + 1]]
    kv = Polynomial.var(sumvar)
    f = RationalFunction(0)
    for i, v in enumerate(vec[:nf]):
        if not v.is_zero():
            f = f + v * kv**i
    M = f * RationalFunction(_shift(q, sumvar, 1), D * E)
    rho_k_back = shift_ratio(F, {sumvar: 1}).shift(sumvar, -1)
    R = M.shift(sumvar, -1) / rho_k_back
    return s, R


def _scale_vector(vec: list[RationalFunction], nf: int, top: int) -> list[RationalFunction]:
    """Scale so the operator coefficients are coprime integral polynomials with positive leading coefficient."""
    s_part = vec[nf : nf + top + 1]
    den = Polynomial.one()
    for v in s_part:
        den = _lcm(den, v.den)
    polys = [(v * den).as_polynomial() for v in s_part]
    g = Polynomial.zero()
    for pl in polys:
        g = poly_gcd(g, pl)
    scale = RationalFunction(den, g)
    lead = (s_part[top] * scale).as_polynomial().lc()
    if lead < 0:
        scale = -scale
    return [v * scale for v in vec]


def creative_telescope(
    F: HypergeometricTerm,
    max_order: int = DEFAULT_MAX_ORDER,
    sumvar: str = "k",
    recvar: str = "n",
) -> TelescopeCertificate:
    """Find ``S(N,n)`` and ``R(n,k)`` for ``sum_k F(n,k)``, trying orders ``0..max_order``.

    Raises :class:`BoundExhausted` when no order up to ``max_order`` works.
    """
    if max_order < 0:
        raise ValueError("max_order must be non-negative")
    for order in range(max_order + 1):
        found = _attempt(F, order, sumvar, recvar)
        if found is None:
            continue
        s, R = found
        cert = TelescopeCertificate(RecurrenceOperator(tuple(s), recvar), R, sumvar, recvar)
        if not verify_certificate(F, cert):
            raise ArithmeticError(f"internal error: certificate for order {order} does not verify")
        return cert
    raise BoundExhausted(f"no recurrence of order <= {max_order} found", {"max_order": max_order})


@dataclass(frozen=True)
class UnevaluatedProduct:
    """``initial * prod_{m=n0}^{n-1} ratio(m)`` when no factorial form exists."""

    initial: object
    ratio: RationalFunction
    n0: int
    recvar: str = "n"

    def __str__(self):
        return f"({self.initial}) * prod(m={self.n0}..{self.recvar}-1, {self.ratio})"


def _linear_pieces(p: Polynomial, var: str):
    """Factor ``p`` as ``c * prod(var + beta)^m * rest`` where rest is var-free."""
    c, factors = factor_list(p)
    pieces = []
    var_free = []
    for f, m in factors:
        d = f.degree(var)
        if d == 0:
            var_free.append((f, m))
            continue
        if d > 1:
            return None
        alpha = f.coeff(var, 1)
        if not alpha.is_constant():
            return None
        av = alpha.constant_value()
        beta = f.coeff(var, 0) * (1 / av)
        c *= av**m
        try:
            LinearForm.from_polynomial(beta)
        except ValueError:
            return None
        pieces.append((beta, m))
    return c, pieces, var_free


def solve_first_order(op: RecurrenceOperator, initial=1, n0: int = 0):
    """Closed form of the solution of an order-1 recurrence with ``a(n0) = initial``.

    >>> from hypersum.parsing import parse_polynomial
    >>> op = RecurrenceOperator((parse_polynomial("-(n+b+1)"), parse_polynomial("n+1")))
    >>> str(solve_first_order(op, 1))
    '(n + b)!/b!/n!'
    """
    if op.order != 1:
        raise ValueError("solve_first_order needs an order-1 operator")
    n = op.recvar
    s0, s1 = op.coefficients
    for f, _ in factor_list(s1)[1]:
        if f.degree(n) == 1 and f.variables() == {n}:
            root = -f.coeff(n, 0).constant_value() / f.coeff(n, 1).constant_value()
            if root.denominator == 1 and root >= n0:
                raise ValueError(f"recurrence degenerates at n = {root}: leading coefficient vanishes")
    ratio = RationalFunction(-s0, s1)
    if not isinstance(initial, HypergeometricTerm):
        initial = HypergeometricTerm.make(Fraction(initial))
    top = _linear_pieces(ratio.num, n)
    bottom = _linear_pieces(ratio.den, n)
    if top is None or bottom is None:
        return UnevaluatedProduct(initial, ratio, n0, n)
    span = LinearForm.symbol(n) - LinearForm.constant(n0)
    factorials: list[FactorialFactor] = []
    powers = []
    c_top, pieces_top, free_top = top
    c_bot, pieces_bot, free_bot = bottom
    for (pieces, sgn) in ((pieces_top, 1), (pieces_bot, -1)):
        for beta, m in pieces:
            # prod_{j=n0}^{n-1} (j + beta) = (n - 1 + beta)! / (n0 - 1 + beta)!
            form = LinearForm.from_polynomial(beta)
            factorials.append(FactorialFactor(span + form + LinearForm.constant(n0 - 1), sgn * m))
            factorials.append(FactorialFactor(form + LinearForm.constant(n0 - 1), -sgn * m))
    for free, sgn in ((free_top, 1), (free_bot, -1)):
        for f, m in free:
            powers.append((f, span * (sgn * m)))
    const = c_top / c_bot
    powers.append((Polynomial.const(const), span))
    term = HypergeometricTerm.make(1, powers, LinearForm(), 1, factorials)
    return (initial * term).collapse().simplify()

