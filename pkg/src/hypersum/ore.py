"""The shift algebra C<n,k,N,K> with ``Nn = (n+1)N`` and ``Kk = (k+1)K``.

Operators are kept in coefficient-left normal form: a map from ``(a, b)`` to
the coefficient of ``N^a K^b``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Mapping

from .algebra import Polynomial, RationalFunction, linear_solve, poly_gcd
from .errors import BoundExhausted
from .parsing import Add, Call, Div, Fact, Mul, Neg, Num, ParseError, Pow, Sym, parse_expression
from .term import HypergeometricTerm, shift_ratio

__all__ = [
    "OreOperator",
    "EliminationResult",
    "parse_operator",
    "op_multiply",
    "op_apply",
    "reduce_mod_delta",
    "eliminate",
    "right_divide",
]

DEFAULT_BOUNDS = (2, 1, 1)


class OreOperator:
    __slots__ = ("terms", "n", "k", "_hash")

    def __init__(self, terms: Mapping[tuple[int, int], object] | None = None, n: str = "n", k: str = "k"):
        clean = {}
        for (a, b), c in (terms or {}).items():
            if a < 0 or b < 0:
                raise ValueError("negative shift powers are not supported")
            c = RationalFunction.coerce(c)
            if not c.is_zero():
                clean[(a, b)] = c
        self.terms: dict[tuple[int, int], RationalFunction] = clean
        self.n = n
        self.k = k
        self._hash = None

    @classmethod
    def scalar(cls, c, n: str = "n", k: str = "k") -> "OreOperator":
        return cls({(0, 0): c}, n, k)

    @classmethod
    def N(cls, power: int = 1, n: str = "n", k: str = "k") -> "OreOperator":
        return cls({(power, 0): 1}, n, k)

    @classmethod
    def K(cls, power: int = 1, n: str = "n", k: str = "k") -> "OreOperator":
        return cls({(0, power): 1}, n, k)

    def _new(self, terms) -> "OreOperator":
        return OreOperator(terms, self.n, self.k)

    def is_zero(self) -> bool:
        return not self.terms

    def degree_N(self) -> int:
        return max((a for a, _ in self.terms), default=-1)

    def degree_K(self) -> int:
        return max((b for _, b in self.terms), default=-1)

    def free_of(self, symbol: str) -> bool:
        if symbol == "K":
            return all(b == 0 for _, b in self.terms)
        if symbol == "N":
            return all(a == 0 for a, _ in self.terms)
        return all(symbol not in c.variables() for c in self.terms.values())

    def coefficient(self, a: int, b: int = 0) -> RationalFunction:
        return self.terms.get((a, b), RationalFunction(0))

    def __add__(self, other):
        other = _coerce(other, self)
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out[key] + c if key in out else c
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new({key: -c for key, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_coerce(other, self))

    def __rsub__(self, other):
        return _coerce(other, self) - self

    def __mul__(self, other):
        return op_multiply(self, _coerce(other, self))

    def __rmul__(self, other):
        return op_multiply(_coerce(other, self), self)

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative operator powers are not supported")
        out = OreOperator.scalar(1, self.n, self.k)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Polynomial, RationalFunction)):
            other = _coerce(other, self)
        if not isinstance(other, OreOperator):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __str__(self):
        return format_operator(self)

    def __repr__(self):
        return f"OreOperator({str(self)!r})"


def _coerce(x, like: OreOperator) -> OreOperator:
    if isinstance(x, OreOperator):
        return x
    return OreOperator.scalar(x, like.n, like.k)


def _shift_coeff(c: RationalFunction, n: str, a: int, k: str, b: int) -> RationalFunction:
    mapping = {}
    vs = c.variables()
    if a and n in vs:
        mapping[n] = Polynomial.var(n) + a
    if b and k in vs:
        mapping[k] = Polynomial.var(k) + b
    return c.compose(mapping) if mapping else c


def op_multiply(A: OreOperator, B: OreOperator) -> OreOperator:
    """Product in normal form: ``(c N^a K^b)(d N^e K^f) = c d(n+a, k+b) N^(a+e) K^(b+f)``.

    >>> str(parse_operator("N") * parse_operator("n"))
    '(n + 1)*N'
    """
    out: dict[tuple[int, int], RationalFunction] = {}
    for (a, b), c in A.terms.items():
        for (e, f), d in B.terms.items():
            key = (a + e, b + f)
            val = c * _shift_coeff(d, A.n, a, A.k, b)
            out[key] = out[key] + val if key in out else val
    return OreOperator(out, A.n, A.k)


def op_apply(A: OreOperator, F: HypergeometricTerm) -> RationalFunction:
    """The rational multiplier ``(A F)/F``."""
    total = RationalFunction(0)
    for (a, b), c in A.terms.items():
        shifts = {v: s for v, s in ((A.n, a), (A.k, b)) if s}
        total = total + c * (shift_ratio(F, shifts) if shifts else 1)
    return total


def reduce_mod_delta(R: OreOperator) -> tuple[OreOperator, OreOperator]:
    """Split ``R = S + (K - 1) Rbar`` with ``S`` free of ``K``.

    >>> S, Rbar = reduce_mod_delta(parse_operator("(n+1)*(N*K - K - 1)"))
    >>> str(S)
    '(n + 1)*N - (2*n + 2)'
    """
    S: dict = {}
    Rbar: dict = {}
    for (a, b), c in R.terms.items():
        base = _shift_coeff(c, R.n, 0, R.k, -b)
        S[(a, 0)] = S[(a, 0)] + base if (a, 0) in S else base
        for i in range(b):
            val = _shift_coeff(c, R.n, 0, R.k, -b + i)
            Rbar[(a, i)] = Rbar[(a, i)] + val if (a, i) in Rbar else val
    return OreOperator(S, R.n, R.k), OreOperator(Rbar, R.n, R.k)


@dataclass(frozen=True)
class EliminationResult:
    S: OreOperator
    A: OreOperator
    B: OreOperator
    Rbar: OreOperator
    shape: tuple[int, int, int]

    def check(self, P: OreOperator, Q: OreOperator) -> bool:
        delta = OreOperator.K(1, P.n, P.k) - 1
        return self.A * P + self.B * Q == self.S + delta * self.Rbar


def _shapes(bounds: tuple[int, int, int]):
    dk, dN, dK = bounds
    shapes = list(product(range(dk + 1), range(dN + 1), range(dK + 1)))
    return sorted(shapes, key=lambda s: (sum(s), s[0], s[2], s[1]))


def _ansatz(prefix: str, shape, n: str, k: str):
    dk, dN, dK = shape
    names, terms = [], {}
    kv = Polynomial.var(k)
    for j in range(dN + 1):
        for l in range(dK + 1):
            coeff = Polynomial.zero()
            for i in range(dk + 1):
                name = f"_{prefix}{i}_{j}_{l}"
                names.append(name)
                coeff = coeff + Polynomial.var(name) * kv**i
            terms[(j, l)] = coeff
    return names, OreOperator(terms, n, k)


def _substitute(op: OreOperator, values: Mapping[str, RationalFunction]) -> OreOperator:
    out = {}
    names = list(values)
    for key, c in op.terms.items():
        poly = c.as_polynomial()
        acc = RationalFunction(poly.compose({u: Polynomial.zero() for u in names}))
        for u in names:
            cu = poly.coeff(u, 1)
            if not cu.is_zero():
                acc = acc + values[u] * cu
        out[key] = acc
    return OreOperator(out, op.n, op.k)


def _normalize_vector(vec: list[RationalFunction]) -> list[RationalFunction]:
    den = Polynomial.one()
    for v in vec:
        den = den * v.den.exact_div(poly_gcd(den, v.den))
    polys = [(v * den).as_polynomial() for v in vec]
    g = Polynomial.zero()
    for p in polys:
        g = poly_gcd(g, p)
    first = next(p for p in polys if not p.is_zero())
    sign = -1 if first.lc() < 0 else 1
    return [RationalFunction(p.exact_div(g) * sign) for p in polys]


def _try_shape(P: OreOperator, Q: OreOperator, shape) -> EliminationResult | None:
    a_names, A = _ansatz("a", shape, P.n, P.k)
    b_names, B = _ansatz("b", shape, P.n, P.k)
    unknowns = a_names + b_names
    S, _ = reduce_mod_delta(A * P + B * Q)
    rows = []
    for c in S.terms.values():
        poly = c.as_polynomial()
        for power, part in poly.coefficients(P.k).items():
            if power >= 1:
                rows.append([part.coeff(u, 1) for u in unknowns])
    if not rows:
        rows = [[Polynomial.zero()] * len(unknowns)]
    sol = linear_solve(rows)
    for vec in sol.nullspace:
        vec = _normalize_vector(vec)
        values = dict(zip(unknowns, vec))
        A_v = _substitute(A, values)
        B_v = _substitute(B, values)
        total = A_v * P + B_v * Q
        S_v, Rbar_v = reduce_mod_delta(total)
        if S_v.is_zero() or not S_v.free_of(P.k):
            continue
        return EliminationResult(S_v, A_v, B_v, Rbar_v, shape)
    return None


def eliminate(
    P: OreOperator, Q: OreOperator, bounds: tuple[int, int, int] = DEFAULT_BOUNDS, retry: bool = True
) -> EliminationResult:
    """Find ``A, B`` with ``A P + B Q = S(N,n) + (K-1) Rbar``.

    ``bounds`` caps the degrees of the cofactors in ``k``, ``N`` and ``K``; on
    failure the bounds are doubled once.  Raises :class:`BoundExhausted`.
    """
    tried = []
    rounds = [tuple(bounds)]
    if retry:
        rounds.append(tuple(2 * b for b in bounds))
    seen = set()
    for bnd in rounds:
        tried.append(bnd)
        for shape in _shapes(bnd):
            if shape in seen:
                continue
            seen.add(shape)
            found = _try_shape(P, Q, shape)
            if found is not None:
                return found
    raise BoundExhausted(f"no elimination found within cofactor degree bounds {tried}", tried)


def right_divide(S: OreOperator, S1: OreOperator) -> tuple[OreOperator, OreOperator]:
    """``S = T S1 + remainder`` with ``deg_N(remainder) < deg_N(S1)``.

    >>> T, rem = right_divide(parse_operator("N^4 - N^2 - 2*N - 1"), parse_operator("N^2 - N - 1"))
    >>> str(T), rem.is_zero()
    ('N^2 + N + 1', True)
    """
    if S1.is_zero():
        raise ZeroDivisionError("division by the zero operator")
    for op in (S, S1):
        if not op.free_of("K") or not op.free_of(op.k):
            raise ValueError("right_divide expects operators in N and n only")
    m = S1.degree_N()
    lead = S1.coefficient(m)
    T = OreOperator({}, S.n, S.k)
    rem = S
    while not rem.is_zero() and rem.degree_N() >= m:
        d = rem.degree_N()
        c = rem.coefficient(d)
        t = OreOperator({(d - m, 0): c / _shift_coeff(lead, S.n, d - m, S.k, 0)}, S.n, S.k)
        T = T + t
        rem = rem - t * S1
    return T, rem


# parsing and printing -------------------------------------------------------


def parse_operator(text: str, n: str = "n", k: str = "k") -> OreOperator:
    """Parse text such as ``"(n-k+1)*N - (n+1)"``; products keep their order."""
    node = parse_expression(text)

    def go(nd) -> OreOperator:
        if isinstance(nd, Num):
            return OreOperator.scalar(nd.value, n, k)
        if isinstance(nd, Sym):
            if nd.name == "N":
                return OreOperator.N(1, n, k)
            if nd.name == "K":
                return OreOperator.K(1, n, k)
            return OreOperator.scalar(Polynomial.var(nd.name), n, k)
        if isinstance(nd, Add):
            left, right = go(nd.left), go(nd.right)
            return left + right if nd.sign > 0 else left - right
        if isinstance(nd, Neg):
            return -go(nd.operand)
        if isinstance(nd, Mul):
            return go(nd.left) * go(nd.right)
        if isinstance(nd, Div):
            d = go(nd.right)
            if not (d.free_of("N") and d.free_of("K")) or d.is_zero():
                raise ParseError("can only divide by a nonzero scalar", text, nd.pos)
            return go(nd.left) * OreOperator.scalar(d.coefficient(0).inverse(), n, k)
        if isinstance(nd, Pow):
            e = go(nd.exponent)
            if not (e.free_of("N") and e.free_of("K")) or not e.coefficient(0).is_constant():
                raise ParseError("operator exponents must be non-negative integers", text, nd.pos)
            ev = e.coefficient(0).constant_value() if not e.is_zero() else 0
            if ev.denominator != 1 or ev < 0:
                raise ParseError("operator exponents must be non-negative integers", text, nd.pos)
            return go(nd.base) ** int(ev)
        if isinstance(nd, (Fact, Call)):
            raise ParseError("factorials are not allowed in operators", text, nd.pos)
        raise ParseError("unsupported operator syntax", text, getattr(nd, "pos", None))

    return go(node)


def _mono(a: int, b: int) -> str:
    parts = []
    if a:
        parts.append("N" if a == 1 else f"N^{a}")
    if b:
        parts.append("K" if b == 1 else f"K^{b}")
    return "*".join(parts)


def format_operator(op: OreOperator) -> str:
    if op.is_zero():
        return "0"
    out = ""
    for (a, b) in sorted(op.terms, key=lambda ab: (-(ab[0] + ab[1]), -ab[0], -ab[1])):
        c = op.terms[(a, b)]
        mono = _mono(a, b)
        negative = c.num.lc() < 0
        mag = -c if negative else c
        text = str(mag)
        single = c.den == 1 and len(c.num.terms()) == 1
        if mono:
            if mag == 1:
                body = mono
            else:
                body = (text if single else f"({text})") + "*" + mono
        else:
            body = text if single or not out and not negative else f"({text})"
        if not out:
            out = ("-" if negative else "") + body
        else:
            out += (" - " if negative else " + ") + body
    return out
