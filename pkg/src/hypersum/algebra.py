"""Exact polynomial and rational-function arithmetic over the rationals.

Polynomials are sparse and multivariate.  Storage and the multiplication /
gcd kernels come from sympy's low-level ``PolyRing`` (gmpy2-backed when
available); everything the summation algorithms rely on semantically
(normal forms, Sylvester resultants, integer root search, shifts and linear
solving over the rational-function field) is implemented here.

Variables are identified by name.  The monomial order is lexicographic with
the variable order ``n < k < (all other names, alphabetically)``, i.e. ``n``
is the most significant variable.  Inserting a new variable never changes the
relative order of existing monomials, so "leading coefficient" is well defined
no matter which ring a polynomial happens to live in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from numbers import Rational as _RationalABC
from typing import Iterable, Mapping, Sequence, Union

from sympy.polys.domains import QQ
from sympy.polys.orderings import lex
from sympy.polys.polyerrors import ExactQuotientFailed
from sympy.polys.rings import PolyRing

__all__ = [
    "Polynomial",
    "RationalFunction",
    "LinearSolution",
    "poly_gcd",
    "resultant",
    "integer_roots",
    "shift",
    "linear_solve",
    "to_fraction",
    "factor_list",
]

Scalar = Union[int, Fraction]

_MPQ = type(QQ(1))


def _var_key(name: str):
    if name == "n":
        return (0, "")
    if name == "k":
        return (1, "")
    return (2, name)


def canonical_order(names: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(set(names), key=_var_key))


@lru_cache(maxsize=None)
def _ring(names: tuple[str, ...]) -> PolyRing:
    return PolyRing(names if names else ("_",), QQ, lex)


_DUMMY = _ring(())


def _names(ring: PolyRing) -> tuple[str, ...]:
    return tuple(str(s) for s in ring.symbols)


def to_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    return Fraction(int(c.numerator), int(c.denominator))


def _qq(c):
    if isinstance(c, _MPQ):
        return c
    if isinstance(c, int):
        return QQ(c)
    if isinstance(c, _RationalABC):
        return QQ(int(c.numerator), int(c.denominator))
    raise TypeError(f"not an exact rational: {c!r}")


def _is_scalar(x) -> bool:
    return isinstance(x, (int, Fraction, _MPQ)) and not isinstance(x, bool)


class Polynomial:
    """Immutable multivariate polynomial with rational coefficients."""

    __slots__ = ("_p", "_hash")

    def __init__(self, element):
        self._p = element
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def const(cls, c: Scalar) -> "Polynomial":
        return cls(_ring(()).ground_new(_qq(c)))

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls.const(0)

    @classmethod
    def one(cls) -> "Polynomial":
        return cls.const(1)

    @classmethod
    def var(cls, name: str) -> "Polynomial":
        R = _ring((name,))
        return cls(R.gens[0])

    @classmethod
    def from_terms(cls, terms: Mapping[tuple[tuple[str, int], ...], Scalar]) -> "Polynomial":
        """Build from ``{((name, exp), ...): coeff}``."""
        names = canonical_order(v for mon in terms for v, e in mon if e)
        R = _ring(names)
        index = {v: i for i, v in enumerate(names)}
        data = {}
        for mon, c in terms.items():
            exps = [0] * len(names)
            for v, e in mon:
                if e:
                    exps[index[v]] += e
            key = tuple(exps) if names else (0,)
            data[key] = data.get(key, QQ(0)) + _qq(c)
        return cls(R.from_dict({m: c for m, c in data.items() if c}))

    @staticmethod
    def coerce(x) -> "Polynomial":
        if isinstance(x, Polynomial):
            return x
        if _is_scalar(x):
            return Polynomial.const(x)
        raise TypeError(f"cannot convert {x!r} to Polynomial")

    # ring handling ------------------------------------------------------
    @property
    def ring_names(self) -> tuple[str, ...]:
        names = _names(self._p.ring)
        return () if names == ("_",) else names

    def _in(self, names: tuple[str, ...]):
        R = _ring(names)
        if self._p.ring is R:
            return self._p
        if self._p.ring is _DUMMY:
            return R.ground_new(self._p.coeff(1)) if self._p else R.zero
        return self._p.set_ring(R)

    @staticmethod
    def _unify(a: "Polynomial", b: "Polynomial"):
        if a._p.ring is b._p.ring:
            return a._p, b._p
        names = canonical_order(a.ring_names + b.ring_names)
        return a._in(names), b._in(names)

    def with_vars(self, names: Iterable[str]) -> "Polynomial":
        return Polynomial(self._in(canonical_order(tuple(names) + self.ring_names)))

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if _is_scalar(other):
            return Polynomial(self._p + _qq(other))
        if not isinstance(other, Polynomial):
            return NotImplemented
        a, b = Polynomial._unify(self, other)
        return Polynomial(a + b)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-self._p)

    def __sub__(self, other):
        if _is_scalar(other):
            return Polynomial(self._p - _qq(other))
        if not isinstance(other, Polynomial):
            return NotImplemented
        a, b = Polynomial._unify(self, other)
        return Polynomial(a - b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if _is_scalar(other):
            return Polynomial(self._p * _qq(other))
        if not isinstance(other, Polynomial):
            return NotImplemented
        a, b = Polynomial._unify(self, other)
        return Polynomial(a * b)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        return Polynomial(self._p**e)

    def __truediv__(self, other):
        if _is_scalar(other):
            return Polynomial(self._p * (QQ(1) / _qq(other)))
        if isinstance(other, Polynomial):
            return RationalFunction(self, other)
        return NotImplemented

    def __rtruediv__(self, other):
        return RationalFunction(Polynomial.coerce(other), self)

    def exact_div(self, other: "Polynomial") -> "Polynomial":
        """Exact quotient; raises ``ArithmeticError`` if ``other`` does not divide."""
        a, b = Polynomial._unify(self, Polynomial.coerce(other))
        try:
            return Polynomial(a.exquo(b))
        except ExactQuotientFailed as exc:
            raise ArithmeticError(f"{other} does not divide {self}") from exc

    def divides(self, other: "Polynomial") -> bool:
        try:
            Polynomial.coerce(other).exact_div(self)
        except (ArithmeticError, ZeroDivisionError):
            return False
        return True

    # comparison ---------------------------------------------------------
    def __eq__(self, other):
        if _is_scalar(other):
            other = Polynomial.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        a, b = Polynomial._unify(self, other)
        return a == b

    def __hash__(self):
        if self._hash is None:
            names = _names(self._p.ring)
            self._hash = hash(
                frozenset(
                    (tuple((names[i], e) for i, e in enumerate(m) if e), c)
                    for m, c in self._p.items()
                )
            )
        return self._hash

    def __bool__(self):
        return bool(self._p)

    # queries ------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self._p

    def is_constant(self) -> bool:
        return self._p.is_ground

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return to_fraction(self._p.coeff(1) if self._p else QQ(0))

    def variables(self) -> frozenset[str]:
        names = _names(self._p.ring)
        used = set()
        for m in self._p.keys():
            used.update(names[i] for i, e in enumerate(m) if e)
        return frozenset(used)

    def _index(self, name: str):
        names = self.ring_names
        return names.index(name) if name in names else None

    def degree(self, var: str | None = None) -> int:
        """Degree in ``var`` (total degree if omitted); ``-1`` for the zero polynomial."""
        if not self._p:
            return -1
        if var is None:
            return max(sum(m) for m in self._p.keys())
        i = self._index(var)
        if i is None:
            return 0
        return max(m[i] for m in self._p.keys())

    def terms(self) -> list[tuple[tuple[tuple[str, int], ...], Fraction]]:
        """Terms in canonical (descending lex) order as ``(monomial, coeff)``."""
        names = _names(self._p.ring)
        out = []
        for m, c in self._p.terms():
            out.append((tuple((names[i], e) for i, e in enumerate(m) if e), to_fraction(c)))
        return out

    def coefficients(self, var: str) -> dict[int, "Polynomial"]:
        """Coefficients with respect to ``var``: ``{power: Polynomial}``."""
        i = self._index(var)
        if i is None:
            return {0: self} if self._p else {}
        R = self._p.ring
        buckets: dict[int, dict] = {}
        for m, c in self._p.items():
            e = m[i]
            mm = m[:i] + (0,) + m[i + 1 :]
            buckets.setdefault(e, {})[mm] = c
        return {e: Polynomial(R.from_dict(d)) for e, d in buckets.items()}

    def coeff(self, var: str, power: int) -> "Polynomial":
        return self.coefficients(var).get(power, Polynomial.zero())

    def leading_coeff(self, var: str) -> "Polynomial":
        cs = self.coefficients(var)
        return cs[max(cs)] if cs else Polynomial.zero()

    def lc(self) -> Fraction:
        """Leading rational coefficient under the canonical lex order."""
        return to_fraction(self._p.LC) if self._p else Fraction(0)

    def content(self) -> Fraction:
        """Positive rational gcd of the coefficients (0 for the zero polynomial)."""
        if not self._p:
            return Fraction(0)
        coeffs = [to_fraction(c) for c in self._p.values()]
        num = 0
        den = 1
        for c in coeffs:
            num = math.gcd(num, c.numerator)
            den = den * c.denominator // math.gcd(den, c.denominator)
        return Fraction(num, den)

    def primitive(self) -> tuple[Fraction, "Polynomial"]:
        """``(c, P)`` with ``self == c*P``, ``P`` integral, content 1, positive lc."""
        if not self._p:
            return Fraction(0), self
        c = self.content()
        if self.lc() < 0:
            c = -c
        return c, Polynomial(self._p * (QQ(1) / _qq(c)))

    def monic_primitive(self) -> "Polynomial":
        return self.primitive()[1]

    # substitution -------------------------------------------------------
    def evaluate(self, assignment: Mapping[str, Scalar]):
        """Substitute rationals for some variables.

        Returns a ``Fraction`` when every variable is assigned, otherwise a
        ``Polynomial`` in the remaining variables.
        """
        names = _names(self._p.ring)
        if not self._p:
            return Fraction(0) if self.variables() <= set(assignment) else self
        remaining = [v for v in self.variables() if v not in assignment]
        vals = {i: _qq(assignment[v]) for i, v in enumerate(names) if v in assignment}
        if not remaining:
            total = QQ(0)
            for m, c in self._p.items():
                t = c
                for i, e in enumerate(m):
                    if e:
                        t *= vals[i] ** e
                total += t
            return to_fraction(total)
        p = self._p
        for i, val in vals.items():
            p = p.subs(p.ring.gens[i], val)
        return Polynomial(p)

    def compose(self, mapping: Mapping[str, "Polynomial"]) -> "Polynomial":
        """Simultaneously replace variables by polynomials."""
        mapping = {v: Polynomial.coerce(p) for v, p in mapping.items() if v in self.variables()}
        if not mapping:
            return self
        names = canonical_order(
            self.ring_names + tuple(v for p in mapping.values() for v in p.ring_names)
        )
        R = _ring(names)
        src = _names(self._p.ring)
        images = []
        for v in src:
            if v in mapping:
                images.append(mapping[v]._in(names))
            elif v == "_":
                images.append(R.one)
            else:
                images.append(R.gens[names.index(v)])
        cache: dict[tuple[int, int], object] = {}

        def power(i, e):
            key = (i, e)
            if key not in cache:
                cache[key] = images[i] ** e
            return cache[key]

        out = R.zero
        for m, c in self._p.items():
            t = R.ground_new(c)
            for i, e in enumerate(m):
                if e:
                    t = t * power(i, e)
            out += t
        return Polynomial(out)

    def shift(self, var: str, amount: int) -> "Polynomial":
        if amount == 0 or var not in self.variables():
            return self
        return self.compose({var: Polynomial.var(var) + amount})

    def gcd(self, other: "Polynomial") -> "Polynomial":
        return poly_gcd(self, other)

    # printing -----------------------------------------------------------
    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({str(self)!r})"


def _fmt_fraction(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_polynomial(p: Polynomial) -> str:
    terms = p.terms()
    if not terms:
        return "0"
    pieces = []
    for mon, c in terms:
        mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in mon)
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if not mono:
            body = _fmt_fraction(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_fmt_fraction(a)}*{mono}"
        pieces.append((sign, body))
    first_sign, first = pieces[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


def poly_gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    """Normalized gcd: integral, content 1, positive leading coefficient.

    >>> str(poly_gcd(Polynomial.var('k')**2 - 1, Polynomial.var('k') - 1))
    'k - 1'
    """
    p, q = Polynomial.coerce(p), Polynomial.coerce(q)
    if p.is_zero() and q.is_zero():
        return Polynomial.zero()
    if p.is_zero():
        return q.monic_primitive()
    if q.is_zero():
        return p.monic_primitive()
    a, b = Polynomial._unify(p, q)
    return Polynomial(a.gcd(b)).monic_primitive()


def shift(p: Polynomial, var: str, amount: int) -> Polynomial:
    return Polynomial.coerce(p).shift(var, amount)


class RationalFunction:
    """Reduced quotient of polynomials.

    Normal form: ``gcd(num, den) = 1`` and ``den`` is integral with content 1
    and positive leading coefficient, so equal functions have equal
    representations.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None, *, _normalized=False):
        num = Polynomial.coerce(num)
        den = Polynomial.one() if den is None else Polynomial.coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not _normalized:
            num, den = _normalize(num, den)
        self.num = num
        self.den = den
        self._hash = None

    @staticmethod
    def coerce(x) -> "RationalFunction":
        if isinstance(x, RationalFunction):
            return x
        return RationalFunction(Polynomial.coerce(x))

    def __add__(self, other):
        try:
            other = RationalFunction.coerce(other)
        except TypeError:
            return NotImplemented
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        g = poly_gcd(self.den, other.den)
        if g.is_constant():
            return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)
        d1 = self.den.exact_div(g)
        d2 = other.den.exact_div(g)
        return RationalFunction(self.num * d2 + other.num * d1, d1 * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _normalized=True)

    def __sub__(self, other):
        try:
            other = RationalFunction.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if _is_scalar(other):
            if other == 0:
                return RationalFunction(Polynomial.zero())
            return RationalFunction(self.num * other, self.den, _normalized=True)
        try:
            other = RationalFunction.coerce(other)
        except TypeError:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return RationalFunction(Polynomial.zero())
        # cross-cancel before multiplying keeps intermediate sizes small
        g1 = poly_gcd(self.num, other.den)
        g2 = poly_gcd(other.num, self.den)
        n1, d2 = self.num.exact_div(g1), other.den.exact_div(g1)
        n2, d1 = other.num.exact_div(g2), self.den.exact_div(g2)
        return RationalFunction(n1 * n2, d1 * d2)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        if _is_scalar(other):
            return RationalFunction(self.num / other, self.den, _normalized=True)
        try:
            other = RationalFunction.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return RationalFunction.coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e >= 0:
            return RationalFunction(self.num**e, self.den**e, _normalized=True) if e else RationalFunction(1)
        return self.inverse() ** (-e)

    def __eq__(self, other):
        try:
            other = RationalFunction.coerce(other)
        except TypeError:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        return self.num.constant_value() / self.den.constant_value()

    def as_polynomial(self) -> Polynomial:
        if not self.is_polynomial():
            raise ValueError(f"{self} is not a polynomial")
        return self.num / self.den.constant_value()

    def variables(self) -> frozenset[str]:
        return self.num.variables() | self.den.variables()

    def shift(self, var: str, amount: int) -> "RationalFunction":
        if amount == 0 or var not in self.variables():
            return self
        return RationalFunction(self.num.shift(var, amount), self.den.shift(var, amount))

    def compose(self, mapping: Mapping[str, Polynomial]) -> "RationalFunction":
        return RationalFunction(self.num.compose(mapping), self.den.compose(mapping))

    def evaluate(self, assignment: Mapping[str, Scalar]):
        """Full evaluation gives a ``Fraction`` (``ZeroDivisionError`` at a pole)."""
        num = self.num.evaluate(assignment)
        den = self.den.evaluate(assignment)
        if isinstance(num, Fraction) and isinstance(den, Fraction):
            if den == 0:
                raise ZeroDivisionError(f"pole of {self} at {dict(assignment)}")
            return num / den
        return RationalFunction(num, den)

    def __str__(self):
        return format_rational_function(self)

    def __repr__(self):
        return f"RationalFunction({str(self)!r})"


def _normalize(num: Polynomial, den: Polynomial):
    if num.is_zero():
        return num, Polynomial.one()
    if not den.is_constant():
        a, b = Polynomial._unify(num, den)
        g, a, b = a.cofactors(b)
        num, den = Polynomial(a), Polynomial(b)
    c, den = den.primitive()
    if c != 1:
        num = num / c
    return num, den


def _wrap(text: str, is_sum: bool) -> str:
    return f"({text})" if is_sum else text


def format_rational_function(r: RationalFunction) -> str:
    if r.den == 1:
        return str(r.num)
    c, prim = r.num.primitive()
    if c.denominator != 1:
        r = RationalFunction(prim * c.numerator, r.den * c.denominator, _normalized=True)
    num = str(r.num)
    num_sum = len(r.num.terms()) > 1 or num.startswith("-") and "/" in num
    den_terms = r.den.terms()
    den_plain = len(den_terms) == 1 and den_terms[0][1] == 1 and len(den_terms[0][0]) <= 1
    den = str(r.den)
    return f"{_wrap(num, num_sum)}/{den if den_plain else '(' + den + ')'}"


# resultants ----------------------------------------------------------------


def _det_bareiss(rows: list[list]) -> object:
    """Fraction-free determinant of a square matrix of PolyElements."""
    m = [list(r) for r in rows]
    size = len(m)
    if size == 0:
        return None
    sign = 1
    prev = None
    for i in range(size - 1):
        if not m[i][i]:
            for r in range(i + 1, size):
                if m[r][i]:
                    m[i], m[r] = m[r], m[i]
                    sign = -sign
                    break
            else:
                return m[i][i].ring.zero
        for r in range(i + 1, size):
            for c in range(i + 1, size):
                val = m[r][c] * m[i][i] - m[r][i] * m[i][c]
                m[r][c] = val if prev is None else val.exquo(prev)
            m[r][i] = m[r][i].ring.zero
        prev = m[i][i]
    det = m[size - 1][size - 1]
    return det if sign > 0 else -det


def resultant(p: Polynomial, q: Polynomial, var: str) -> Polynomial:
    """Sylvester resultant of ``p`` and ``q`` with respect to ``var``.

    Constant inputs follow ``res(c, q) = c**deg(q)``.

    >>> a, b, c, x = (Polynomial.var(s) for s in "abcx")
    >>> str(resultant(a*x**2 + b*x + c, 2*a*x + b, "x"))
    '4*a^2*c - a*b^2'
    """
    p, q = Polynomial.coerce(p), Polynomial.coerce(q)
    if p.is_zero() and q.is_zero():
        raise ValueError("undefined resultant")
    if p.is_zero() or q.is_zero():
        return Polynomial.zero()
    dp, dq = p.degree(var), q.degree(var)
    if dp == 0:
        return p**dq
    if dq == 0:
        return q**dp
    names = canonical_order(p.ring_names + q.ring_names)
    pc = p.with_vars(names).coefficients(var)
    qc = q.with_vars(names).coefficients(var)
    R = _ring(names)
    zero = R.zero
    prow = [pc.get(dp - i, None) for i in range(dp + 1)]
    qrow = [qc.get(dq - i, None) for i in range(dq + 1)]
    prow = [c._in(names) if c is not None else zero for c in prow]
    qrow = [c._in(names) if c is not None else zero for c in qrow]
    size = dp + dq
    rows = []
    for i in range(dq):
        rows.append([zero] * i + prow + [zero] * (size - dp - 1 - i))
    for i in range(dp):
        rows.append([zero] * i + qrow + [zero] * (size - dq - 1 - i))
    return Polynomial(_det_bareiss(rows))


# integer roots -------------------------------------------------------------


def _divisors(m: int) -> list[int]:
    from sympy import divisors

    return [int(d) for d in divisors(m)]


def integer_roots(p: Polynomial) -> list[int]:
    """All integer roots of a nonzero univariate polynomial, ascending.

    >>> j = Polynomial.var("j")
    >>> integer_roots(j**2 - 3*j + 2)
    [1, 2]
    """
    p = Polynomial.coerce(p)
    if p.is_zero():
        raise ValueError("infinitely many roots")
    vs = p.variables()
    if len(vs) > 1:
        raise ValueError(f"integer_roots expects a univariate polynomial, got {p}")
    if not vs:
        return []
    (v,) = vs
    _, prim = p.primitive()
    coeffs = prim.coefficients(v)
    deg = max(coeffs)
    ints = [int(coeffs[e].constant_value()) if e in coeffs else 0 for e in range(deg + 1)]
    roots = []
    low = 0
    while ints[low] == 0:
        low += 1
    if low:
        roots.append(0)
    ints = ints[low:]
    if len(ints) == 1:
        return roots

    def value(x: int) -> int:
        acc = 0
        for c in reversed(ints):
            acc = acc * x + c
        return acc

    trailing, leading = ints[0], ints[-1]
    bound = 1 + max(abs(c) for c in ints[:-1]) // abs(leading) + 1
    if bound <= 20000:
        cands = (x for x in range(-bound, bound + 1) if x and trailing % x == 0)
    else:
        ds = _divisors(abs(trailing))
        cands = [d for d in ds if d <= bound] + [-d for d in ds if d <= bound]
    roots.extend(x for x in cands if value(x) == 0)
    return sorted(set(roots))


# linear systems -------------------------------------------------------------


@dataclass(frozen=True)
class LinearSolution:
    status: str  # "unique" | "parametric" | "unsolvable"
    particular: list[RationalFunction] | None = None
    nullspace: list[list[RationalFunction]] = field(default_factory=list)

    @property
    def solvable(self) -> bool:
        return self.status != "unsolvable"


def _size(r: RationalFunction) -> int:
    return len(r.num._p) + len(r.den._p)


def linear_solve(matrix: Sequence[Sequence], rhs: Sequence | None = None) -> LinearSolution:
    """Gauss-Jordan elimination over the field of rational functions.

    ``matrix`` is a list of rows whose entries are scalars, polynomials or
    rational functions; ``rhs`` defaults to the zero vector.  Returns a
    particular solution together with a basis of the nullspace, or status
    ``"unsolvable"``.
    """
    rows = [[RationalFunction.coerce(x) for x in row] for row in matrix]
    ncols = len(rows[0]) if rows else 0
    if any(len(r) != ncols for r in rows):
        raise ValueError("ragged matrix")
    b = [RationalFunction.coerce(x) for x in (rhs if rhs is not None else [0] * len(rows))]
    if len(b) != len(rows):
        raise ValueError("right-hand side length mismatch")
    aug = [r + [bi] for r, bi in zip(rows, b)]
    pivots: list[int] = []
    prow = 0
    for col in range(ncols):
        best = None
        for r in range(prow, len(aug)):
            if not aug[r][col].is_zero():
                if best is None or _size(aug[r][col]) < _size(aug[best][col]):
                    best = r
        if best is None:
            continue
        aug[prow], aug[best] = aug[best], aug[prow]
        inv = aug[prow][col].inverse()
        aug[prow] = [x * inv if not x.is_zero() else x for x in aug[prow]]
        for r in range(len(aug)):
            if r != prow and not aug[r][col].is_zero():
                f = aug[r][col]
                aug[r] = [
                    x - f * y if not y.is_zero() else x for x, y in zip(aug[r], aug[prow])
                ]
        pivots.append(col)
        prow += 1
        if prow == len(aug):
            break
    for r in range(prow, len(aug)):
        if not aug[r][ncols].is_zero():
            return LinearSolution("unsolvable")
    zero = RationalFunction(0)
    particular = [zero] * ncols
    for r, col in enumerate(pivots):
        particular[col] = aug[r][ncols]
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        vec = [zero] * ncols
        vec[fcol] = RationalFunction(1)
        for r, col in enumerate(pivots):
            vec[col] = -aug[r][fcol]
        basis.append(vec)
    return LinearSolution("parametric" if free else "unique", particular, basis)


def factor_list(p: Polynomial) -> tuple[Fraction, list[tuple[Polynomial, int]]]:
    """Irreducible factorization over the rationals: ``p = c * prod(f_i ** m_i)``."""
    p = Polynomial.coerce(p)
    if p.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    if p.is_constant():
        return p.constant_value(), []
    c, factors = p._p.factor_list()
    return to_fraction(c), [(Polynomial(f), int(m)) for f, m in factors]
