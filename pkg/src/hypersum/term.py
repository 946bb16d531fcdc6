"""Proper hypergeometric terms in canonical product form.

A term is

    constant * (-1)^sign * prod(base_i ^ e_i) * rational(n, k, ...) * prod (a n + b k + c)!^m

where ``sign`` and the power exponents ``e_i`` are integer-linear forms, the
power bases are free of the exponent variables, and every factorial argument
is an integer-linear form.  Terms are immutable.

Evaluation convention: a factorial of a negative integer in a *denominator*
makes the whole value 0 (compact support of binomials); a negative factorial
in a numerator (or a pole of the rational part) makes the value
``UNDEFINED``.  The zero rule takes precedence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from sympy import factorint

from .algebra import Polynomial, RationalFunction, canonical_order
from .parsing import (
    Add,
    Call,
    Div,
    Fact,
    Mul,
    Neg,
    Num,
    ParseError,
    Pow,
    Sym,
    fold_rational,
    parse_expression,
)

__all__ = [
    "LinearForm",
    "FactorialFactor",
    "HypergeometricTerm",
    "UNDEFINED",
    "parse_term",
    "parse_linear_form",
    "ratio",
    "shift_ratio",
    "evaluate",
    "shadow",
    "affine_substitute",
]


class _Undefined:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNDEFINED"

    def __bool__(self):
        return False


UNDEFINED = _Undefined()


@dataclass(frozen=True)
class LinearForm:
    """Integer-linear combination of symbols plus an integer constant."""

    coeffs: tuple[tuple[str, int], ...] = ()
    const: int = 0

    @staticmethod
    def make(coeffs: Mapping[str, int] | Iterable[tuple[str, int]] = (), const: int = 0) -> "LinearForm":
        items = dict(coeffs) if not isinstance(coeffs, Mapping) else dict(coeffs)
        order = canonical_order(v for v, c in items.items() if c)
        return LinearForm(tuple((v, int(items[v])) for v in order), int(const))

    @staticmethod
    def symbol(name: str) -> "LinearForm":
        return LinearForm(((name, 1),), 0)

    @staticmethod
    def constant(c: int) -> "LinearForm":
        return LinearForm((), int(c))

    @staticmethod
    def from_polynomial(p: Polynomial) -> "LinearForm":
        if p.degree() > 1:
            raise ValueError(f"not linear: {p}")
        coeffs = {}
        const = Fraction(0)
        for mon, c in p.terms():
            if not mon:
                const = c
            else:
                ((v, _),) = mon
                coeffs[v] = c
        if any(c.denominator != 1 for c in coeffs.values()) or const.denominator != 1:
            raise ValueError(f"non-integer coefficient in {p}")
        return LinearForm.make({v: int(c) for v, c in coeffs.items()}, int(const))

    def coeff(self, var: str) -> int:
        for v, c in self.coeffs:
            if v == var:
                return c
        return 0

    def variables(self) -> frozenset[str]:
        return frozenset(v for v, _ in self.coeffs)

    def linear_part(self) -> "LinearForm":
        return LinearForm(self.coeffs, 0)

    def is_constant(self) -> bool:
        return not self.coeffs

    def is_zero(self) -> bool:
        return not self.coeffs and self.const == 0

    def __add__(self, other):
        if isinstance(other, int):
            return LinearForm(self.coeffs, self.const + other)
        d = dict(self.coeffs)
        for v, c in other.coeffs:
            d[v] = d.get(v, 0) + c
        return LinearForm.make(d, self.const + other.const)

    __radd__ = __add__

    def __neg__(self):
        return LinearForm(tuple((v, -c) for v, c in self.coeffs), -self.const)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, m: int):
        if m == 0:
            return LinearForm()
        return LinearForm(tuple((v, c * m) for v, c in self.coeffs), self.const * m)

    __rmul__ = __mul__

    def mod2(self) -> "LinearForm":
        return LinearForm.make({v: c % 2 for v, c in self.coeffs}, self.const % 2)

    def evaluate(self, assignment: Mapping[str, int]) -> int:
        total = self.const
        for v, c in self.coeffs:
            if v not in assignment:
                raise ValueError(f"no value assigned to {v!r}")
            total += c * int(assignment[v])
        return total

    def delta(self, shifts: Mapping[str, int]) -> int:
        """Change of the form when each variable ``v`` moves by ``shifts[v]``."""
        return sum(c * shifts.get(v, 0) for v, c in self.coeffs)

    def substitute(self, mapping: Mapping[str, "LinearForm"]) -> "LinearForm":
        out = LinearForm.constant(self.const)
        for v, c in self.coeffs:
            out = out + (mapping[v] * c if v in mapping else LinearForm(((v, c),), 0))
        return out

    def to_polynomial(self) -> Polynomial:
        return Polynomial.from_terms({((v, 1),): c for v, c in self.coeffs} | {(): self.const})

    def __str__(self):
        if not self.coeffs:
            return str(self.const)
        out = ""
        ordered = sorted(self.coeffs, key=lambda vc: vc[1] < 0) if len(self.coeffs) > 1 else self.coeffs
        for i, (v, c) in enumerate(ordered):
            mag = "" if abs(c) == 1 else f"{abs(c)}*"
            if i == 0:
                out += ("-" if c < 0 else "") + mag + v
            else:
                out += (" - " if c < 0 else " + ") + mag + v
        if self.const:
            out += (" - " if self.const < 0 else " + ") + str(abs(self.const))
        return out

    def is_atomic(self) -> bool:
        return (len(self.coeffs) == 1 and self.coeffs[0][1] == 1 and self.const == 0) or (
            not self.coeffs and self.const >= 0
        )


@dataclass(frozen=True)
class FactorialFactor:
    argument: LinearForm
    exponent: int
    shadowed: bool = False

    def unshadowed_view(self) -> tuple[LinearForm, int]:
        if self.shadowed:
            return -self.argument - LinearForm.constant(1), -self.exponent
        return self.argument, self.exponent

    def _arg_text(self) -> str:
        if self.shadowed:
            return f"sfact({self.argument})"
        a = str(self.argument)
        return f"{a}!" if self.argument.is_atomic() else f"({a})!"

    def text(self, magnitude: int) -> str:
        base = self._arg_text()
        return base if magnitude == 1 else f"{base}^{magnitude}"


def _factor_sort_key(f: FactorialFactor):
    return (
        f.shadowed,
        tuple((v[0], v[1]) for v in f.argument.coeffs),
        f.argument.const,
    )


def _integer_base_factors(v: Fraction) -> dict[int, int]:
    out: dict[int, int] = {}
    for p, e in factorint(v.numerator).items():
        out[int(p)] = out.get(int(p), 0) + int(e)
    for p, e in factorint(v.denominator).items():
        out[int(p)] = out.get(int(p), 0) - int(e)
    return {p: e for p, e in out.items() if p != 1 and e}


class HypergeometricTerm:
    """Canonical closed-form term; construct via :meth:`make` or :func:`parse_term`."""

    __slots__ = ("constant", "powers", "sign", "rational", "factorials", "_hash")

    def __init__(self, constant, powers, sign, rational, factorials):
        self.constant: Fraction = constant
        self.powers: tuple[tuple[Polynomial, LinearForm], ...] = powers
        self.sign: LinearForm = sign
        self.rational: RationalFunction = rational
        self.factorials: tuple[FactorialFactor, ...] = factorials
        self._hash = None

    # construction -------------------------------------------------------
    @staticmethod
    def make(
        constant=1,
        powers: Iterable[tuple[object, LinearForm]] = (),
        sign: LinearForm = LinearForm(),
        rational=1,
        factorials: Iterable[FactorialFactor] = (),
    ) -> "HypergeometricTerm":
        constant = Fraction(constant)
        if constant == 0:
            raise ValueError("zero term")
        rational = RationalFunction.coerce(rational)
        if rational.is_zero():
            raise ValueError("zero polynomial part")
        c, num = rational.num.primitive()
        constant *= c
        rational = RationalFunction(num, rational.den, _normalized=True)

        # powers: split constant bases into primes, primitive-ize polynomial bases
        merged: dict[Polynomial, LinearForm] = {}

        def add_power(base: Polynomial, exp: LinearForm):
            nonlocal sign
            if exp.is_zero():
                return
            if base.is_constant():
                v = base.constant_value()
                if v == 0:
                    raise ValueError("zero power base")
                if v < 0:
                    sign = sign + exp
                    v = -v
                for p, e in _integer_base_factors(v).items():
                    key = Polynomial.const(p)
                    merged[key] = merged.get(key, LinearForm()) + exp * e
                return
            c, prim = base.primitive()
            if c != 1:
                add_power(Polynomial.const(c), exp)
            merged[prim] = merged.get(prim, LinearForm()) + exp

        for base, exp in powers:
            base = base if isinstance(base, Polynomial) else Polynomial.coerce(base)
            add_power(base, exp)
        pw = []
        for base, exp in merged.items():
            if exp.is_zero():
                continue
            # constant exponent offsets fold into the constant / rational part
            if exp.const:
                if base.is_constant():
                    constant *= base.constant_value() ** exp.const
                else:
                    rational = rational * (RationalFunction(base) ** exp.const)
                    c, num = rational.num.primitive()
                    constant *= c
                    rational = RationalFunction(num, rational.den, _normalized=True)
                exp = exp.linear_part()
            if not exp.is_zero():
                pw.append((base, exp))
        pw.sort(key=lambda be: (str(be[0]).replace("^", "~"), str(be[1])))
        sign = sign.mod2()
        if sign.const:
            constant = -constant
            sign = sign.linear_part()

        facts: dict[tuple[LinearForm, bool], int] = {}
        for f in factorials:
            if f.argument.is_constant() and f.argument.const >= 0:
                constant *= Fraction(math.factorial(f.argument.const)) ** f.exponent
                continue
            key = (f.argument, f.shadowed)
            facts[key] = facts.get(key, 0) + f.exponent
        fl = [FactorialFactor(a, e, s) for (a, s), e in facts.items() if e]
        fl.sort(key=_factor_sort_key)
        return HypergeometricTerm(constant, tuple(pw), sign, rational, tuple(fl))

    @staticmethod
    def one() -> "HypergeometricTerm":
        return HypergeometricTerm.make()

    # structure ----------------------------------------------------------
    def _key(self):
        return (self.constant, self.powers, self.sign, self.rational, self.factorials)

    def __eq__(self, other):
        if not isinstance(other, HypergeometricTerm):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def variables(self) -> frozenset[str]:
        vs = set(self.sign.variables()) | set(self.rational.variables())
        for b, e in self.powers:
            vs |= b.variables() | e.variables()
        for f in self.factorials:
            vs |= f.argument.variables()
        return frozenset(vs)

    def replace(self, **kw) -> "HypergeometricTerm":
        fields = dict(
            constant=self.constant,
            powers=self.powers,
            sign=self.sign,
            rational=self.rational,
            factorials=self.factorials,
        )
        fields.update(kw)
        return HypergeometricTerm.make(**fields)

    # algebra ------------------------------------------------------------
    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.replace(constant=self.constant * other)
        if isinstance(other, (Polynomial, RationalFunction)):
            return self.replace(rational=self.rational * other)
        if not isinstance(other, HypergeometricTerm):
            return NotImplemented
        return HypergeometricTerm.make(
            self.constant * other.constant,
            self.powers + other.powers,
            self.sign + other.sign,
            self.rational * other.rational,
            self.factorials + other.factorials,
        )

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def inverse(self) -> "HypergeometricTerm":
        return HypergeometricTerm.make(
            1 / self.constant,
            tuple((b, -e) for b, e in self.powers),
            self.sign,
            self.rational.inverse(),
            tuple(FactorialFactor(f.argument, -f.exponent, f.shadowed) for f in self.factorials),
        )

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        if isinstance(other, (Polynomial, RationalFunction)):
            return self * RationalFunction.coerce(other).inverse()
        if not isinstance(other, HypergeometricTerm):
            return NotImplemented
        return self * other.inverse()

    def collapse(self) -> "HypergeometricTerm":
        """Cancel factorial pairs whose arguments differ by an integer."""
        groups: dict[tuple, list[list]] = {}
        for f in self.factorials:
            arg, e = f.unshadowed_view()
            groups.setdefault(arg.coeffs, []).append([arg.const, e, f.shadowed])
        num = Polynomial.one()
        den = Polynomial.one()
        sign = self.sign
        out: list[FactorialFactor] = []
        for coeffs, members in groups.items():
            base = LinearForm(coeffs, 0).to_polynomial()
            # shadowed members: convert to unshadowed view; sign bookkeeping
            for m in members:
                if m[2]:
                    sign = sign + LinearForm(coeffs, m[0]) * m[1]
            while True:
                pos = [m for m in members if m[1] > 0]
                neg = [m for m in members if m[1] < 0]
                if not pos or not neg:
                    break
                a, b = pos[0], neg[0]
                mult = min(a[1], -b[1])
                c1, c2 = a[0], b[0]
                prod = Polynomial.one()
                if c2 > c1:
                    for j in range(c1 + 1, c2 + 1):
                        prod = prod * (base + j)
                    den = den * prod**mult
                else:
                    for j in range(c2 + 1, c1 + 1):
                        prod = prod * (base + j)
                    num = num * prod**mult
                a[1] -= mult
                b[1] += mult
                members = [m for m in members if m[1]]
            for c, e, _ in members:
                out.append(FactorialFactor(LinearForm(coeffs, c), e, False))
        return HypergeometricTerm.make(
            self.constant, self.powers, sign, self.rational * (num / den), out
        )

    def as_rational(self) -> RationalFunction | None:
        """The value as a rational function if the term has no hypergeometric part."""
        t = self.collapse()
        if t.powers or t.factorials or not t.sign.is_zero():
            return None
        return t.rational * t.constant

    def equals(self, other: "HypergeometricTerm") -> bool:
        q = (self / other).as_rational()
        return q is not None and q == 1

    def simplify(self) -> "HypergeometricTerm":
        """Collapse factorial groups, then absorb linear polynomial factors into factorials."""
        t = self.collapse()
        num, den = t.rational.num, t.rational.den
        facts = [[f.argument, f.exponent] for f in t.factorials]
        changed = True
        while changed:
            changed = False
            for f in facts:
                arg, e = f
                if arg.is_constant():
                    continue
                m = abs(e)
                A = arg.to_polynomial()
                if e < 0:
                    moves = ((num, A**m, -1, "num"), (den, (A + 1) ** m, 1, "den"))
                else:
                    moves = ((num, (A + 1) ** m, 1, "num"), (den, A**m, -1, "den"))
                for poly, d, step, which in moves:
                    if poly.degree() >= d.degree() and d.divides(poly):
                        if which == "num":
                            num = num.exact_div(d)
                        else:
                            den = den.exact_div(d)
                        f[0] = arg + step
                        changed = True
                        break
                if changed:
                    break
        return HypergeometricTerm.make(
            t.constant,
            t.powers,
            t.sign,
            RationalFunction(num, den),
            [FactorialFactor(a, e) for a, e in facts],
        )

    # printing -----------------------------------------------------------
    def __str__(self):
        return format_term(self)

    def __repr__(self):
        return f"HypergeometricTerm({str(self)!r})"


def _paren_poly(p: Polynomial) -> str:
    s = str(p)
    if p.is_constant() and p.constant_value() > 0:
        return s
    terms = p.terms()
    if len(terms) == 1 and terms[0][1] == 1 and len(terms[0][0]) == 1 and terms[0][0][0][1] == 1:
        return s
    return f"({s})"


def format_term(t: HypergeometricTerm) -> str:
    num_parts: list[str] = []
    den_parts: list[str] = []
    c = t.constant
    if abs(c.numerator) != 1:
        num_parts.append(str(abs(c.numerator)))
    if c.denominator != 1:
        den_parts.append(str(c.denominator))
    if not t.sign.is_zero():
        s = str(t.sign)
        num_parts.append(f"(-1)^{s}" if t.sign.is_atomic() else f"(-1)^({s})")
    for base, exp in t.powers:
        b = _paren_poly(base)
        lead_negative = exp.coeffs[0][1] < 0
        shown = -exp if lead_negative else exp
        e = str(shown)
        (den_parts if lead_negative else num_parts).append(f"{b}^{e}" if shown.is_atomic() else f"{b}^({e})")
    if t.rational.num != 1:
        num_parts.append(_paren_poly(t.rational.num))
    if t.rational.den != 1:
        den_parts.append(_paren_poly(t.rational.den))
    for f in t.factorials:
        (num_parts if f.exponent > 0 else den_parts).append(f.text(abs(f.exponent)))
    text = "*".join(num_parts) if num_parts else "1"
    if c < 0:
        text = "-" + text
    for d in den_parts:
        text += f"/{d}"
    return text


# parsing -------------------------------------------------------------------


def _linear(node, text: str) -> LinearForm:
    try:
        r = fold_rational(node, text)
    except ParseError as exc:
        raise ParseError(f"expected an integer-linear form ({exc})", text, getattr(node, "pos", None)) from None
    if not r.is_polynomial():
        raise ParseError("expected an integer-linear form", text, getattr(node, "pos", None))
    try:
        return LinearForm.from_polynomial(r.as_polynomial())
    except ValueError as exc:
        raise ParseError(str(exc).replace("non-integer", "non-integer/non-linear"), text, getattr(node, "pos", None)) from None


def _contains_factorial(node) -> bool:
    if isinstance(node, (Fact, Call)):
        return True
    if isinstance(node, (Add, Mul, Div)):
        return _contains_factorial(node.left) or _contains_factorial(node.right)
    if isinstance(node, Neg):
        return _contains_factorial(node.operand)
    if isinstance(node, Pow):
        return _contains_factorial(node.base) or _contains_factorial(node.exponent)
    return False


def _build(node, text: str) -> HypergeometricTerm:
    if isinstance(node, Mul):
        return _build(node.left, text) * _build(node.right, text)
    if isinstance(node, Div):
        return _build(node.left, text) / _build(node.right, text)
    if isinstance(node, Neg):
        return -_build(node.operand, text)
    if isinstance(node, Fact):
        return HypergeometricTerm.make(factorials=[FactorialFactor(_linear(node.argument, text), 1)])
    if isinstance(node, Call):
        name = node.name
        if name in ("fact", "sfact") and len(node.args) == 1:
            return HypergeometricTerm.make(
                factorials=[FactorialFactor(_linear(node.args[0], text), 1, name == "sfact")]
            )
        if name == "binomial" and len(node.args) == 2:
            u, v = (_linear(a, text) for a in node.args)
            return HypergeometricTerm.make(
                factorials=[FactorialFactor(u, 1), FactorialFactor(v, -1), FactorialFactor(u - v, -1)]
            )
        raise ParseError(f"unknown function {name}/{len(node.args)}", text, node.pos)
    if isinstance(node, Pow):
        if isinstance(node.base, (Fact, Call)):
            e = _linear(node.exponent, text)
            if not e.is_constant():
                raise ParseError("factorial powers must be integer constants", text, node.pos)
            base = _build(node.base, text)
            return HypergeometricTerm.make(
                base.constant ** e.const,
                sign=base.sign * e.const,
                factorials=[FactorialFactor(f.argument, f.exponent * e.const, f.shadowed) for f in base.factorials],
            )
        e = _linear(node.exponent, text)
        if _contains_factorial(node.base):
            raise ParseError("unsupported power base", text, node.pos)
        base = fold_rational(node.base, text)
        if base.is_zero():
            raise ParseError("zero power base", text, node.pos)
        if e.is_constant():
            return HypergeometricTerm.make(rational=base**e.const)
        clash = base.variables() & (e.variables() | {"n", "k"})
        if clash:
            raise ParseError(f"power base depends on {sorted(clash)}", text, node.pos)
        return HypergeometricTerm.make(powers=[(base.num, e), (base.den, -e)])
    if isinstance(node, (Num, Sym, Add)):
        if _contains_factorial(node):
            raise ParseError("factorials may not appear inside sums", text, node.pos)
        r = fold_rational(node, text)
        if r.is_zero():
            raise ParseError("zero polynomial part", text, node.pos)
        return HypergeometricTerm.make(rational=r)
    raise ParseError("unsupported expression", text, getattr(node, "pos", None))


def parse_term(text: str) -> HypergeometricTerm:
    """Parse the ASCII term grammar.

    >>> str(parse_term("binomial(n,k)*binomial(b,k)"))
    'b!*n!/(b - k)!/k!^2/(n - k)!'
    """
    try:
        return _build(parse_expression(text), text)
    except ParseError:
        raise
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(str(exc), text, None) from None


def parse_linear_form(text: str) -> LinearForm:
    return _linear(parse_expression(text), text)


# operations ----------------------------------------------------------------


def shift_ratio(t: HypergeometricTerm, shifts: Mapping[str, int]) -> RationalFunction:
    """``t(v + shifts[v]) / t(v)`` as a reduced rational function."""
    shifts = {v: s for v, s in shifts.items() if s}
    num = Polynomial.one()
    den = Polynomial.one()
    sgn = t.sign.delta(shifts)
    if sgn % 2:
        num = -num
    for base, exp in t.powers:
        d = exp.delta(shifts)
        if d > 0:
            num = num * base**d
        elif d < 0:
            den = den * base ** (-d)
    for f in t.factorials:
        d = f.argument.delta(shifts)
        if not d:
            continue
        A = f.argument.to_polynomial()
        prod = Polynomial.one()
        if d > 0:
            for j in range(1, d + 1):
                prod = prod * (A + j)
        else:
            for j in range(0, -d):
                prod = prod * (A - j)
        up = (d > 0) == (f.exponent > 0)
        p = prod ** abs(f.exponent)
        if up:
            num = num * p
        else:
            den = den * p
    out = RationalFunction(num, den)
    if t.rational.variables() & set(shifts):
        mapping = {v: Polynomial.var(v) + s for v, s in shifts.items()}
        out = out * t.rational.compose(mapping) / t.rational
    return out


def ratio(t: HypergeometricTerm, var: str) -> RationalFunction:
    """Forward shift ratio ``t(var+1)/t(var)``.

    >>> str(ratio(parse_term("binomial(n,k)"), "n"))
    '(n + 1)/(n - k + 1)'
    """
    return shift_ratio(t, {var: 1})


def shift_term(t: HypergeometricTerm, var: str, amount: int) -> HypergeometricTerm:
    return affine_substitute(t, {var: LinearForm.symbol(var) + amount})


def evaluate(t: HypergeometricTerm, assignment: Mapping[str, int]):
    """Exact value at an integer point: ``Fraction`` or ``UNDEFINED``."""
    missing = t.variables() - set(assignment)
    if missing:
        raise ValueError(f"no value assigned to {sorted(missing)}")
    undefined = False
    numer: list[tuple[int, int]] = []
    for f in t.factorials:
        a = f.argument.evaluate(assignment)
        if a < 0:
            if f.exponent < 0:
                return Fraction(0)
            undefined = True
        else:
            numer.append((a, f.exponent))
    try:
        rat = t.rational.evaluate(assignment)
    except ZeroDivisionError:
        return UNDEFINED
    value = t.constant * rat
    for base, exp in t.powers:
        b = base.evaluate(assignment)
        e = exp.evaluate(assignment)
        if b == 0 and e < 0:
            undefined = True
            continue
        value *= b**e
    if undefined:
        return UNDEFINED
    if t.sign.evaluate(assignment) % 2:
        value = -value
    num = 1
    den = 1
    for a, e in numer:
        v = math.factorial(a)
        if e > 0:
            num *= v**e
        else:
            den *= v ** (-e)
    return value * Fraction(num, den)


def default_shadow_selection(t: HypergeometricTerm) -> list[FactorialFactor]:
    """Factors ``(an + bk + c)!`` with ``a + b != 0``."""
    out = []
    for f in t.factorials:
        arg, _ = f.unshadowed_view()
        if arg.coeff("n") + arg.coeff("k") != 0:
            out.append(f)
    return out


def _resolve_selection(t: HypergeometricTerm, selection) -> list[FactorialFactor]:
    if selection is None or selection == "default":
        return default_shadow_selection(t)
    if selection == "none":
        return []
    chosen = []
    for item in selection:
        if isinstance(item, str):
            item = parse_linear_form(item)
        if isinstance(item, FactorialFactor):
            match = [f for f in t.factorials if f == item]
        else:
            match = [f for f in t.factorials if f.argument == item]
        if not match:
            raise ValueError(f"no factorial factor with argument {item} in {t}")
        chosen.extend(m for m in match if m not in chosen)
    return chosen


def shadow(t: HypergeometricTerm, selection=None) -> HypergeometricTerm:
    """Replace selected ``A!^e`` by ``((-1)^A / (-A-1)!)^e``; toggles already-shadowed factors back.

    >>> str(shadow(parse_term("n!"), [ "n" ]))
    '(-1)^n/sfact(-n - 1)'
    """
    chosen = _resolve_selection(t, selection)
    sign = t.sign
    out = []
    for f in t.factorials:
        if f in chosen:
            arg, e = f.unshadowed_view()
            sign = sign + arg * e
            out.append(FactorialFactor(-f.argument - LinearForm.constant(1), -f.exponent, not f.shadowed))
        else:
            out.append(f)
    return t.replace(sign=sign, factorials=out)


def _coerce_form(x) -> LinearForm:
    if isinstance(x, LinearForm):
        return x
    if isinstance(x, int):
        return LinearForm.constant(x)
    if isinstance(x, str):
        return parse_linear_form(x)
    if isinstance(x, Polynomial):
        return LinearForm.from_polynomial(x)
    raise TypeError(f"cannot use {x!r} as a linear form")


def affine_substitute(t: HypergeometricTerm, mapping: Mapping[str, object]) -> HypergeometricTerm:
    """Simultaneously substitute integer-linear forms for variables."""
    forms = {v: _coerce_form(x) for v, x in mapping.items()}
    polys = {v: f.to_polynomial() for v, f in forms.items()}
    powers = []
    for base, exp in t.powers:
        nb = base.compose(polys)
        powers.append((nb, exp.substitute(forms)))
    out = HypergeometricTerm.make(
        t.constant,
        powers,
        t.sign.substitute(forms),
        t.rational.compose(polys),
        [FactorialFactor(f.argument.substitute(forms), f.exponent, f.shadowed) for f in t.factorials],
    )
    for base, exp in out.powers:
        if base.variables() & exp.variables():
            raise ValueError(f"substitution makes power base {base} depend on its exponent")
    return out


def unmark(t: HypergeometricTerm) -> HypergeometricTerm:
    """Forget which factors came from shadowing (values are unaffected)."""
    return t.replace(factorials=[FactorialFactor(f.argument, f.exponent) for f in t.factorials])


def backward_difference(t: HypergeometricTerm, var: str) -> HypergeometricTerm:
    """``t(var) - t(var-1)`` as a term with a rational multiplier."""
    back = shift_ratio(t, {var: -1})
    return t * (1 - back)


def parse_mapping(text: str) -> dict[str, LinearForm]:
    """Parse ``"n=-n-1,k=-k"`` into a substitution map."""
    out = {}
    for part in text.split(","):
        if not part.strip():
            continue
        if "=" not in part:
            raise ParseError(f"expected var=linear form, got {part!r}", text, None)
        name, value = part.split("=", 1)
        out[name.strip()] = parse_linear_form(value)
    return out

