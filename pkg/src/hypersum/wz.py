"""WZ pairs: construction, verification, shadows and dual identities."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .algebra import Polynomial, RationalFunction, factor_list
from .gosper import gosper_sum
from .oracle import OracleError, oracle_sum
from .term import (
    UNDEFINED,
    HypergeometricTerm,
    LinearForm,
    affine_substitute,
    evaluate,
    shadow,
    shift_ratio,
    unmark,
)

__all__ = ["WZPair", "DualClaim", "DualError", "make_wz_pair", "verify_wz", "shadow_pair", "dualize"]


@dataclass(frozen=True)
class WZPair:
    F: HypergeometricTerm
    G: HypergeometricTerm
    R: RationalFunction
    sumvar: str = "k"
    recvar: str = "n"


def make_wz_pair(
    F_raw: HypergeometricTerm, nice: HypergeometricTerm, sumvar: str = "k", recvar: str = "n"
) -> WZPair | None:
    """Certify ``sum_k F_raw(n,k) = nice(n)`` by a WZ pair, or return ``None``.

    >>> from hypersum.term import parse_term
    >>> str(make_wz_pair(parse_term("binomial(n,k)"), parse_term("2^n")).R)
    '-k/(2*n - 2*k + 2)'
    """
    if sumvar in nice.variables():
        raise ValueError(f"the closed form may not depend on {sumvar}")
    F = F_raw / nice
    rho_n = shift_ratio(F, {recvar: 1})
    if rho_n == 1:
        return None
    result = gosper_sum(F * (rho_n - 1), sumvar)
    if not result.summable:
        return None
    # backward T = M * (rho_n - 1) * F; forward G(k) = T(k-1)
    M = result.multiplier
    step = M * (rho_n - 1)
    R = step.shift(sumvar, -1) / shift_ratio(F, {sumvar: 1}).shift(sumvar, -1)
    G = (F * R).simplify()
    return WZPair(F, G, R, sumvar, recvar)


def _symbolic_wz(pair: WZPair) -> bool:
    k, n = pair.sumvar, pair.recvar
    q = (pair.G / pair.F).as_rational()
    if q is None or q != pair.R:
        return False
    lhs = shift_ratio(pair.F, {n: 1}) - 1
    rhs = pair.R.shift(k, 1) * shift_ratio(pair.F, {k: 1}) - pair.R
    return lhs == rhs


def verify_wz(
    pair: WZPair, spot_checks: int = 50, seed: int = 0, params: Mapping[str, int] | None = None
) -> bool:
    """Exact check of ``F(n+1,k) - F(n,k) = G(n,k+1) - G(n,k)`` plus integer spot checks."""
    if not _symbolic_wz(pair):
        return False
    rng = random.Random(seed)
    free = sorted((pair.F.variables() | pair.G.variables()) - {pair.sumvar, pair.recvar})
    n, k = pair.recvar, pair.sumvar
    for _ in range(spot_checks):
        point = {v: (params or {}).get(v, rng.randint(0, 6)) for v in free}
        point[n] = rng.randint(-8, 8)
        point[k] = rng.randint(-8, 8)
        vals = []
        for term, dn, dk in ((pair.F, 1, 0), (pair.F, 0, 0), (pair.G, 0, 1), (pair.G, 0, 0)):
            p = dict(point)
            p[n] += dn
            p[k] += dk
            try:
                vals.append(evaluate(term, p))
            except (ZeroDivisionError, ValueError):
                vals.append(UNDEFINED)
        if any(v is UNDEFINED for v in vals):
            continue
        if vals[0] - vals[1] != vals[2] - vals[3]:
            return False
    return True


def shadow_pair(pair: WZPair, selection=None) -> WZPair:
    """Shadow both members; shift ratios, hence the certificate, are unchanged."""
    F = shadow(pair.F, selection)
    G = shadow(pair.G, selection) if selection in (None, "default", "none") else shadow(pair.G, _matching(pair, selection))
    return WZPair(F, G, pair.R, pair.sumvar, pair.recvar)


def _matching(pair: WZPair, selection):
    # explicit selections name factors of F; pick the G factors with the same linear part
    from .term import _resolve_selection

    chosen = _resolve_selection(pair.F, selection)
    parts = {f.argument.linear_part() for f in chosen}
    return [f for f in pair.G.factorials if f.argument.linear_part() in parts]


class DualError(ValueError):
    def __init__(self, message: str, counterexample=None):
        super().__init__(message)
        self.counterexample = counterexample


@dataclass(frozen=True)
class DualClaim:
    """``sum_{sumvar} summand = constant`` for every value of ``freevar`` in the window."""

    summand: HypergeometricTerm
    sumvar: str
    freevar: str
    constant: Fraction
    window: tuple[int, ...]
    sums: tuple[Fraction, ...] = field(default=())

    def split(self) -> tuple[HypergeometricTerm, HypergeometricTerm]:
        """Move powers, signs and polynomial factors free of ``sumvar`` to the right-hand side."""
        core, outside = _separate(self.summand, self.sumvar)
        if self.constant == 0:
            return core, None
        return core, HypergeometricTerm.make(self.constant) / outside

    def __str__(self):
        core, rhs = self.split()
        return f"sum_{self.sumvar} {core} = {rhs if rhs is not None else 0}"


def _separate(t: HypergeometricTerm, var: str) -> tuple[HypergeometricTerm, HypergeometricTerm]:
    """Split ``t = core * outside`` where ``outside`` does not involve ``var``."""
    sign_in = LinearForm.make({var: t.sign.coeff(var)}, 0)
    sign_out = t.sign - sign_in
    pw_in, pw_out = [], []
    for base, exp in t.powers:
        e_in = LinearForm.make({var: exp.coeff(var)}, 0)
        if not e_in.is_zero():
            pw_in.append((base, e_in))
        if not (exp - e_in).is_zero():
            pw_out.append((base, exp - e_in))
    # factorials stay in the summand so binomials remain recognizable
    r_in, r_out = _split_rational(t.rational, var)
    core = HypergeometricTerm.make(1, pw_in, sign_in, r_in, t.factorials)
    outside = HypergeometricTerm.make(t.constant, pw_out, sign_out, r_out)
    c = core.constant
    return core / c, outside * c


def _split_rational(r: RationalFunction, var: str) -> tuple[RationalFunction, RationalFunction]:
    def part(p: Polynomial):
        c, factors = factor_list(p)
        inside, outside = Polynomial.one(), Polynomial.const(c)
        for f, m in factors:
            if var in f.variables():
                inside = inside * f**m
            else:
                outside = outside * f**m
        return inside, outside

    ni, no = part(r.num)
    di, do = part(r.den)
    return RationalFunction(ni, di), RationalFunction(no, do)


def _dual_variables(reindex: Mapping[str, LinearForm], sumvar: str, recvar: str) -> tuple[str, str]:
    """After the reindex, the old free variable's image fixes the new free variable."""
    image = reindex.get(sumvar, LinearForm.symbol(sumvar))
    involved = [v for v in (recvar, sumvar) if image.coeff(v)]
    if len(involved) != 1:
        raise ValueError(f"reindex must send {sumvar} to a form in a single variable, got {image}")
    free = involved[0]
    other = sumvar if free == recvar else recvar
    return other, free


def dualize(
    pair: WZPair,
    shadow_selection=None,
    reindex: Mapping[str, object] | None = None,
    window: Sequence[int] = tuple(range(1, 13)),
    params: Mapping[str, int] | None = None,
) -> DualClaim:
    """Shadow ``G``, reindex, and oracle-check that ``sum_n G`` is constant over ``window``.

    With ``shadow_selection="none"`` and no reindex the claim simply restates
    ``sum_n G(n,k) = C``.
    """
    from .term import _coerce_form

    G = shadow(pair.G, shadow_selection)
    forms = {v: _coerce_form(x) for v, x in (reindex or {}).items()}
    if forms:
        G = affine_substitute(G, forms)
    G = unmark(G)
    sumvar, freevar = _dual_variables(forms, pair.sumvar, pair.recvar)
    params = dict(params or {})
    try:
        sums = oracle_sum(G, window, "auto", params, sumvar=sumvar, recvar=freevar)
    except OracleError as exc:
        raise DualError(f"dual sum is ill-posed: {exc}", exc.point) from None
    _check_support(G, window, params, sumvar, freevar)
    constant = sums[0]
    for w, s in zip(window, sums):
        if s != constant:
            raise DualError(
                f"dual sum is not constant: {freevar}={window[0]} gives {constant}, {freevar}={w} gives {s}",
                {freevar: w, "sum": s},
            )
    return DualClaim(G, sumvar, freevar, constant, tuple(window), tuple(sums))


def _check_support(G, window, params, sumvar, freevar):
    from .oracle import auto_window

    for w in window:
        span = auto_window(w, params)
        for edge in (span[0], span[-1]):
            point = dict(params)
            point[freevar] = w
            point[sumvar] = edge
            v = evaluate(G, point)
            if v is not UNDEFINED and v != 0:
                raise DualError(
                    f"dual summand is not compactly supported: nonzero at {sumvar}={edge} for {freevar}={w}",
                    point,
                )

