"""Brute-force exact summation, independent of the symbolic machinery."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .term import UNDEFINED, HypergeometricTerm, evaluate

__all__ = ["OracleError", "auto_window", "oracle_sum", "oracle_check_recurrence", "recurrence_residuals"]

AUTO_MARGIN = 50


class OracleError(ValueError):
    def __init__(self, message: str, point: Mapping[str, int] | None = None):
        super().__init__(message)
        self.point = dict(point) if point else None


def auto_window(free_value: int, params: Mapping[str, int]) -> range:
    m = max((abs(int(v)) for v in params.values()), default=0)
    half = abs(free_value) + m + AUTO_MARGIN
    return range(-half, half + 1)


def oracle_sum(
    F: HypergeometricTerm,
    n_values: Iterable[int],
    k_window: str | Sequence[int] | range = "auto",
    params: Mapping[str, int] | None = None,
    sumvar: str = "k",
    recvar: str = "n",
) -> list[Fraction]:
    """Exact ``sum_k F(n,k)`` for each ``n`` by direct evaluation.

    >>> from hypersum.term import parse_term
    >>> oracle_sum(parse_term("binomial(n,k)"), [5])
    [Fraction(32, 1)]
    """
    params = dict(params or {})
    missing = F.variables() - {sumvar, recvar} - set(params)
    if missing:
        raise OracleError(f"parameters {sorted(missing)} need integer values")
    sums = []
    for nv in n_values:
        window = auto_window(nv, params) if k_window == "auto" else k_window
        point = dict(params)
        point[recvar] = nv
        total = Fraction(0)
        for kv in window:
            point[sumvar] = kv
            value = evaluate(F, point)
            if value is UNDEFINED:
                raise OracleError(f"summand undefined at {_fmt_point(point)}", point)
            total += value
        sums.append(total)
    return sums


def _fmt_point(point: Mapping[str, int]) -> str:
    return ", ".join(f"{k}={v}" for k, v in point.items())


def recurrence_residuals(
    coefficients: Sequence, values: Sequence[Fraction], n0: int = 0, params: Mapping[str, int] | None = None, recvar: str = "n"
) -> list[Fraction]:
    order = len(coefficients) - 1
    point = dict(params or {})
    out = []
    for idx in range(len(values) - order):
        point[recvar] = n0 + idx
        total = Fraction(0)
        for i, c in enumerate(coefficients):
            total += Fraction(c.evaluate(point)) * values[idx + i]
        out.append(total)
    return out


def oracle_check_recurrence(op, values: Sequence[Fraction], n0: int = 0, params: Mapping[str, int] | None = None) -> bool:
    """True when every residual ``sum_i s_i(n) a(n+i)`` vanishes exactly."""
    if len(values) <= op.order:
        raise ValueError("need more values than the recurrence order")
    return all(r == 0 for r in recurrence_residuals(op.coefficients, values, n0, params, op.recvar))
