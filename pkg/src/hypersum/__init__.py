"""Exact hypergeometric summation: Gosper, creative telescoping, WZ pairs and Ore elimination."""

__version__ = "0.1.0"

from .algebra import Polynomial, RationalFunction  # noqa: E402
from .gosper import gosper_sum  # noqa: E402
from .ore import OreOperator, eliminate, parse_operator, right_divide  # noqa: E402
from .term import HypergeometricTerm, parse_term  # noqa: E402
from .wz import dualize, make_wz_pair, verify_wz  # noqa: E402
from .zeilberger import creative_telescope, solve_first_order, verify_certificate  # noqa: E402

__all__ = [
    "Polynomial",
    "RationalFunction",
    "HypergeometricTerm",
    "parse_term",
    "gosper_sum",
    "creative_telescope",
    "verify_certificate",
    "solve_first_order",
    "make_wz_pair",
    "verify_wz",
    "dualize",
    "OreOperator",
    "parse_operator",
    "eliminate",
    "right_divide",
]
