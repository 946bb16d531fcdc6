"""Command-line entry point: ``hypersum <command> ...``.

Exit codes: 0 success, 1 refuted, 2 malformed input, 3 search bound exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .algebra import Polynomial
from .errors import BoundExhausted
from .gosper import gosper_sum
from .oracle import OracleError, oracle_sum, recurrence_residuals
from .ore import OreOperator, eliminate, parse_operator, right_divide
from .parsing import ParseError, parse_polynomial, parse_rational
from .term import HypergeometricTerm, parse_mapping, parse_term
from .wz import DualError, WZPair, dualize, make_wz_pair, verify_wz
from .zeilberger import (
    DEFAULT_MAX_ORDER,
    RecurrenceOperator,
    TelescopeCertificate,
    creative_telescope,
    verify_certificate,
)

EXIT_OK, EXIT_REFUTED, EXIT_MALFORMED, EXIT_BOUND = 0, 1, 2, 3

VERSION = f"hypersum {__version__}"


class UsageError(ValueError):
    pass


def _range(text: str) -> range:
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return range(int(lo), int(hi) + 1)
        v = int(text)
        return range(v, v + 1)
    except ValueError:
        raise UsageError(f"expected an integer range like 0..25, got {text!r}") from None


def _assignments(text: str | None) -> dict[str, int]:
    out = {}
    if not text:
        return out
    for part in text.split(","):
        if "=" not in part:
            raise UsageError(f"expected name=integer, got {part!r}")
        name, value = part.split("=", 1)
        try:
            out[name.strip()] = int(value)
        except ValueError:
            raise UsageError(f"parameter values must be integers, got {part!r}") from None
    return out


def _emit(doc) -> None:
    sys.stdout.write(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")


def certificate_document(F: HypergeometricTerm, cert: TelescopeCertificate, **extra) -> dict:
    doc = {
        "input": str(F),
        "sumvar": cert.sumvar,
        "recvar": cert.recvar,
        "convention": cert.convention,
        "order": cert.operator.order,
        "coefficients": [str(c) for c in cert.operator.coefficients],
        "certificate": str(cert.certificate),
        "version": VERSION,
        "status": "verified" if verify_certificate(F, cert) else "refuted",
    }
    doc.update(extra)
    return doc


def load_document(doc: dict) -> tuple[HypergeometricTerm, TelescopeCertificate]:
    try:
        F = parse_term(doc["input"])
        coeffs = tuple(parse_polynomial(c) for c in doc["coefficients"])
        R = parse_rational(doc["certificate"])
        sumvar, recvar = doc.get("sumvar", "k"), doc.get("recvar", "n")
        convention = doc.get("convention", "forward")
        if int(doc.get("order", len(coeffs) - 1)) != len(coeffs) - 1:
            raise UsageError("order does not match the number of coefficients")
    except (KeyError, TypeError) as exc:
        raise UsageError(f"malformed certificate document: missing or invalid {exc}") from None
    op = RecurrenceOperator(coeffs, recvar)
    return F, TelescopeCertificate(op, R, sumvar, recvar, convention)


def cmd_gosper(args) -> int:
    t = parse_term(args.term)
    res = gosper_sum(t, args.var)
    if res.summable:
        print(res.antidifference)
    else:
        print("not summable")
    return EXIT_OK


def cmd_zeil(args) -> int:
    F = parse_term(args.term)
    cert = creative_telescope(F, args.max_order, args.sumvar, args.recvar)
    _emit(certificate_document(F, cert, method="creative-telescoping"))
    return EXIT_OK


def cmd_prove(args) -> int:
    if len(args.identity) != 3 or args.identity[1] != "=":
        raise UsageError('usage: prove "<term>" = "<closed form>"')
    F_raw = parse_term(args.identity[0])
    nice = parse_term(args.identity[2])
    pair = make_wz_pair(F_raw, nice, args.sumvar, args.recvar)
    if pair is not None and verify_wz(pair):
        one = Polynomial.one()
        cert = TelescopeCertificate(RecurrenceOperator((-one, one), args.recvar), pair.R, args.sumvar, args.recvar)
        extra = {"method": "wz", "G": str(pair.G)}
        extra.update(_initial_check(pair.F, args))
        _emit(certificate_document(pair.F, cert, **extra))
        return EXIT_OK
    F = F_raw / nice
    cert = creative_telescope(F, args.max_order, args.sumvar, args.recvar)
    S = OreOperator({(i, 0): c for i, c in enumerate(cert.operator.coefficients)}, args.recvar, args.sumvar)
    T, rem = right_divide(S, parse_operator("N - 1", args.recvar, args.sumvar))
    extra = {"method": "creative-telescoping", "left_multiple_of_N_minus_1": rem.is_zero()}
    if rem.is_zero():
        extra["quotient"] = str(T)
    else:
        extra["initial_values_needed"] = cert.operator.order
    extra.update(_initial_check(F, args))
    _emit(certificate_document(F, cert, **extra))
    return EXIT_OK


def _initial_check(F: HypergeometricTerm, args) -> dict:
    if F.variables() - {args.sumvar, args.recvar}:
        return {}
    try:
        (value,) = oracle_sum(F, [0], "auto", {}, args.sumvar, args.recvar)
    except OracleError:
        return {}
    return {"initial_value": str(value)}


def cmd_verify(args) -> int:
    try:
        with open(args.file, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read certificate document: {exc}") from None
    F, cert = load_document(doc)
    ok = verify_certificate(F, cert)
    print("verified" if ok else "refuted")
    return EXIT_OK if ok else EXIT_REFUTED


def cmd_dual(args) -> int:
    try:
        with open(args.file, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read certificate document: {exc}") from None
    F, cert = load_document(doc)
    if [str(c) for c in cert.operator.coefficients] != ["-1", "1"]:
        raise UsageError("dual needs a WZ certificate (operator N - 1)")
    pair = WZPair(F, (F * cert.certificate).simplify(), cert.certificate, cert.sumvar, cert.recvar)
    if args.shadow in ("default", "none"):
        selection = args.shadow
    else:
        selection = [s for s in args.shadow.split(";") if s.strip()]
    reindex = parse_mapping(args.reindex) if args.reindex else None
    try:
        claim = dualize(pair, selection, reindex, tuple(_range(args.window)), _assignments(args.set))
    except DualError as exc:
        _emit({"status": "refuted", "error": str(exc), "version": VERSION})
        return EXIT_REFUTED
    core, rhs = claim.split()
    _emit(
        {
            "summand": str(claim.summand),
            "sumvar": claim.sumvar,
            "freevar": claim.freevar,
            "constant": str(claim.constant),
            "identity": {"summand": str(core), "rhs": str(rhs) if rhs is not None else "0"},
            "window": [claim.window[0], claim.window[-1]],
            "sums": [str(s) for s in claim.sums],
            "version": VERSION,
            "status": "confirmed",
        }
    )
    return EXIT_OK


def _bounds(text: str) -> tuple[int, int, int]:
    try:
        parts = tuple(int(x) for x in text.split(","))
    except ValueError:
        parts = ()
    if len(parts) != 3 or min(parts) < 0:
        raise UsageError(f"bounds must be three non-negative integers dk,dN,dK, got {text!r}")
    return parts


def cmd_eliminate(args) -> int:
    P = parse_operator(args.P)
    Q = parse_operator(args.Q)
    res = eliminate(P, Q, _bounds(args.bounds))
    print(f"S    = {res.S}")
    print(f"A    = {res.A}")
    print(f"B    = {res.B}")
    print(f"Rbar = {res.Rbar}")
    print(f"check: A*P + B*Q = S + (K-1)*Rbar is {'true' if res.check(P, Q) else 'false'}")
    return EXIT_OK


def cmd_oracle(args) -> int:
    F = parse_term(args.term)
    params = _assignments(args.set)
    ns = _range(args.n)
    window = "auto" if args.k == "auto" else _range(args.k)
    try:
        sums = oracle_sum(F, ns, window, params, args.sumvar, args.recvar)
    except OracleError as exc:
        raise UsageError(str(exc)) from None
    residuals = []
    coeffs = None
    if args.cert:
        with open(args.cert, encoding="utf-8") as fh:
            _, cert = load_document(json.load(fh))
        coeffs = cert.operator.coefficients
    elif args.operator:
        op = parse_operator(args.operator, args.recvar, args.sumvar)
        if not op.free_of("K") or not op.free_of(args.sumvar):
            raise UsageError("the recurrence operator may only involve N and n")
        coeffs = [op.coefficient(i).as_polynomial() for i in range(op.degree_N() + 1)]
    if coeffs is not None:
        residuals = [str(r) for r in recurrence_residuals(coeffs, sums, ns.start, params, args.recvar)]
    _emit(
        {
            "n": list(ns),
            "sum": [str(s) for s in sums],
            "residuals": residuals,
            "window": "auto" if window == "auto" else [window.start, window.stop - 1],
            "version": VERSION,
        }
    )
    if residuals and any(Fraction(r) != 0 for r in residuals):
        return EXIT_REFUTED
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hypersum", description="Exact hypergeometric summation and certificates.")
    ap.add_argument("--version", action="version", version=VERSION)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gosper", help="indefinite summation")
    p.add_argument("term")
    p.add_argument("--var", default="k")
    p.set_defaults(func=cmd_gosper)

    p = sub.add_parser("zeil", help="creative telescoping")
    p.add_argument("term")
    p.add_argument("--sumvar", default="k")
    p.add_argument("--recvar", default="n")
    p.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER)
    p.set_defaults(func=cmd_zeil)

    p = sub.add_parser("prove", help='prove "<term>" = "<closed form>"')
    p.add_argument("identity", nargs="+")
    p.add_argument("--sumvar", default="k")
    p.add_argument("--recvar", default="n")
    p.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER)
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("verify", help="re-check a certificate document")
    p.add_argument("file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("dual", help="dual identity from a WZ certificate document")
    p.add_argument("file")
    p.add_argument("--reindex", default=None)
    p.add_argument("--shadow", default="default")
    p.add_argument("--window", default="1..12")
    p.add_argument("--set", default=None)
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("eliminate", help="Ore-operator elimination")
    p.add_argument("--P", required=True)
    p.add_argument("--Q", required=True)
    p.add_argument("--bounds", default="2,1,1")
    p.set_defaults(func=cmd_eliminate)

    p = sub.add_parser("oracle", help="brute-force exact sums")
    p.add_argument("term")
    p.add_argument("--n", default="0..10")
    p.add_argument("--k", default="auto")
    p.add_argument("--set", default=None)
    p.add_argument("--sumvar", default="k")
    p.add_argument("--recvar", default="n")
    p.add_argument("--operator", default=None)
    p.add_argument("--cert", default=None)
    p.set_defaults(func=cmd_oracle)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_MALFORMED if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (ParseError, UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except BoundExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BOUND


if __name__ == "__main__":
    sys.exit(main())
