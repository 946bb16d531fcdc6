"""Acceptance criteria: one PASS/FAIL line per criterion, exact arithmetic, wall-clock limits.

Run standalone with ``python tests/test_acceptance.py``; under pytest the
lines are collected into the terminal summary.
"""

import contextlib
import io
import json
import math
import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gen import random_operator, random_term_k, random_term_nk  # noqa: E402
from hypersum.cli import load_document, main  # noqa: E402
from hypersum.gosper import gosper_sum  # noqa: E402
from hypersum.oracle import oracle_check_recurrence, oracle_sum  # noqa: E402
from hypersum.ore import eliminate, parse_operator, right_divide  # noqa: E402
from hypersum.parsing import parse_polynomial  # noqa: E402
from hypersum.term import backward_difference, parse_term, ratio, shadow, shift_ratio  # noqa: E402
from hypersum.wz import dualize, make_wz_pair, verify_wz  # noqa: E402
from hypersum.zeilberger import (  # noqa: E402
    RecurrenceOperator,
    TelescopeCertificate,
    creative_telescope,
    solve_first_order,
    verify_certificate,
)

DIXON = "(-1)^k/((n+k)!*(n-k)!*(b+k)!*(b-k)!*(a+k)!*(a-k)!)"
SAALSCHUTZ = "(a+k-1)!*(b+k-1)!*(c-a-b+n-k-1)!/(k!*(n-k)!*(c+k-1)!)"


def op(*coeffs):
    return RecurrenceOperator(tuple(parse_polynomial(c) for c in coeffs))


def zeil(term):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(["zeil", term])
    if code != 0:
        raise RuntimeError(f"zeil exited with {code}")
    doc = json.loads(buf.getvalue())
    return doc, *load_document(doc)


class Clock:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def criterion_1():
    with Clock() as c:
        doc, F, cert = zeil("binomial(n,k)*binomial(b,k)")
        proportional = cert.operator.is_proportional(op("-(n+b+1)", "n+1"))
        closed = solve_first_order(cert.operator, 1)
        closed_ok = closed == parse_term("(n+b)!/(n!*b!)")
        verified = verify_certificate(F, cert)
    ok = proportional and closed_ok and verified and c.elapsed < 2
    return ok, f"operator {cert.operator}; a(n) = {closed}; verified={verified}; {c.elapsed:.2f}s (< 2s)"


def criterion_2():
    with Clock() as c:
        doc, F, cert = zeil(DIXON)
        proportional = cert.operator.is_proportional(op("-(n+a+b+1)", "(n+1)*(n+a+1)*(n+b+1)"))
        G = parse_term("(-1)^(k-1)/((n+k)!*(n+1-k)!*(b+k-1)!*(b-k)!*(a+k-1)!*(a-k)!)")
        S = op("-2*(n+a+b+1)", "2*(n+1)*(n+a+1)*(n+b+1)")
        explicit = verify_certificate(F, TelescopeCertificate(S, (G / F).as_rational()))
    ok = proportional and explicit and c.elapsed < 10
    return ok, f"operator {cert.operator}; explicit G verifies={explicit}; {c.elapsed:.2f}s (< 10s)"


def criterion_3():
    with Clock() as c:
        doc, F, cert = zeil("1/(k!*(n-k)!)")
        coeffs = doc["coefficients"]
        # [2, -(n+1)] up to a joint nonzero factor
        exact = cert.operator.is_proportional(op("2", "-(n+1)")) and coeffs in (["2", "-n - 1"], ["-2", "n + 1"])
        closed = solve_first_order(cert.operator, 1)
        closed_ok = closed.equals(parse_term("2^n/n!"))
    ok = exact and closed_ok and c.elapsed < 1
    return ok, f"coefficients {coeffs}; a(n) = {closed}; {c.elapsed:.2f}s (< 1s)"


GOSPER_CASES = [
    ("(n-1)*(n-1)!", "n", "n!"),
    ("n!", "n", None),
    ("(2m)!/(m!*(m+1)!)", "m", None),
    ("1/k", "k", None),
    ("binomial(A,k)", "k", None),
    ("1/(n!*(n^4+n^2+1))", "n", "summable"),
]


def criterion_4():
    ok, notes = True, []
    for text, var, want in GOSPER_CASES:
        with Clock() as c:
            res = gosper_sum(parse_term(text), var)
        if want is None:
            good = not res.summable
        elif want == "summable":
            good = res.summable
        else:
            good = res.summable and res.antidifference.equals(parse_term(want))
        good = good and c.elapsed < 1
        ok = ok and good
        got = str(res.antidifference) if res.summable else "not-summable"
        expect = "not-summable" if want is None else want
        notes.append(f"{text}: {got}" + ("" if good else f" (expected {expect})"))
    return ok, "; ".join(notes)


def criterion_5():
    with Clock() as c:
        pair = make_wz_pair(parse_term("binomial(n,k)"), parse_term("2^n"))
        g_ok = pair is not None and pair.G.equals(parse_term("-binomial(n,k-1)/2^(n+1)"))
        valid = pair is not None and verify_wz(pair)
    ok = g_ok and valid and c.elapsed < 1
    return ok, f"G = {pair.G if pair else None}; verify_wz={valid}; {c.elapsed:.2f}s (< 1s)"


def criterion_6():
    with Clock() as c:
        pair = make_wz_pair(parse_term("binomial(n,k)"), parse_term("2^n"))
        claim = dualize(pair, None, {"n": "-n-1", "k": "-k"}, tuple(range(1, 13)))
        core, rhs = claim.split()
        first = core.equals(parse_term("(-2)^n*binomial(k,n)")) and rhs.equals(parse_term("(-1)^k"))
        first = first and all(
            sum((-2) ** n * math.comb(k, n) for n in range(k + 1)) == (-1) ** k for k in range(1, 13)
        )
        sq = make_wz_pair(parse_term("binomial(n,k)^2"), parse_term("binomial(2n,n)"))
        special = dualize(sq, None, {"n": "-k-1", "k": "-n"}, tuple(range(0, 21)))
        target = parse_term("(3k-2n)*binomial(n,k)^2*binomial(2k,k)")
        proportional = (special.summand / target).as_rational()
        second = proportional is not None and proportional.is_constant() and special.constant == 0
        second = second and oracle_sum(target, range(21)) == [0] * 21
    ok = first and second and c.elapsed < 5
    return ok, f"{claim}; specialized dual constant {special.constant} over n=0..20; {c.elapsed:.2f}s (< 5s)"


def criterion_7():
    with Clock() as c:
        P = parse_operator("(n-k+1)*N - (n+1)")
        Q = parse_operator("(k+1)*K - (n-k)")
        pascal = eliminate(P, Q)
        first = pascal.S == parse_operator("(n+1)*(N-2)") and pascal.check(P, Q)
        Qv = parse_operator("(k+1)^2*K - (n-k)*(b-k)")
        vdm = eliminate(P, Qv)
        second = (
            vdm.S == parse_operator("(n+1)*((n+1)*N - (n+b+1))")
            and vdm.Rbar == parse_operator("N*k^2")
            and vdm.check(P, Qv)
        )
    ok = first and second and c.elapsed < 10
    return ok, f"Pascal S = {pascal.S}; Vandermonde S = {vdm.S}, Rbar = {vdm.Rbar}; {c.elapsed:.2f}s (< 10s)"


def criterion_8():
    with Clock() as c:
        A = parse_operator("N^2+N+1")
        B = parse_operator("N^2-N-1")
        prod = A * B
        T, rem = right_divide(prod, B)
    ok = prod == parse_operator("N^4 - N^2 - 2*N - 1") and T == A and rem.is_zero() and c.elapsed < 0.1
    return ok, f"product {prod}; quotient {T}, remainder {rem}; {c.elapsed * 1000:.1f}ms (< 100ms)"


def _fib(m):
    a, b = 0, 1
    for _ in range(m):
        a, b = b, a + b
    return a


def criterion_9():
    notes = []
    with Clock() as c:
        F = parse_term("binomial(n-k,k)")
        cert = creative_telescope(F)
        vals = oracle_sum(F, range(31))
        fib = cert.operator.is_proportional(op("-1", "-1", "1")) and oracle_check_recurrence(cert.operator, vals)
        fib = fib and vals == [_fib(m + 1) for m in range(31)]
        notes.append(f"Fibonacci {cert.operator}")

        F = parse_term("binomial(n,k)*binomial(n+k,k)")
        cert = creative_telescope(F)
        vals = oracle_sum(F, range(26))
        direct = [sum(math.comb(m, k) * math.comb(m + k, k) for k in range(m + 1)) for m in range(26)]
        dela = cert.operator.order == 2 and vals[:4] == [1, 3, 13, 63] and vals == direct
        dela = dela and oracle_check_recurrence(cert.operator, vals)
        notes.append(f"Delannoy {cert.operator}")

        F = parse_term(SAALSCHUTZ)
        cert = creative_telescope(F)
        saal = cert.operator.order == 1
        checked = 0
        for a in (2, 3, 4):
            for b in (2, 3, 4):
                # c >= a+b+1 keeps (c-a-b+n-k-1)! off negative arguments inside the support
                for cc in (a + b + 1, a + b + 2):
                    params = {"a": a, "b": b, "c": cc}
                    vals = oracle_sum(F, range(12), "auto", params)
                    saal = saal and oracle_check_recurrence(cert.operator, vals, 0, params)
                    checked += 1
        notes.append(f"Pfaff-Saalschutz order {cert.operator.order} at {checked} instances")
    ok = fib and dela and saal and c.elapsed < 20
    return ok, "; ".join(notes) + f"; {c.elapsed:.2f}s (< 20s)"


def _round_trip(rng):
    T = random_term_k(rng)
    t = backward_difference(T, "k")
    res = gosper_sum(t, "k")
    if not res.summable:
        return False
    m = (res.antidifference / t).as_rational()
    return m - m.shift("k", -1) * shift_ratio(t, {"k": -1}) == 1


def _shadow_invariant(rng):
    t = random_term_nk(rng)
    s = shadow(t)
    return all(ratio(s, v) == ratio(t, v) for v in ("n", "k"))


def _operators(rng):
    A, B, C = (random_operator(rng) for _ in range(3))
    S = random_operator(rng, ("N",), ("n",), 3)
    S1 = random_operator(rng, ("N",), ("n",), 2)
    T, rem = right_divide(S, S1)
    return (A * B) * C == A * (B * C) and T * S1 + rem == S and rem.degree_N() < S1.degree_N()


def criterion_10():
    rng = random.Random(20240601)
    with Clock() as c:
        gos = sum(_round_trip(rng) for _ in range(200))
        sha = sum(_shadow_invariant(rng) for _ in range(100))
        ops = sum(_operators(rng) for _ in range(100))
    ok = gos == 200 and sha == 100 and ops == 100 and c.elapsed < 120
    return ok, f"gosper round trip {gos}/200, shadow invariance {sha}/100, operators {ops}/100; {c.elapsed:.1f}s (< 120s)"


CRITERIA = [
    (1, "Vandermonde-Chu recurrence and closed form", criterion_1),
    (2, "Dixon recurrence and explicit certificate", criterion_2),
    (3, "fast-algorithm worked example", criterion_3),
    (4, "Gosper decisions", criterion_4),
    (5, "WZ pair for the binomial row sum", criterion_5),
    (6, "dual identities", criterion_6),
    (7, "elimination", criterion_7),
    (8, "operator algebra", criterion_8),
    (9, "homework recurrences", criterion_9),
    (10, "property suites", criterion_10),
]


def _line(number, title, ok, detail):
    return f"{'PASS' if ok else 'FAIL'} criterion {number} ({title}): {detail}"


@pytest.mark.parametrize("number,title,check", CRITERIA, ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_criterion(number, title, check):
    from conftest import ACCEPTANCE_LINES

    ok, detail = check()
    line = _line(number, title, ok, detail)
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


if __name__ == "__main__":
    failures = 0
    for number, title, check in CRITERIA:
        ok, detail = check()
        failures += not ok
        print(_line(number, title, ok, detail), flush=True)
    sys.exit(1 if failures else 0)
