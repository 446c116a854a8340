"""Acceptance suite: one test per criterion, one verdict line each.

Every test prints exactly one line

    criterion N: PASS - <summary>   (or FAIL - <first failures>)

and then asserts. Reference values are frozen here on purpose: they were
derived independently (by hand or with the oracles in the unit tests)
and the suite exists to notice if the package ever stops reproducing
them bit for bit.
"""

import itertools
import json
import random
import time
from fractions import Fraction as F
from math import factorial

from expocert import cli
from expocert.arith import enclose_exp_neg
from expocert.expr import parse_expression, parse_inequality, to_const, to_exp_rational
from expocert.mep import Mep
from expocert.poly import Polynomial, count_roots_open, is_positive_on
from expocert.prover import (
    assignment_for_orders,
    bounding_units,
    lower_bound_poly,
    prove_positive,
    upper_bound_poly,
    verify_certificate,
)
from expocert.stratify import (
    AffineFamily,
    ParamExpFamily,
    analyze_affine_family,
    cascade_check,
    grid_check,
)
from expocert.taylor import gap_enclosure, maclaurin, odd_root

UNIT = (F(0), F(1))

# g(x) = 2 - 6e^-x - x^3 e^-x + 6e^-2x - x^3 e^-2x - 2e^-3x
G_TERMS = [(2, 0, 0), (-6, 0, 1), (-1, 3, 1), (6, 0, 2), (-1, 3, 2), (-2, 0, 3)]

# frozen reference coefficients for the three bound polynomials
G1_REF = Polynomial(
    [F(8), F(-12), F(12), F(-8), F(4), F(-8, 5), F(8, 15), F(-16, 105),
     F(4, 105), F(-8, 945)]
)
G2_REF_COEFFS = {
    0: F(8), 1: F(-12), 2: F(12), 3: F(-8), 4: F(4), 5: F(-8, 5),
    6: F(8, 15), 7: F(-9, 56), 8: F(17, 336), 9: F(-551, 30240),
    10: F(1051, 151200), 11: F(-3329, 1330560), 12: F(287, 356400),
    13: F(41, 145152), 14: F(-683, 13305600), 15: F(4097, 479001600),
}
G_REF_COEFFS = {
    7: F(1, 120), 8: F(-1, 80), 9: F(59, 6048), 10: F(-1051, 151200),
    11: F(3329, 1330560), 12: F(-287, 356400), 13: F(-41, 145152),
    14: F(683, 13305600), 15: F(-4097, 479001600),
}
G_AT_HALF = F(463573639, 15695924428800)

FAMILY_TEXT = "1/x^2 - exp(-x)/(1 - exp(-x))^2"
END_B_TEXT = "(e^2 - 3*e + 1)/(e - 1)^2"

INEQ_13 = "sign(a)*exp(a*x) <= sign(a)*(a*x*(1 - x) + x^2*(exp(a) - 1) + 1)"
INEQ_15 = "sign(a)*exp(a*x) >= sign(a)*(a*x*(1 - x) + x^2*(exp(a) - 1) + 1)"

# phi_alpha(x) = exp(-alpha*x) + alpha*x*(1 - x) - x^2*(exp(-alpha) - 1) - 1
PHI = ParamExpFamily(
    [(1, 0, 0, 1, 0), (1, 1, 1, 0, 0), (-1, 2, 1, 0, 0),
     (-1, 2, 0, 0, 1), (1, 2, 0, 0, 0), (-1, 0, 0, 0, 0)]
)


def _verdict(n: int, failures: list, summary: str) -> None:
    status = "PASS" if not failures else "FAIL"
    detail = summary if not failures else "; ".join(failures)
    print(f"criterion {n}: {status} - {detail}")
    assert not failures, detail


def test_criterion_1_bound_reconstruction():
    failures = []
    check = lambda ok, msg: None if ok else failures.append(msg)  # noqa: E731
    t0 = time.perf_counter()

    g = Mep(G_TERMS)
    units, _ = bounding_units(g, UNIT)
    big_g = lower_bound_poly(g, UNIT, assignment_for_orders(units, [12, 12, 9, 12, 12]))

    plus = Mep([(2, 0, 0), (6, 0, 2)])
    plus_units, _ = bounding_units(plus, UNIT)
    g1 = lower_bound_poly(plus, UNIT, assignment_for_orders(plus_units, [9]))

    minus = Mep([(6, 0, 1), (1, 3, 1), (1, 3, 2), (2, 0, 3)])
    neg_units, _ = bounding_units(-minus, UNIT)
    g2 = upper_bound_poly(minus, UNIT, assignment_for_orders(neg_units, [12] * 4))

    check(g1 == G1_REF, "G1 coefficients differ")
    for k in range(16):
        check(
            g2.coefficient(k) == G2_REF_COEFFS.get(k, F(0)),
            f"G2 coefficient at x^{k} differs",
        )
        check(
            big_g.coefficient(k) == G_REF_COEFFS.get(k, F(0)),
            f"G coefficient at x^{k} differs",
        )
    check(big_g.degree == 15, f"G degree {big_g.degree}, expected 15")
    check(big_g == g1 - g2, "G != G1 - G2")
    check(big_g.eval(F(1, 2)) == G_AT_HALF, "G(1/2) differs")

    elapsed = time.perf_counter() - t0
    check(elapsed < 1.0, f"runtime {elapsed:.2f}s exceeds 1s")
    _verdict(1, failures, (
        f"G1, G2, and all 16 G coefficients bit-exact, "
        f"G(1/2) = {G_AT_HALF}, {elapsed:.2f}s"
    ))


def test_criterion_2_automated_proof():
    failures = []
    check = lambda ok, msg: None if ok else failures.append(msg)  # noqa: E731
    t0 = time.perf_counter()

    cert = prove_positive(Mep(G_TERMS), UNIT, max_l=20)
    roots = cert.v_a - cert.v_b - cert.endpoint_adjust
    check(roots == 0, f"Sturm reports {roots} interior roots")
    check(verify_certificate(cert), "certificate does not verify")

    elapsed = time.perf_counter() - t0
    check(elapsed < 10.0, f"runtime {elapsed:.2f}s exceeds 10s")
    _verdict(2, failures, (
        f"proved g > 0 on (0,1) at l = {cert.assignment[0].l}, "
        f"P degree {cert.poly.degree}, 0 interior roots, verified, {elapsed:.2f}s"
    ))


def test_criterion_3_degree_12_is_minimal():
    failures = []
    check = lambda ok, msg: None if ok else failures.append(msg)  # noqa: E731
    t0 = time.perf_counter()

    g = Mep(G_TERMS)
    units, passthrough = bounding_units(g, UNIT)
    # order 11 on the positive addend 6e^-2x; 8, 6, 8, 12 on the negative
    # addends 6e^-x, x^3 e^-x, x^3 e^-2x, 2e^-3x
    named = lower_bound_poly(g, UNIT, assignment_for_orders(units, [8, 6, 11, 8, 12]))
    check(named.degree == 12, f"named assignment gives degree {named.degree}")
    check(
        count_roots_open(named, F(0), F(1)) == 0 and named.eval(F(1, 2)) > 0,
        "named assignment is not a valid certificate",
    )

    # exhaustive sweep of the 6^5 parity-legal vectors with orders <= 12
    per_unit = []
    for u in units:
        orders = (1, 3, 5, 7, 9, 11) if u.sign > 0 else (2, 4, 6, 8, 10, 12)
        per_unit.append([(th, u.poly * maclaurin(th, u.q).poly) for th in orders])
    samples = [F(1, 10), F(1, 2), F(3, 4), F(9, 10), F(99, 100)]
    scanned = 0
    low_degree_valid = []
    for combo in itertools.product(*per_unit):
        scanned += 1
        total = passthrough
        for _, prod in combo:
            total = total + prod
        if total.is_zero or total.degree >= 12:
            continue
        if any(total.eval(x) <= 0 for x in samples):
            continue
        if is_positive_on(total, F(0), F(1)):
            low_degree_valid.append([th for th, _ in combo])
    check(scanned == 6**5, f"scanned {scanned} vectors, expected {6**5}")
    check(
        not low_degree_valid,
        f"valid certificates below degree 12 exist: {low_degree_valid[:3]}",
    )

    elapsed = time.perf_counter() - t0
    check(elapsed < 120.0, f"runtime {elapsed:.1f}s exceeds 2min")
    _verdict(3, failures, (
        f"orders (11; 8, 6, 12, 8) give a valid degree-12 P; none of the "
        f"{scanned} parity-legal vectors with orders <= 12 is valid below "
        f"degree 12, {elapsed:.1f}s"
    ))


def test_criterion_4_best_constants():
    failures = []
    check = lambda ok, msg: None if ok else failures.append(msg)  # noqa: E731

    quotient, stretch = to_exp_rational(parse_expression(FAMILY_TEXT))
    assert stretch == 1
    fam = AffineFamily(
        f=quotient,
        interval=UNIT,
        endpoint_a_value=to_const(parse_expression("1/12")),
        endpoint_b_value=to_const(parse_expression(END_B_TEXT)),
    )
    rep = analyze_affine_family(fam)

    def within(cv, target, tol, name):
        check(
            target - tol < cv.enclosure.lo and cv.enclosure.hi < target + tol,
            f"{name} enclosure [{cv.enclosure.lo}, {cv.enclosure.hi}] "
            f"misses {target} +- {tol}",
        )

    check(rep.monotone == "decreasing", f"monotone = {rep.monotone}")
    check((rep.B.expr - F(1, 12)).is_zero(), "B != 1/12 exactly")
    within(rep.A, F(79326, 10**6), F(1, 10**5), "A")
    within(rep.p0, F(81329, 10**6), F(1, 10**5), "p0")
    within(rep.d0, F(20034, 10**7), F(1, 10**6), "d0")
    check(
        ((rep.p0.expr - rep.A.expr) - (rep.B.expr - rep.p0.expr)).is_zero(),
        "p0 - A != B - p0 symbolically",
    )
    check(verify_certificate(rep.derivative_certificate), "derivative certificate")
    _verdict(4, failures, (
        "A ~ 0.079326 (tol 1e-5), B = 1/12 exact, p0 ~ 0.081329 (tol 1e-5), "
        "d0 ~ 0.0020034 (tol 1e-6), equioscillation exact"
    ))


def test_criterion_5_order_structure():
    failures = []
    check = lambda ok, msg: None if ok else failures.append(msg)  # noqa: E731
    rng = random.Random(52025)

    lower_polys = [maclaurin(2 * m - 1).poly for m in range(1, 11)]
    upper_polys = [maclaurin(2 * m).poly for m in range(1, 11)]
    for _ in range(100):
        x = F(rng.randint(1, 999), 1000)
        lows = [p.eval(x) for p in lower_polys]
        highs = [p.eval(x) for p in upper_polys]
        box = enclose_exp_neg(x, F(1, 10**20), m_force=12)
        ok = (
            all(a < b for a, b in zip(lows, lows[1:]))
            and all(a > b for a, b in zip(highs, highs[1:]))
            and lows[-1] < box.lo
            and box.hi < highs[-1]
        )
        if not ok:
            failures.append(f"interleaving chain broken at x = {x}")
            break

    for n in range(0, 21):
        diff = maclaurin(n + 2).poly - maclaurin(n).poly
        if diff.eval(F(n + 2)) != 0:
            failures.append(f"T_{n} and T_{n + 2} do not meet at x = {n + 2}")
        elif count_roots_open(diff, F(0), F(n + 2)) != 0:
            failures.append(f"T_{n + 2} - T_{n} has a root inside (0, {n + 2})")

    records = [odd_root(m, F(1, 10**6)) for m in range(1, 9)]
    check(
        records[0].enclosure.lo == records[0].enclosure.hi == 1,
        "c_1 != 1 exactly",
    )
    for prev, nxt in zip(records, records[1:]):
        check(
            prev.enclosure.hi < nxt.enclosure.lo,
            f"roots c_{prev.m}, c_{nxt.m} not strictly increasing",
        )
    _verdict(5, failures, (
        "interleaving chain m <= 10 at 100 random rationals; "
        "T_n(n+2) = T_(n+2)(n+2) with no interior root for n <= 20; "
        "odd roots strictly increasing from c_1 = 1"
    ))


def test_criterion_6_bracket_and_gap():
    failures = []
    check = lambda ok, msg: None if ok else failures.append(msg)  # noqa: E731
    rng = random.Random(62025)

    pairs = [(maclaurin(2 * m - 1).poly, maclaurin(2 * m).poly) for m in range(1, 16)]
    for m, (lo_p, hi_p) in enumerate(pairs, start=1):
        gap = hi_p - lo_p
        if gap != Polynomial.monomial(F(1, factorial(2 * m)), 2 * m):
            failures.append(f"bracket width at m = {m} is not x^(2m)/(2m)!")

    xs = [F(rng.randint(1, 9999), 1000) for _ in range(100)]
    for x in xs:
        box = enclose_exp_neg(x, F(1, 10**25), m_force=18)
        for m, (lo_p, hi_p) in enumerate(pairs, start=1):
            lo_v, hi_v = lo_p.eval(x), hi_p.eval(x)
            if not (lo_v < box.lo and box.hi < hi_v):
                failures.append(f"bracket broken at m = {m}, x = {x}")
                break
            if hi_v - lo_v != x ** (2 * m) / factorial(2 * m):
                failures.append(f"gap value wrong at m = {m}, x = {x}")
                break
        if failures:
            break

    def definite_gap_sign(n, x):
        eps = F(1, 10**12)
        while eps > F(1, 10**200):
            s = gap_enclosure(n, x, eps).definite_sign()
            if s != 0:
                return s
            eps /= 10**24
        return 0

    for x in xs[:10]:
        for m in range(1, 16):
            if definite_gap_sign(2 * m - 1, x) != -1:
                failures.append(f"T_{2 * m - 1}({x}) - exp(-{x}) not negative")
            if definite_gap_sign(2 * m, x) != 1:
                failures.append(f"T_{2 * m}({x}) - exp(-{x}) not positive")
        if failures:
            break
    _verdict(6, failures, (
        "T_(2m-1)(x) < exp(-x) < T_(2m)(x) for m <= 15 at 100 random "
        "x in (0,10); bracket width x^(2m)/(2m)! exact; gap enclosures "
        "sign-definite"
    ))


def test_criterion_7_sturm_oracle():
    failures = []
    rng = random.Random(72025)

    def build(roots_with_mult, lead):
        poly = Polynomial.constant(lead)
        for r, mult in roots_with_mult:
            factor = Polynomial([-r, F(1)])
            for _ in range(mult):
                poly = poly * factor
        return poly

    def run_case(mult_hi):
        n_roots = rng.randint(1, 5)
        roots = set()
        while len(roots) < n_roots:
            roots.add(F(rng.randint(-40, 40), rng.randint(1, 8)))
        lead = rng.choice([F(-3), F(-1), F(1), F(2)])
        with_mult = [(r, rng.randint(1, mult_hi)) for r in sorted(roots)]
        poly = build(with_mult, lead)
        a = F(rng.randint(-50, 49), rng.randint(1, 4))
        b = a + F(rng.randint(1, 60), rng.randint(1, 4))
        while a in roots or b in roots:
            b += F(1, 97)
            if a in roots:
                a -= F(1, 89)
        expected = sum(1 for r in roots if a < r < b)
        got = count_roots_open(poly, a, b)
        return expected == got, (poly, a, b, expected, got)

    for i in range(500):
        ok, info = run_case(mult_hi=1)
        if not ok:
            failures.append(f"simple-root case {i}: expected {info[3]}, got {info[4]}")
            break
    for i in range(100):
        ok, info = run_case(mult_hi=3)
        if not ok:
            failures.append(f"repeated-root case {i}: expected {info[3]}, got {info[4]}")
            break
    _verdict(7, failures, (
        "count_roots_open exact on 500 constructed root sets and 100 with "
        "repeated factors"
    ))


def test_criterion_8_two_parameter_grids():
    failures = []
    check = lambda ok, msg: None if ok else failures.append(msg)  # noqa: E731
    t0 = time.perf_counter()

    rep13 = grid_check(
        parse_inequality(INEQ_13), (F(0), F(1)), (F(-5), F(5)), 41, eps=F(1, 10**30)
    )
    check(rep13.total == 41 * 41, f"grid size {rep13.total}")
    check(not rep13.fails_at, f"{len(rep13.fails_at)} fails on the 41x41 grid")
    check(
        len(rep13.undecided_at) * 100 <= rep13.total,
        f"{len(rep13.undecided_at)} undecided exceeds 1%",
    )

    rep15 = grid_check(
        parse_inequality(INEQ_15),
        (F(11, 10), F(3)),
        (F(-5), F(5)),
        (21, 11),
        eps=F(1, 10**30),
    )
    check(rep15.total == 21 * 11, f"reversed grid size {rep15.total}")
    check(not rep15.fails_at, f"{len(rep15.fails_at)} fails on the reversed grid")
    check(not rep15.undecided_at, "undecided points on the reversed grid")
    # the a = 0 line holds by exact symbolic equality, not by enclosure
    zero_line = [pt for pt in rep15.holds_at if pt[1] == 0]
    check(len(zero_line) == 21, "a = 0 line not recognized as exact equality")

    check(PHI.substitute_x(0).is_zero, "family does not vanish at x = 0")
    check(PHI.substitute_x(1).is_zero, "family does not vanish at x = 1")
    cascade = cascade_check(PHI, UNIT, [F(1, 2), F(1), F(2)])
    check(cascade.depth == 2, f"cascade depth {cascade.depth}")
    exact_steps = [s for s in cascade.steps if s.kind == "exact-zero"]
    check(
        len(exact_steps) == 2 and all(s.passed for s in exact_steps),
        "exact vanishing steps did not pass symbolically",
    )
    check(cascade.ok, "cascade evidence steps failed")

    elapsed = time.perf_counter() - t0
    _verdict(8, failures, (
        f"41x41 grid: {len(rep13.holds_at)} holds, 0 fails, "
        f"{len(rep13.undecided_at)} undecided; 21x11 reversed grid clean; "
        f"cascade layers 0 and 1 vanish symbolically, {elapsed:.1f}s"
    ))


def test_criterion_9_falsification(capsys):
    failures = []
    check = lambda ok, msg: None if ok else failures.append(msg)  # noqa: E731

    code = cli.run(["prove", "exp(-x) > 1 - x + x^2/2", "--on", "0,1", "--json"])
    out = capsys.readouterr().out
    with capsys.disabled():
        check(code == 1, f"exit code {code}, expected 1")
        data = json.loads(out)
        check(data.get("result") == "disproven", "result is not 'disproven'")
        hi = F(data["witness"]["reduced_value"][1])
        x = F(data["witness"]["x"])
        check(hi < 0, "witness enclosure is not certified negative")
        check(F(0) < x < F(1), "witness outside (0,1)")
        _verdict(9, failures, (
            f"prove exits 1; witness x = {x} with enclosure upper bound "
            f"{float(hi):.3e} < 0"
        ))
