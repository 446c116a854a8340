"""Analysis of one-parameter families of exponential inequalities.

Three instruments, one theme (reduce a family question to things the
prover and the interval arithmetic can certify):

* `analyze_affine_family` handles families phi_p(x) = f(x) - p. Strict
  monotonicity of f is proven by running the positivity prover on the
  numerator and denominator of f'; the endpoint limits A < B of f then
  split the parameter line into three zones, and the minimax member sits
  exactly in the middle: p0 = (A+B)/2 with error d0 = (B-A)/2. A and B
  enter as exact expressions in e and are validated against shrinking
  one-sided enclosures of f.

* `cascade_check` handles families with the parameter inside the
  exponent. It verifies the layered pattern "value and first derivative
  vanish identically at alpha = 0, deeper derivative positive for
  alpha > 0": the vanishing layers are checked symbolically, the deep
  layer per sampled rational alpha, by proof when the substitution stays
  an exact MEP and by certified pointwise evidence otherwise.

* `grid_check` classifies a two-parameter inequality on a rational grid.
  At each point both sides collapse to exact finite sums of rational
  multiples of e^s, so ties are recognized symbolically (no amount of
  interval tightening could) and strict signs by enclosures of a single
  e^(1/D).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Optional, Sequence, Union

from .arith import (
    ConstExpr,
    RationalInterval,
    lau_enclosure,
)
from .errors import (
    BudgetExceededError,
    DegenerateInputError,
    EndpointValidationError,
    LoweringError,
    MonotonicityUnprovenError,
    PreconditionError,
    SearchExhaustedError,
    SignIndeterminateError,
)
from .expr import InequalityAst, exp_sum_at, exp_sum_denominator
from .mep import ExpRational, Mep, _rescale_with, differentiate_quotient, eval_enclosure
from .poly import Polynomial
from .prover import (
    DEFAULT_MAX_L,
    PER_TERM,
    Certificate,
    prove_positive,
)

Q = Fraction

DECREASING = "decreasing"
INCREASING = "increasing"


# ---------------------------------------------------------------------------
# affine families phi_p = f - p


@dataclass(frozen=True)
class AffineFamily:
    """f together with its interval and claimed one-sided endpoint limits.

    The limits are exact expressions (rational functions of e); the
    analyzer does not derive them, it validates them.
    """

    f: ExpRational
    interval: tuple[Fraction, Fraction]
    endpoint_a_value: ConstExpr
    endpoint_b_value: ConstExpr


@dataclass(frozen=True)
class ConstValue:
    expr: ConstExpr
    enclosure: RationalInterval

    def to_json_dict(self) -> dict:
        return {
            "expr": self.expr.text(),
            "enclosure": [str(self.enclosure.lo), str(self.enclosure.hi)],
        }


@dataclass(frozen=True)
class FamilyReport:
    monotone: str  # "decreasing" or "increasing"
    A: ConstValue  # smaller endpoint value of f
    B: ConstValue  # larger endpoint value of f
    p0: ConstValue  # (A+B)/2, the minimax parameter
    d0: ConstValue  # (B-A)/2, the minimax error
    derivative_certificate: Certificate
    denominator_certificate: Certificate
    derivative_sign: int

    def to_json_dict(self) -> dict:
        return {
            "monotone": self.monotone,
            "A": self.A.to_json_dict(),
            "B": self.B.to_json_dict(),
            "p0": self.p0.to_json_dict(),
            "d0": self.d0.to_json_dict(),
            "derivative_certificate": self.derivative_certificate.to_json_dict(),
        }


def _interval_gap(p: RationalInterval, q: RationalInterval) -> Fraction:
    """Distance between two intervals; 0 when they overlap."""
    return max(Fraction(0), p.lo - q.hi, q.lo - p.hi)


def _prove_sign(
    f: Mep, interval, max_l: int, mode: str
) -> tuple[int, Certificate]:
    """Certify f > 0 or -f > 0 on the interval; a loose midpoint enclosure
    picks which direction to try first so the usual case costs one search."""
    if f.is_zero:
        raise DegenerateInputError("expression is identically zero")
    mid = (Fraction(interval[0]) + Fraction(interval[1])) / 2
    hint = eval_enclosure(f, mid, Fraction(1, 10**6))
    order = (1, -1) if hint.definite_sign() >= 0 else (-1, 1)
    last_error: Exception | None = None
    for sgn in order:
        try:
            cert = prove_positive(f if sgn > 0 else -f, interval, max_l, mode)
            return sgn, cert
        except SearchExhaustedError as exc:
            last_error = exc
    raise MonotonicityUnprovenError(
        f"neither sign certified up to max_l = {max_l}: {last_error}"
    )


def _validate_endpoint(
    f: ExpRational,
    at: Fraction,
    direction: int,
    claimed: ConstExpr,
    span: Fraction,
) -> None:
    """Check that enclosures of f(at + direction*delta) home in on the
    claimed limit along delta = span * 2^-k, k = 3..12.

    Two requirements: the interval-to-interval distance d_k must never
    grow (beyond enclosure-width slack), and the final distance must have
    dropped to at most a quarter of the first. A wrong claimed value
    makes d_k level off at the discrepancy, which fails the second test.
    """
    value_eps = Fraction(1, 10**12)
    value_box = claimed.enclosure(value_eps)
    dists: list[Fraction] = []
    epses: list[Fraction] = []
    for k in range(3, 13):
        delta = span / 2**k
        eps_k = delta * delta / 2**20
        x = at + direction * delta
        box = eval_enclosure(f, x, eps_k)
        dists.append(_interval_gap(box, value_box))
        epses.append(eps_k)
    for i in range(len(dists) - 1):
        slack = epses[i] + epses[i + 1] + 2 * value_eps
        if dists[i + 1] > dists[i] + slack:
            raise EndpointValidationError(
                f"approach to {claimed.text()} at x = {at} is not monotone "
                f"(step {i}: {dists[i]} -> {dists[i + 1]})"
            )
    total_slack = epses[0] + epses[-1] + 2 * value_eps
    if dists[-1] > dists[0] / 4 + total_slack:
        raise EndpointValidationError(
            f"enclosures of f near x = {at} do not converge to "
            f"{claimed.text()} (distance stuck near {dists[-1]})"
        )


def analyze_affine_family(
    fam: AffineFamily,
    max_l: int = DEFAULT_MAX_L,
    mode: str = PER_TERM,
    eps: Fraction = Fraction(1, 10**9),
) -> FamilyReport:
    """Full pipeline for phi_p = f - p: monotonicity proof, endpoint
    validation, and the equioscillation constants.

    Stratification in p itself is trivial (d phi_p / d p = -1), so the
    real work is strict monotonicity of f in x: the quotient rule gives
    f' = N/D, then N and D each get a positivity certificate (possibly
    after negation) and sign(f') = sign(N) * sign(D). For decreasing f
    the infimum A is the right endpoint value and the supremum B the
    left one; increasing swaps them. p0 and d0 are formed symbolically,
    so p0 - A = B - p0 holds exactly, not just numerically.
    """
    a, b = Fraction(fam.interval[0]), Fraction(fam.interval[1])
    if not 0 <= a < b:
        raise PreconditionError("need rational endpoints 0 <= a < b")
    span = b - a

    deriv = differentiate_quotient(fam.f)
    num_sign, num_cert = _prove_sign(deriv.numerator, (a, b), max_l, mode)
    den_sign, den_cert = _prove_sign(deriv.denominator, (a, b), max_l, mode)
    slope = num_sign * den_sign
    monotone = INCREASING if slope > 0 else DECREASING

    _validate_endpoint(fam.f, a, +1, fam.endpoint_a_value, span)
    _validate_endpoint(fam.f, b, -1, fam.endpoint_b_value, span)

    if monotone == DECREASING:
        a_expr, b_expr = fam.endpoint_b_value, fam.endpoint_a_value
    else:
        a_expr, b_expr = fam.endpoint_a_value, fam.endpoint_b_value
    gap = b_expr - a_expr
    if gap.is_zero() or gap.sign() != 1:
        raise EndpointValidationError(
            "endpoint values are inconsistent with the proven monotonicity"
        )
    p0_expr = (a_expr + b_expr) / 2
    d0_expr = (b_expr - a_expr) / 2

    w = eps
    while True:
        a_box = a_expr.enclosure(w)
        b_box = b_expr.enclosure(w)
        if a_box.hi < b_box.lo:
            break
        w /= 16
    return FamilyReport(
        monotone=monotone,
        A=ConstValue(a_expr, a_box),
        B=ConstValue(b_expr, b_box),
        p0=ConstValue(p0_expr, p0_expr.enclosure(eps)),
        d0=ConstValue(d0_expr, d0_expr.enclosure(eps)),
        derivative_certificate=num_cert,
        denominator_certificate=den_cert,
        derivative_sign=slope,
    )


def isolate_crossing(
    fam: AffineFamily,
    p,
    eps,
    report: Optional[FamilyReport] = None,
    max_l: int = DEFAULT_MAX_L,
) -> RationalInterval:
    """Bracket the unique solution of f(x) = p to width < eps.

    Requires p strictly between the endpoint values (checked exactly
    against the A and B expressions); bisection then steers by certified
    signs of f(mid) - p. An exact hit returns a degenerate interval.
    """
    p = Fraction(p)
    eps = Fraction(eps)
    if eps <= 0:
        raise PreconditionError("eps must be positive")
    if report is None:
        report = analyze_affine_family(fam, max_l=max_l)
    if (report.A.expr - p).sign() >= 0 or (report.B.expr - p).sign() <= 0:
        raise PreconditionError("p must lie strictly between A and B")

    lo, hi = Fraction(fam.interval[0]), Fraction(fam.interval[1])
    positive_left = report.monotone == DECREASING

    def sign_at(x: Fraction) -> int:
        w = min(eps, Fraction(1, 1024))
        for _ in range(60):
            box = eval_enclosure(fam.f, x, w).shift(-p)
            if box.lo == 0 and box.hi == 0:
                return 0
            s = box.definite_sign()
            if s != 0:
                return s
            w /= 16
        raise SignIndeterminateError(
            f"sign of f({x}) - {p} unresolved at the shrink limit"
        )

    while hi - lo >= eps:
        mid = (lo + hi) / 2
        s = sign_at(mid)
        if s == 0:
            return RationalInterval.point(mid)
        if (s > 0) == positive_left:
            lo = mid
        else:
            hi = mid
    return RationalInterval(lo, hi)


# ---------------------------------------------------------------------------
# parameter-in-the-exponent families


@dataclass(frozen=True)
class ParamTerm:
    """c * x^p * alpha^r * exp(-alpha*(u*x + v))."""

    c: Fraction
    p: int
    r: int
    u: Fraction
    v: Fraction

    def __post_init__(self):
        object.__setattr__(self, "c", Fraction(self.c))
        object.__setattr__(self, "u", Fraction(self.u))
        object.__setattr__(self, "v", Fraction(self.v))
        if self.p < 0 or self.r < 0:
            raise PreconditionError("powers p and r must be nonnegative")


class ParamExpFamily:
    """Finite sum of ParamTerms; closed under d/dalpha and substitution."""

    __slots__ = ("terms",)

    terms: tuple[ParamTerm, ...]

    def __init__(self, terms=()):
        merged: dict[tuple, Fraction] = {}
        for t in terms:
            if not isinstance(t, ParamTerm):
                t = ParamTerm(*t)
            key = (t.p, t.r, t.u, t.v)
            merged[key] = merged.get(key, Fraction(0)) + t.c
        object.__setattr__(
            self,
            "terms",
            tuple(
                ParamTerm(c, p, r, u, v)
                for (p, r, u, v), c in sorted(merged.items())
                if c != 0
            ),
        )

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("ParamExpFamily is immutable")

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, ParamExpFamily) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def diff_alpha(self) -> "ParamExpFamily":
        """d/dalpha, term by term:

        d/da [c x^p a^r e^(-a(ux+v))]
            = c r x^p a^(r-1) e^(...) - c x^p a^r (ux + v) e^(...)
        """
        out: list[ParamTerm] = []
        for t in self.terms:
            if t.r:
                out.append(ParamTerm(t.c * t.r, t.p, t.r - 1, t.u, t.v))
            if t.u:
                out.append(ParamTerm(-t.c * t.u, t.p + 1, t.r, t.u, t.v))
            if t.v:
                out.append(ParamTerm(-t.c * t.v, t.p, t.r, t.u, t.v))
        return ParamExpFamily(out)

    def substitute_x(self, x0) -> "ParamExpFamily":
        """Collapse the x dependence at a rational point; the result is a
        function of alpha alone (terms with u = 0 and folded powers)."""
        x0 = Fraction(x0)
        out = [
            ParamTerm(t.c * x0**t.p, 0, t.r, Fraction(0), t.u * x0 + t.v)
            for t in self.terms
        ]
        return ParamExpFamily(out)

    def text(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for t in self.terms:
            atoms = []
            if t.p:
                atoms.append("x" if t.p == 1 else f"x^{t.p}")
            if t.r:
                atoms.append("alpha" if t.r == 1 else f"alpha^{t.r}")
            if t.u or t.v:
                atoms.append(f"exp(-alpha*({t.u}*x + {t.v}))")
            mag = abs(t.c)
            if mag != 1 or not atoms:
                atoms.insert(0, str(mag))
            body = "*".join(atoms)
            if not bits:
                bits.append(body if t.c > 0 else f"-{body}")
            else:
                bits.append(f"+ {body}" if t.c > 0 else f"- {body}")
        return " ".join(bits)

    def __repr__(self) -> str:
        return f"ParamExpFamily({self.text()!r})"


@dataclass(frozen=True)
class AlphaSubstitution:
    """Family member at a fixed rational alpha0.

    The value in the stretched variable z = x/stretch is

        pure(z) + sum over offsets (w, M):  e^(-w) * M(z).

    With no offsets (w = alpha0*v all zero) the member is an exact MEP
    and full proof machinery applies; otherwise the irrational constants
    e^(-w) force enclosure-based treatment.
    """

    pure: Mep
    offsets: tuple[tuple[Fraction, Mep], ...]
    stretch: int

    @property
    def exact(self) -> bool:
        return not self.offsets


def substitute_alpha(fam: ParamExpFamily, alpha0) -> AlphaSubstitution:
    """Fix alpha = alpha0 >= 0.

    alpha0 = 0 kills every term with r >= 1 and turns the rest into the
    plain polynomial sum c x^p: an exact MEP, no offsets, stretch 1.
    For alpha0 > 0 the exponent splits as alpha0*u*x + alpha0*v: the x
    part gives rational exponential powers q = alpha0*u (made integral by
    one shared variable stretch), the constant part groups terms by
    w = alpha0*v.
    """
    alpha0 = Fraction(alpha0)
    if alpha0 < 0:
        raise PreconditionError("alpha0 must be nonnegative")
    if alpha0 == 0:
        pure = Mep(
            [(t.c, t.p, 0) for t in fam.terms if t.r == 0]
        )
        return AlphaSubstitution(pure=pure, offsets=(), stretch=1)

    by_w: dict[Fraction, list] = {}
    qs: list[Fraction] = []
    for t in fam.terms:
        q = alpha0 * t.u
        if q < 0:
            raise PreconditionError(
                "alpha0*u < 0 produces a growing exponential; not supported"
            )
        coeff = t.c * alpha0**t.r
        w = alpha0 * t.v
        by_w.setdefault(w, []).append((coeff, t.p, q))
        qs.append(q)
    stretch = lcm(1, *(q.denominator for q in qs)) if qs else 1
    pure = Mep()
    offsets = []
    for w in sorted(by_w):
        mep = _rescale_with(by_w[w], stretch)
        if w == 0:
            pure = mep
        elif not mep.is_zero:
            offsets.append((w, mep))
    return AlphaSubstitution(pure=pure, offsets=tuple(offsets), stretch=stretch)


@dataclass(frozen=True)
class CascadeStep:
    level: int
    kind: str  # "exact-zero", "proof", "evidence"
    alpha: Optional[Fraction]
    passed: bool
    detail: str


@dataclass(frozen=True)
class CascadeReport:
    steps: tuple[CascadeStep, ...]
    depth: int

    @property
    def ok(self) -> bool:
        return all(s.passed for s in self.steps)


def _member_sign_evidence(
    sub: AlphaSubstitution,
    z_interval: tuple[Fraction, Fraction],
    samples: int,
    eps: Fraction,
) -> tuple[bool, str]:
    """Certified pointwise signs of pure(z) + sum e^(-w) M_w(z).

    Every sampled value is an exact finite combination of rational powers
    of e, so equalities are recognized exactly and strict signs resolved
    by one shared enclosure.
    """
    lo, hi = z_interval
    step = (hi - lo) / (samples + 1)
    for i in range(1, samples + 1):
        z = lo + i * step
        sums: dict[Fraction, Fraction] = {}
        blocks = ((Fraction(0), sub.pure),) + sub.offsets
        for w, mep in blocks:
            for t in mep.terms:
                s = -t.q * z - w
                c = t.alpha * z**t.p
                nc = sums.get(s, Fraction(0)) + c
                if nc == 0:
                    sums.pop(s, None)
                else:
                    sums[s] = nc
        if not sums:
            continue  # exact zero: acceptable for the non-strict cascade
        denom = lcm(1, *(s.denominator for s in sums))
        lau = {int(s * denom): c for s, c in sums.items()}
        try:
            box = lau_enclosure(lau, denom, eps)
        except BudgetExceededError:
            return False, f"enclosure budget exhausted at z = {z}"
        sgn = box.definite_sign()
        if sgn < 0:
            return False, f"certified negative value at z = {z}"
        if sgn == 0:
            return False, f"sign unresolved at z = {z} (width < {eps})"
    return True, f"positive at {samples} interior points"


def cascade_check(
    fam: ParamExpFamily,
    x_interval,
    alpha_samples: Sequence,
    max_l: int = DEFAULT_MAX_L,
    samples: int = 7,
    eps: Fraction = Fraction(1, 10**12),
) -> CascadeReport:
    """Verify the layered monotonicity pattern in the parameter.

    Layers 0 .. depth-1 must vanish identically at alpha = 0 (checked
    symbolically); the layer at `depth` must be nonnegative for positive
    alpha, checked at each sampled alpha either by a positivity proof
    (exact MEP case; reported as "proof") or by certified enclosures at
    interior points (reported as "evidence"). depth is 2 unless the
    second derivative degenerates to the zero family, in which case the
    deepest nonvanishing layer is used.
    """
    a, b = Fraction(x_interval[0]), Fraction(x_interval[1])
    if not 0 <= a < b:
        raise PreconditionError("need rational endpoints 0 <= a < b")
    levels = [fam, fam.diff_alpha()]
    levels.append(levels[-1].diff_alpha())
    depth = 2
    while depth > 0 and levels[depth].is_zero:
        depth -= 1
    steps: list[CascadeStep] = []
    if levels[depth].is_zero:
        steps.append(
            CascadeStep(0, "exact-zero", None, True, "family is identically zero")
        )
        return CascadeReport(steps=tuple(steps), depth=0)

    for k in range(depth):
        at_zero = substitute_alpha(levels[k], 0).pure
        if at_zero.is_zero:
            steps.append(
                CascadeStep(k, "exact-zero", None, True, "vanishes at alpha = 0")
            )
        else:
            steps.append(
                CascadeStep(
                    k, "exact-zero", None, False,
                    f"nonzero at alpha = 0: {at_zero.text()}",
                )
            )

    for alpha0 in alpha_samples:
        alpha0 = Fraction(alpha0)
        if alpha0 <= 0:
            raise PreconditionError("alpha samples must be positive")
        sub = substitute_alpha(levels[depth], alpha0)
        z_iv = (a / sub.stretch, b / sub.stretch)
        if sub.exact:
            if sub.pure.is_zero:
                steps.append(
                    CascadeStep(depth, "proof", alpha0, True, "identically zero")
                )
                continue
            try:
                cert = prove_positive(sub.pure, z_iv, max_l, PER_TERM)
                steps.append(
                    CascadeStep(
                        depth, "proof", alpha0, True,
                        f"positivity certificate, deg P = {cert.poly.degree}",
                    )
                )
            except SearchExhaustedError as exc:
                steps.append(
                    CascadeStep(depth, "proof", alpha0, False, str(exc))
                )
        else:
            ok, detail = _member_sign_evidence(sub, z_iv, samples, eps)
            steps.append(CascadeStep(depth, "evidence", alpha0, ok, detail))
    return CascadeReport(steps=tuple(steps), depth=depth)


# ---------------------------------------------------------------------------
# two-parameter grids


@dataclass(frozen=True)
class GridReport:
    holds_at: tuple[tuple[Fraction, Fraction], ...]
    fails_at: tuple[tuple[Fraction, Fraction], ...]
    undecided_at: tuple[tuple[Fraction, Fraction], ...]

    @property
    def total(self) -> int:
        return len(self.holds_at) + len(self.fails_at) + len(self.undecided_at)

    def to_json_dict(self) -> dict:
        def fmt(points):
            return [[str(x), str(a)] for x, a in points]

        return {
            "holds_at": fmt(self.holds_at),
            "fails_at": fmt(self.fails_at),
            "undecided_at": fmt(self.undecided_at),
        }


def _axis(lo: Fraction, hi: Fraction, n: int) -> list[Fraction]:
    if n < 2:
        raise PreconditionError("steps must be >= 2 per axis")
    if lo > hi:
        raise PreconditionError("range endpoints out of order")
    if lo == hi:
        raise PreconditionError("degenerate range")
    step = (hi - lo) / (n - 1)
    return [lo + i * step for i in range(n)]


def grid_check(
    ineq: InequalityAst,
    x_range,
    a_range,
    steps: Union[int, tuple],
    eps: Fraction = Fraction(1, 10**30),
) -> GridReport:
    """Classify the inequality at every point of a rational grid.

    `steps` counts grid points per axis (one int for both, or a pair
    (nx, na)); endpoints inclusive. Each point is first reduced to an
    exact sum of rational multiples of powers of e: cancellation to zero
    is detected symbolically, so equality rows of non-strict inequalities
    classify as holds no matter how close the sides are. Otherwise the
    difference is enclosed to width < eps; an enclosure that still
    straddles zero leaves the point undecided (reported, never fatal).
    """
    if isinstance(steps, tuple):
        nx, na = steps
    else:
        nx = na = steps
    xs = _axis(Fraction(x_range[0]), Fraction(x_range[1]), int(nx))
    as_ = _axis(Fraction(a_range[0]), Fraction(a_range[1]), int(na))
    strict = ineq.strict
    want_less = ineq.cmp in ("<", "<=")

    holds: list[tuple[Fraction, Fraction]] = []
    fails: list[tuple[Fraction, Fraction]] = []
    undecided: list[tuple[Fraction, Fraction]] = []
    for xv in xs:
        for av in as_:
            point = {"x": xv, "a": av}
            try:
                diff = exp_sum_at(ineq.left, point)
                right = exp_sum_at(ineq.right, point)
            except LoweringError:
                undecided.append((xv, av))
                continue
            for k, c in right.items():
                nc = diff.get(k, Fraction(0)) - c
                if nc == 0:
                    diff.pop(k, None)
                else:
                    diff[k] = nc
            if not diff:
                (fails if strict else holds).append((xv, av))
                continue
            denom = exp_sum_denominator(diff)
            lau = {int(s * denom): c for s, c in diff.items()}
            try:
                box = lau_enclosure(lau, denom, eps)
            except BudgetExceededError:
                undecided.append((xv, av))
                continue
            sgn = box.definite_sign()
            if sgn == 0:
                undecided.append((xv, av))
            elif (sgn < 0) == want_less:
                holds.append((xv, av))
            else:
                fails.append((xv, av))
    return GridReport(
        holds_at=tuple(holds),
        fails_at=tuple(fails),
        undecided_at=tuple(undecided),
    )
