"""Verification engine for certified two-logarithm lower bounds.

Given an instance Lambda = b2*log(alpha2) - b1*log(alpha1) and candidate
parameters (K, L, R1, R2, S1, S2, rho, mu), the engine certifies the three
hypotheses of the underlying lower-bound theorem:

* weight_lower_bounds:    a_i >= rho*|log alpha_i| - log|alpha_i| + 2*D*h(alpha_i)
* product_multiplicity:   #{alpha1^r alpha2^s} >= L  and  #{r b2 + s b1} >= (K-1)L
* main_inequality:        K(sigma L - 1) log rho - (D+1) log N - D(K-1) log b
                          - g L (R a1 + S a2)  >  eps(N)

and, only when all three are verified, concludes a lower bound on
log|Lambda| from |Lambda'| > rho^(-mu K L) via a self-consistency argument.
Indeterminate is a first-class outcome: a check that cannot be decided at the
working precision escalates (doubling, capped) before reporting it.

All numerical work is interval arithmetic; a condition is "verified" only if
the inequality holds for every point of every input enclosure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence, Union

import sympy

from .algebraic import (
    AlgebraicNumber,
    absolute_log_height,
    abs_log_enclosure,
    log_abs_enclosure,
    root_of_unity_exponent,
    root_of_unity_order,
)
from .numerics import (
    DEFAULT_PRECISION,
    IndeterminateError,
    IntervalReal,
    Precision,
    epsilon_of_n,
    exp_interval,
    log_interval,
    min_interval,
    sum_log_factorials,
)

__all__ = [
    "CheckStatus",
    "CheckResult",
    "TwoLogInstance",
    "EngineParams",
    "DerivedQuantities",
    "VerificationReport",
    "BoundCertificate",
    "SoundnessError",
    "derive_quantities",
    "check_height_condition",
    "check_multiplicity_condition",
    "check_main_inequality",
    "verify_conditions",
    "conclude_bound",
]

PRODUCT_BRUTE_FORCE_CAP = 10**4
INTEGER_BRUTE_FORCE_CAP = 10**6

CONDITION_WEIGHTS = "weight_lower_bounds"
CONDITION_MULTIPLICITY = "product_multiplicity"
CONDITION_MAIN = "main_inequality"


class SoundnessError(RuntimeError):
    """A bound was requested from an unverified report."""


class CheckStatus(Enum):
    VERIFIED = "verified"
    FAILED = "failed"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class CheckResult:
    status: CheckStatus
    margin: Optional[IntervalReal] = None
    detail: str = ""

    @staticmethod
    def from_strict_inequality(lhs_minus_rhs: IntervalReal, detail: str = "") -> "CheckResult":
        if lhs_minus_rhs.strictly_above(0):
            return CheckResult(CheckStatus.VERIFIED, lhs_minus_rhs, detail)
        if lhs_minus_rhs.at_most(0):
            return CheckResult(CheckStatus.FAILED, lhs_minus_rhs, detail)
        return CheckResult(CheckStatus.INDETERMINATE, lhs_minus_rhs, detail)

    @staticmethod
    def from_weak_inequality(lhs_minus_rhs: IntervalReal, detail: str = "") -> "CheckResult":
        if lhs_minus_rhs.at_least(0):
            return CheckResult(CheckStatus.VERIFIED, lhs_minus_rhs, detail)
        if lhs_minus_rhs.strictly_below(0):
            return CheckResult(CheckStatus.FAILED, lhs_minus_rhs, detail)
        return CheckResult(CheckStatus.INDETERMINATE, lhs_minus_rhs, detail)


@dataclass(frozen=True)
class TwoLogInstance:
    """The linear form b2*log(alpha2) - b1*log(alpha1) under study.

    ``degree_param`` is the degree parameter D of the bound.  For the
    quarter-turn shape (alpha1 = i, alpha2 of even degree 2D with a non-real
    selected root) it is deg(minpoly)/2; for anything else the caller must
    declare it, and the declaration is recorded in certificates.
    """

    alpha1: AlgebraicNumber
    alpha2: AlgebraicNumber
    b1: int
    b2: int
    degree_param: Fraction
    degree_declared: bool = False

    def __post_init__(self) -> None:
        if self.b1 < 1 or self.b2 < 1:
            raise ValueError("b1 and b2 must be positive integers")
        if self.degree_param <= 0:
            raise ValueError("degree parameter must be positive")

    @staticmethod
    def quarter_turn(alpha: AlgebraicNumber, b1: int, b2: int) -> "TwoLogInstance":
        """Instance of b2*log(alpha) - b1*i*pi/2 with alpha1 = i."""
        if alpha.degree % 2 != 0 or alpha.is_real:
            raise ValueError("quarter-turn shape needs a non-real alpha of even degree")
        return TwoLogInstance(AlgebraicNumber.imaginary_unit(), alpha, b1, b2,
                              Fraction(alpha.degree, 2))


@dataclass(frozen=True)
class EngineParams:
    """Free parameters of the bound; rho and mu are exact rationals so that
    every verification pass can be replayed at any precision."""

    K: int
    L: int
    R1: int
    R2: int
    S1: int
    S2: int
    rho: Fraction
    mu: Fraction

    def __post_init__(self) -> None:
        if self.K < 2:
            raise ValueError("K must be an integer >= 2")
        for name in ("L", "R1", "R2", "S1", "S2"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be a positive integer")
        if not self.rho > 1:
            raise ValueError("rho must exceed 1")
        if not Fraction(1, 3) <= self.mu <= 1:
            raise ValueError("mu must lie in [1/3, 1]")

    @property
    def sigma(self) -> Fraction:
        return (1 + 2 * self.mu - self.mu * self.mu) / 2


@dataclass(frozen=True)
class DerivedQuantities:
    R: int
    S: int
    N: int
    g: IntervalReal
    sigma: IntervalReal
    b: IntervalReal
    log_b: IntervalReal
    g_fraction: Fraction
    sigma_fraction: Fraction


def derive_quantities(params: EngineParams, inst: TwoLogInstance,
                      prec: Union[Precision, int] = DEFAULT_PRECISION) -> DerivedQuantities:
    """R, S, N exactly; enclosures for g, sigma, b with the factorial product
    handled in log-domain (sum over k of (K-k) log k)."""
    bits = prec.bits if isinstance(prec, Precision) else int(prec)
    R = params.R1 + params.R2 - 1
    S = params.S1 + params.S2 - 1
    N = params.K * params.L
    g_frac = Fraction(1, 4) - Fraction(N, 12 * R * S)
    sigma_frac = params.sigma
    combo = (R - 1) * inst.b2 + (S - 1) * inst.b1
    if combo <= 0:
        raise ValueError("derived combination (R-1)b2+(S-1)b1 must be positive")
    log_combo = log_interval(IntervalReal.from_exact(Fraction(combo, 2), bits))
    if params.K == 2:
        # product over k! is 1! = 1; b is exactly combo/2
        log_b = log_combo
    else:
        exponent = Fraction(2, params.K * params.K - params.K)
        log_b = log_combo - exponent * sum_log_factorials(params.K - 1, bits)
    return DerivedQuantities(
        R=R, S=S, N=N,
        g=IntervalReal.from_exact(g_frac, bits),
        sigma=IntervalReal.from_exact(sigma_frac, bits),
        b=exp_interval(log_b, bits),
        log_b=log_b,
        g_fraction=g_frac,
        sigma_fraction=sigma_frac,
    )


def check_height_condition(a1: IntervalReal, a2: IntervalReal, inst: TwoLogInstance,
                           rho: Fraction, prec: Union[Precision, int] = DEFAULT_PRECISION
                           ) -> CheckResult:
    """a_i >= rho*|log alpha_i| - log|alpha_i| + 2*D*h(alpha_i) for i = 1, 2.

    The subtracted term follows the -log|alpha_i| reading; for unit-modulus
    alpha it vanishes exactly either way.
    """
    bits = prec.bits if isinstance(prec, Precision) else int(prec)
    margins = []
    for a, alpha in ((a1, inst.alpha1), (a2, inst.alpha2)):
        rhs = (rho * abs_log_enclosure(alpha, bits)
               - log_abs_enclosure(alpha, bits)
               + 2 * inst.degree_param * absolute_log_height(alpha, bits))
        margins.append(a - rhs)
    margin = min_interval(*margins)
    return CheckResult.from_weak_inequality(margin, detail="-log|alpha_i| reading")


# -- multiplicity -------------------------------------------------------------


def _distinct_products_of_unity(u1: int, m1: int, u2: int, m2: int,
                                r_count: int, s_count: int) -> int:
    lcm = m1 * m2 // math.gcd(m1, m2)
    values = {(r * u1 * (lcm // m1) + s * u2 * (lcm // m2)) % lcm
              for r in range(r_count) for s in range(s_count)}
    return len(values)


def _product_vanishing_poly_excludes_one(alpha1: AlgebraicNumber, dr: int,
                                         alpha2: AlgebraicNumber, ds: int) -> bool:
    """Exact certificate that alpha1^dr * alpha2^ds != 1, via resultants: if no
    pair of conjugates multiplies to 1 the specific pair cannot either."""
    x, y, z = sympy.symbols("x y z")
    p1 = sympy.Poly(list(reversed(alpha1.minpoly.coefficients)), x)
    p2 = sympy.Poly(list(reversed(alpha2.minpoly.coefficients)), x)
    m1 = sympy.resultant(p1.as_expr(), y - x**dr, x)
    m2 = sympy.resultant(p2.as_expr(), y - x**ds, x)
    m1 = sympy.Poly(m1, y)
    m2 = sympy.Poly(m2, y)
    # roots of prod_poly include all products (root of m1)*(root of m2)
    prod_expr = sympy.resultant(m1.as_expr().subs(y, z),
                                (z ** m2.degree(y)) * m2.as_expr().subs(y, x / z), z)
    value_at_one = sympy.Poly(prod_expr, x).eval(1)
    return value_at_one != 0


def _count_distinct_products(inst: TwoLogInstance, r_count: int, s_count: int) -> CheckResult:
    """Certified count of #{alpha1^r alpha2^s : r < r_count, s < s_count},
    conservative (merges pairs it cannot separate)."""
    total = r_count * s_count
    if total > PRODUCT_BRUTE_FORCE_CAP:
        return CheckResult(CheckStatus.INDETERMINATE, None,
                           "too large to brute-force and no shortcut applies")
    for bits in (128, 256, 512, 1024):
        pow1 = [None] * r_count
        pow2 = [None] * s_count
        from .algebraic import ComplexEnclosure
        one = ComplexEnclosure.from_exact(Fraction(1), Fraction(0), bits)
        pow1[0] = one
        pow2[0] = one
        z1 = inst.alpha1.enclosure(bits)
        z2 = inst.alpha2.enclosure(bits)
        for r in range(1, r_count):
            pow1[r] = pow1[r - 1] * z1
        for s in range(1, s_count):
            pow2[s] = pow2[s - 1] * z2
        products = [(pow1[r] * pow2[s], r, s) for r in range(r_count) for s in range(s_count)]
        # union-find over overlapping enclosures: merged classes undercount
        parent = list(range(total))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        ambiguous = []
        for i in range(total):
            for j in range(i + 1, total):
                if products[i][0].intersects(products[j][0]):
                    ambiguous.append((i, j))
        resolved = []
        for i, j in ambiguous:
            dr = products[i][1] - products[j][1]
            ds = products[i][2] - products[j][2]
            if _product_vanishing_poly_excludes_one(inst.alpha1, abs(dr),
                                                    inst.alpha2, abs(ds)):
                continue  # certified distinct despite overlap
            resolved.append((i, j))
        for i, j in resolved:
            parent[find(i)] = find(j)
        count = len({find(i) for i in range(total)})
        if count == total or bits == 1024:
            return CheckResult(CheckStatus.VERIFIED if count > 0 else CheckStatus.INDETERMINATE,
                               IntervalReal.from_exact(count),
                               f"certified distinct product classes: {count}")
    raise AssertionError("unreachable")


def check_multiplicity_condition(params: EngineParams, inst: TwoLogInstance) -> CheckResult:
    """Both cardinality conditions, decided exactly wherever possible."""
    required_first = params.L
    order1 = root_of_unity_order(inst.alpha1)
    order2 = root_of_unity_order(inst.alpha2)
    if order1 == 4 and order2 is None and params.R1 <= 4:
        # i^r alpha^s are pairwise distinct: equality would make a power of
        # alpha a root of unity
        count_first = params.R1 * params.S1
        first = CheckResult.from_weak_inequality(
            IntervalReal.from_exact(count_first - required_first),
            detail=f"fourth-root shortcut, count {count_first}")
    elif order1 is not None and order2 is not None:
        if params.R1 * params.S1 > PRODUCT_BRUTE_FORCE_CAP:
            first = CheckResult(CheckStatus.INDETERMINATE, None,
                                "too large to brute-force and no shortcut applies")
        else:
            u1, m1 = root_of_unity_exponent(inst.alpha1)
            u2, m2 = root_of_unity_exponent(inst.alpha2)
            count_first = _distinct_products_of_unity(u1, m1, u2, m2, params.R1, params.S1)
            first = CheckResult.from_weak_inequality(
                IntervalReal.from_exact(count_first - required_first),
                detail=f"roots-of-unity exact count {count_first}")
    else:
        counted = _count_distinct_products(inst, params.R1, params.S1)
        if counted.status is CheckStatus.INDETERMINATE:
            first = counted
        else:
            count_first = int(counted.margin.lo)
            if count_first >= required_first:
                first = CheckResult(CheckStatus.VERIFIED,
                                    IntervalReal.from_exact(count_first - required_first),
                                    counted.detail)
            else:
                # conservative count below the target cannot prove failure
                first = CheckResult(CheckStatus.INDETERMINATE,
                                    IntervalReal.from_exact(count_first - required_first),
                                    counted.detail + " (lower bound only)")

    required_second = (params.K - 1) * params.L
    if math.gcd(inst.b1, inst.b2) == 1 and (params.R2 - 1 < inst.b1
                                            or params.S2 - 1 < inst.b2):
        # coprimality plus one small range forces r b2 + s b1 injective
        count_second = params.R2 * params.S2
        second = CheckResult.from_weak_inequality(
            IntervalReal.from_exact(count_second - required_second),
            detail=f"coprime shortcut, count {count_second}")
    elif params.R2 * params.S2 <= INTEGER_BRUTE_FORCE_CAP:
        values = {r * inst.b2 + s * inst.b1
                  for r in range(params.R2) for s in range(params.S2)}
        count_second = len(values)
        second = CheckResult.from_weak_inequality(
            IntervalReal.from_exact(count_second - required_second),
            detail=f"exact enumeration, count {count_second}")
    else:
        second = CheckResult(CheckStatus.INDETERMINATE, None,
                             "too large to brute-force and no shortcut applies")

    for part in (first, second):
        if part.status is CheckStatus.FAILED:
            return CheckResult(CheckStatus.FAILED, part.margin, part.detail)
    for part in (first, second):
        if part.status is CheckStatus.INDETERMINATE:
            return CheckResult(CheckStatus.INDETERMINATE, part.margin, part.detail)
    margin = min_interval(first.margin, second.margin)
    return CheckResult(CheckStatus.VERIFIED, margin, f"{first.detail}; {second.detail}")


def check_main_inequality(params: EngineParams, dq: DerivedQuantities,
                          a1: IntervalReal, a2: IntervalReal, inst: TwoLogInstance,
                          prec: Union[Precision, int] = DEFAULT_PRECISION) -> CheckResult:
    """K(sigma L - 1) log rho - (D+1) log N - D(K-1) log b - g L (R a1 + S a2)
    must strictly exceed eps(N); the margin interval is reported."""
    bits = prec.bits if isinstance(prec, Precision) else int(prec)
    D = inst.degree_param
    log_rho = log_interval(IntervalReal.from_exact(params.rho, bits))
    log_n = log_interval(IntervalReal.from_exact(dq.N, bits))
    lhs = ((params.K * (dq.sigma_fraction * params.L - 1)) * log_rho
           - (D + 1) * log_n
           - (D * (params.K - 1)) * dq.log_b
           - (dq.g_fraction * params.L) * (dq.R * a1 + dq.S * a2))
    margin = lhs - epsilon_of_n(dq.N, bits)
    return CheckResult.from_strict_inequality(margin)


@dataclass(frozen=True)
class VerificationReport:
    conditions: dict
    precision_bits: int

    @property
    def all_verified(self) -> bool:
        return all(c.status is CheckStatus.VERIFIED for c in self.conditions.values())

    def failed_names(self) -> list:
        return [n for n, c in self.conditions.items() if c.status is not CheckStatus.VERIFIED]


def verify_conditions(params: EngineParams, inst: TwoLogInstance,
                      a1_exact: Fraction, a2_exact: Fraction,
                      prec: Union[Precision, int] = DEFAULT_PRECISION) -> VerificationReport:
    """Run all three condition checks, escalating precision on indeterminate
    outcomes; a1/a2 are exact rationals so each pass can rebuild them."""
    start = prec if isinstance(prec, Precision) else Precision(int(prec))
    conditions = {}
    bits_used = start.bits
    multiplicity = check_multiplicity_condition(params, inst)
    conditions[CONDITION_MULTIPLICITY] = multiplicity

    for name, runner in (
        (CONDITION_WEIGHTS,
         lambda bits: check_height_condition(IntervalReal.from_exact(a1_exact, bits),
                                             IntervalReal.from_exact(a2_exact, bits),
                                             inst, params.rho, bits)),
        (CONDITION_MAIN,
         lambda bits: check_main_inequality(params, derive_quantities(params, inst, bits),
                                            IntervalReal.from_exact(a1_exact, bits),
                                            IntervalReal.from_exact(a2_exact, bits),
                                            inst, bits)),
    ):
        result = None
        for rung in start.ladder():
            result = runner(rung.bits)
            bits_used = max(bits_used, rung.bits)
            if result.status is not CheckStatus.INDETERMINATE:
                break
        conditions[name] = result
    return VerificationReport(conditions=conditions, precision_bits=bits_used)


@dataclass(frozen=True)
class BoundCertificate:
    """A verified lower bound for log|Lambda| with its full audit trail.

    The bound field is populated only when every condition in the report is
    verified; construction through conclude_bound enforces this.
    """

    bound_log_abs_lambda: IntervalReal
    params: EngineParams
    report: VerificationReport
    assumption_trail: tuple

    @property
    def certified_lower_bound(self) -> IntervalReal:
        return self.bound_log_abs_lambda


def conclude_bound(params: EngineParams, inst: TwoLogInstance, report: VerificationReport,
                   assume_below: IntervalReal,
                   prec: Union[Precision, int] = DEFAULT_PRECISION,
                   extra_trail: Sequence[str] = ()) -> BoundCertificate:
    """Convert |Lambda'| > rho^(-mu K L) into a bound on log|Lambda|.

    Under the assumption log|Lambda| < T (``assume_below``):
        log|Lambda| > -mu K L log rho - log m - m e^T,
    with m = max(L S / (2 b2), L R / (2 b1)).  The dichotomy over the
    assumption makes min(T, derived) an unconditional lower bound.
    """
    if not report.all_verified:
        raise SoundnessError(
            f"refusing to emit a bound: unverified conditions {report.failed_names()}")
    bits = prec.bits if isinstance(prec, Precision) else int(prec)
    R = params.R1 + params.R2 - 1
    S = params.S1 + params.S2 - 1
    m_exact = max(Fraction(params.L * S, 2 * inst.b2), Fraction(params.L * R, 2 * inst.b1))
    m_iv = IntervalReal.from_exact(m_exact, bits)
    log_rho = log_interval(IntervalReal.from_exact(params.rho, bits))
    mu_k_l_log_rho = (params.mu * params.K * params.L) * log_rho
    exponential_slack = m_iv * exp_interval(assume_below, bits)
    derived = -mu_k_l_log_rho - log_interval(m_iv) - exponential_slack
    bound = min_interval(assume_below, derived)
    trail = (
        "conditions verified: " + ", ".join(sorted(report.conditions)),
        f"conversion factor m = max(LS/(2 b2), LR/(2 b1)) = {m_exact}",
        f"self-consistency threshold T in [{assume_below.lo}, {assume_below.hi}]",
        "bound = min(T, -mu K L log rho - log m - m e^T)",
        "-log|alpha_i| reading of the weight condition",
    ) + tuple(extra_trail)
    if inst.degree_declared:
        trail = trail + ("degree parameter declared by caller (trusted input)",)
    return BoundCertificate(bound_log_abs_lambda=bound, params=params,
                            report=report, assumption_trail=trail)
