import math
import random
from fractions import Fraction

import gmpy2
import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twolog.numerics import (
    DomainError,
    IntervalReal,
    Precision,
    abs_interval,
    atan2_interval,
    enclose_constant,
    epsilon_of_n,
    euler_e_interval,
    exp_interval,
    floor_exact,
    log_factorial,
    log_interval,
    pi_interval,
    pow_real,
    round_half_even,
    round_nearest_exact,
    sqrt_interval,
    square_interval,
    sum_log_factorials,
)

import oracles

# 100 published digits of pi, used as an independent reference
PI_100 = Fraction(
    "3.14159265358979323846264338327950288419716939937510"
    "582097494459230781640628620899862803482534211706798214"
)


def frac(x):
    n, d = x.as_integer_ratio()
    return Fraction(int(n), int(d))


class TestPrecision:
    def test_minimum_bits(self):
        with pytest.raises(ValueError):
            Precision(32)

    def test_ladder_caps_at_1024(self):
        assert [p.bits for p in Precision(128).ladder()] == [128, 256, 512, 1024]


class TestConstants:
    def test_pi_64(self):
        pi = enclose_constant("pi", Precision(64))
        assert pi.contains(PI_100)
        assert Fraction("3.141592") <= frac(pi.lo) <= frac(pi.hi) <= Fraction("3.141593")

    def test_euler_e_64(self):
        e = enclose_constant("euler_e", Precision(64))
        assert e.contains(Fraction("2.71828182845904523536028747135266249775724709369995"))

    def test_pi_256_width_and_reference(self):
        pi = enclose_constant("pi", Precision(256))
        assert pi.contains(PI_100)
        assert float(pi.width()) < 1e-70

    def test_relative_width_contract(self):
        for bits in (64, 128, 256):
            pi = enclose_constant("pi", Precision(bits))
            assert frac(pi.width()) / frac(pi.lo) <= Fraction(2) ** (2 - bits)

    def test_unknown_constant(self):
        with pytest.raises(DomainError):
            enclose_constant("golden_ratio")


class TestElementaryOps:
    def test_log_one(self):
        one = IntervalReal.from_exact(1, 128)
        lg = log_interval(one)
        assert lg.contains(0) and float(lg.width()) < 1e-35

    def test_sqrt_four(self):
        s = sqrt_interval(IntervalReal.from_exact(4, 128))
        assert s.contains(2) and float(s.width()) < 1e-35

    def test_log_domain_error(self):
        with pytest.raises(DomainError):
            log_interval(IntervalReal.from_exact(0, 128))
        with pytest.raises(DomainError):
            log_interval(IntervalReal.from_exact(-3, 128))

    def test_division_by_zero_interval(self):
        x = IntervalReal.from_exact(1, 128)
        z = IntervalReal.hull(IntervalReal.from_exact(-1, 128), IntervalReal.from_exact(2, 128))
        with pytest.raises(DomainError):
            x / z

    def test_sqrt_domain_error(self):
        with pytest.raises(DomainError):
            sqrt_interval(IntervalReal.from_exact(-1, 128))

    def test_exp_log_roundtrip_contains_input(self):
        # 1000 random positive points: exp(log(x)) must contain x
        rng = random.Random(12345)
        for _ in range(1000):
            q = Fraction(rng.randint(1, 10**9), rng.randint(1, 10**6))
            x = IntervalReal.from_exact(q, 128)
            assert exp_interval(log_interval(x)).contains(q)

    def test_exp_log_against_high_precision_oracle(self):
        rng = random.Random(99)
        for _ in range(50):
            q = Fraction(rng.randint(1, 10**12), rng.randint(1, 10**6))
            enc = exp_interval(log_interval(IntervalReal.from_exact(q, 128)))
            with mpmath.workdps(160):
                v = mpmath.exp(mpmath.log(mpmath.mpf(q.numerator) / q.denominator))
                assert mpmath.mpf(oracles.mpfr_str(enc.lo)) <= v <= mpmath.mpf(oracles.mpfr_str(enc.hi))

    def test_atan2_first_quadrant(self):
        a = atan2_interval(IntervalReal.from_exact(4, 128), IntervalReal.from_exact(3, 128))
        with mpmath.workdps(60):
            assert oracles.in_interval(mpmath.atan2(mpmath.mpf(4), mpmath.mpf(3)), a, slack=1e-45)

    @pytest.mark.parametrize("y,x", [(1, -3), (-2, -3), (5, 0), (-5, 0), (1, 1), (-1, 1)])
    def test_atan2_quadrants(self, y, x):
        enc = atan2_interval(IntervalReal.from_exact(y, 128), IntervalReal.from_exact(x, 128))
        assert oracles.in_interval(math.atan2(y, x), enc, slack=1e-12)

    def test_atan2_branch_cut_rejected(self):
        y = IntervalReal.hull(IntervalReal.from_exact(-1, 128), IntervalReal.from_exact(1, 128))
        x = IntervalReal.from_exact(-2, 128)
        with pytest.raises(DomainError):
            atan2_interval(y, x)

    def test_pow_real(self):
        v = pow_real(IntervalReal.from_exact(2, 128), Fraction(1, 2))
        with mpmath.workdps(60):
            assert oracles.in_interval(mpmath.sqrt(2), v, slack=1e-35)


@settings(max_examples=200, deadline=None)
@given(
    num_a=st.integers(-10**9, 10**9), den_a=st.integers(1, 10**6),
    num_b=st.integers(-10**9, 10**9), den_b=st.integers(1, 10**6),
    wid_a=st.integers(0, 10**6), wid_b=st.integers(0, 10**6),
    ta=st.integers(0, 1000), tb=st.integers(0, 1000),
)
def test_containment_property(num_a, den_a, num_b, den_b, wid_a, wid_b, ta, tb):
    """Exact point results of +,-,*,/ lie inside the interval results."""
    qa = Fraction(num_a, den_a)
    qb = Fraction(num_b, den_b)
    a = IntervalReal.hull(IntervalReal.from_exact(qa, 128),
                          IntervalReal.from_exact(qa + Fraction(wid_a, 10**20), 128))
    b = IntervalReal.hull(IntervalReal.from_exact(qb, 128),
                          IntervalReal.from_exact(qb + Fraction(wid_b, 10**20), 128))
    pa = qa + Fraction(wid_a, 10**20) * Fraction(ta, 1000)
    pb = qb + Fraction(wid_b, 10**20) * Fraction(tb, 1000)
    assert (a + b).contains(pa + pb)
    assert (a - b).contains(pa - pb)
    assert (a * b).contains(pa * pb)
    assert (-a).contains(-pa)
    assert abs_interval(a).contains(abs(pa))
    assert square_interval(a).contains(pa * pa)
    if not (b.lo <= 0 <= b.hi):
        assert (a / b).contains(pa / pb)


@settings(max_examples=60, deadline=None)
@given(num=st.integers(1, 10**9), den=st.integers(1, 10**6), op=st.sampled_from(["log", "exp", "sqrt"]))
def test_precision_monotonicity(num, den, op):
    """Doubling precision never widens the enclosure."""
    q = Fraction(num, den)
    if op == "exp":
        # keep exp within a representable exponent range
        q = Fraction(num % 10**5 + 1, den)
    fns = {"log": log_interval, "exp": exp_interval, "sqrt": sqrt_interval}
    fn = fns[op]
    lo_prec = fn(IntervalReal.from_exact(q, 128), 128)
    hi_prec = fn(IntervalReal.from_exact(q, 256), 256)
    assert frac(hi_prec.width()) <= frac(lo_prec.width())
    assert lo_prec.lo <= hi_prec.lo and hi_prec.hi <= lo_prec.hi


class TestLogFactorial:
    def test_one(self):
        assert log_factorial(1, 128).contains(0)

    def test_five(self):
        lf = log_factorial(5, 128)
        with mpmath.workdps(60):
            assert oracles.in_interval(mpmath.log(120), lf, slack=1e-35)

    def test_rejects_zero(self):
        with pytest.raises(DomainError):
            log_factorial(0)

    @pytest.mark.parametrize("n", [10, 100, 1000, 10000])
    def test_matches_brute_force_log_sum(self, n):
        lf = log_factorial(n, 128)
        oracle = oracles.log_factorial_sum(n, dps=80)
        assert oracles.in_interval(oracle, lf, slack=1e-40)
        assert float(lf.width()) < 1e-9

    @pytest.mark.parametrize("n", [20001, 50000])
    def test_stirling_branch_contains_log_sum(self, n):
        lf = log_factorial(n, 128)
        oracle = oracles.log_factorial_sum(n, dps=80)
        assert oracles.in_interval(oracle, lf, slack=1e-40)

    def test_sum_log_factorials_small(self):
        # sum_{k=1}^{4} log k! = log(1*2*6*24)
        s = sum_log_factorials(4, 128)
        assert s.contains(0) is False
        with mpmath.workdps(40):
            assert oracles.in_interval(mpmath.log(1 * 2 * 6 * 24), s, slack=1e-30)


class TestEpsilonOfN:
    def test_rejects_one(self):
        with pytest.raises(DomainError):
            epsilon_of_n(1)

    def test_n2_direct_formula(self):
        # eps(2) = log(e^2 + (e-1)^2), frozen from the direct oracle
        enc = epsilon_of_n(2, 128)
        assert oracles.interval_close_to(
            enc, "2.33616962004724168490589194523464082311456260803", 1e-30)

    @pytest.mark.parametrize("n", [2, 10, 100, 1000, 5000])
    def test_matches_brute_force(self, n):
        enc = epsilon_of_n(n, 128)
        oracle = oracles.epsilon_direct(n, dps=80)
        assert oracles.in_interval(oracle, enc, slack=1e-40)
        assert float(enc.width()) < 1e-9

    def test_certifies_paper_threshold_at_1e4(self):
        enc = epsilon_of_n(10000, 128)
        assert enc.strictly_below(Fraction("0.004"))

    def test_decreasing_on_grid(self):
        values = [epsilon_of_n(n, 128) for n in (100, 500, 1000, 5000, 10000)]
        for smaller_n, larger_n in zip(values, values[1:]):
            assert larger_n.strictly_below(smaller_n)

    def test_large_n_stirling_branch(self):
        enc = epsilon_of_n(10**6, 128)
        assert enc.strictly_below(Fraction("0.004"))
        assert enc.strictly_above(0)


class TestIntegerExtraction:
    def test_floor_exact(self):
        assert floor_exact(IntervalReal.from_exact(Fraction(7, 2), 128)) == 3
        assert floor_exact(IntervalReal.from_exact(5, 128)) == 5

    def test_floor_ambiguous(self):
        iv = IntervalReal.hull(IntervalReal.from_exact(Fraction(29, 10), 128),
                               IntervalReal.from_exact(Fraction(31, 10), 128))
        assert floor_exact(iv) is None

    def test_round_nearest(self):
        assert round_nearest_exact(IntervalReal.from_exact(Fraction(10, 3), 128)) == 3
        assert round_nearest_exact(IntervalReal.from_exact(Fraction(17, 3), 128)) == 6

    def test_round_nearest_ambiguous_near_half(self):
        iv = IntervalReal.hull(IntervalReal.from_exact(Fraction(249, 100), 128),
                               IntervalReal.from_exact(Fraction(251, 100), 128))
        assert round_nearest_exact(iv) is None

    def test_round_half_even_convention(self):
        assert round_half_even(Fraction(5, 2)) == 2
        assert round_half_even(Fraction(7, 2)) == 4
        assert round_half_even(Fraction(-1, 2)) == 0
        assert round_half_even(Fraction(3, 4)) == 1


class TestIntervalInvariants:
    def test_inverted_interval_rejected(self):
        with pytest.raises(DomainError):
            IntervalReal(gmpy2.mpfr(2), gmpy2.mpfr(1))

    def test_nan_rejected(self):
        with pytest.raises(DomainError):
            IntervalReal(gmpy2.nan(), gmpy2.mpfr(1))
