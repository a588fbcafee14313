import random
from fractions import Fraction

import mpmath
import pytest

from twolog.algebraic import AlgebraicNumber
from twolog.engine import (
    CheckStatus,
    EngineParams,
    SoundnessError,
    TwoLogInstance,
    check_height_condition,
    check_main_inequality,
    check_multiplicity_condition,
    conclude_bound,
    derive_quantities,
    verify_conditions,
)
from twolog.numerics import IntervalReal
from twolog.pipeline import MU, RHO, build_parameters, compute_inputs

import oracles

ALPHA = AlgebraicNumber.from_texts("5,-6,5", "0.6,0.8")
IUNIT = AlgebraicNumber.imaginary_unit()


def quarter(b1, b2):
    return TwoLogInstance.quarter_turn(ALPHA, b1, b2)


def params(K=2, L=1, R1=1, R2=1, S1=1, S2=1, rho=RHO, mu=MU):
    return EngineParams(K=K, L=L, R1=R1, R2=R2, S1=S1, S2=S2,
                        rho=Fraction(rho), mu=Fraction(mu))


def main_path_setup(b1=590334471, b2=10**9, bits=128):
    """Reusable full main-path instance built from the fixed recipe."""
    inputs = compute_inputs(ALPHA, b1, b2, bits)
    state = build_parameters(inputs, bits)
    inst = TwoLogInstance.quarter_turn(ALPHA, inputs.b1, inputs.b2)
    return inputs, state, inst


class TestEngineParams:
    def test_k_minimum(self):
        with pytest.raises(ValueError):
            params(K=1)

    def test_rho_range(self):
        with pytest.raises(ValueError):
            params(rho=Fraction(1))

    def test_mu_range(self):
        with pytest.raises(ValueError):
            params(mu=Fraction(1, 4))

    def test_sigma(self):
        assert params(mu=Fraction("0.59")).sigma == Fraction("0.91595")


class TestDeriveQuantities:
    def test_all_ranges_one(self):
        dq = derive_quantities(params(K=2, L=1, R1=1, R2=1, S1=1, S2=2), quarter(1, 1), 128)
        assert dq.R == 1 and dq.S == 2 and dq.N == 2

    def test_k2_b_exact(self):
        # K = 2: the factorial product is 1! = 1, so b = ((R-1)b2+(S-1)b1)/2
        dq = derive_quantities(params(K=2, L=2, R1=2, R2=2, S1=2, S2=2), quarter(3, 5), 128)
        expected = Fraction((3 - 1) * 5 + (3 - 1) * 3, 2)
        assert dq.b.contains(expected)
        assert float(dq.b.width()) < 1e-30

    def test_g_and_sigma_exact(self):
        dq = derive_quantities(params(K=3, L=4, R1=2, R2=2, S1=2, S2=2), quarter(1, 2), 128)
        assert dq.g_fraction == Fraction(1, 4) - Fraction(12, 12 * 3 * 3)
        assert dq.sigma_fraction == Fraction("0.91595")

    @pytest.mark.parametrize("K", [3, 10, 25, 50])
    def test_b_matches_high_precision_oracle(self, K):
        p = params(K=K, L=2, R1=3, R2=4, S1=2, S2=5)
        dq = derive_quantities(p, quarter(7, 11), 192)
        with mpmath.workdps(120):
            combo = mpmath.mpf((dq.R - 1) * 11 + (dq.S - 1) * 7) / 2
            prod = mpmath.mpf(1)
            for k in range(1, K):
                prod *= mpmath.factorial(k)
            oracle = combo * prod ** (mpmath.mpf(-2) / (K * K - K))
            assert oracles.in_interval(oracle, dq.b, slack=1e-40)

    def test_zero_combination_rejected(self):
        with pytest.raises(ValueError):
            derive_quantities(params(K=2, L=1, R1=1, R2=1, S1=1, S2=1), quarter(1, 1), 128)


class TestHeightCondition:
    def test_exact_weight_for_i_verifies(self):
        # a1 picked as an upper rounding of rho*pi/2; h(i) = 0 makes the
        # condition tight, and the upper rounding closes it
        inputs, state, inst = main_path_setup()
        a1 = IntervalReal.from_exact(state.a1, 128)
        a2 = IntervalReal.from_exact(state.a2, 128)
        res = check_height_condition(a1, a2, inst, RHO, 128)
        assert res.status is CheckStatus.VERIFIED

    def test_small_weight_fails(self):
        inputs, state, inst = main_path_setup()
        one = IntervalReal.from_exact(1, 128)
        a2 = IntervalReal.from_exact(state.a2, 128)
        res = check_height_condition(one, a2, inst, RHO, 128)
        assert res.status is CheckStatus.FAILED

    def test_weight_with_height_term(self):
        # a2 = rho*pi/2 + log 5 >= rho*|arg alpha| + 2*D*h(alpha) for the
        # acute-argument alpha = (3+4i)/5 with D = 1, h = (log 5)/2
        inst = quarter(1, 1)
        bits = 128
        from twolog.numerics import pi_interval, log_interval
        a1 = IntervalReal.point((RHO * pi_interval(bits) / 2).hi)
        a2 = IntervalReal.point((RHO * pi_interval(bits) / 2
                                 + log_interval(IntervalReal.from_exact(5, bits))).hi)
        res = check_height_condition(a1, a2, inst, RHO, bits)
        assert res.status is CheckStatus.VERIFIED


class TestMultiplicityCondition:
    def test_fourth_root_shortcut(self):
        # alpha1 = i, alpha2 not a root of unity: count is exactly R1*S1
        p = params(K=2, L=20, R1=4, R2=100, S1=5, S2=100)
        res = check_multiplicity_condition(p, quarter(10**6, 10**6 + 1))
        assert res.status is CheckStatus.VERIFIED
        assert "count 20" in res.detail

    def test_small_integer_enumeration_fails(self):
        # b1 = b2 = 1, R2 = S2 = 2: values {0, 1, 2}, count 3 < (K-1)L = 4
        p = params(K=5, L=1, R1=1, R2=2, S1=1, S2=2)
        res = check_multiplicity_condition(p, quarter(1, 1))
        assert res.status is CheckStatus.FAILED

    def test_coprime_shortcut_matches_enumeration(self):
        # gcd(7, 3) = 1 and R2 - 1 < b1: exactly R2*S2 = 20 values
        p = params(K=2, L=10, R1=4, R2=5, S1=3, S2=4)
        inst = quarter(7, 3)
        res = check_multiplicity_condition(p, inst)
        assert res.status is CheckStatus.VERIFIED
        values = {r * 3 + s * 7 for r in range(5) for s in range(4)}
        assert len(values) == 20

    def test_both_roots_of_unity_fail_exactly(self):
        # alpha1 = alpha2 = i: products i^(r+s) take at most 4 values
        inst = TwoLogInstance(IUNIT, IUNIT, 10**6, 10**6 + 1, Fraction(1),
                              degree_declared=True)
        p = params(K=2, L=20, R1=4, R2=100, S1=5, S2=100)
        res = check_multiplicity_condition(p, inst)
        assert res.status is CheckStatus.FAILED

    def test_enclosure_count_path(self):
        # alpha1 = alpha2 = (3+4i)/5, all products distinct (not a root of
        # unity, so powers never collide)
        inst = TwoLogInstance(ALPHA, ALPHA, 5, 7, Fraction(1), degree_declared=True)
        p = params(K=2, L=6, R1=2, R2=4, S1=3, S2=3)
        res = check_multiplicity_condition(p, inst)
        assert res.status is CheckStatus.VERIFIED

    def test_too_large_is_indeterminate(self):
        inst = TwoLogInstance(ALPHA, ALPHA, 2, 2, Fraction(1), degree_declared=True)
        p = params(K=2, L=2, R1=200, R2=2000, S1=200, S2=2000)
        res = check_multiplicity_condition(p, inst)
        assert res.status is CheckStatus.INDETERMINATE
        assert "too large" in res.detail

    def test_shortcut_and_enumeration_agree_randomized(self):
        rng = random.Random(808)
        for _ in range(60):
            b1 = rng.randint(1, 60)
            b2 = rng.randint(1, 60)
            import math
            if math.gcd(b1, b2) != 1:
                continue
            R2 = rng.randint(1, 20)
            S2 = rng.randint(1, 20)
            if not (R2 - 1 < b1 or S2 - 1 < b2):
                continue
            values = {r * b2 + s * b1 for r in range(R2) for s in range(S2)}
            assert len(values) == R2 * S2


class TestMainInequality:
    def test_tiny_rho_fails(self):
        # near-unit rho makes the positive term negligible
        p = params(K=2, L=2, R1=1, R2=2, S1=1, S2=2, rho=Fraction("1.01"))
        inst = quarter(1, 1)
        dq = derive_quantities(p, inst, 128)
        a1 = IntervalReal.from_exact(Fraction(285, 10), 128)
        a2 = IntervalReal.from_exact(Fraction(301, 10), 128)
        res = check_main_inequality(p, dq, a1, a2, inst, 128)
        assert res.status is CheckStatus.FAILED

    def test_recipe_instance_verifies_with_margin(self):
        inputs, state, inst = main_path_setup()
        p = state.engine_params()
        dq = derive_quantities(p, inst, 128)
        a1 = IntervalReal.from_exact(state.a1, 128)
        a2 = IntervalReal.from_exact(state.a2, 128)
        res = check_main_inequality(p, dq, a1, a2, inst, 128)
        assert res.status is CheckStatus.VERIFIED
        assert res.margin.strictly_above(0)

    def test_margin_matches_point_oracle_on_rho_grid(self):
        # engine evaluation against plain high-precision point arithmetic;
        # the margin grows with rho on this configuration
        inst = quarter(590334471, 10**9)
        oracle_values = []
        for rho in (Fraction(5), Fraction(10), Fraction("18.1"), Fraction(30)):
            p = params(K=900, L=15, R1=4, R2=120, S1=4, S2=113, rho=rho)
            dq = derive_quantities(p, inst, 128)
            a1_q = Fraction(29)
            a2_q = Fraction(31)
            res = check_main_inequality(p, dq, IntervalReal.from_exact(a1_q, 128),
                                        IntervalReal.from_exact(a2_q, 128), inst, 128)
            with mpmath.workdps(60):
                sigma = mpmath.mpf("0.91595")
                log_rho = mpmath.log(mpmath.mpf(rho.numerator) / rho.denominator)
                b_oracle = oracles.mpfr_str(dq.b.lo)
                N = 900 * 15
                g = mpmath.mpf(1) / 4 - mpmath.mpf(N) / (12 * dq.R * dq.S)
                lhs = (900 * (sigma * 15 - 1) * log_rho - 2 * mpmath.log(N)
                       - 899 * mpmath.log(b_oracle)
                       - g * 15 * (dq.R * 29 + dq.S * 31))
                eps = oracles.epsilon_direct(N, dps=60)
                point_margin = lhs - eps
            assert oracles.in_interval(point_margin, res.margin, slack=1e-18)
            oracle_values.append(point_margin)
        assert all(b > a for a, b in zip(oracle_values, oracle_values[1:]))


class TestConcludeBound:
    def _verified_setup(self):
        inputs, state, inst = main_path_setup()
        p = state.engine_params()
        report = verify_conditions(p, inst, state.a1, state.a2, 128)
        assert report.all_verified
        return inputs, state, inst, p, report

    def test_bound_emitted_on_verified_report(self):
        from twolog.numerics import square_interval
        inputs, state, inst, p, report = self._verified_setup()
        scalars = inputs.scalars(128)
        assume = -(Fraction("2.75") * scalars.a * square_interval(scalars.h))
        cert = conclude_bound(p, inst, report, assume, 128)
        assert cert.bound_log_abs_lambda.strictly_above(assume - 1)
        assert any("T" in note for note in cert.assumption_trail)

    def test_soundness_gate_refuses_failed_report(self):
        inputs, state, inst, p, report = self._verified_setup()
        from twolog.engine import CheckResult, VerificationReport
        for name in report.conditions:
            broken = dict(report.conditions)
            broken[name] = CheckResult(CheckStatus.FAILED,
                                       IntervalReal.from_exact(-1, 128), "forced")
            bad = VerificationReport(conditions=broken, precision_bits=128)
            with pytest.raises(SoundnessError):
                conclude_bound(p, inst, bad,
                               IntervalReal.from_exact(-1000, 128), 128)

    def test_symmetric_max_branch_independent(self):
        # b1 = b2 and LR = LS: the conversion factor is branch-independent
        p = params(K=2, L=3, R1=2, R2=3, S1=2, S2=3)
        m_r = Fraction(p.L * (p.R1 + p.R2 - 1), 2 * 7)
        m_s = Fraction(p.L * (p.S1 + p.S2 - 1), 2 * 7)
        assert m_r == m_s

    def test_indeterminate_report_also_refused(self):
        inputs, state, inst, p, report = self._verified_setup()
        from twolog.engine import CheckResult, VerificationReport
        broken = dict(report.conditions)
        broken["main_inequality"] = CheckResult(CheckStatus.INDETERMINATE, None, "forced")
        bad = VerificationReport(conditions=broken, precision_bits=128)
        with pytest.raises(SoundnessError):
            conclude_bound(p, inst, bad, IntervalReal.from_exact(-1000, 128), 128)
