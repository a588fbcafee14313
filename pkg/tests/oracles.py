"""Independent high-precision oracles used by the test suite.

These deliberately avoid the package's certified code paths: they use mpmath
point arithmetic at several times the working precision, so that agreement
between an enclosure and its oracle is meaningful evidence, not circularity.
"""

from __future__ import annotations

import mpmath


def with_dps(dps):
    return mpmath.workdps(dps)


def mahler_measure(coefficients, dps=120):
    """|lead| * prod max(1, |root|) via an independent root finder."""
    with mpmath.workdps(dps):
        coeffs_high_first = list(reversed([mpmath.mpf(c) for c in coefficients]))
        roots = mpmath.polyroots(coeffs_high_first, maxsteps=200, extraprec=4 * dps)
        measure = mpmath.mpf(abs(coefficients[-1]))
        for r in roots:
            measure *= max(mpmath.mpf(1), abs(r))
        return measure


def log_height(coefficients, dps=120):
    """Absolute logarithmic height log(M(p)) / deg(p)."""
    with mpmath.workdps(dps):
        return mpmath.log(mahler_measure(coefficients, dps)) / (len(coefficients) - 1)


def log_factorial_sum(n, dps=60):
    """Brute-force sum_{k=1}^{n} log k."""
    with mpmath.workdps(dps):
        return mpmath.fsum(mpmath.log(k) for k in range(2, n + 1))


def epsilon_direct(n, dps=60):
    """Direct evaluation of 2*log(n! n^(1-n) (e^n + (e-1)^n))/n using the
    brute-force log-factorial sum."""
    with mpmath.workdps(dps):
        n = mpmath.mpf(n)
        log_fact = log_factorial_sum(int(n), dps)
        log_sum = n + mpmath.log(1 + ((mpmath.e - 1) / mpmath.e) ** n)
        return 2 * (log_fact - (n - 1) * mpmath.log(n) + log_sum) / n


def in_interval(value, interval, slack=0):
    """Whether an mpmath/float value lies in an IntervalReal, with slack for
    the oracle's own rounding."""
    v = mpmath.mpf(str(value)) if not isinstance(value, mpmath.mpf) else value
    return float(interval.lo) - slack <= float(v) <= float(interval.hi) + slack


def interval_close_to(interval, value, tol):
    """The enclosure is within tol of the oracle value (both endpoints).

    Pass high-precision values as decimal strings; they are parsed at 80
    digits here so no precision is lost at the caller's working precision.
    """
    with mpmath.workdps(80):
        v = mpmath.mpf(value) if isinstance(value, str) else +value
        lo = mpfr_str(interval.lo)
        hi = mpfr_str(interval.hi)
        return abs(lo - v) < tol and abs(hi - v) < tol and lo <= hi


def mpfr_str(x):
    return mpmath.mpf(x.as_integer_ratio()[0]) / mpmath.mpf(x.as_integer_ratio()[1])
