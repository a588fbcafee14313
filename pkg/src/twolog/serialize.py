"""Canonical text/JSON rendering of certificates and replay reports.

Decimal output always prints enclosure endpoints, never midpoints: the lower
endpoint is rounded down and the upper endpoint rounded up at the requested
number of significant digits, so the printed interval still contains the
value it certifies.  Field order is fixed so that JSON round-trips
byte-identically.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Optional

from .engine import CheckResult, EngineParams
from .numerics import IntervalReal
from .pipeline import PipelineCertificate, ReplayReport

__all__ = [
    "directed_decimal",
    "interval_record",
    "certificate_record",
    "replay_record",
    "optimizer_record",
    "comparison_record",
    "render_json",
    "render_text",
]

SCHEMA_VERSION = "v1"


def _fraction_of(x) -> Fraction:
    n, d = x.as_integer_ratio()
    return Fraction(int(n), int(d))


def directed_decimal(x, digits: int, round_up: bool) -> str:
    """Directed decimal rendering of an mpfr endpoint, scientific notation."""
    import gmpy2
    if gmpy2.is_nan(x):
        raise ValueError("NaN endpoint")
    if gmpy2.is_infinite(x):
        return "inf" if x > 0 else "-inf"
    f = _fraction_of(x)
    if f == 0:
        return "0"
    mag = abs(f)
    # decimal exponent e with 10^e <= mag < 10^(e+1)
    e = len(str(mag.numerator)) - len(str(mag.denominator))
    while Fraction(10) ** e > mag:
        e -= 1
    while Fraction(10) ** (e + 1) <= mag:
        e += 1
    scaled = f * Fraction(10) ** (digits - 1 - e)
    mant = math.ceil(scaled) if round_up else math.floor(scaled)
    if abs(mant) >= 10 ** digits:
        # rounding crossed a power of ten
        e += 1
        scaled = f * Fraction(10) ** (digits - 1 - e)
        mant = math.ceil(scaled) if round_up else math.floor(scaled)
    sign = "-" if mant < 0 else ""
    text = str(abs(mant)).rjust(digits, "0")
    return f"{sign}{text[0]}.{text[1:]}e{e:+d}"


def interval_record(iv: Optional[IntervalReal], digits: int) -> Optional[dict]:
    if iv is None:
        return None
    return {
        "lo": directed_decimal(iv.lo, digits, round_up=False),
        "hi": directed_decimal(iv.hi, digits, round_up=True),
    }


def _check_record(check: CheckResult, digits: int) -> dict:
    margin = interval_record(check.margin, digits)
    return {
        "status": check.status.value,
        "margin_lo": None if margin is None else margin["lo"],
        "margin_hi": None if margin is None else margin["hi"],
    }


def _params_record(params: Optional[EngineParams]) -> Optional[dict]:
    if params is None:
        return None
    return {
        "K": params.K, "L": params.L,
        "R1": params.R1, "R2": params.R2,
        "S1": params.S1, "S2": params.S2,
        "rho": str(params.rho), "mu": str(params.mu),
    }


def certificate_record(cert: PipelineCertificate, digits: int = 15) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "kind": "certificate",
        "bound": interval_record(cert.bound, digits),
        "a": interval_record(cert.a, digits),
        "h": interval_record(cert.h, digits),
        "D": str(cert.D),
        "b1": cert.b1,
        "b2": cert.b2,
        "path": cert.path,
        "params": _params_record(cert.params),
        "checks": {name: _check_record(c, digits)
                   for name, c in sorted(cert.checks.items())},
        "assumption_trail": list(cert.assumption_trail),
        "precision_bits": cert.precision_bits,
        "derived_bound": interval_record(cert.derived_bound, digits),
        "reduced_b1": cert.reduced_b1,
        "reduced_b2": cert.reduced_b2,
        "h_branch": cert.h_branch,
    }


def replay_record(report: ReplayReport, digits: int = 15, label: str = "") -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "kind": "replay",
        "label": label,
        "checks": {name: _check_record(c, digits)
                   for name, c in sorted(report.checks.items())},
        "chain_discrepancies": sorted(report.chain_discrepancies),
        "unexpected_failures": sorted(report.unexpected_failures),
        "ok": report.ok,
        "precision_bits": report.precision_bits,
    }


def optimizer_record(cert, digits: int = 15) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "kind": "optimizer-certificate",
        "bound": interval_record(cert.bound_log_abs_lambda, digits),
        "params": _params_record(cert.params),
        "checks": {name: _check_record(c, digits)
                   for name, c in sorted(cert.report.conditions.items())},
        "assumption_trail": list(cert.assumption_trail),
        "precision_bits": cert.report.precision_bits,
    }


def comparison_record(cert_record: dict, baseline: dict, digits: int = 15) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "kind": "comparison",
        "certified": cert_record,
        "baseline": {
            "a": interval_record(baseline["a"], digits),
            "h": interval_record(baseline["h"], digits),
            "log_bound": interval_record(baseline["log_bound"], digits),
            "note": baseline["note"],
        },
    }


def render_json(record: dict) -> str:
    return json.dumps(record, indent=2) + "\n"


def _flatten(record, prefix="", lines=None):
    if lines is None:
        lines = []
    if isinstance(record, dict):
        for key, value in record.items():
            if isinstance(value, dict):
                _flatten(value, f"{prefix}{key}.", lines)
            elif isinstance(value, list):
                for i, item in enumerate(value):
                    _flatten(item, f"{prefix}{key}[{i}].", lines)
            else:
                lines.append(f"{prefix}{key} = {value}")
    else:
        lines.append(f"{prefix.rstrip('.')} = {record}")
    return lines


def render_text(record: dict) -> str:
    """Line-oriented rendering with the same numeric content as the JSON."""
    return "\n".join(_flatten(record)) + "\n"
