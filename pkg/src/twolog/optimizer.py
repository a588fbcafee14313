"""Grid search over the free parameters (rho, mu, L, R1) of the bound.

Each candidate re-solves the k quadratic for its own (rho, mu, L), derives
(K, S1, R2, S2) from the same recipe as the fixed pipeline, and is accepted
only if the engine verifies all conditions from scratch.  The best certified
lower bound wins; no uncertified heuristic ever influences the result beyond
candidate enumeration order, and the winner is independently re-verified at
doubled precision before being returned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .algebraic import abs_log_enclosure, absolute_log_height, log_abs_enclosure
from .engine import (
    BoundCertificate,
    EngineParams,
    TwoLogInstance,
    conclude_bound,
    verify_conditions,
)
from .numerics import (
    DEFAULT_PRECISION,
    IndeterminateError,
    IntervalReal,
    Precision,
    floor_exact,
    log_interval,
    pi_interval,
    square_interval,
    sqrt_interval,
)
from .pipeline import (
    ASSUME_COEFF,
    C_LOGB,
    DELTA0,
    H_FLOOR,
    MU,
    RHO,
    _isqrt_floor,
    _to_fraction,
)

__all__ = ["SearchConfig", "NoCertifiedCandidateError", "optimize", "paper_point_config"]

_A_GUARD_BITS = 32


class NoCertifiedCandidateError(RuntimeError):
    """No grid candidate verified; carries the best failing diagnostics."""

    def __init__(self, message: str, best_failure: Optional[dict] = None):
        super().__init__(message)
        self.best_failure = best_failure


@dataclass(frozen=True)
class SearchConfig:
    """Finite candidate grid; rho and mu entries are exact rationals."""

    rho_grid: tuple
    mu_grid: tuple
    L_range: tuple
    R1_range: tuple
    max_candidates: int = 512
    precision: Precision = DEFAULT_PRECISION

    def __post_init__(self) -> None:
        if not self.rho_grid or not self.mu_grid:
            raise ValueError("rho and mu grids must be nonempty")
        if self.L_range[0] > self.L_range[1] or self.R1_range[0] > self.R1_range[1]:
            raise ValueError("ranges must be nonempty")
        if self.max_candidates < 1:
            raise ValueError("max_candidates must be at least 1")
        for rho in self.rho_grid:
            if not Fraction(rho) > 1:
                raise ValueError("every rho must exceed 1")
        for mu in self.mu_grid:
            if not Fraction(1, 3) <= Fraction(mu) <= 1:
                raise ValueError("every mu must lie in [1/3, 1]")

    def candidates(self):
        count = 0
        for rho in sorted(Fraction(r) for r in self.rho_grid):
            for mu in sorted(Fraction(m) for m in self.mu_grid):
                for L in range(self.L_range[0], self.L_range[1] + 1):
                    for R1 in range(self.R1_range[0], self.R1_range[1] + 1):
                        if count >= self.max_candidates:
                            return
                        count += 1
                        yield rho, mu, L, R1


def paper_point_config(L_center: int, spread: int = 2,
                       precision: Precision = DEFAULT_PRECISION) -> SearchConfig:
    """Grid containing exactly the fixed pipeline's point plus an L window."""
    return SearchConfig(rho_grid=(RHO,), mu_grid=(MU,),
                        L_range=(max(2, L_center - spread), L_center + spread),
                        R1_range=(4, 4), precision=precision)


def _candidate_params(inst: TwoLogInstance, rho: Fraction, mu: Fraction,
                      L: int, R1: int, bits: int):
    """Derive (a1, a2, K, S1, R2, S2) for one candidate, or None when the
    recipe is infeasible (L <= H, ambiguous floors, K < 2)."""
    D = inst.degree_param
    sigma = (1 + 2 * mu - mu * mu) / 2
    a_exact = []
    for alpha in (inst.alpha1, inst.alpha2):
        rhs = (rho * abs_log_enclosure(alpha, bits)
               - log_abs_enclosure(alpha, bits)
               + 2 * D * absolute_log_height(alpha, bits))
        guard = Fraction(1, 2 ** (bits - _A_GUARD_BITS))
        a_exact.append(_to_fraction(rhs.hi) + guard)
    a1, a2 = a_exact
    bprime = Fraction(inst.b1) / a2 + Fraction(inst.b2) / a1
    log_bprime = log_interval(IntervalReal.from_exact(bprime, bits))
    h = (D * (log_bprime + C_LOGB) + DELTA0)
    floor_h = IntervalReal.from_exact(max(Fraction(H_FLOOR), D), bits)
    from .numerics import max_interval
    h = max_interval(h, floor_h)
    log_rho = log_interval(IntervalReal.from_exact(rho, bits))
    lam = sigma * log_rho
    H = h / lam + Fraction(1, 1) / sigma
    if not (IntervalReal.from_exact(L, bits) - H).strictly_above(0):
        return None
    a1_iv = IntervalReal.from_exact(a1, bits)
    a2_iv = IntervalReal.from_exact(a2, bits)
    v0 = Fraction(1, 4) / a1_iv + Fraction(4, 3) / a2_iv + Fraction(L, 12) / a1_iv
    v1 = IntervalReal.from_exact(Fraction(L, 3), bits)
    v2 = lam * (L - H)
    sqrt_k = (v1 + sqrt_interval(square_interval(v1) + 4 * v0 * v2, bits)) / (2 * v2)
    k = square_interval(sqrt_k)
    K_floor = floor_exact(k * (L * a1 * a2))
    if K_floor is None or K_floor + 1 < 2:
        return None
    K = 1 + K_floor
    S1 = -(-L // R1)  # ceil(L / R1), so that R1 * S1 >= L
    R2 = 1 + _isqrt_floor(Fraction((K - 1) * L) * a2 / a1)
    S2 = 1 + _isqrt_floor(Fraction((K - 1) * L) * a1 / a2)
    params = EngineParams(K=K, L=L, R1=R1, R2=R2, S1=S1, S2=S2, rho=rho, mu=mu)
    return params, a1, a2, h


def optimize(inst: TwoLogInstance, cfg: SearchConfig) -> BoundCertificate:
    """Best certified candidate over the grid; deterministic for a fixed cfg.

    Ties on the certified bound break toward lexicographically smallest
    (K, L, rho, mu).  Raises NoCertifiedCandidateError when nothing verifies.
    """
    bits = cfg.precision.bits
    best = None
    best_key = None
    best_weights = None
    best_failure = None
    for rho, mu, L, R1 in cfg.candidates():
        derived = _candidate_params(inst, rho, mu, L, R1, bits)
        if derived is None:
            continue
        params, a1, a2, h = derived
        report = verify_conditions(params, inst, a1, a2, bits)
        if not report.all_verified:
            failure = {
                "params": params,
                "failed": {name: report.conditions[name] for name in report.failed_names()},
            }
            if best_failure is None:
                best_failure = failure
            continue
        assume = -(ASSUME_COEFF * IntervalReal.from_exact(a2, bits) * square_interval(h))
        cert = conclude_bound(params, inst, report, assume, bits,
                              extra_trail=(f"optimizer candidate rho={rho}, mu={mu}",))
        key = (-_to_fraction(cert.bound_log_abs_lambda.lo),
               params.K, params.L, rho, mu)
        if best_key is None or key < best_key:
            best, best_key, best_weights = cert, key, (a1, a2)
    if best is None:
        raise NoCertifiedCandidateError("no certified candidate in the grid", best_failure)
    # independent re-verification from scratch at doubled precision
    recheck = verify_conditions(best.params, inst, best_weights[0], best_weights[1],
                                bits * 2)
    if not recheck.all_verified:
        raise NoCertifiedCandidateError(
            "winning candidate failed re-verification at doubled precision",
            {"params": best.params, "failed": recheck.failed_names()})
    return best
