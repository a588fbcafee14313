"""Exact algebraic numbers: minimal polynomials, certified root enclosures,
absolute logarithmic height, and exact unit-circle / root-of-unity decisions.

An algebraic number is a primitive irreducible integer polynomial together
with a selected root.  Initial root isolation uses exact rational rectangles
(Collins-Krandick style, via sympy); refinement is an interval Newton
iteration in outward-rounded complex rectangle arithmetic, with certified
quadrisection as a fallback.  All yes/no answers (|alpha| = 1, root of unity)
are exact decisions, never numerical guesses:

* roots on the unit circle exist only when the polynomial is self-inversive
  (equal to plus or minus its coefficient reversal), and
* for a self-inversive polynomial, a root z lies on the circle exactly when
  1/conj(z) -- itself always a root -- can only be z.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Union

import gmpy2
import sympy
from gmpy2 import mpfr

from .numerics import (
    DEFAULT_PRECISION,
    MAX_PRECISION_BITS,
    DomainError,
    IndeterminateError,
    IntervalReal,
    Precision,
    abs_interval,
    atan2_interval,
    log_interval,
    pi_interval,
    sqrt_interval,
    square_interval,
)

__all__ = [
    "IntegerPolynomial",
    "AlgebraicNumber",
    "ComplexEnclosure",
    "AmbiguousRootError",
    "ParseTextError",
    "conjugate_enclosures",
    "absolute_log_height",
    "has_unit_modulus",
    "is_root_of_unity",
    "root_of_unity_order",
    "root_of_unity_exponent",
    "principal_argument",
    "log_abs_enclosure",
    "abs_log_enclosure",
    "parse_root_hint",
]

_REFINE_GUARD_BITS = 16


class AmbiguousRootError(DomainError):
    """The root hint does not single out one root of the minimal polynomial."""

    def __init__(self, message: str, candidates: Sequence[tuple] = ()):
        super().__init__(message)
        self.candidates = list(candidates)


class ParseTextError(DomainError):
    """Malformed polynomial or root-hint text."""


# ---------------------------------------------------------------------------
# complex rectangle arithmetic
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ComplexEnclosure:
    """Axis-aligned rectangle [re] x [im] certified to contain a point."""

    re: IntervalReal
    im: IntervalReal

    @staticmethod
    def from_exact(re: Fraction, im: Fraction, prec: Union[Precision, int, None] = None
                   ) -> "ComplexEnclosure":
        return ComplexEnclosure(IntervalReal.from_exact(re, prec),
                                IntervalReal.from_exact(im, prec))

    @staticmethod
    def from_box(re_lo: Fraction, re_hi: Fraction, im_lo: Fraction, im_hi: Fraction,
                 prec: Union[Precision, int, None] = None) -> "ComplexEnclosure":
        re = IntervalReal.hull(IntervalReal.from_exact(re_lo, prec),
                               IntervalReal.from_exact(re_hi, prec))
        im = IntervalReal.hull(IntervalReal.from_exact(im_lo, prec),
                               IntervalReal.from_exact(im_hi, prec))
        return ComplexEnclosure(re, im)

    def __add__(self, other: "ComplexEnclosure") -> "ComplexEnclosure":
        return ComplexEnclosure(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "ComplexEnclosure") -> "ComplexEnclosure":
        return ComplexEnclosure(self.re - other.re, self.im - other.im)

    def __mul__(self, other: "ComplexEnclosure") -> "ComplexEnclosure":
        return ComplexEnclosure(self.re * other.re - self.im * other.im,
                                self.re * other.im + self.im * other.re)

    def __neg__(self) -> "ComplexEnclosure":
        return ComplexEnclosure(-self.re, -self.im)

    def conj(self) -> "ComplexEnclosure":
        return ComplexEnclosure(self.re, -self.im)

    def scale_int(self, n: int) -> "ComplexEnclosure":
        return ComplexEnclosure(self.re * n, self.im * n)

    def add_int(self, n: int) -> "ComplexEnclosure":
        return ComplexEnclosure(self.re + n, self.im)

    def __truediv__(self, other: "ComplexEnclosure") -> "ComplexEnclosure":
        denom = square_interval(other.re) + square_interval(other.im)
        num = self * other.conj()
        return ComplexEnclosure(num.re / denom, num.im / denom)

    def recip_conj(self) -> "ComplexEnclosure":
        """1/conj(z) = z / |z|^2; requires the rectangle to exclude 0."""
        denom = square_interval(self.re) + square_interval(self.im)
        return ComplexEnclosure(self.re / denom, self.im / denom)

    def modulus(self) -> IntervalReal:
        return sqrt_interval(square_interval(self.re) + square_interval(self.im))

    def contains_zero(self) -> bool:
        return self.re.contains(0) and self.im.contains(0)

    def contains_exact(self, re: Fraction, im: Fraction) -> bool:
        return self.re.contains(re) and self.im.contains(im)

    def intersects(self, other: "ComplexEnclosure") -> bool:
        return self.re.overlaps(other.re) and self.im.overlaps(other.im)

    def width(self) -> mpfr:
        return max(self.re.width(), self.im.width())

    def midpoint(self) -> "ComplexEnclosure":
        return ComplexEnclosure(IntervalReal.point(self.re.mid()),
                                IntervalReal.point(self.im.mid()))

    def hull(self, other: "ComplexEnclosure") -> "ComplexEnclosure":
        return ComplexEnclosure(IntervalReal.hull(self.re, other.re),
                                IntervalReal.hull(self.im, other.im))


def _eval_poly(coeffs: Sequence[int], z: ComplexEnclosure, prec: int) -> ComplexEnclosure:
    # Horner, highest coefficient first in the recursion
    acc = ComplexEnclosure.from_exact(Fraction(coeffs[-1]), Fraction(0), prec)
    for c in reversed(coeffs[:-1]):
        acc = (acc * z).add_int(c)
    return acc


# ---------------------------------------------------------------------------
# integer polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntegerPolynomial:
    """Primitive integer polynomial, constant term first, positive leading
    coefficient, irreducible over Q unless constructed with trusted=True."""

    coefficients: tuple
    trusted: bool = field(default=False, compare=False)

    def __post_init__(self) -> None:
        coeffs = tuple(int(c) for c in self.coefficients)
        if len(coeffs) < 2 or coeffs[-1] == 0:
            raise DomainError("polynomial must have degree >= 1 with nonzero leading coefficient")
        content = 0
        for c in coeffs:
            content = math.gcd(content, abs(c))
        if content != 1:
            coeffs = tuple(c // content for c in coeffs)
        if coeffs[-1] < 0:
            coeffs = tuple(-c for c in coeffs)
        object.__setattr__(self, "coefficients", coeffs)
        if not self.trusted and not self._sympy().is_irreducible:
            raise DomainError(f"polynomial {coeffs} is reducible over Q; "
                              "pass trusted=True only for a known minimal polynomial")

    @staticmethod
    def from_text(text: str, trusted: bool = False) -> "IntegerPolynomial":
        """Parse the comma-separated coefficient format, constant first."""
        try:
            coeffs = tuple(int(part.strip()) for part in text.split(","))
        except ValueError as exc:
            raise ParseTextError(f"cannot parse polynomial coefficients from {text!r}") from exc
        return IntegerPolynomial(coeffs, trusted=trusted)

    def _sympy(self) -> sympy.Poly:
        x = sympy.Symbol("x")
        return sympy.Poly(list(reversed(self.coefficients)), x)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def leading_coefficient(self) -> int:
        return self.coefficients[-1]

    @property
    def constant_term(self) -> int:
        return self.coefficients[0]

    def reversed_coefficients(self) -> tuple:
        return tuple(reversed(self.coefficients))

    def is_self_inversive(self) -> bool:
        rev = self.reversed_coefficients()
        return rev == self.coefficients or tuple(-c for c in rev) == self.coefficients

    def derivative_coefficients(self) -> tuple:
        return tuple(i * c for i, c in enumerate(self.coefficients) if i >= 1)

    def evaluate_exact(self, x: Fraction) -> Fraction:
        acc = Fraction(self.coefficients[-1])
        for c in reversed(self.coefficients[:-1]):
            acc = acc * x + c
        return acc

    def text(self) -> str:
        return ",".join(str(c) for c in self.coefficients)

    def __str__(self) -> str:
        return self.text()


def parse_root_hint(text: str) -> tuple:
    """Parse a 're,im' decimal pair into exact Fractions."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2:
        raise ParseTextError(f"root hint must be 're,im', got {text!r}")
    try:
        return Fraction(parts[0]), Fraction(parts[1])
    except ValueError as exc:
        raise ParseTextError(f"cannot parse root hint {text!r}") from exc


# ---------------------------------------------------------------------------
# root isolation and refinement
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Box:
    """Exact rational isolating box for one root; real roots have im_lo=im_hi=0."""

    re_lo: Fraction
    re_hi: Fraction
    im_lo: Fraction
    im_hi: Fraction
    is_real: bool

    def enclosure(self, prec: Union[Precision, int]) -> ComplexEnclosure:
        return ComplexEnclosure.from_box(self.re_lo, self.re_hi, self.im_lo, self.im_hi, prec)

    def center(self) -> tuple:
        return ((self.re_lo + self.re_hi) / 2, (self.im_lo + self.im_hi) / 2)

    def dist_sq_to(self, re: Fraction, im: Fraction) -> Fraction:
        dre = max(self.re_lo - re, re - self.re_hi, Fraction(0))
        dim = max(self.im_lo - im, im - self.im_hi, Fraction(0))
        return dre * dre + dim * dim

    def max_dist_sq_to(self, re: Fraction, im: Fraction) -> Fraction:
        dre = max(abs(self.re_lo - re), abs(self.re_hi - re))
        dim = max(abs(self.im_lo - im), abs(self.im_hi - im))
        return dre * dre + dim * dim


def _rational_of(expr: sympy.Expr) -> Fraction:
    r = sympy.Rational(expr)
    return Fraction(int(r.p), int(r.q))


@lru_cache(maxsize=256)
def _isolate_boxes(coefficients: tuple) -> tuple:
    """Pairwise-disjoint exact isolating boxes for all roots, sorted by
    (re_lo, im_lo); real roots come from the real isolation so their
    imaginary parts are exactly zero."""
    x = sympy.Symbol("x")
    poly = sympy.Poly(list(reversed(coefficients)), x)
    eps = sympy.Rational(1, 2 ** 16)
    real_parts, complex_parts = poly.intervals(all=True, eps=eps)
    boxes = []
    for (lo, hi), mult in real_parts:
        if mult != 1:
            raise DomainError("repeated root in supposedly squarefree polynomial")
        a, b = _rational_of(lo), _rational_of(hi)
        if a > b:
            a, b = b, a
        boxes.append(_Box(a, b, Fraction(0), Fraction(0), True))
    for (c1, c2), mult in complex_parts:
        if mult != 1:
            raise DomainError("repeated root in supposedly squarefree polynomial")
        r1, i1 = (sympy.re(c1), sympy.im(c1))
        r2, i2 = (sympy.re(c2), sympy.im(c2))
        re_lo, re_hi = sorted((_rational_of(r1), _rational_of(r2)))
        im_lo, im_hi = sorted((_rational_of(i1), _rational_of(i2)))
        boxes.append(_Box(re_lo, re_hi, im_lo, im_hi, False))
    if len(boxes) != len(coefficients) - 1:
        raise DomainError("root isolation did not produce one box per root")
    boxes.sort(key=lambda b: (b.re_lo, b.im_lo))
    return tuple(boxes)


def _newton_step(coeffs: tuple, deriv: tuple, z: ComplexEnclosure, bits: int
                 ) -> Optional[ComplexEnclosure]:
    # Mean-value form for the system (Re p, Im p): each component is expanded
    # at its own point of the box, so the determinant is the general product
    # a*a' + b*b' over independent choices; square images would be unsound.
    dz = _eval_poly(deriv, z, bits)
    det = dz.re * dz.re + dz.im * dz.im
    if det.contains(0):
        return None
    m = z.midpoint()
    pm = _eval_poly(coeffs, m, bits)
    num = pm * dz.conj()
    return ComplexEnclosure(m.re - num.re / det, m.im - num.im / det)


def _intersect(a: IntervalReal, b: IntervalReal) -> Optional[IntervalReal]:
    lo = max(a.lo, b.lo)
    hi = min(a.hi, b.hi)
    if lo > hi:
        return None
    return IntervalReal(lo, hi)


def _intersect_box(a: ComplexEnclosure, b: ComplexEnclosure) -> Optional[ComplexEnclosure]:
    re = _intersect(a.re, b.re)
    im = _intersect(a.im, b.im)
    if re is None or im is None:
        return None
    return ComplexEnclosure(re, im)


def _split(iv: IntervalReal) -> tuple:
    m = IntervalReal.point(iv.mid())
    return IntervalReal(iv.lo, m.lo), IntervalReal(m.lo, iv.hi)


def _quadrisect(coeffs: tuple, z: ComplexEnclosure, bits: int, keep_real: bool
                ) -> ComplexEnclosure:
    """Discard certified root-free quarters; hull the rest.  Never loses the
    root because discarding requires 0 outside the image enclosure."""
    re_parts = _split(z.re)
    im_parts = (z.im,) if keep_real else _split(z.im)
    survivors = []
    for re in re_parts:
        for im in im_parts:
            candidate = ComplexEnclosure(re, im)
            if _eval_poly(coeffs, candidate, bits).contains_zero():
                survivors.append(candidate)
    if not survivors:
        raise IndeterminateError("root vanished during quadrisection (internal error)")
    out = survivors[0]
    for s in survivors[1:]:
        out = out.hull(s)
    return out


def _refine_box(coefficients: tuple, box: _Box, bits: int) -> ComplexEnclosure:
    """Shrink the isolating box to roughly `bits` of relative accuracy."""
    deriv = tuple(i * c for i, c in enumerate(coefficients) if i >= 1)
    work = bits + _REFINE_GUARD_BITS
    z = box.enclosure(work)
    with gmpy2.context(precision=64):
        scale = max(abs(z.re.lo), abs(z.re.hi), abs(z.im.lo), abs(z.im.hi), mpfr(1))
        target = scale * mpfr(2) ** (-bits)
    stall = 0
    while z.width() > target:
        step = _newton_step(coefficients, deriv, z, work)
        if step is not None:
            narrowed = _intersect_box(z, step)
        else:
            narrowed = None
        if narrowed is None or narrowed.width() >= z.width():
            narrowed = _quadrisect(coefficients, z, work, box.is_real)
            if narrowed.width() >= z.width():
                stall += 1
                work *= 2
                if stall > 8 or work > 64 * MAX_PRECISION_BITS:
                    raise IndeterminateError(
                        f"cannot refine root box of {coefficients} to {bits} bits")
                z = ComplexEnclosure(
                    IntervalReal.hull(IntervalReal.from_exact(_to_fraction(z.re.lo), work),
                                      IntervalReal.from_exact(_to_fraction(z.re.hi), work)),
                    IntervalReal.hull(IntervalReal.from_exact(_to_fraction(z.im.lo), work),
                                      IntervalReal.from_exact(_to_fraction(z.im.hi), work)))
                continue
        z = narrowed
        stall = 0
    return z


def _to_fraction(x: mpfr) -> Fraction:
    n, d = x.as_integer_ratio()
    return Fraction(int(n), int(d))


@lru_cache(maxsize=1024)
def _refined_roots(coefficients: tuple, bits: int) -> tuple:
    boxes = _isolate_boxes(coefficients)
    if len(coefficients) == 2:
        # rational root, exactly representable
        root = Fraction(-coefficients[0], coefficients[1])
        return (ComplexEnclosure.from_exact(root, Fraction(0), bits),)
    return tuple(_refine_box(coefficients, box, bits) for box in boxes)


# ---------------------------------------------------------------------------
# algebraic numbers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AlgebraicNumber:
    """A selected root of an irreducible primitive integer polynomial.

    The root is identified by its index in the canonical ordering of the
    isolating boxes; ``root_hint`` and ``isolation_radius`` describe a disk
    certified at construction to contain exactly this root.
    """

    minpoly: IntegerPolynomial
    root_index: int
    root_hint: tuple = field(default=None)
    isolation_radius: Fraction = field(default=None)

    def __post_init__(self) -> None:
        boxes = _isolate_boxes(self.minpoly.coefficients)
        if not 0 <= self.root_index < len(boxes):
            raise DomainError(f"root index {self.root_index} out of range")
        if self.root_hint is None:
            centre = boxes[self.root_index].center()
            object.__setattr__(self, "root_hint", centre)
        if self.isolation_radius is None:
            object.__setattr__(self, "isolation_radius",
                               _certify_disk(boxes, self.root_index, self.root_hint))

    # -- constructors --------------------------------------------------------

    @staticmethod
    def from_hint(minpoly: IntegerPolynomial, re: Fraction, im: Fraction) -> "AlgebraicNumber":
        boxes = _isolate_boxes(minpoly.coefficients)
        dists = [box.dist_sq_to(re, im) for box in boxes]
        order = sorted(range(len(boxes)), key=lambda i: dists[i])
        best = order[0]
        if len(order) > 1 and dists[order[1]] == dists[best]:
            cands = [(str(boxes[i].center()[0]), str(boxes[i].center()[1]))
                     for i in order if dists[i] == dists[best]]
            raise AmbiguousRootError(
                f"hint ({re},{im}) is equidistant from {len(cands)} roots", cands)
        return AlgebraicNumber(minpoly, best, root_hint=(re, im))

    @staticmethod
    def from_texts(minpoly_text: str, root_text: Optional[str] = None,
                   trusted: bool = False) -> "AlgebraicNumber":
        poly = IntegerPolynomial.from_text(minpoly_text, trusted=trusted)
        if root_text is None:
            boxes = _isolate_boxes(poly.coefficients)
            if len(boxes) != 1:
                cands = [(str(b.center()[0]), str(b.center()[1])) for b in boxes]
                raise AmbiguousRootError(
                    f"polynomial has {len(boxes)} roots; a root hint is required", cands)
            return AlgebraicNumber(poly, 0)
        re, im = parse_root_hint(root_text)
        return AlgebraicNumber.from_hint(poly, re, im)

    @staticmethod
    def from_rational(q: Fraction) -> "AlgebraicNumber":
        q = Fraction(q)
        return AlgebraicNumber(IntegerPolynomial((-q.numerator, q.denominator)), 0)

    @staticmethod
    def imaginary_unit() -> "AlgebraicNumber":
        return AlgebraicNumber.from_hint(IntegerPolynomial((1, 0, 1)), Fraction(0), Fraction(1))

    # -- basic structure -------------------------------------------------------

    @property
    def degree(self) -> int:
        return self.minpoly.degree

    @property
    def is_real(self) -> bool:
        return _isolate_boxes(self.minpoly.coefficients)[self.root_index].is_real

    def is_zero(self) -> bool:
        return self.minpoly.coefficients == (0, 1)

    def enclosure(self, prec: Union[Precision, int, None] = None) -> ComplexEnclosure:
        bits = prec.bits if isinstance(prec, Precision) else int(prec or DEFAULT_PRECISION.bits)
        return _refined_roots(self.minpoly.coefficients, bits)[self.root_index]

    def __str__(self) -> str:
        re, im = self.root_hint
        return f"root of {self.minpoly.text()} near ({float(re):.6g},{float(im):.6g})"


def _certify_disk(boxes: tuple, idx: int, hint: tuple) -> Fraction:
    """Rational radius r such that the disk (hint, r) contains box idx and
    certifiably excludes every other root box."""
    re, im = Fraction(hint[0]), Fraction(hint[1])
    r_sq = boxes[idx].max_dist_sq_to(re, im)
    for j, other in enumerate(boxes):
        if j != idx and other.dist_sq_to(re, im) <= r_sq:
            raise AmbiguousRootError(
                f"hint ({re},{im}) does not separate root {idx} from root {j}",
                [(str(b.center()[0]), str(b.center()[1])) for b in boxes])
    return _rational_sqrt_upper(r_sq)


def _rational_sqrt_upper(q: Fraction) -> Fraction:
    if q == 0:
        return Fraction(0)
    scale = 2 ** 64
    n = q.numerator * scale * scale
    root = math.isqrt(n // q.denominator) + 1
    return Fraction(root, scale)


# ---------------------------------------------------------------------------
# spec operations
# ---------------------------------------------------------------------------


def conjugate_enclosures(alpha: AlgebraicNumber,
                         prec: Union[Precision, int, None] = None) -> list:
    """Disjoint enclosures of all deg(minpoly) conjugates."""
    bits = prec.bits if isinstance(prec, Precision) else int(prec or DEFAULT_PRECISION.bits)
    return list(_refined_roots(alpha.minpoly.coefficients, bits))


def _ladder(start_bits: int):
    bits = start_bits
    while True:
        yield bits
        if bits >= MAX_PRECISION_BITS:
            return
        bits = min(bits * 2, MAX_PRECISION_BITS)


def _on_circle_by_pairing(coefficients: tuple, idx: int, bits: int) -> Optional[bool]:
    """For self-inversive polynomials: is root idx exactly on |z| = 1?

    1/conj(z) is always a root; if its enclosure can only meet the box of z
    itself, then 1/conj(z) = z exactly, i.e. |z| = 1.  If it cannot meet the
    box of z, then |z| != 1.  Returns None while unresolved.
    """
    roots = _refined_roots(coefficients, bits)
    box = roots[idx]
    if box.contains_zero():
        return None
    mirrored = box.recip_conj()
    hits = [j for j, other in enumerate(roots) if mirrored.intersects(other)]
    if idx not in hits:
        return False
    if hits == [idx]:
        return True
    return None


@lru_cache(maxsize=512)
def _unit_modulus_cached(coefficients: tuple, idx: int) -> bool:
    poly = IntegerPolynomial(coefficients, trusted=True)
    if not poly.is_self_inversive():
        # an irreducible polynomial that is not +-(its reversal) shares no
        # root with its reversal, and roots on |z|=1 are exactly the common
        # roots; hence none of its roots lies on the circle
        return False
    for bits in _ladder(DEFAULT_PRECISION.bits):
        modulus = _refined_roots(coefficients, bits)[idx].modulus()
        if modulus.strictly_above(1) or modulus.strictly_below(1):
            return False
        decided = _on_circle_by_pairing(coefficients, idx, bits)
        if decided is not None:
            return decided
    raise IndeterminateError(
        f"cannot decide |alpha| = 1 for root {idx} of {coefficients} "
        f"at {MAX_PRECISION_BITS} bits")


def has_unit_modulus(alpha: AlgebraicNumber) -> bool:
    """Exact decision of |alpha| = 1."""
    if alpha.is_zero():
        return False
    return _unit_modulus_cached(alpha.minpoly.coefficients, alpha.root_index)


# -- root of unity -----------------------------------------------------------


def _poly_mulmod(a: list, b: list, mod: Sequence[int]) -> list:
    # mod is monic with constant term first
    deg = len(mod) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] += ai * bj
    for i in range(len(prod) - 1, deg - 1, -1):
        c = prod[i]
        if c:
            prod[i] = 0
            for j in range(deg):
                prod[i - deg + j] -= c * mod[j]
    out = prod[:deg]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def _x_pow_mod(m: int, mod: Sequence[int]) -> list:
    result = [1]
    base = [0, 1] if len(mod) > 2 else _poly_mulmod([0, 1], [1], mod)
    e = m
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, mod)
        base = _poly_mulmod(base, base, mod)
        e >>= 1
    return result


@lru_cache(maxsize=512)
def _unity_order_cached(coefficients: tuple) -> Optional[int]:
    poly = IntegerPolynomial(coefficients, trusted=True)
    if poly.leading_coefficient != 1 or abs(poly.constant_term) != 1:
        # roots of unity are algebraic integers with all conjugates of
        # modulus one, forcing leading and constant coefficients +-1
        return None
    d = poly.degree
    bound = 2 * d * d + 4
    for m in range(1, bound + 1):
        if sympy.totient(m) != d:
            continue
        residue = _x_pow_mod(m, coefficients)
        if residue == [1]:
            return m
    return None


def root_of_unity_order(alpha: AlgebraicNumber) -> Optional[int]:
    """The order m with alpha^m = 1, or None if alpha is not a root of unity."""
    return _unity_order_cached(alpha.minpoly.coefficients)


def is_root_of_unity(alpha: AlgebraicNumber) -> bool:
    return root_of_unity_order(alpha) is not None


def root_of_unity_exponent(alpha: AlgebraicNumber) -> tuple:
    """(u, m) with alpha = exp(2*pi*i*u/m), 0 <= u < m, for a root of unity."""
    m = root_of_unity_order(alpha)
    if m is None:
        raise DomainError("not a root of unity")
    for bits in _ladder(DEFAULT_PRECISION.bits):
        arg = principal_argument(alpha, bits)
        scaled = arg * m / (pi_interval(bits) * 2)
        lo = math.floor(_to_fraction(scaled.lo))
        hi = math.floor(_to_fraction(scaled.hi))
        candidates = {u % m for u in range(lo, hi + 2)
                      if scaled.contains(Fraction(u)) or lo <= u <= hi}
        exact = {u % m for u in range(lo - 1, hi + 2) if scaled.contains(Fraction(u))}
        if len(exact) == 1:
            return exact.pop(), m
        if len(candidates) == 1:
            return candidates.pop(), m
    raise IndeterminateError(f"cannot pin down exponent of root of unity of order {m}")


# -- height -------------------------------------------------------------------


@lru_cache(maxsize=512)
def _circle_classification(coefficients: tuple, bits_final: int) -> tuple:
    """Per-root classification at certified precision: ('in'|'on'|'out', bits).

    'on' is an exact statement (|root| = 1); 'in'/'out' are certified strict
    inequalities at the returned working precision.
    """
    poly = IntegerPolynomial(coefficients, trusted=True)
    self_inv = poly.is_self_inversive()
    n_roots = len(_isolate_boxes(coefficients))
    labels: list = [None] * n_roots
    bits_used = bits_final
    for bits in _ladder(bits_final):
        bits_used = bits
        roots = _refined_roots(coefficients, bits)
        for i in range(n_roots):
            if labels[i] is not None:
                continue
            modulus = roots[i].modulus()
            if modulus.strictly_above(1):
                labels[i] = "out"
            elif modulus.strictly_below(1):
                labels[i] = "in"
            elif self_inv:
                decided = _on_circle_by_pairing(coefficients, i, bits)
                if decided is True:
                    labels[i] = "on"
                # decided False leaves a strict side still to certify
        if all(label is not None for label in labels):
            return tuple(labels), bits_used
    raise IndeterminateError(
        f"conjugate of {coefficients} straddles |z| = 1 at {MAX_PRECISION_BITS} bits")


def absolute_log_height(alpha: AlgebraicNumber,
                        prec: Union[Precision, int, None] = None) -> IntervalReal:
    """Enclosure of h(alpha) = (log|a| + sum log max(1,|conjugate|)) / degree."""
    bits = prec.bits if isinstance(prec, Precision) else int(prec or DEFAULT_PRECISION.bits)
    coeffs = alpha.minpoly.coefficients
    if root_of_unity_order(alpha) is not None:
        zero = IntervalReal.from_exact(0, bits)
        return zero
    labels, bits_used = _circle_classification(coeffs, bits)
    roots = _refined_roots(coeffs, bits_used)
    total = log_interval(IntervalReal.from_exact(alpha.minpoly.leading_coefficient, bits_used))
    for label, root in zip(labels, roots):
        if label == "out":
            total = total + log_interval(root.modulus())
    result = total / alpha.degree
    # h(alpha) >= 0 always; clamp rounding slack on the lower end
    lo = max(result.lo, mpfr(0))
    return IntervalReal(lo, max(result.hi, mpfr(0)))


# -- argument and logarithm ----------------------------------------------------


def principal_argument(alpha: AlgebraicNumber,
                       prec: Union[Precision, int, None] = None) -> IntervalReal:
    """Enclosure of arg(alpha) in (-pi, pi]; exact 0 / pi for real alpha."""
    if alpha.is_zero():
        raise DomainError("argument of zero is undefined")
    bits = prec.bits if isinstance(prec, Precision) else int(prec or DEFAULT_PRECISION.bits)
    if alpha.is_real:
        box = _isolate_boxes(alpha.minpoly.coefficients)[alpha.root_index]
        if box.re_lo > 0:
            return IntervalReal.from_exact(0, bits)
        if box.re_hi < 0:
            return pi_interval(bits)
        # an isolating interval containing 0 forces the root 0, excluded above
        raise IndeterminateError("real root enclosure straddles zero")
    for attempt in _ladder(bits):
        z = alpha.enclosure(attempt)
        if z.im.strictly_above(0) or z.im.strictly_below(0):
            return atan2_interval(z.im, z.re, bits if attempt == bits else attempt)
    raise IndeterminateError("cannot separate root from the real axis")


def log_abs_enclosure(alpha: AlgebraicNumber,
                      prec: Union[Precision, int, None] = None) -> IntervalReal:
    """Enclosure of log|alpha|; exactly [0,0] when |alpha| = 1 is certified."""
    bits = prec.bits if isinstance(prec, Precision) else int(prec or DEFAULT_PRECISION.bits)
    if has_unit_modulus(alpha):
        return IntervalReal.from_exact(0, bits)
    return log_interval(alpha.enclosure(bits).modulus())


def abs_log_enclosure(alpha: AlgebraicNumber,
                      prec: Union[Precision, int, None] = None) -> IntervalReal:
    """Enclosure of |log alpha| = sqrt(log|alpha|^2 + arg(alpha)^2)."""
    bits = prec.bits if isinstance(prec, Precision) else int(prec or DEFAULT_PRECISION.bits)
    log_mod = log_abs_enclosure(alpha, bits)
    arg = principal_argument(alpha, bits)
    return sqrt_interval(square_interval(log_mod) + square_interval(arg))
