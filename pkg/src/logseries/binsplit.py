"""Binary splitting evaluation of a SeriesSpec to decimal digits.

The series is compiled once into integer-only per-term factors (motive
parameter denominators, rho's fraction, and polynomial coefficient
denominators are all cleared up front), then term ranges are folded
into 4-integer nodes that merge exactly. The partial sum over a range
is T/(B*Q), so the only inexact step is one final scaled division.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .seriesdef import CATALOG_TARGETS, SeriesSpec, estimate_terms

LEAF_TERMS = 8


class VerificationError(Exception):
    """Two series that must agree do not."""


@dataclass(frozen=True)
class SplitNode:
    """Exact accumulator for a contiguous term range [lo, hi).

    P: product of cleared motive-ratio numerators x(k)
    Q: product of cleared motive-ratio denominators y(k)
    B: product of per-term polynomial denominators
    T: weighted sum such that sum over the range = T / (B * Q)
    """

    P: int
    Q: int
    B: int
    T: int

    def merge(self, right: "SplitNode") -> "SplitNode":
        return SplitNode(
            self.P * right.P,
            self.Q * right.Q,
            self.B * right.B,
            self.T * right.B * right.Q + self.B * self.P * right.T,
        )

    def value(self) -> Fraction:
        return Fraction(self.T, self.B * self.Q)


@dataclass(frozen=True)
class DigitsResult:
    decimal_digits: str
    p: object
    series_label: str
    requested_digits: int
    verified_against: Optional[str] = None


# ----------------------------------------------------------------------
#  Spec compilation: clear every denominator once
# ----------------------------------------------------------------------

def _lcm(a, b):
    return a * b // math.gcd(a, b)


class _Compiled:
    __slots__ = ("num_coeffs", "den_coeffs", "normalizer", "x_const",
                 "y_const", "top", "bot", "start", "coeff_digits")

    def __init__(self, spec: SeriesSpec):
        l_num = 1
        for c in spec.numerator_poly.coefficients:
            l_num = _lcm(l_num, c.denominator)
        l_den = 1
        for c in spec.denominator_poly.coefficients:
            l_den = _lcm(l_den, c.denominator)
        self.num_coeffs = tuple(int(c * l_num)
                                for c in spec.numerator_poly.coefficients)
        self.den_coeffs = tuple(int(c * l_den)
                                for c in spec.denominator_poly.coefficients)
        self.normalizer = spec.normalizer * l_den / l_num

        rho = spec.motive.rho
        b_num = b_den = 1
        self.top = tuple((r.denominator, r.numerator - r.denominator)
                         for r in spec.motive.num_params)
        self.bot = tuple((q.denominator, q.numerator - q.denominator)
                         for q in spec.motive.den_params)
        for r in spec.motive.num_params:
            b_num *= r.denominator
        for q in spec.motive.den_params:
            b_den *= q.denominator
        self.x_const = rho.numerator * b_den
        self.y_const = rho.denominator * b_num
        self.start = spec.start_index

        # decimal headroom the numerator polynomial and normalizer can add
        # on top of the plain |rho|^n tail estimate
        mag = max(1, max(abs(c) for c in self.num_coeffs))
        mag *= max(1, abs(self.normalizer.numerator))
        self.coeff_digits = len(str(mag))

    def _poly(self, coeffs, n):
        acc = 0
        for c in reversed(coeffs):
            acc = acc * n + c
        return acc

    def x(self, k):
        # k = 0 only occurs as the first index of a start-0 series, where
        # the hypergeometric factor is the empty product
        if k == 0:
            return 1
        out = self.x_const
        for b, shift in self.top:
            out *= b * k + shift
        return out

    def y(self, k):
        if k == 0:
            return 1
        out = self.y_const
        for b, shift in self.bot:
            out *= b * k + shift
        return out

    def unit(self, n):
        xn = self.x(n)
        return SplitNode(xn, self.y(n), self._poly(self.den_coeffs, n),
                         self._poly(self.num_coeffs, n) * xn)


@lru_cache(maxsize=64)
def _compiled(spec: SeriesSpec) -> _Compiled:
    return _Compiled(spec)


# ----------------------------------------------------------------------
#  Range evaluation
# ----------------------------------------------------------------------

def _range_node(comp: _Compiled, lo: int, hi: int) -> SplitNode:
    if hi - lo <= LEAF_TERMS:
        node = comp.unit(lo)
        for k in range(lo + 1, hi):
            node = node.merge(comp.unit(k))
        return node
    mid = (lo + hi) // 2
    return _range_node(comp, lo, mid).merge(_range_node(comp, mid, hi))


def split_range(spec: SeriesSpec, lo: int, hi: int) -> SplitNode:
    """Exact node for terms lo..hi-1 of the series."""
    if not spec.start_index <= lo < hi:
        raise ValueError(f"need start_index <= lo < hi, got [{lo}, {hi})")
    return _range_node(_compiled(spec), lo, hi)


def _root_node(spec: SeriesSpec, n_terms: int, threads: int) -> SplitNode:
    comp = _compiled(spec)
    lo, hi = spec.start_index, spec.start_index + n_terms
    if threads <= 1 or n_terms < 4 * LEAF_TERMS:
        return _range_node(comp, lo, hi)
    # fixed, ordered chunking so the merge tree (and hence every integer)
    # is identical for every thread count
    bounds = [lo + (hi - lo) * i // (2 * threads) for i in range(2 * threads + 1)]
    ranges = [(a, b) for a, b in zip(bounds, bounds[1:]) if a < b]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        nodes = list(pool.map(lambda ab: _range_node(comp, *ab), ranges))
    node = nodes[0]
    for right in nodes[1:]:
        node = node.merge(right)
    return node


def _target_of(spec: SeriesSpec):
    if spec.label in CATALOG_TARGETS:
        return CATALOG_TARGETS[spec.label]
    if spec.label.startswith("log(") and ")" in spec.label:
        text = spec.label[4:spec.label.index(")")]
        try:
            return Fraction(text)
        except ValueError:
            return None
    return None


def evaluate(spec: SeriesSpec, digits: int, threads: int = 1) -> DigitsResult:
    """Decimal expansion of the series limit, truncated to `digits` places.

    The emitted digits are the exact floor of value*10^digits: guard
    digits grow until the trailing window pins the truncation down, so
    a run of 0s or 9s at the boundary can never leak a wrong digit.
    """
    if digits < 1:
        raise ValueError("need at least one digit")
    if abs(spec.motive.rho) >= 1:
        raise ValueError(f"{spec.label}: series diverges")
    comp = _compiled(spec)
    guard = 10
    while True:
        slack = guard + comp.coeff_digits + 10
        n_terms = estimate_terms(spec, digits + slack)
        node = _root_node(spec, n_terms, threads)
        val = comp.normalizer * node.value()
        neg = val < 0
        scaled = abs(val.numerator) * 10 ** (digits + guard) // val.denominator
        window = scaled % 10 ** guard
        if window != 0 and window != 10 ** guard - 1:
            break
        guard *= 2
    scaled //= 10 ** guard
    ip, frac = divmod(scaled, 10 ** digits)
    text = f"{'-' if neg else ''}{ip}.{frac:0{digits}d}"
    return DigitsResult(
        decimal_digits=text,
        p=_target_of(spec),
        series_label=spec.label,
        requested_digits=digits,
    )


def cross_verify(spec_a: SeriesSpec, spec_b: SeriesSpec, digits: int,
                 threads: int = 1) -> int:
    """Count agreeing leading digits of two series for the same constant.

    Raises VerificationError (naming the first differing position) if
    they agree to fewer than `digits` places.
    """
    ra = evaluate(spec_a, digits, threads)
    rb = evaluate(spec_b, digits, threads)
    agree = 0
    for pos, (ca, cb) in enumerate(zip(ra.decimal_digits, rb.decimal_digits)):
        if ca != cb:
            raise VerificationError(
                f"{spec_a.label} and {spec_b.label} differ at character "
                f"{pos} after agreeing on {agree} digits "
                f"(requested {digits})")
        if ca.isdigit():
            agree += 1
    if agree < digits:
        raise VerificationError(
            f"{spec_a.label} and {spec_b.label}: only {agree} comparable "
            f"digits, requested {digits}")
    return agree


def render_digit_rows(result: DigitsResult) -> str:
    """Digit report: header line, then rows of 100 digits in blocks of 10.

    The first row is prefixed with the integer part and decimal point."""
    head, _, frac = result.decimal_digits.partition(".")
    lines = [f"# log({result.p}) digits={result.requested_digits} "
             f"series={result.series_label}"]
    prefix = head + "."
    for row_start in range(0, len(frac), 100):
        row = frac[row_start:row_start + 100]
        blocks = " ".join(row[i:i + 10] for i in range(0, len(row), 10))
        lines.append((prefix if row_start == 0 else " " * len(prefix)) + blocks)
    return "\n".join(lines)


def with_verification(result: DigitsResult, against: str) -> DigitsResult:
    return replace(result, verified_against=against)
