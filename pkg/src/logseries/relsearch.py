"""Integer-relation discovery over a lattice of prime-power rates.

Fixing the motive parameter lists and walking the rate over products of
small prime powers, each candidate rate yields weighted partial sums
s_0..s_h of the term recurrence. An exact LLL pass then asks whether an
integer combination of those sums reproduces the target constant.
Detection alone is not trusted: every hit is re-tested against a finer
slice of the target, rebuilt as a series, and must reproduce the target
to 50 digits through binary splitting before it is reported.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import List, Optional, Sequence, Tuple

from . import binsplit
from .exactnum import FixedReal, IntPoly
from .seriesdef import Motive, SeriesSpec

log = logging.getLogger(__name__)

LOG2_10 = math.log2(10)

# Squared-norm ceiling for accepted relation vectors: dimension << 205.
# Anything larger is lattice noise, not a 64-bit-coefficient relation.
COEFF_NORM_BITS = 205


# ----------------------------------------------------------------------
#  Strategy and result types
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class LatticeStrategy:
    """Which rates to try and when to give up on one.

    cost_bound and term_bound of 0 disable those filters; rho_bound is
    always applied (a rate at or above it cannot converge usefully).
    working_digits of 0 defers to the 20*(h+2) weight-rule floor.
    """

    primes: Tuple[int, ...]
    exponent_bounds: Tuple[Tuple[int, int], ...]
    cost_bound: float = 0.0
    term_bound: int = 0
    rho_bound: Fraction = Fraction(3, 5)
    working_digits: int = 0

    def __post_init__(self):
        object.__setattr__(self, "primes", tuple(int(p) for p in self.primes))
        object.__setattr__(self, "exponent_bounds", tuple(
            (int(lo), int(hi)) for lo, hi in self.exponent_bounds))
        object.__setattr__(self, "rho_bound", Fraction(self.rho_bound))
        if any(p <= 1 for p in self.primes):
            raise ValueError("primes must be integers > 1")
        if len(set(self.primes)) != len(self.primes):
            raise ValueError("primes must be distinct")
        if len(self.exponent_bounds) != len(self.primes):
            raise ValueError("need one exponent range per prime")
        if any(lo > hi for lo, hi in self.exponent_bounds):
            raise ValueError("exponent ranges must satisfy min <= max")
        if not 0 < self.rho_bound < 1:
            raise ValueError("rho_bound must sit in (0, 1)")
        if self.cost_bound < 0 or self.term_bound < 0 or self.working_digits < 0:
            raise ValueError("bounds cannot be negative")


@dataclass(frozen=True)
class RelationCandidate:
    """A verified relation sum(alpha_i s_i) = beta * target.

    coefficients = (beta, alpha_0, ..., alpha_h) with alpha_h > 0;
    series is the reconstruction whose limit is the target itself.
    """

    coefficients: Tuple[int, ...]
    rho: Fraction
    cost: float
    residual: FixedReal
    series: SeriesSpec

    def __post_init__(self):
        object.__setattr__(self, "coefficients",
                           tuple(int(c) for c in self.coefficients))
        object.__setattr__(self, "rho", Fraction(self.rho))
        if len(self.coefficients) < 2:
            raise ValueError("need at least (beta, alpha_0)")
        if self.coefficients[0] == 0:
            raise ValueError("beta must be nonzero")
        if self.coefficients[-1] == 0:
            raise ValueError("the leading alpha must be nonzero")
        if not 0 < abs(self.rho) < 1:
            raise ValueError("need 0 < |rho| < 1")


# ----------------------------------------------------------------------
#  Partial sums
# ----------------------------------------------------------------------

def _sums_exact(motive: Motive, denom_poly: IntPoly, top_i: int,
                n_terms: int) -> List[Fraction]:
    """[s_0, ..., s_top_i] truncated at n_terms, as exact rationals."""
    t = Fraction(1)
    totals = [Fraction(0) for _ in range(top_i + 1)]
    for n in range(1, n_terms + 1):
        num = Fraction(1)
        den = Fraction(1)
        for a in motive.num_params:
            num *= n - 1 + a
        for b in motive.den_params:
            den *= n - 1 + b
        t *= motive.rho * num / den
        r_n = denom_poly(n)
        if r_n == 0:
            raise ValueError(f"series denominator vanishes at n={n}")
        base = t / r_n
        power = 1
        for i in range(top_i + 1):
            totals[i] += base * power
            power *= n
    return totals


def partial_sum_si(motive: Motive, denom_poly: IntPoly, i: int, N: int,
                   bits: int) -> FixedReal:
    """Sum over n=1..N of n^i/denom(n) * prod_{k<=n} rho*num(k)/den(k).

    The recurrence runs in exact rationals; only the final value is
    rounded to `bits`.
    """
    if i < 0:
        raise ValueError("need i >= 0")
    if N < 1:
        raise ValueError("need N >= 1")
    return FixedReal.from_rational(_sums_exact(motive, denom_poly, i, N)[i],
                                   bits)


def motive_denominator(motive: Motive) -> IntPoly:
    """The integer-cleared product over the numerator parameters: for
    each fraction u/v a factor (v*n - v + u); this is the r(n) the
    partial sums divide by."""
    return IntPoly.from_linear_factors(
        [(f.denominator, f.numerator - f.denominator)
         for f in motive.num_params])


# ----------------------------------------------------------------------
#  Exact LLL
# ----------------------------------------------------------------------

def _dot(a, b):
    total = 0
    for x, y in zip(a, b):
        total += x * y
    return total


def _gram(rows):
    """Exact Gram-Schmidt data: (mu lower-triangular, squared norms).

    Rows whose projection vanishes (dependent input) get norm 0 and are
    skipped as projection targets.
    """
    n = len(rows)
    mu = [[Fraction(0)] * n for _ in range(n)]
    ortho = []
    norms = []
    for i in range(n):
        v = [Fraction(x) for x in rows[i]]
        for j in range(i):
            if norms[j] == 0:
                continue
            mu[i][j] = _dot(rows[i], ortho[j]) / norms[j]
            v = [a - mu[i][j] * b for a, b in zip(v, ortho[j])]
        ortho.append(v)
        norms.append(_dot(v, v))
    return mu, norms


def lll_reduce(basis: Sequence[Sequence[int]]) -> List[List[int]]:
    """Lovasz-reduced basis of the integer row lattice, delta = 99/100.

    Exact rational arithmetic throughout; the tiny dimensions here make
    that affordable and remove the usual floating-point fragility.
    Rank-deficient input is logged and reduced as far as the nonzero
    projections allow.
    """
    rows = [[int(x) for x in row] for row in basis]
    if not rows:
        return []
    width = len(rows[0])
    if any(len(row) != width for row in rows):
        raise ValueError("basis rows must share a width")
    n = len(rows)
    delta = Fraction(99, 100)
    mu, norms = _gram(rows)
    if 0 in norms:
        log.warning("rank-deficient basis: %d rows span rank %d",
                    n, sum(1 for x in norms if x != 0))
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                rows[k] = [a - q * b for a, b in zip(rows[k], rows[j])]
                for jj in range(j):
                    mu[k][jj] -= q * mu[j][jj]
                mu[k][j] -= q
        if norms[k - 1] == 0 or \
                norms[k] >= (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            rows[k - 1], rows[k] = rows[k], rows[k - 1]
            mu, norms = _gram(rows)
            k = max(k - 1, 1)
    return rows


def _scaled_mantissa(value: FixedReal, bits: int) -> int:
    shift = value.bit_precision - bits
    if shift == 0:
        return value.mantissa
    half = 1 << (shift - 1)
    m = value.mantissa
    return (m + half) >> shift if m >= 0 else -((-m + half) >> shift)


def lindep(values: Sequence[FixedReal], max_coeff_bits: int) -> Optional[List[int]]:
    """Integer vector v with sum(v_j * values_j) below 2^(-prec/2), or
    None when the best lattice vector fails the acceptance bounds.

    prec is the shared (minimum) precision of the inputs and must cover
    the coefficients being sought: at least count*max_coeff_bits + 64,
    otherwise the call refuses rather than guess. The lattice is the
    identity block with one column of values scaled by 2^prec; accepted
    vectors need a nonzero first coefficient (the target's), squared
    norm under dim*2^205, and the residual bound checked exactly.
    """
    vals = list(values)
    if len(vals) < 2:
        raise ValueError("need at least two values")
    if max_coeff_bits < 1:
        raise ValueError("max_coeff_bits must be positive")
    prec = min(v.bit_precision for v in vals)
    need = len(vals) * max_coeff_bits + 64
    if prec < need:
        raise ValueError(
            f"{len(vals)} values at {max_coeff_bits} coefficient bits "
            f"need {need} shared bits, have {prec}")
    n = len(vals)
    rows = []
    for i, v in enumerate(vals):
        row = [0] * n + [_scaled_mantissa(v, prec)]
        row[i] = 1
        rows.append(row)
    limit = n << COEFF_NORM_BITS
    bound = Fraction(1, 1 << (prec // 2))
    for row in lll_reduce(rows):
        u = row[:n]
        if u[0] == 0 or _dot(u, u) >= limit:
            continue
        resid = Fraction(0)
        for c, v in zip(u, vals):
            resid += c * v.to_fraction()
        if abs(resid) < bound:
            return list(u)
    return None


# ----------------------------------------------------------------------
#  The search proper
# ----------------------------------------------------------------------

def _require_complete(motive: Motive) -> None:
    """Every denominator occurring on a side must bring all of its
    reduced fractions with one shared multiplicity."""
    for side, params in (("numerator", motive.num_params),
                         ("denominator", motive.den_params)):
        counts = {}
        for f in params:
            counts[f] = counts.get(f, 0) + 1
        seen_dens = {f.denominator for f in params}
        for q in seen_dens:
            totatives = [Fraction(j, q) for j in range(1, q + 1)
                         if gcd(j, q) == 1]
            mults = {counts.get(f, 0) for f in totatives}
            if len(mults) != 1:
                raise ValueError(
                    f"motive {side} parameters are not complete at "
                    f"denominator {q}")


def _admissible_points(strategy: LatticeStrategy, d: int, wd: int):
    """(rho, cost, n_terms) for each lattice point passing the filters."""
    spans = [range(lo, hi + 1) for lo, hi in strategy.exponent_bounds]
    for exps in itertools.product(*spans):
        rho = Fraction(1)
        for p, e in zip(strategy.primes, exps):
            rho *= Fraction(p) ** e
        if rho >= strategy.rho_bound:
            continue
        lr = math.log(rho.denominator) - math.log(rho.numerator)
        cost = 4 * d / lr
        if strategy.cost_bound > 0 and cost > strategy.cost_bound:
            continue
        n_terms = math.ceil(2.5 * wd * math.log(10) / lr)
        if strategy.term_bound > 0 and n_terms > strategy.term_bound:
            continue
        yield rho, cost, n_terms


def _examine_point(motive, r_poly, target, h, rho, n_terms, bits, cost):
    point = Motive(motive.num_params, motive.den_params, rho)
    exact = _sums_exact(point, r_poly, h, n_terms)
    sums = [FixedReal.from_rational(x, bits) for x in exact]
    tgt = FixedReal.from_rational(target.to_fraction(), bits)
    values = [tgt] + [sums[i] for i in range(h, -1, -1)]
    u = lindep(values, 64)
    if u is None or u[1] == 0:
        return None
    if u[1] < 0:
        u = [-x for x in u]
    # The sums are exact; re-test against a finer slice of the target.
    # Lattice noise that matched the detection precision dies here.
    fine = FixedReal.from_rational(target.to_fraction(), 2 * bits)
    resid = u[0] * fine.to_fraction()
    for j in range(1, len(u)):
        resid += u[j] * exact[h - (j - 1)]
    if abs(resid) >= Fraction(1, 1 << (bits + 32)):
        log.debug("rho=%s: rejected at the confirmation precision", rho)
        return None
    beta = -u[0]
    alphas = tuple(u[1 + h - i] for i in range(h + 1))
    spec = SeriesSpec(
        motive=point,
        numerator_poly=IntPoly(alphas),
        denominator_poly=r_poly,
        normalizer=Fraction(1, beta),
        start_index=1,
        label=f"relation[rho={rho}]",
    )
    digits = binsplit.evaluate(spec, 50).decimal_digits
    if abs(Fraction(digits) - target.to_fraction()) > Fraction(1, 10 ** 49):
        log.warning("rho=%s: relation failed the 50 digit verification", rho)
        return None
    det_resid = Fraction(0)
    for c, v in zip(u, values):
        det_resid += c * v.to_fraction()
    return RelationCandidate(
        coefficients=(beta,) + alphas,
        rho=rho,
        cost=cost,
        residual=FixedReal.from_rational(det_resid, bits),
        series=spec,
    )


def search(motive: Motive, target: FixedReal, target_weight: int,
           strategy: LatticeStrategy) -> List[RelationCandidate]:
    """All verified integer relations the strategy's lattice reaches.

    The motive supplies the parameter lists only; its own rate is
    ignored and every admissible lattice point is tried in both signs.
    h = d - target_weight fixes how many sums enter the detection, and
    the working precision never drops below 20*(h+2) decimal digits.
    Candidates are returned sorted by series cost. Lattice points are
    independent of each other, so failures at one point only log and
    move on.
    """
    _require_complete(motive)
    d = motive.d
    h = d - int(target_weight)
    if h < 0:
        raise ValueError("target weight exceeds the motive depth")
    floor_digits = 20 * (h + 2)
    wd = strategy.working_digits or floor_digits
    if wd < floor_digits:
        log.warning("working digits %d below the 20*(h+2) floor; using %d",
                    wd, floor_digits)
        wd = floor_digits
    bits = max(int(wd * LOG2_10) + 32, (h + 2) * 64 + 64)
    if target.bit_precision < 2 * bits + 16:
        log.warning("target carries %d bits but confirmation needs %d; "
                    "skipping the search", target.bit_precision, 2 * bits + 16)
        return []
    r_poly = motive_denominator(motive)
    found = []
    for rho, cost, n_terms in _admissible_points(strategy, d, wd):
        for sign in (1, -1):
            candidate = _examine_point(motive, r_poly, target, h,
                                       sign * rho, n_terms, bits, cost)
            if candidate is not None:
                found.append(candidate)
    found.sort(key=lambda c: c.cost)
    return found


# ----------------------------------------------------------------------
#  Report blocks
# ----------------------------------------------------------------------

def _params_text(motive: Motive) -> str:
    num = ", ".join(str(x) for x in motive.num_params)
    den = ", ".join(str(x) for x in motive.den_params)
    return f"[[{num}], [{den}]]"


def format_report(candidates: Sequence[RelationCandidate],
                  args_text: str = "", const_text: str = "") -> str:
    """One text block per find: arguments, target, motive, the detected
    vector (target coefficient first, then alphas high to low), the
    rate as an exact fraction, and the series cost."""
    blocks = []
    for cand in candidates:
        vector = [-cand.coefficients[0]] + list(cand.coefficients[:0:-1])
        blocks.append("\n".join([
            "*********************",
            f" args  = {args_text}",
            f" const = {const_text}",
            f" hgm_1 = {_params_text(cand.series.motive)}",
            " LINEAR DEPENDENCE FOUND",
            f" {vector}",
            f" rho_1 = {cand.rho}",
            f" BSC   = {cand.cost:.8g}",
            "*********************",
        ]))
    return "\n".join(blocks) + ("\n" if blocks else "")


def write_report(candidates: Sequence[RelationCandidate], path,
                 args_text: str = "", const_text: str = "") -> str:
    """Append the formatted blocks to `path`; returns the text."""
    text = format_report(candidates, args_text, const_text)
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(text)
    return text
