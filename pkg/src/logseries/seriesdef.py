"""Series data model and the built-in collection of log p series.

A series here is

    omega = normalizer * sum_{n>=start} p(n)/r(n) * rho^n * M(n)

with M(n) a ratio of rising-factorial products over the motive's
parameter lists. The module holds the fixed catalog of fast log series,
the parametric level-1/level-2 families (signature 6 and 4 denominators),
the degree-4 and degree-6 variable-p families, and the conversions
between the two printed d=2 parameter conventions.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Tuple, Union

import mpmath

from .exactnum import BigRational, FixedReal, GaussianRational, IntPoly


def _mpf_to_fraction(x):
    sign, man, exp, _ = x._mpf_
    f = Fraction(man) * Fraction(2) ** exp
    return -f if sign else f


# ----------------------------------------------------------------------
#  Data model
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class Motive:
    """Hypergeometric factor H(n) = rho^n * M(n).

    M(n) is the ratio of rising factorials prod (num)_n / prod (den)_n;
    parameters live in (0,1], the two lists never share an element, and
    |rho| <= 1 so the factor stays bounded.
    """

    num_params: Tuple[Fraction, ...]
    den_params: Tuple[Fraction, ...]
    rho: Fraction

    def __post_init__(self):
        num = tuple(Fraction(v) for v in self.num_params)
        den = tuple(Fraction(v) for v in self.den_params)
        object.__setattr__(self, "num_params", num)
        object.__setattr__(self, "den_params", den)
        object.__setattr__(self, "rho", Fraction(self.rho))
        if len(num) != len(den) or not num:
            raise ValueError("motive needs equally many parameters on both sides")
        for v in num + den:
            if not 0 < v <= 1:
                raise ValueError(f"motive parameter {v} outside (0,1]")
        if set(num) & set(den):
            raise ValueError("motive parameter lists must be disjoint")
        if abs(self.rho) > 1:
            raise ValueError(f"|rho| = {abs(self.rho)} > 1, factor unbounded")

    @property
    def d(self):
        return len(self.num_params)

    def value(self, n):
        """Exact M(n) (without the rho^n factor)."""
        out = Fraction(1)
        for k in range(1, n + 1):
            for r in self.num_params:
                out *= k - 1 + r
            for q in self.den_params:
                out /= k - 1 + q
        return out


@dataclass(frozen=True)
class SeriesSpec:
    motive: Motive
    numerator_poly: IntPoly
    denominator_poly: IntPoly
    normalizer: Fraction
    start_index: int
    label: str

    def __post_init__(self):
        object.__setattr__(self, "normalizer", Fraction(self.normalizer))
        if self.start_index not in (0, 1):
            raise ValueError("start_index must be 0 or 1")
        if self.denominator_poly.degree() != self.motive.d:
            raise ValueError(
                f"{self.label}: denominator degree "
                f"{self.denominator_poly.degree()} != motive d {self.motive.d}")
        if self.denominator_poly.integer_roots_at_or_above(self.start_index):
            raise ValueError(f"{self.label}: denominator vanishes at a term index")

    def term(self, n):
        """Exact value of term n including normalizer (slow; for testing)."""
        return (self.normalizer * self.numerator_poly(n)
                / self.denominator_poly(n)
                * self.motive.rho ** n * self.motive.value(n))


@dataclass(frozen=True)
class D2Params:
    """One row of the d=2 series table, in both printed conventions.

    The `alpha` form sums (alpha*n+beta)/(n(2n-1)) from n=1 with weight
    1/gamma; the `a` form sums (a*n+b)/((6n+1)(6n+5)) from n=0 with
    weight 1/c. `z` is the exact algebraic point when it lies in Q or
    Q(i); z*z is always rational and is what the rate formula needs.
    """

    p: int
    alpha: int
    beta: int
    gamma: int
    a: int
    b: int
    c: int
    rho: Fraction
    z_squared: Fraction
    z: Optional[Union[Fraction, GaussianRational]] = None

    def __post_init__(self):
        if d2_convert(self.alpha, self.beta, self.gamma, self.rho) != \
                (self.a, self.b, self.c):
            raise ValueError(f"p={self.p}: the two parameter forms disagree")
        z2 = self.z_squared
        if Fraction(4) / (27 * z2 * (1 - z2) ** 2) != self.rho:
            raise ValueError(f"p={self.p}: rho inconsistent with z^2")
        if self.z is not None:
            zz = self.z * self.z
            zz = zz.re if isinstance(zz, GaussianRational) else Fraction(zz)
            if zz != z2:
                raise ValueError(f"p={self.p}: stored z does not square to z^2")


# ----------------------------------------------------------------------
#  Generic operations
# ----------------------------------------------------------------------

def term_ratio(spec: SeriesSpec, k: int) -> Fraction:
    """r(k)/q(k) of the motive product form: H(n) = prod_{k=1..n} r(k)/q(k)."""
    if k < 1:
        raise ValueError("term ratio is defined for k >= 1")
    m = spec.motive
    num = Fraction(1)
    den = Fraction(1)
    for r in m.num_params:
        num *= k - 1 + r
    for q in m.den_params:
        den *= k - 1 + q
    return m.rho * num / den


def binary_splitting_cost(spec: SeriesSpec, bits: int = 96) -> FixedReal:
    """-4d / ln|rho|: a priori ranking of series speed (lower is faster)."""
    rho = spec.motive.rho
    if abs(rho) >= 1:
        raise ValueError(f"{spec.label}: |rho| >= 1, series diverges")
    if rho == 0:
        return FixedReal.from_int(0, bits)
    with mpmath.workprec(bits + 32):
        log_rho = mpmath.log(mpmath.mpf(abs(rho).numerator)) \
            - mpmath.log(mpmath.mpf(abs(rho).denominator))
        cost = -4 * spec.motive.d / log_rho
        return FixedReal.from_rational(_mpf_to_fraction(cost), bits)


def estimate_terms(spec: SeriesSpec, decimal_digits: int) -> int:
    """Smallest N with |rho|^N <= 10^-(digits+10), by exact comparison."""
    if decimal_digits < 1:
        raise ValueError("need at least one digit")
    rho = spec.motive.rho
    if abs(rho) >= 1:
        raise ValueError(f"{spec.label}: |rho| >= 1, series diverges")
    if rho == 0:
        return 1
    s = decimal_digits + 10
    num, den = abs(rho.numerator), rho.denominator
    n = max(1, int(s * math.log(10) / (math.log(den) - math.log(num))) - 2)
    while num ** n * 10 ** s > den ** n:
        n += 1
    while n > 1 and num ** (n - 1) * 10 ** s <= den ** (n - 1):
        n -= 1
    return n


# ----------------------------------------------------------------------
#  Fixed catalog
# ----------------------------------------------------------------------

_SIG6 = ((Fraction(1), Fraction(1, 2)), (Fraction(1, 6), Fraction(5, 6)))
_SIG4 = ((Fraction(1), Fraction(1, 2)), (Fraction(1, 4), Fraction(3, 4)))


def _spec(label, num_coeffs, den_factors, rho, params, normalizer=1,
          start=1, den_scale=1):
    return SeriesSpec(
        motive=Motive(params[0], params[1], Fraction(rho)),
        numerator_poly=IntPoly(num_coeffs),
        denominator_poly=IntPoly.from_linear_factors(den_factors, den_scale),
        normalizer=Fraction(normalizer),
        start_index=start,
        label=label,
    )


_M4A = ((Fraction(1), Fraction(1, 2), Fraction(1, 6), Fraction(5, 6)),
        (Fraction(1, 10), Fraction(3, 10), Fraction(7, 10), Fraction(9, 10)))
_M4B = ((Fraction(1), Fraction(1, 2), Fraction(1, 4), Fraction(3, 4)),
        (Fraction(1, 10), Fraction(3, 10), Fraction(7, 10), Fraction(9, 10)))
_M4C = ((Fraction(1), Fraction(1, 2), Fraction(1, 3), Fraction(2, 3)),
        (Fraction(1, 12), Fraction(5, 12), Fraction(7, 12), Fraction(11, 12)))
_M6 = ((Fraction(1), Fraction(1, 2), Fraction(1, 4), Fraction(3, 4),
        Fraction(1, 6), Fraction(5, 6)),
       (Fraction(1, 14), Fraction(3, 14), Fraction(5, 14), Fraction(9, 14),
        Fraction(11, 14), Fraction(13, 14)))

_CATALOG = {
    "log2-eq8": lambda: _spec(
        "log2-eq8", [-297, 1794], [(2, 0), (2, -1)], Fraction(1, 3888), _SIG6),
    "log3-eq8a": lambda: _spec(
        "log3-eq8a", [-14, 88], [(1, 0), (2, -1)], Fraction(1, 243), _SIG6),
    "log5-eq8b": lambda: _spec(
        "log5-eq8b", [-62, 364], [(-1, 0), (2, -1)], Fraction(-1, 675), _SIG6),
    "log2-eq9": lambda: _spec(
        "log2-eq9", [-295245, 4353342, -15397068, 13885704],
        [(2, 0), (2, -1), (6, -1), (6, -5)], Fraction(1, 1350000), _M4A),
    "log2-eq11": lambda: _spec(
        "log2-eq11", [-81891, 1209726, -4300512, 3927264],
        [(4, 0), (2, -1), (4, -1), (4, -3)], Fraction(1, 450000), _M4B),
    "log2-eq13": lambda: _spec(
        "log2-eq13", [-13858, 223397, -742257, 686430],
        [(3, 0), (2, -1), (3, -1), (3, -2)], Fraction(1, 221184), _M4C),
    "log3-eq15a": lambda: _spec(
        "log3-eq15a", [-3040, 44804, -158016, 141168],
        [(1, 0), (2, -1), (6, -1), (6, -5)], Fraction(3, 50000), _M4A),
    "log2-eq18": lambda: _spec(
        "log2-eq18",
        [-226846575, 5510613042, -40884797604, 126495134424,
         -169950180480, 81969540480],
        [(1, 0), (2, -1), (4, -1), (4, -3), (6, -1), (6, -5)],
        Fraction(1, 355770576), _M6, normalizer=Fraction(1, 4)),
    "log7-tableI": lambda: _spec(
        "log7-tableI", [-16, 312], [(1, 0), (2, -1)], Fraction(27, 196),
        _SIG6, normalizer=Fraction(1, 81)),
    "log10-tableI": lambda: _spec(
        "log10-tableI", [23, -126], [(1, 0), (2, -1)], Fraction(-1, 80),
        _SIG6, normalizer=Fraction(1, 2)),
}

# the constant each catalog entry converges to, as an exact rational
CATALOG_TARGETS = {
    "log2-eq8": 2, "log3-eq8a": 3, "log5-eq8b": 5, "log2-eq9": 2,
    "log2-eq11": 2, "log2-eq13": 2, "log3-eq15a": 3, "log2-eq18": 2,
    "log7-tableI": 7, "log10-tableI": 10,
}


def catalog_labels():
    return tuple(_CATALOG)


def catalog_get(label: str) -> SeriesSpec:
    try:
        builder = _CATALOG[label]
    except KeyError:
        raise KeyError(f"unknown series label {label!r}; "
                       f"known: {', '.join(_CATALOG)}") from None
    return builder()


def catalog_export() -> str:
    """JSON document describing every built-in series."""
    rows = []
    for label in catalog_labels():
        spec = catalog_get(label)
        cost = binary_splitting_cost(spec, bits=128)
        with mpmath.workprec(128):
            cost_text = mpmath.nstr(mpmath.mpf(cost.mantissa)
                                    / 2 ** cost.bit_precision, 20)
        rows.append({
            "label": label,
            "d": spec.motive.d,
            "rho": str(spec.motive.rho),
            "cost": cost_text,
            "motive_num": [str(v) for v in spec.motive.num_params],
            "motive_den": [str(v) for v in spec.motive.den_params],
            "numerator_poly": [str(c) for c in spec.numerator_poly.coefficients],
            "denominator_poly": [str(c) for c in
                                 spec.denominator_poly.coefficients],
            "normalizer": str(spec.normalizer),
            "start_index": spec.start_index,
        })
    return json.dumps(rows, indent=2)


# ----------------------------------------------------------------------
#  d=2 parameter table and conversions
# ----------------------------------------------------------------------

def d2_convert(alpha: int, beta: int, gamma: int, rho) -> Tuple[int, int, int]:
    """Convert the n=1 form (alpha, beta, gamma) to the n=0 form (a, b, c)."""
    if gamma == 0:
        raise ValueError("gamma must be nonzero")
    rho = Fraction(rho)
    den = rho.denominator
    u = (18 * rho.numerator * alpha,
         18 * rho.numerator * (alpha + beta),
         den * gamma)
    g = gcd(gcd(abs(u[0]), abs(u[1])), abs(u[2]))
    return (u[0] // g, u[1] // g, u[2] // g)


def d2_convert_inverse(a: int, b: int, c: int, rho) -> Tuple[int, int, int]:
    """Convert the n=0 form (a, b, c) back to the n=1 form (alpha, beta, gamma)."""
    if c == 0:
        raise ValueError("c must be nonzero")
    rho = Fraction(rho)
    sign = -1 if rho < 0 else 1
    den = rho.denominator
    v = (sign * den * a,
         sign * den * (b - a),
         sign * 18 * c * rho.numerator)
    g = gcd(gcd(abs(v[0]), abs(v[1])), abs(v[2]))
    return (v[0] // g, v[1] // g, v[2] // g)


_D2_TABLE = {
    2: dict(alpha=1794, beta=-297, gamma=2, a=598, b=499, c=144,
            rho=Fraction(1, 3888), z_squared=Fraction(9), z=Fraction(3)),
    3: dict(alpha=88, beta=-14, gamma=1, a=176, b=148, c=27,
            rho=Fraction(1, 243), z_squared=Fraction(4), z=Fraction(2)),
    5: dict(alpha=-364, beta=62, gamma=1, a=728, b=604, c=75,
            rho=Fraction(-1, 675), z_squared=Fraction(-4),
            z=GaussianRational(0, 2)),
    7: dict(alpha=312, beta=-16, gamma=81, a=468, b=444, c=49,
            rho=Fraction(27, 196), z_squared=Fraction(16, 9),
            z=Fraction(4, 3)),
    10: dict(alpha=-126, beta=23, gamma=2, a=1134, b=927, c=80,
             rho=Fraction(-1, 80), z_squared=Fraction(-5, 3), z=None),
}


def d2_params(p: int) -> D2Params:
    """Table row for the five tabulated d=2 series (p in {2,3,5,7,10})."""
    if p not in _D2_TABLE:
        raise KeyError(f"no d=2 parameter row for p={p}")
    return D2Params(p=p, **_D2_TABLE[p])


def d2_series_from_abc(a: int, b: int, c: int, rho, label: str) -> SeriesSpec:
    """Series for the n=0 convention: (1/c) sum (a n + b)/((6n+1)(6n+5)) H(n)."""
    return SeriesSpec(
        motive=Motive(_SIG6[0], _SIG6[1], Fraction(rho)),
        numerator_poly=IntPoly([b, a]),
        denominator_poly=IntPoly.from_linear_factors([(6, 1), (6, 5)]),
        normalizer=Fraction(1, c),
        start_index=0,
        label=label,
    )


def d2_integer_form(spec: SeriesSpec) -> Tuple[int, int, int]:
    """Fold the normalizer into the linear numerator: coprime (a, b, c), c > 0,
    such that spec = (1/c) sum (a n + b)/denominator."""
    coeffs = [spec.normalizer * x for x in spec.numerator_poly.coefficients]
    if len(coeffs) != 2:
        raise ValueError("need a linear numerator")
    b_, a_ = coeffs
    c_ = a_.denominator * b_.denominator // gcd(a_.denominator, b_.denominator)
    a_i, b_i = int(a_ * c_), int(b_ * c_)
    g = gcd(gcd(abs(a_i), abs(b_i)), c_)
    return (a_i // g, b_i // g, c_ // g)


# ----------------------------------------------------------------------
#  Parametric families
# ----------------------------------------------------------------------

def level1_series(p) -> SeriesSpec:
    """Signature-6 family: converges for |p - 7| < 4*sqrt(3), p > 0."""
    p = Fraction(p)
    if p <= 0 or (p - 7) ** 2 >= 48:
        raise ValueError(f"p={p} outside the level-1 convergence region")
    rho = (p - 1) ** 6 / (108 * p ** 2 * (p + 1) ** 2)
    slope = 2 * (p * p - 14 * p + 1) * (p * p + 4 * p + 1)
    const = p ** 4 - 14 * p ** 3 - 94 * p ** 2 - 14 * p + 1
    return SeriesSpec(
        motive=Motive(_SIG6[0], _SIG6[1], rho),
        numerator_poly=IntPoly([const, slope]),
        denominator_poly=IntPoly.from_linear_factors([(6, 1), (6, 5)]),
        normalizer=-(p - 1) / (12 * p ** 2 * (p + 1)),
        start_index=0,
        label=f"log({p})-level1",
    )


def level2_series(p) -> SeriesSpec:
    """Signature-4 family: alternating, converges for (p-1)^4 < 16p(p+1)^2."""
    p = Fraction(p)
    if p <= 0 or (p - 1) ** 4 >= 16 * p * (p + 1) ** 2:
        raise ValueError(f"p={p} outside the level-2 convergence region")
    rho = -((p - 1) ** 4) / (16 * p * (p + 1) ** 2)
    return SeriesSpec(
        motive=Motive(_SIG4[0], _SIG4[1], rho),
        numerator_poly=IntPoly([p * p + 10 * p + 1,
                                2 * (p * p + 6 * p + 1)]),
        denominator_poly=IntPoly.from_linear_factors([(4, 1), (4, 3)]),
        normalizer=(p - 1) / (2 * p * (p + 1)),
        start_index=0,
        label=f"log({p})-level2",
    )


_D4_N3 = IntPoly([27, -702, -1835, -2980, -1835, -702, 27])
_D4_N2 = IntPoly([81, -1674, -27536, -70486, -104770, -70486, -27536,
                  -1674, 81])
_D4_N1 = IntPoly([69, -1674, -30752, -83670, -123146, -83670, -30752,
                  -1674, 69])
_D4_N0 = IntPoly([5, -130, -3184, -9694, -14314, -9694, -3184, -130, 5])


def d4_family(p) -> SeriesSpec:
    """Degree-4 variable-p series (rate O((p-1)^10) near p=1).

    The n^3 block multiplier is 8, not the printed 216: with 8 the p=2
    instance agrees coefficient-for-coefficient with the catalog's fast
    log 2 series under the index shift n -> n+1, and the series then
    converges to log p for every p tried; with 216 it converges to
    nothing useful.
    """
    p = Fraction(p)
    rho = Fraction(27, 12500) * (p - 1) ** 10 / (p ** 2 * (p + 1) ** 6)
    if p <= 0 or abs(rho) >= 1:
        raise ValueError(f"p={p} outside the d=4 convergence region")
    coeffs = [
        3 * _D4_N0(p),
        2 * _D4_N1(p),
        4 * _D4_N2(p),
        8 * (p * p + 8 * p + 1) * _D4_N3(p),
    ]
    return SeriesSpec(
        motive=Motive(_M4A[0], _M4A[1], rho),
        numerator_poly=IntPoly(coeffs),
        denominator_poly=IntPoly.from_linear_factors(
            [(10, 1), (10, 3), (10, 7), (10, 9)], scale=20),
        normalizer=-(p - 1) / (p ** 2 * (p + 1) ** 5),
        start_index=0,
        label=f"log({p})-d4",
    )


def _palindrome(upper_half):
    """Full descending coefficient list from the printed upper half
    (the half includes the central coefficient)."""
    return list(upper_half) + list(reversed(upper_half[:-1]))


def _pal_poly(upper_half):
    return IntPoly(list(reversed(_palindrome(upper_half))))


_D6_N5 = _pal_poly([27, -648, 8208, -74682, -264859, -411740])
_D6_N4 = _pal_poly([270, -5265, 53757, -400383, -7320270, -21251920,
                    -30355514])
_D6_N3 = _pal_poly([1005, -20040, 215166, -1773744, -32182333, -94707848,
                    -135214940])
_D6_N2 = _pal_poly([855, -17340, 195534, -1831956, -33025527, -98963632,
                    -141374300])
_D6_N1 = _pal_poly([327, -6708, 78486, -858504, -15564079, -47782020,
                    -68437468])
_D6_N0 = _pal_poly([15, -310, 3720, -46330, -887599, -2811664, -4047184])


def d6_family(p) -> SeriesSpec:
    """Degree-6 variable-p series (rate O((p-1)^14) near p=1).

    The numerator blocks are palindromic in p; only their upper halves
    are printed, the rest is completed by symmetry and validated
    numerically in the test suite.
    """
    p = Fraction(p)
    rho = Fraction(27, 823543) * (p - 1) ** 14 / (p ** 4 * (p + 1) ** 6)
    if p <= 0 or abs(rho) >= 1:
        raise ValueError(f"p={p} outside the d=6 convergence region")
    coeffs = [
        3 * _D6_N0(p),
        2 * _D6_N1(p),
        4 * _D6_N2(p),
        8 * _D6_N3(p),
        32 * _D6_N4(p),
        128 * (p * p + 5 * p + 1) * _D6_N5(p),
    ]
    return SeriesSpec(
        motive=Motive(_M6[0], _M6[1], rho),
        numerator_poly=IntPoly(coeffs),
        denominator_poly=IntPoly.from_linear_factors(
            [(14, 1), (14, 3), (14, 5), (14, 9), (14, 11), (14, 13)],
            scale=56),
        normalizer=-(p - 1) / (p ** 4 * (p + 1) ** 5),
        start_index=0,
        label=f"log({p})-d6",
    )
