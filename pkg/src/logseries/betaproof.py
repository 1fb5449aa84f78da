"""Beta-integral decompositions and closed forms for the catalog series.

The central-binomial motives are gamma quotients, so each series summand
splits, by partial fractions over a Pochhammer basis, into beta-function
integrals; summing under the integral sign turns the whole series into
the integral of a rational function against dx/sqrt(1-x). This module
computes the partial-fraction coefficients exactly, builds the integer
integrand pair u(x)/v(x) for the degree-2 rows, validates the integral
identities by high-precision quadrature against the catalog values, and
evaluates the four hypergeometric closed forms that assemble the same
constants out of atanh and log terms.
"""

from __future__ import annotations

import dataclasses
from fractions import Fraction
from math import gcd, prod

import mpmath

from .exactnum import GaussianRational, IntPoly, poly_gcd
from . import binsplit, seriesdef


def _self_power(k):
    # k**k with the empty-product convention 0**0 = 1.
    return k ** k if k else 1


def _pochhammer(x, n):
    return prod((x + j for j in range(n)), start=Fraction(1))


def _pochhammer_half(count):
    # (1/2)_count as an exact rational: odd numbers over a power of two.
    return Fraction(prod(range(1, 2 * count, 2)), 1 << count)


# ----------------------------------------------------------------------
#  Gamma-quotient motives
# ----------------------------------------------------------------------

def gamma_quotient_motive(m, nu):
    """Pochhammer parameters of lam^n Gamma(nu n+1) Gamma(m n+1/2) / Gamma(N n+1/2).

    Gauss multiplication splits each gamma factor into n-th Pochhammer
    symbols at j/nu, (2j-1)/(2m) and (2j-1)/(2N); entries common to both
    sides cancel. Returns (numerator_params, denominator_params) sorted
    ascending.
    """
    if m < 0 or nu < 1:
        raise ValueError("need m >= 0 and nu >= 1")
    n_count = m + nu
    tops = [Fraction(j, nu) for j in range(1, nu + 1)]
    tops += [Fraction(2 * j - 1, 2 * m) for j in range(1, m + 1)]
    bots = [Fraction(2 * j - 1, 2 * n_count) for j in range(1, n_count + 1)]
    for value in list(tops):
        if value in bots:
            tops.remove(value)
            bots.remove(value)
    return tuple(sorted(tops)), tuple(sorted(bots))


def gamma_quotient_lambda(m, nu):
    """The growth constant N^N / (m^m nu^nu) with N = m + nu."""
    n_count = m + nu
    return Fraction(_self_power(n_count), _self_power(m) * _self_power(nu))


def gamma_quotient_identity_check(m, nu, n_max):
    """Exact rational check that the Pochhammer product equals the
    gamma-quotient form lam^n (nu n)! (1/2)_{m n} / (1/2)_{N n} for all
    n <= n_max."""
    tops, bots = gamma_quotient_motive(m, nu)
    lam = gamma_quotient_lambda(m, nu)
    n_count = m + nu
    for n in range(n_max + 1):
        left = prod((_pochhammer(r, n) for r in tops), start=Fraction(1))
        left /= prod((_pochhammer(q, n) for q in bots), start=Fraction(1))
        right = lam ** n * Fraction(prod(range(1, nu * n + 1), start=1))
        right *= _pochhammer_half(m * n) / _pochhammer_half(n_count * n)
        if left != right:
            return False
    return True


# ----------------------------------------------------------------------
#  Partial fractions over the Pochhammer basis
# ----------------------------------------------------------------------

def _basis(x, k, m, a, b, n_count):
    """u(x, k) = prod_{j=1}^{k-1}(m x+j-1+a) / prod_{j=1}^{k}(N x+j-1+b)."""
    num = Fraction(1)
    for j in range(1, k):
        num *= m * x + j - 1 + a
    den = Fraction(1)
    for j in range(1, k + 1):
        den *= n_count * x + j - 1 + b
    return num / den


def a1a2a3(a, b, c):
    """Partial-fraction coefficients of the degree-2 rational part
    (a n + b)/(c (6n+1)(6n+5)) over the three-term Pochhammer basis."""
    if c == 0:
        raise ValueError("c must be nonzero")
    first = Fraction(-(a - 2 * b), 8 * c)
    swing = Fraction(3 * (5 * a - 6 * b), 16 * c)
    return first, swing, -swing


def pfbeta(G, L, m, a, N, b):
    """Coefficients A_1..A_L with G(n) = sum_k A_k u(n, k).

    The evaluation points x_k = -(a+k-1)/m zero out every basis term
    beyond the k-th, so the coefficients fall out of a triangular solve
    with exact rational arithmetic. G is any callable returning exact
    values; a pole of G or of the basis at an evaluation point aborts
    with the offending k named.
    """
    if L < 1 or m < 1:
        raise ValueError("need L >= 1 and m >= 1")
    a = Fraction(a)
    b = Fraction(b)
    coefficients = []
    for k in range(1, L + 1):
        x = Fraction(-(a + k - 1), m)
        try:
            value = Fraction(G(x))
            for i, known in enumerate(coefficients, start=1):
                value -= known * _basis(x, i, m, a, b, N)
            value /= _basis(x, k, m, a, b, N)
        except ZeroDivisionError:
            raise ValueError(f"pole collision at evaluation point k={k}") from None
        coefficients.append(value)
    return tuple(coefficients)


def pfbeta_residual(G, A, m, a, N, b, samples=None):
    """Residual function n -> G(n) - sum_k A_k u(n, k), certified zero.

    The residual is sampled at `samples` pole-free positive rationals
    (default 2 len(A) + 16, enough for every decomposition produced
    here); any nonzero value raises. The callable is returned so callers
    can probe further points themselves.
    """
    a = Fraction(a)
    b = Fraction(b)

    def residual(x):
        x = Fraction(x)
        total = Fraction(G(x))
        for k, coefficient in enumerate(A, start=1):
            total -= coefficient * _basis(x, k, m, a, b, N)
        return total

    wanted = samples if samples is not None else 2 * len(A) + 16
    checked = 0
    x = Fraction(1)
    while checked < wanted:
        try:
            value = residual(x)
        except ZeroDivisionError:
            x += 1
            continue
        if value != 0:
            raise ValueError(f"decomposition residual is nonzero at n={x}: {value}")
        checked += 1
        x += 1
    return residual


@dataclasses.dataclass(frozen=True)
class BetaDecomposition:
    """A series summand split over the Pochhammer basis of its motive."""

    m: int
    nu: int
    coefficients: tuple

    def __post_init__(self):
        if self.m < 0 or self.nu < 1:
            raise ValueError("need m >= 0 and nu >= 1")
        object.__setattr__(self, "coefficients",
                           tuple(Fraction(c) for c in self.coefficients))

    @property
    def n_count(self):
        return self.m + self.nu

    @property
    def lambda_factor(self):
        return gamma_quotient_lambda(self.m, self.nu)


def _shift_by_one(poly):
    """poly(x + 1) as a new polynomial."""
    out = IntPoly([])
    basis = IntPoly([1])
    for c in poly.coefficients:
        out = out + basis * c
        basis = basis * IntPoly([1, 1])
    return out


def summand_quotient(spec):
    """The series summand G with value = sum_{n>=0} G(n) rho^n M(n),
    as a cancelled pair of polynomials (numerator, denominator).

    Series starting at n=1 are shifted down by one index; the shift
    multiplies the summand by rho and by the motive's one-step ratio
    prod(x+r)/prod(x+q), whose numerator factors cancel the removable
    zeros this introduces in the shifted denominator.
    """
    motive = spec.motive
    if spec.start_index == 0:
        num = spec.numerator_poly * spec.normalizer
        den = spec.denominator_poly
    else:
        num = _shift_by_one(spec.numerator_poly) * (spec.normalizer * motive.rho)
        num = num * IntPoly.from_linear_factors([(1, r) for r in motive.num_params])
        den = _shift_by_one(spec.denominator_poly)
        den = den * IntPoly.from_linear_factors([(1, q) for q in motive.den_params])
    common = poly_gcd(num, den)
    if common.degree() > 0:
        num, _ = num.divmod(common)
        den, _ = den.divmod(common)
    return num, den


def decompose_series(spec):
    """Split a catalog-style series over its motive's Pochhammer basis.

    The motive must be a gamma quotient (its parameters must match some
    gamma_quotient_motive(m, nu)); the rational summand, re-indexed to
    start at 0 if needed, is then decomposed with pfbeta and the result
    certified by residual sampling.
    """
    motive = spec.motive
    signature = (tuple(sorted(motive.num_params)), tuple(sorted(motive.den_params)))
    found = None
    for m in range(0, 8):
        for nu in range(1, 9):
            if gamma_quotient_motive(m, nu) == signature:
                found = (m, nu)
                break
        if found:
            break
    if found is None:
        raise ValueError("series motive is not a gamma quotient")
    m, nu = found
    n_count = m + nu

    top, bottom = summand_quotient(spec)
    summand = lambda x: top(x) / bottom(x)
    coefficients = pfbeta(summand, n_count, nu, 1, n_count, Fraction(1, 2))
    pfbeta_residual(summand, coefficients, nu, 1, n_count, Fraction(1, 2))
    return BetaDecomposition(m, nu, coefficients)


# ----------------------------------------------------------------------
#  Integer integrands for the degree-2 rows
# ----------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class IntegrandPair:
    """Integer polynomials with integral u/v dx/sqrt(1-x) = log p."""

    u_poly: IntPoly
    v_poly: IntPoly

    def __post_init__(self):
        for poly in (self.u_poly, self.v_poly):
            if any(c.denominator != 1 for c in poly.coefficients):
                raise ValueError("integrand polynomials must have integer coefficients")
        if self.v_poly.is_zero():
            raise ValueError("denominator polynomial is zero")
        # Certify v != 0 on [0, 1] by the crude positive bound: the
        # constant term must dominate the negative coefficients. This is
        # sufficient for every row this package builds.
        coeffs = self.v_poly.coefficients
        floor = coeffs[0] + sum(c for c in coeffs[1:] if c < 0)
        if floor <= 0:
            raise ValueError("cannot certify the denominator is nonzero on [0, 1]")


def build_integrand(params):
    """Integer u(x), v(x) with u/v equal to the summed integrand
    (A1 + A2 x + A3 x^2) / (1 - (27/4) rho x^2 (1-x)) of a degree-2 row.

    Common polynomial factors are cancelled and the denominator is
    normalized to primitive form with positive leading coefficient; the
    ratio u/v is preserved exactly throughout, so the integral of
    u/v dx/sqrt(1-x) is exactly log p.
    """
    first, second, third = a1a2a3(params.a, params.b, params.c)
    kernel = Fraction(27, 4) * params.rho
    numerator = IntPoly([first, second, third])
    denominator = IntPoly([1, 0, -kernel, kernel])
    common = poly_gcd(numerator, denominator)
    if common.degree() > 0:
        numerator, _ = numerator.divmod(common)
        denominator, _ = denominator.divmod(common)
    v_poly, v_scale = denominator.primitive()
    u_poly = numerator * (1 / v_scale)
    stretch = 1
    for c in u_poly.coefficients:
        stretch = stretch * c.denominator // gcd(stretch, c.denominator)
    if stretch != 1:
        u_poly = u_poly * stretch
        v_poly = v_poly * stretch
    return IntegrandPair(u_poly, v_poly)


@dataclasses.dataclass(frozen=True)
class IntegralReport:
    p: int
    digits: int
    passed: bool
    difference: str
    quadrature_error: str


def _reference_log(p, digits):
    """log p digit string from the cheapest catalog series for p."""
    for label in seriesdef.catalog_labels():
        if seriesdef.CATALOG_TARGETS[label] == p:
            result = binsplit.evaluate(seriesdef.catalog_get(label), digits)
            return Fraction(result.decimal_digits)
    raise ValueError(f"no catalog series targets log {p}")


def integral_value(pair, digits):
    """Quadrature value of integral_0^1 u/v dx/sqrt(1-x).

    The substitution x = 1 - t^2 removes the endpoint singularity, after
    which the integrand is analytic on [0, 1] and tanh-sinh quadrature
    converges exponentially.
    """
    u_poly, v_poly = pair.u_poly, pair.v_poly
    with mpmath.workdps(digits + 10):
        def integrand(t):
            x = 1 - t * t
            top = mpmath.mpf(0)
            for c in reversed(u_poly.coefficients):
                top = top * x + int(c)
            bottom = mpmath.mpf(0)
            for c in reversed(v_poly.coefficients):
                bottom = bottom * x + int(c)
            return 2 * top / bottom

        value, error = mpmath.quad(integrand, [0, 1], error=True)
        if error > mpmath.mpf(10) ** (-(digits + 2)):
            raise ValueError(f"quadrature did not converge: error estimate {mpmath.nstr(error, 3)}")
        return value


def integral_check(pair, expected_log_p, digits):
    """Quadrature of the integrand pair against the series value of
    log expected_log_p, to `digits` decimal digits."""
    with mpmath.workdps(digits + 10):
        value = integral_value(pair, digits)
        reference = _reference_log(expected_log_p, digits + 10)
        difference = abs(value - mpmath.mpf(reference.numerator) / reference.denominator)
        passed = difference < mpmath.mpf(10) ** (-digits)
        return IntegralReport(
            p=expected_log_p,
            digits=digits,
            passed=bool(passed),
            difference=mpmath.nstr(difference, 3),
            quadrature_error="converged",
        )


# ----------------------------------------------------------------------
#  Closed forms
# ----------------------------------------------------------------------

def _to_working_complex(z):
    if isinstance(z, GaussianRational):
        return (mpmath.mpf(z.re.numerator) / z.re.denominator
                + mpmath.mpc(0, 1) * z.im.numerator / z.im.denominator)
    return mpmath.mpc(z)


def _phi_series(rho, bits):
    """Direct sums of the four defining series at the given rho."""
    cut = mpmath.mpf(2) ** (-(bits + 10))
    limit = int((bits + 30) * 0.6931 / -mpmath.log(abs(rho))) + 50
    if limit > 200000:
        raise ValueError("rho is too close to 1 for the series to converge usefully")
    one = mpmath.mpf(1)
    term = one + 0 * rho  # carries the complex type of rho when needed
    sum_a = 0 * term
    sum_b = term / 1
    sum_c = term / 5
    sum_d = 0 * term
    for n in range(1, limit + 1):
        step = rho * (n * (n - one / 2)) / ((n - mpmath.mpf(5) / 6) * (n - one / 6))
        term = term * step
        sum_a += term / n
        sum_b += term / (6 * n + 1)
        sum_c += term / (6 * n + 5)
        sum_d += term / (2 * n - 1)
        if abs(term) < cut:
            return sum_a, sum_b, sum_c, sum_d
    raise ValueError("series did not reach the cutoff within the term limit")


def phi_closed_forms(z, bits):
    """The four closed forms at z, each validated against its series.

    Square roots and logarithms use principal branches. The inner
    logarithm is only defined up to 2 pi i, and for some z the principal
    value lands one wrap away from the branch the identities need (real
    z between 1 and sqrt(2), for instance); the defining series fix the
    branch unambiguously, so the wrap is chosen to match the first
    series and then every returned value is checked to 2^-bits against
    its own series, so a wrong branch cannot escape.
    """
    with mpmath.workdps(int(bits * 0.30103) + 15):
        zz = _to_working_complex(z)
        z2 = zz * zz
        tiny = mpmath.mpf(2) ** -16
        if abs(zz) < tiny or abs(z2 - 1) < tiny or abs(3 * z2 - 1) < tiny:
            raise ValueError("z is at or near a pole of the closed forms")
        rho = mpmath.mpf(4) / 27 / (z2 * (1 - z2) ** 2)
        if abs(rho) >= 1:
            raise ValueError("the defining series diverge for this z")
        series = _phi_series(rho, bits)
        allowed = mpmath.mpf(2) ** -bits
        inverse = mpmath.atanh(1 / zz)
        root = mpmath.sqrt(3 * z2 - 4)
        base = mpmath.log((z2 - 2 + mpmath.mpc(0, 1) * root)
                          / (z2 - 2 - mpmath.mpc(0, 1) * root))
        phi_l = None
        for wrap in (0, 1, -1):
            candidate = (mpmath.mpc(0, 1) / root
                         * (base + 2 * wrap * mpmath.pi * mpmath.mpc(0, 1)))
            probe = (6 * zz * inverse + (3 * z2 - 2) * candidate) / (1 - 3 * z2)
            if abs(probe - series[0]) <= allowed:
                phi_l = candidate
                break
        if phi_l is None:
            raise ValueError("no branch of the closed forms matches the defining series")
        phi_a = (6 * zz * inverse + (3 * z2 - 2) * phi_l) / (1 - 3 * z2)
        phi_b = (3 * zz * (1 - z2) / (2 * (1 - 3 * z2))
                 * (inverse - zz / 2 * phi_l))
        phi_c = (3 * zz * (1 - z2) / (2 * (3 * z2 - 1))
                 * ((9 * z2 ** 2 - 9 * z2 + 1) * inverse
                    + zz * (9 * z2 ** 2 - 15 * z2 + 5) / 2 * phi_l))
        phi_d = (((3 * z2 ** 2 - 3 * z2 + 2) / zz) * inverse
                 + z2 * (3 * z2 - 5) / 2 * phi_l) / (2 * (1 - z2) * (1 - 3 * z2))
        closed = (phi_a, phi_b, phi_c, phi_d)
        for got, want, name in zip(closed, series, "ABCD"):
            if abs(got - want) > allowed:
                raise ValueError(f"closed form {name} disagrees with its series "
                                 f"(branch failure) by {mpmath.nstr(abs(got - want), 3)}")
        return closed


def z_from_rho(rho):
    """The z whose closed forms use this rho: for rho > 0 the real root
    above 1 of z(z^2-1) = (2/3)sqrt(1/(3 rho)), for rho < 0 the purely
    imaginary z = iy with y(1+y^2) = (2/3)sqrt(-1/(3 rho)).

    Gaussian-rational roots are detected and returned exactly; otherwise
    an 80-digit numeric value is returned.
    """
    rho = Fraction(rho)
    if rho == 0 or abs(rho) > Fraction(4, 27):
        raise ValueError("need 0 < |rho| <= 4/27 for an admissible root")
    with mpmath.workdps(80):
        scale = abs(rho)
        target = (mpmath.mpf(2) / 3
                  / mpmath.sqrt(3 * mpmath.mpf(scale.numerator) / scale.denominator))
        if rho > 0:
            cubic = lambda t: t ** 3 - t - target
            low, high = mpmath.mpf(1), mpmath.cbrt(target) + 2
        else:
            cubic = lambda t: t ** 3 + t - target
            low, high = mpmath.mpf(0), mpmath.cbrt(target) + 2
        root = mpmath.findroot(cubic, (low, high), solver="anderson")
        candidate = Fraction(mpmath.nstr(root, 40)).limit_denominator(10 ** 9)
        if rho > 0:
            if rho * candidate ** 2 * (1 - candidate ** 2) ** 2 == Fraction(4, 27):
                return GaussianRational(candidate)
            return mpmath.mpc(root, 0)
        if -rho * candidate ** 2 * (1 + candidate ** 2) ** 2 == Fraction(4, 27):
            return GaussianRational(0, candidate)
        return mpmath.mpc(0, root)


def log_from_closed_forms(p, bits=160):
    """log p assembled from the B/C closed-form combination of its
    degree-2 table row; complex arithmetic, returned as an mpmath value
    whose imaginary part is a branch-selection residual near zero.

    The algebraic point comes from the stored table entry when exact and
    from the rate equation otherwise (p=10, where it is an imaginary
    quadratic irrational).
    """
    row = seriesdef.d2_params(p)
    z = row.z if row.z is not None else z_from_rho(row.rho)
    if isinstance(z, Fraction):
        z = GaussianRational(z)
    _, phi_b, phi_c, _ = phi_closed_forms(z, bits)
    with mpmath.workprec(bits + 16):
        return (Fraction(6 * row.b - row.a, 24 * row.c) * phi_b
                + Fraction(5 * row.a - 6 * row.b, 24 * row.c) * phi_c)
