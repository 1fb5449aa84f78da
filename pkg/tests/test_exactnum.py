import random
from fractions import Fraction

import pytest

from logseries.exactnum import (
    BigRational,
    FixedReal,
    GaussianRational,
    IntPoly,
    fixed_from_rational,
    poly_eval,
    poly_gcd,
    rational_pow,
)


def test_rational_pow_exact():
    assert rational_pow(Fraction(2, 3), 5) == Fraction(32, 243)
    assert rational_pow(Fraction(-3, 4), 3) == Fraction(-27, 64)
    assert rational_pow(Fraction(2, 3), -2) == Fraction(9, 4)
    assert rational_pow(7, 0) == 1
    with pytest.raises(ZeroDivisionError):
        rational_pow(0, -1)


def test_big_rational_is_reduced():
    assert BigRational(6, -4) == Fraction(-3, 2)
    assert BigRational(6, -4).denominator == 2


# ----------------------------------------------------------------------
#  Gaussian rationals
# ----------------------------------------------------------------------

def test_gaussian_field_ops():
    a = GaussianRational(Fraction(1, 2), Fraction(3, 4))
    b = GaussianRational(2, -1)
    assert a + b == GaussianRational(Fraction(5, 2), Fraction(-1, 4))
    assert a * b == GaussianRational(Fraction(7, 4), 1)
    assert (a / b) * b == a
    assert a - a == GaussianRational(0)
    assert a.conjugate().conjugate() == a


def test_gaussian_norm_multiplicative():
    rng = random.Random(7)
    for _ in range(50):
        a = GaussianRational(
            Fraction(rng.randint(-9, 9), rng.randint(1, 9)),
            Fraction(rng.randint(-9, 9), rng.randint(1, 9)),
        )
        b = GaussianRational(
            Fraction(rng.randint(-9, 9), rng.randint(1, 9)),
            Fraction(rng.randint(-9, 9), rng.randint(1, 9)),
        )
        assert (a * b).norm() == a.norm() * b.norm()


def test_gaussian_pow_and_division():
    i = GaussianRational(0, 1)
    assert i ** 2 == GaussianRational(-1)
    assert i ** -1 == GaussianRational(0, -1)
    z = GaussianRational(2, 1)
    assert z * z.conjugate() == GaussianRational(z.norm())
    with pytest.raises(ZeroDivisionError):
        z / GaussianRational(0)


def test_gaussian_immutable():
    z = GaussianRational(1, 2)
    with pytest.raises(AttributeError):
        z.re = Fraction(5)


# ----------------------------------------------------------------------
#  Fixed-point reals
# ----------------------------------------------------------------------

def test_fixed_from_rational_error_bound():
    rng = random.Random(11)
    for _ in range(200):
        x = Fraction(rng.randint(-10 ** 9, 10 ** 9), rng.randint(1, 10 ** 6))
        bits = rng.choice([8, 16, 64, 128])
        f = fixed_from_rational(x, bits)
        assert abs(f.to_fraction() - x) <= Fraction(1, 2 ** bits)


def test_fixed_truncates_toward_zero():
    f = fixed_from_rational(Fraction(-1, 3), 8)
    assert f.mantissa == -85  # trunc(-256/3) = -85, not floor's -86
    g = fixed_from_rational(Fraction(1, 3), 8)
    assert g.mantissa == 85


def test_fixed_arithmetic_ulp_budget():
    rng = random.Random(13)
    bits = 96
    ulp = Fraction(1, 2 ** bits)
    for _ in range(100):
        x = Fraction(rng.randint(-999, 999), rng.randint(1, 999))
        y = Fraction(rng.randint(1, 999), rng.randint(1, 999))
        fx = FixedReal.from_rational(x, bits)
        fy = FixedReal.from_rational(y, bits)
        assert (fx + fy).to_fraction() == fx.to_fraction() + fy.to_fraction()
        prod = (fx * fy).to_fraction()
        assert abs(prod - fx.to_fraction() * fy.to_fraction()) <= ulp
        quot = (fx / fy).to_fraction()
        assert abs(quot - fx.to_fraction() / fy.to_fraction()) <= ulp


def test_fixed_mixed_precision_alignment():
    a = FixedReal.from_rational(Fraction(3, 4), 16)
    b = FixedReal.from_rational(Fraction(1, 4), 64)
    assert (a + b).bit_precision == 64
    assert (a + b).to_fraction() == 1


def test_fixed_decimal_and_compare():
    f = FixedReal.from_rational(Fraction(22, 7), 200)
    assert f.to_decimal(10) == "3.1428571428"
    assert f > FixedReal.from_int(3, 64)
    assert f < FixedReal.from_int(4, 64)
    assert FixedReal.from_int(-2, 32).to_decimal(3) == "-2.000"
    assert FixedReal(1, 64).abs_within_ulps(2)
    assert not FixedReal(3, 64).abs_within_ulps(2)


def test_fixed_rejects_tiny_precision():
    with pytest.raises(ValueError):
        fixed_from_rational(Fraction(1), 4)


# ----------------------------------------------------------------------
#  Polynomials
# ----------------------------------------------------------------------

def test_poly_eval_matches_horner():
    p = IntPoly([Fraction(-297), Fraction(1794)])
    assert poly_eval(p, 1) == 1497
    assert poly_eval(p, Fraction(1, 2)) == 600
    assert p.degree() == 1


def test_poly_trims_and_zero():
    assert IntPoly([1, 2, 0, 0]).degree() == 1
    assert IntPoly([0, 0]).is_zero()
    assert IntPoly([]).degree() == -1


def test_poly_ring_identities():
    rng = random.Random(17)
    for _ in range(40):
        a = IntPoly([rng.randint(-5, 5) for _ in range(rng.randint(0, 4))])
        b = IntPoly([rng.randint(-5, 5) for _ in range(rng.randint(1, 4))])
        x = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
        assert (a + b)(x) == a(x) + b(x)
        assert (a * b)(x) == a(x) * b(x)
        if not b.is_zero():
            q, r = a.divmod(b)
            assert q * b + r == a
            assert r.is_zero() or r.degree() < b.degree()


def test_poly_from_linear_factors():
    # 2n(2n-1) expanded
    p = IntPoly.from_linear_factors([(2, 0), (2, -1)])
    assert p == IntPoly([0, -2, 4])
    q = IntPoly.from_linear_factors([(1, 0), (2, -1)], scale=2)
    assert q(3) == 2 * 3 * 5


def test_poly_primitive_and_content():
    p = IntPoly([Fraction(4, 3), Fraction(-8, 3), 4])
    prim, scale = p.primitive()
    assert prim == IntPoly([1, -2, 3])
    assert scale == Fraction(4, 3)
    assert prim * scale == p
    neg, nscale = (-1 * p).primitive()
    assert neg.leading() > 0
    assert nscale == Fraction(-4, 3)


def test_poly_gcd_known_factor():
    a = IntPoly.from_linear_factors([(1, -5), (1, 2)])
    b = IntPoly.from_linear_factors([(1, -5), (3, 1)])
    g = poly_gcd(a, b)
    assert g == IntPoly([-5, 1])
    coprime = poly_gcd(IntPoly([1, 1]), IntPoly([2, 1]))
    assert coprime.degree() == 0


def test_integer_roots_scan():
    p = IntPoly.from_linear_factors([(1, -3), (1, -7), (2, 1)])
    assert p.integer_roots_at_or_above(0) == [3, 7]
    assert p.integer_roots_at_or_above(4) == [7]
    assert p.integer_roots_at_or_above(8) == []
