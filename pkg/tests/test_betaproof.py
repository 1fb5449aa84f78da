import random
from fractions import Fraction

import mpmath
import pytest

from logseries import betaproof as bp
from logseries import machin
from logseries import seriesdef as sd
from logseries.exactnum import GaussianRational, IntPoly


EXAMPLE_COEFFS = (
    Fraction(3, 8), Fraction(-563, 12096), Fraction(479, 96768),
    Fraction(-17, 110592), Fraction(91, 995328), Fraction(-11, 995328),
    Fraction(1, 995328),
)

PRINTED_A = {
    2: (Fraction(25, 72), Fraction(-1, 192), Fraction(1, 192)),
    3: (Fraction(5, 9), Fraction(-1, 18), Fraction(1, 18)),
    5: (Fraction(4, 5), Fraction(1, 25), Fraction(-1, 25)),
    7: (Fraction(15, 14), Fraction(-243, 196), Fraction(243, 196)),
    10: (Fraction(9, 8), Fraction(81, 320), Fraction(-81, 320)),
}

PRINTED_INTEGRANDS = {
    2: ([200, -3, 3], [576, 0, -1, 1]),
    3: ([20, -2, 2], [36, 0, -1, 1]),
    5: ([16, 4], [20, 4, 1]),
    7: ([840, -972, 972], [784, 0, -729, 729]),
    10: ([45, 27], [40, 15, 9]),
}


def test_a1a2a3_printed_rows():
    for p, want in PRINTED_A.items():
        row = sd.d2_params(p)
        assert bp.a1a2a3(row.a, row.b, row.c) == want, p


def test_a1a2a3_edge_cases():
    first, second, third = bp.a1a2a3(6, 3, 11)
    assert first == 0  # a = 2b kills the first coefficient
    assert second == -third
    with pytest.raises(ValueError):
        bp.a1a2a3(1, 1, 0)


def test_pfbeta_recovers_single_basis_function():
    g = lambda x: 1 / (3 * x + Fraction(1, 2))
    assert bp.pfbeta(g, 3, 2, 1, 3, Fraction(1, 2)) == (1, 0, 0)


def test_pfbeta_printed_example_row():
    numerator = IntPoly([2913463287, 33273401586, 138594927588,
                         266389817304, 239897521920, 81969540480])
    denominator = IntPoly.from_linear_factors(
        [(14, 1), (14, 3), (14, 5), (14, 9), (14, 11), (14, 13)],
        scale=217728)
    g = lambda x: numerator(x) / denominator(x)
    got = bp.pfbeta(g, 7, 4, 1, 7, Fraction(1, 2))
    assert got == EXAMPLE_COEFFS
    residual = bp.pfbeta_residual(g, got, 4, 1, 7, Fraction(1, 2))
    assert residual(Fraction(1, 3)) == 0
    assert residual(Fraction(22, 7)) == 0


def test_pfbeta_pole_collision_names_the_point():
    g = lambda x: 1 / (2 * x + 1)  # pole at the first evaluation point
    with pytest.raises(ValueError, match="k=1"):
        bp.pfbeta(g, 3, 2, 1, 3, Fraction(1, 2))


def test_pfbeta_residual_flags_wrong_coefficients():
    row = sd.d2_params(3)
    g = lambda x: Fraction(row.a * x + row.b, row.c) / ((6 * x + 1) * (6 * x + 5))
    good = bp.pfbeta(g, 3, 2, 1, 3, Fraction(1, 2))
    bad = (good[0] + Fraction(1, 1000),) + good[1:]
    with pytest.raises(ValueError, match="residual"):
        bp.pfbeta_residual(g, bad, 2, 1, 3, Fraction(1, 2))


def test_pfbeta_agrees_with_a1a2a3_on_random_rows():
    rng = random.Random(20260814)
    for _ in range(25):
        a = rng.randint(-500, 500)
        b = rng.randint(-500, 500)
        c = rng.randint(1, 300)
        g = lambda x: Fraction(a * x + b, c) / ((6 * x + 1) * (6 * x + 5))
        assert bp.pfbeta(g, 3, 2, 1, 3, Fraction(1, 2)) == bp.a1a2a3(a, b, c)


def test_decompose_both_printed_conventions():
    # The n>=1 and n>=0 conventions of each tabulated row carry the same
    # summand after the index shift, so both decompose identically.
    labels = {2: "log2-eq8", 3: "log3-eq8a", 5: "log5-eq8b",
              7: "log7-tableI", 10: "log10-tableI"}
    for p, label in labels.items():
        row = sd.d2_params(p)
        want = bp.a1a2a3(row.a, row.b, row.c)
        shifted = bp.decompose_series(sd.catalog_get(label))
        assert (shifted.m, shifted.nu) == (1, 2)
        assert shifted.coefficients == want, label
        direct = bp.decompose_series(
            sd.d2_series_from_abc(row.a, row.b, row.c, row.rho, f"abc-{p}"))
        assert direct.coefficients == want, p


def test_decompose_higher_degree_rows():
    example = bp.decompose_series(sd.catalog_get("log2-eq18"))
    assert (example.m, example.nu) == (3, 4)
    assert example.coefficients == EXAMPLE_COEFFS
    assert example.lambda_factor == Fraction(823543, 6912)

    for label, shape in [("log2-eq9", (3, 2)), ("log3-eq15a", (3, 2)),
                         ("log2-eq11", (1, 4))]:
        dec = bp.decompose_series(sd.catalog_get(label))
        assert (dec.m, dec.nu) == shape, label
        assert len(dec.coefficients) == dec.n_count

    # the conjectured degree-4 row is not of beta-integral form
    with pytest.raises(ValueError, match="gamma quotient"):
        bp.decompose_series(sd.catalog_get("log2-eq13"))


def test_gamma_quotient_motives_match_catalog():
    cases = [
        ((1, 2), sd.catalog_get("log2-eq8").motive),
        ((1, 4), sd.catalog_get("log2-eq11").motive),
        ((3, 2), sd.catalog_get("log2-eq9").motive),
        ((3, 2), sd.catalog_get("log3-eq15a").motive),
        ((3, 4), sd.catalog_get("log2-eq18").motive),
        ((1, 1), sd.level2_series(2).motive),
    ]
    for (m, nu), motive in cases:
        got = bp.gamma_quotient_motive(m, nu)
        assert got == (tuple(sorted(motive.num_params)),
                       tuple(sorted(motive.den_params))), (m, nu)


def test_gamma_quotient_lambda_values():
    assert bp.gamma_quotient_lambda(1, 1) == 4
    assert bp.gamma_quotient_lambda(1, 2) == Fraction(27, 4)
    assert bp.gamma_quotient_lambda(1, 4) == Fraction(3125, 256)
    assert bp.gamma_quotient_lambda(3, 2) == Fraction(3125, 108)
    assert bp.gamma_quotient_lambda(3, 4) == Fraction(823543, 6912)
    assert bp.gamma_quotient_lambda(0, 2) == 1  # 0**0 convention


def test_gamma_quotient_identity_exact():
    for m, nu in [(1, 1), (1, 2), (1, 4), (3, 2), (3, 4)]:
        assert bp.gamma_quotient_identity_check(m, nu, 30), (m, nu)


def test_build_integrand_printed_table():
    for p, (u, v) in PRINTED_INTEGRANDS.items():
        pair = bp.build_integrand(sd.d2_params(p))
        assert pair.u_poly == IntPoly(u), p
        assert pair.v_poly == IntPoly(v), p


def test_build_integrand_preserves_the_ratio():
    for p in (2, 3, 5, 7, 10):
        row = sd.d2_params(p)
        first, second, third = bp.a1a2a3(row.a, row.b, row.c)
        pair = bp.build_integrand(row)
        for x in (Fraction(0), Fraction(1), Fraction(1, 2), Fraction(7),
                  Fraction(-3, 4)):
            top = first + second * x + third * x * x
            bottom = 1 - Fraction(27, 4) * row.rho * x * x * (1 - x)
            assert pair.u_poly(x) * bottom == pair.v_poly(x) * top, (p, x)


def test_integrand_pair_validation():
    with pytest.raises(ValueError):
        bp.IntegrandPair(IntPoly([Fraction(1, 2)]), IntPoly([1]))
    with pytest.raises(ValueError):
        bp.IntegrandPair(IntPoly([1]), IntPoly([]))
    with pytest.raises(ValueError):
        bp.IntegrandPair(IntPoly([1]), IntPoly([-1, 2]))  # root at 1/2


def test_integral_check_all_printed_rows():
    for p in (2, 3, 5, 7, 10):
        pair = bp.build_integrand(sd.d2_params(p))
        report = bp.integral_check(pair, p, 40)
        assert report.passed, (p, report.difference)


def test_integral_of_zero_numerator_is_zero():
    pair = bp.IntegrandPair(IntPoly([]), IntPoly([20, 4, 1]))
    assert bp.integral_value(pair, 30) == 0


def _combined_log(p, z, bits=160):
    row = sd.d2_params(p)
    _, phi_b, phi_c, _ = bp.phi_closed_forms(z, bits)
    return (Fraction(6 * row.b - row.a, 24 * row.c) * phi_b
            + Fraction(5 * row.a - 6 * row.b, 24 * row.c) * phi_c)


def test_phi_combination_reaches_log_p():
    with mpmath.workdps(60):
        for p, z in [(2, GaussianRational(3)), (3, GaussianRational(2)),
                     (7, GaussianRational(Fraction(4, 3)))]:
            value = _combined_log(p, z)
            want = mpmath.mpf(machin.log_decimal(p, 50)) if p != 7 \
                else mpmath.log(7)
            assert abs(value - want) < mpmath.mpf(10) ** -40, p
            assert abs(mpmath.im(value)) < mpmath.mpf(10) ** -40, p


def test_phi_combination_complex_points():
    # the two rows whose z is imaginary: one exact, one irrational
    with mpmath.workdps(60):
        for p, z in [(5, GaussianRational(0, 2)),
                     (10, bp.z_from_rho(Fraction(-1, 80)))]:
            value = _combined_log(p, z)
            want = mpmath.mpf(machin.log_decimal(p, 50)) if p == 5 \
                else mpmath.log(10)
            assert abs(value - want) < mpmath.mpf(10) ** -40, p


def test_phi_alpha_form_combination():
    with mpmath.workdps(60):
        for p, z in [(2, GaussianRational(3)), (3, GaussianRational(2))]:
            row = sd.d2_params(p)
            phi_a, _, _, phi_d = bp.phi_closed_forms(z, 160)
            value = (-Fraction(row.beta, row.gamma) * phi_a
                     + Fraction(row.alpha + 2 * row.beta, row.gamma) * phi_d)
            want = mpmath.mpf(machin.log_decimal(p, 50))
            assert abs(value - want) < mpmath.mpf(10) ** -40, p


def test_log_from_closed_forms_all_rows():
    with mpmath.workdps(60):
        for p in (2, 3, 5, 7, 10):
            value = bp.log_from_closed_forms(p, 160)
            want = mpmath.mpf(machin.log_decimal(p, 55))
            assert abs(value - want) < mpmath.mpf(10) ** -40, p


def test_phi_rejects_poles_and_divergence():
    with pytest.raises(ValueError, match="pole"):
        bp.phi_closed_forms(GaussianRational(1), 64)
    with pytest.raises(ValueError, match="pole"):
        bp.phi_closed_forms(GaussianRational(0), 64)
    with pytest.raises(ValueError, match="diverge"):
        # |z| just above 1: rho lands outside the unit disc
        bp.phi_closed_forms(GaussianRational(Fraction(23, 20)), 64)


def test_z_from_rho_table_values():
    assert bp.z_from_rho(Fraction(1, 243)) == GaussianRational(2)
    assert bp.z_from_rho(Fraction(1, 3888)) == GaussianRational(3)
    assert bp.z_from_rho(Fraction(27, 196)) == GaussianRational(Fraction(4, 3))
    assert bp.z_from_rho(Fraction(-1, 675)) == GaussianRational(0, 2)


def test_z_from_rho_matches_parameter_map():
    # for the rows with rational z, z equals (p+1)/(p-1)
    for p in (2, 3, 7):
        row = sd.d2_params(p)
        assert bp.z_from_rho(row.rho) == GaussianRational(Fraction(p + 1, p - 1))


def test_z_from_rho_irrational_row():
    z = bp.z_from_rho(Fraction(-1, 80))
    assert isinstance(z, mpmath.mpc)
    assert z.real == 0
    with mpmath.workdps(30):
        assert abs(z.imag ** 2 - mpmath.mpf(5) / 3) < mpmath.mpf(10) ** -20


def test_z_from_rho_rejects_bad_rho():
    with pytest.raises(ValueError):
        bp.z_from_rho(0)
    with pytest.raises(ValueError):
        bp.z_from_rho(Fraction(1, 6))  # above 4/27
