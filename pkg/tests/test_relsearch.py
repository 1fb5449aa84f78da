import random
from fractions import Fraction

import pytest

from logseries import machin
from logseries import relsearch as rs
from logseries.exactnum import FixedReal, IntPoly
from logseries.seriesdef import Motive, catalog_get


def _m2a(rho=Fraction(1, 2)):
    return Motive((Fraction(1), Fraction(1, 2)),
                  (Fraction(1, 6), Fraction(5, 6)), rho)


def _log_fixed(p, digits, bits):
    return FixedReal.from_rational(Fraction(machin.log_decimal(p, digits)),
                                   bits)


# ----------------------------------------------------------------------
#  Partial sums
# ----------------------------------------------------------------------

def test_single_term_sum_is_the_first_term():
    motive = _m2a(Fraction(1, 243))
    r_poly = rs.motive_denominator(motive)
    got = rs.partial_sum_si(motive, r_poly, 0, 1, 256)
    assert abs(got.to_fraction() - Fraction(2, 135)) <= Fraction(1, 2 ** 255)


def test_sums_stabilize_once_the_tail_is_spent():
    motive = _m2a(Fraction(1, 3888))
    r_poly = rs.motive_denominator(motive)
    a = rs.partial_sum_si(motive, r_poly, 1, 60, 400)
    b = rs.partial_sum_si(motive, r_poly, 1, 70, 400)
    assert abs((a - b).to_fraction()) < Fraction(1, 10 ** 60)


def test_weighted_sums_rebuild_log3():
    motive = _m2a(Fraction(1, 243))
    r_poly = rs.motive_denominator(motive)
    s1 = rs.partial_sum_si(motive, r_poly, 1, 250, 500)
    s0 = rs.partial_sum_si(motive, r_poly, 0, 250, 500)
    combo = 88 * s1.to_fraction() - 14 * s0.to_fraction()
    want = Fraction(machin.log_decimal(3, 130))
    assert abs(combo - want) < Fraction(1, 10 ** 100)


def test_partial_sum_rejects_bad_arguments():
    motive = _m2a(Fraction(1, 243))
    r_poly = rs.motive_denominator(motive)
    with pytest.raises(ValueError):
        rs.partial_sum_si(motive, r_poly, -1, 10, 256)
    with pytest.raises(ValueError):
        rs.partial_sum_si(motive, r_poly, 0, 0, 256)
    withzero = IntPoly([0, -5, 1])  # vanishes at n=5
    with pytest.raises(ValueError, match="n=5"):
        rs.partial_sum_si(motive, withzero, 0, 10, 256)


def test_motive_denominator_clears_fractions():
    assert rs.motive_denominator(_m2a()) == IntPoly([0, -1, 2])  # n(2n-1)


# ----------------------------------------------------------------------
#  LLL
# ----------------------------------------------------------------------

def test_lll_leaves_reduced_bases_alone():
    eye = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert rs.lll_reduce(eye) == eye
    diag = [[1, 0, 0], [0, 1, 0], [0, 0, 10 ** 20]]
    assert rs.lll_reduce(diag) == diag


def test_lll_first_vector_is_shortest_in_2d():
    reduced = rs.lll_reduce([[201, 37], [1648, 297]])
    got = reduced[0][0] ** 2 + reduced[0][1] ** 2
    best = min((a * 201 + b * 1648) ** 2 + (a * 37 + b * 297) ** 2
               for a in range(-50, 51) for b in range(-50, 51)
               if (a, b) != (0, 0))
    assert got == best


def _det(rows):
    n = len(rows)
    m = [[Fraction(x) for x in row] for row in rows]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        for r in range(col + 1, n):
            factor = m[r][col] / m[col][col]
            m[r] = [a - factor * b for a, b in zip(m[r], m[col])]
    return det


def test_lll_is_a_unimodular_transform():
    rng = random.Random(7)
    for _ in range(20):
        basis = [[rng.randrange(-99, 100) for _ in range(3)] for _ in range(3)]
        if _det(basis) == 0:
            continue
        reduced = rs.lll_reduce(basis)
        assert abs(_det(reduced)) == abs(_det(basis))


def test_lll_output_is_size_reduced_and_lovasz():
    rng = random.Random(11)
    delta = Fraction(99, 100)
    for _ in range(10):
        basis = [[rng.randrange(-500, 501) for _ in range(4)]
                 for _ in range(4)]
        if _det(basis) == 0:
            continue
        reduced = rs.lll_reduce(basis)
        mu, norms = rs._gram(reduced)
        for i in range(4):
            for j in range(i):
                assert abs(mu[i][j]) <= Fraction(1, 2)
        for k in range(1, 4):
            assert norms[k] >= (delta - mu[k][k - 1] ** 2) * norms[k - 1]


def test_lll_flags_rank_deficiency(caplog):
    import logging
    with caplog.at_level(logging.WARNING, logger="logseries.relsearch"):
        out = rs.lll_reduce([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    assert len(out) == 3
    assert any("rank" in r.message for r in caplog.records)


def test_lll_rejects_ragged_input():
    with pytest.raises(ValueError):
        rs.lll_reduce([[1, 2], [1]])


# ----------------------------------------------------------------------
#  lindep
# ----------------------------------------------------------------------

def test_lindep_exact_dyadic_pair():
    one = FixedReal.from_rational(Fraction(1), 256)
    half = FixedReal.from_rational(Fraction(1, 2), 256)
    got = rs.lindep([one, half], 64)
    assert got in ([1, -2], [-1, 2])


def test_lindep_doubled_logarithm():
    ln2 = Fraction(machin.log_decimal(2, 200))
    values = [FixedReal.from_rational(ln2, 660),
              FixedReal.from_rational(2 * ln2, 660)]
    got = rs.lindep(values, 64)
    assert got in ([2, -1], [-2, 1])


def test_lindep_finds_the_log3_relation():
    motive = _m2a(Fraction(1, 243))
    r_poly = rs.motive_denominator(motive)
    bits = 333  # about 100 working digits
    values = [_log_fixed(3, 110, bits),
              rs.partial_sum_si(motive, r_poly, 1, 120, bits),
              rs.partial_sum_si(motive, r_poly, 0, 120, bits)]
    got = rs.lindep(values, 64)
    assert got in ([-1, 88, -14], [1, -88, 14])


def test_lindep_refuses_thin_precision():
    one = FixedReal.from_rational(Fraction(1), 128)
    half = FixedReal.from_rational(Fraction(1, 2), 128)
    with pytest.raises(ValueError, match="bits"):
        rs.lindep([one, half], 64)
    with pytest.raises(ValueError):
        rs.lindep([one], 8)


def test_lindep_returns_none_without_a_relation():
    # log 2 and log 3 are multiplicatively independent; any integer
    # relation would need astronomically large coefficients.
    values = [_log_fixed(2, 200, 660), _log_fixed(3, 200, 660)]
    assert rs.lindep(values, 64) is None


# ----------------------------------------------------------------------
#  Search
# ----------------------------------------------------------------------

@pytest.fixture(scope="module")
def log3_search():
    target = _log_fixed(3, 200, 660)
    strategy = rs.LatticeStrategy(primes=(3,), exponent_bounds=((-8, 0),),
                                  cost_bound=2.0)
    return rs.search(_m2a(), target, 1, strategy)


@pytest.fixture(scope="module")
def log2_search():
    target = _log_fixed(2, 200, 660)
    strategy = rs.LatticeStrategy(primes=(2, 3),
                                  exponent_bounds=((-6, 0), (-6, 0)),
                                  cost_bound=2.0)
    return rs.search(_m2a(), target, 1, strategy)


def test_search_rediscovers_the_log3_series(log3_search):
    assert [c.rho for c in log3_search] == [Fraction(1, 243)]
    cand = log3_search[0]
    assert cand.coefficients == (1, -14, 88)
    assert abs(cand.cost - 1.4564) < 1e-4


def test_search_rediscovers_the_log2_series(log2_search):
    assert [c.rho for c in log2_search] == [Fraction(1, 3888)]
    cand = log2_search[0]
    assert cand.coefficients == (2, -297, 1794)
    assert abs(cand.cost - 0.9679) < 1e-4


def test_candidate_residual_meets_the_detection_bound(log3_search):
    wd = 60  # the 20*(h+2) floor used by this strategy
    assert abs(log3_search[0].residual.to_fraction()) < Fraction(1, 10 ** (wd // 2))


def test_candidate_series_matches_the_catalog(log3_search, log2_search):
    from logseries import binsplit
    got = binsplit.cross_verify(log3_search[0].series,
                                catalog_get("log3-eq8a"), 60)
    assert got >= 60
    got = binsplit.cross_verify(log2_search[0].series,
                                catalog_get("log2-eq8"), 60)
    assert got >= 60


def test_search_with_unreachable_rho_bound_is_empty():
    target = _log_fixed(3, 200, 660)
    strategy = rs.LatticeStrategy(primes=(3,), exponent_bounds=((-8, 0),),
                                  rho_bound=Fraction(1, 10 ** 6))
    assert rs.search(_m2a(), target, 1, strategy) == []


def test_search_with_no_primes_is_empty():
    target = _log_fixed(3, 200, 660)
    strategy = rs.LatticeStrategy(primes=(), exponent_bounds=())
    assert rs.search(_m2a(), target, 1, strategy) == []


def test_search_skips_when_the_target_is_too_short(caplog):
    import logging
    target = _log_fixed(3, 60, 200)
    strategy = rs.LatticeStrategy(primes=(3,), exponent_bounds=((-8, 0),))
    with caplog.at_level(logging.WARNING, logger="logseries.relsearch"):
        assert rs.search(_m2a(), target, 1, strategy) == []
    assert any("confirmation" in r.message for r in caplog.records)


def test_search_rejects_incomplete_motives():
    lopsided = Motive((Fraction(1), Fraction(1, 6)),
                      (Fraction(1, 4), Fraction(3, 4)), Fraction(1, 2))
    target = _log_fixed(3, 200, 660)
    strategy = rs.LatticeStrategy(primes=(3,), exponent_bounds=((-8, 0),))
    with pytest.raises(ValueError, match="complete"):
        rs.search(lopsided, target, 1, strategy)


def test_search_rejects_excess_weight():
    target = _log_fixed(3, 200, 660)
    strategy = rs.LatticeStrategy(primes=(3,), exponent_bounds=((-8, 0),))
    with pytest.raises(ValueError, match="weight"):
        rs.search(_m2a(), target, 3, strategy)


# ----------------------------------------------------------------------
#  Types and report
# ----------------------------------------------------------------------

def test_strategy_validation():
    with pytest.raises(ValueError, match="distinct"):
        rs.LatticeStrategy(primes=(3, 3), exponent_bounds=((-1, 0), (-1, 0)))
    with pytest.raises(ValueError, match="> 1"):
        rs.LatticeStrategy(primes=(1,), exponent_bounds=((-1, 0),))
    with pytest.raises(ValueError, match="per prime"):
        rs.LatticeStrategy(primes=(2, 3), exponent_bounds=((-1, 0),))
    with pytest.raises(ValueError, match="min <= max"):
        rs.LatticeStrategy(primes=(2,), exponent_bounds=((0, -1),))
    with pytest.raises(ValueError, match="rho_bound"):
        rs.LatticeStrategy(primes=(2,), exponent_bounds=((-1, 0),),
                           rho_bound=Fraction(3, 2))


def test_candidate_validation(log3_search):
    good = log3_search[0]
    with pytest.raises(ValueError, match="beta"):
        rs.RelationCandidate(coefficients=(0, -14, 88), rho=good.rho,
                             cost=good.cost, residual=good.residual,
                             series=good.series)
    with pytest.raises(ValueError, match="leading"):
        rs.RelationCandidate(coefficients=(1, -14, 0), rho=good.rho,
                             cost=good.cost, residual=good.residual,
                             series=good.series)
    with pytest.raises(ValueError, match="rho"):
        rs.RelationCandidate(coefficients=good.coefficients, rho=Fraction(2),
                             cost=good.cost, residual=good.residual,
                             series=good.series)


def test_report_block_fields(log3_search, tmp_path):
    text = rs.format_report(log3_search, args_text="primes {3}",
                            const_text="1.0986")
    assert " args  = primes {3}" in text
    assert " const = 1.0986" in text
    assert " hgm_1 = [[1, 1/2], [1/6, 5/6]]" in text
    assert " LINEAR DEPENDENCE FOUND" in text
    assert " [-1, 88, -14]" in text
    assert " rho_1 = 1/243" in text
    assert " BSC   = 1.4563" in text

    out = tmp_path / "results.txt"
    rs.write_report(log3_search, out, args_text="a")
    rs.write_report(log3_search, out, args_text="b")
    body = out.read_text()
    assert body.count("LINEAR DEPENDENCE FOUND") == 2  # appends, not rewrites


def test_empty_report_is_empty():
    assert rs.format_report([]) == ""
