import math

import pytest

from valdist import (
    BinomialShape,
    ConstantPolynomial,
    DegreeTooSmall,
    DuplicateTargets,
    LinearCoefficientNonzero,
    Polynomial,
    RationalFunction,
    TooFewTargets,
    claim1_chain_report,
    claim1_shape_check,
    jensen_constant,
    log_rgrid,
    remark_fft_check,
    verify_degree_growth,
    verify_first_fundamental,
    verify_second_fundamental,
)

from conftest import make_rng, random_rational

GRID = log_rgrid(1.0, 1e4, 32)


def as_rf(*coeffs):
    return RationalFunction.from_polynomial(Polynomial(coeffs))


# -- first fundamental theorem --------------------------------------------------


def test_fft_identity_series_for_z():
    rep = verify_first_fundamental(as_rf(0, 1), 0.0, GRID)
    assert rep.verdict
    assert rep.sup_abs <= 1e-9
    assert rep.params["jensen_gap"] <= 1e-9


def test_fft_z2_minus_1_at_zero():
    rep = verify_first_fundamental(as_rf(-1, 0, 1), 0.0, GRID)
    assert rep.verdict
    assert rep.tail_drift <= 1e-3
    assert abs(rep.series[-1]) <= 1e-6  # Jensen constant log|f(0)| = log 1 = 0
    assert rep.sup_abs <= 0.7


def test_fft_z2_at_one():
    rep = verify_first_fundamental(as_rf(0, 0, 1), 1.0, GRID)
    assert rep.verdict
    assert abs(rep.series[-1]) <= 1e-6  # log|0 - 1| = 0
    assert rep.params["jensen_gap"] <= 1e-6


def test_fft_recovers_nontrivial_jensen_constant():
    f = as_rf(2, 1)  # z + 2
    rep = verify_first_fundamental(f, 0.0, GRID)
    assert abs(rep.params["jensen_empirical"] - math.log(2)) <= 1e-6
    assert abs(jensen_constant(f, 0.0) - math.log(2)) <= 1e-15


def test_fft_rejects_infinite_target():
    with pytest.raises(ValueError):
        verify_first_fundamental(as_rf(0, 1), "inf", GRID)


def test_jensen_constant_laurent_form():
    # f - a has a zero at the origin of order 2: c is the z^2 coefficient
    f = as_rf(1, 0, 3)  # 3z^2 + 1, a = 1
    assert abs(jensen_constant(f, 1.0) - math.log(3)) <= 1e-15
    # pole at the origin: c is the ratio of the lowest coefficients
    g = RationalFunction(Polynomial([5]), Polynomial([0, 2]))
    assert abs(jensen_constant(g, 1.0) - math.log(5 / 2)) <= 1e-12


# -- degree growth ------------------------------------------------------------------


def test_degree_growth_quintic():
    fit = verify_degree_growth(Polynomial([2, -1, 0, 0, 0, 3]), log_rgrid(10, 1e3, 24))
    assert abs(fit.slope - 5) <= 1e-3
    # Jensen at the origin: intercept -> log|P(0)| - log prod|roots| = log 3
    assert abs(fit.intercept - math.log(3)) <= 1e-6


def test_degree_growth_identity_map():
    fit = verify_degree_growth(Polynomial([0, 1]), GRID)
    assert abs(fit.slope - 1) <= 1e-9
    assert abs(fit.intercept) <= 1e-9
    assert fit.residual <= 1e-9


def test_degree_growth_rejects_constant_and_short_grids():
    with pytest.raises(ConstantPolynomial):
        verify_degree_growth(Polynomial([3]), GRID)
    with pytest.raises(ValueError):
        verify_degree_growth(Polynomial([0, 1]), log_rgrid(1.0, 50.0, 16))


# -- second fundamental theorem ---------------------------------------------------------


def test_smt_square():
    rep = verify_second_fundamental(as_rf(0, 0, 1), [0, 1, "inf"], GRID)
    assert rep.verdict
    # slack = log r + O(1): strictly positive growth on the tail
    assert rep.series[-1] > rep.series[len(rep.series) // 2] > 0


def test_smt_identity_map():
    rep = verify_second_fundamental(as_rf(0, 1), [0, 1, "inf"], GRID)
    assert rep.verdict


def test_smt_input_validation():
    with pytest.raises(TooFewTargets):
        verify_second_fundamental(as_rf(0, 0, 1), [0, 1], GRID)
    with pytest.raises(DuplicateTargets):
        verify_second_fundamental(as_rf(0, 0, 1), [0, 1, 1 + 0j], GRID)
    with pytest.raises(DuplicateTargets):
        verify_second_fundamental(as_rf(0, 0, 1), ["inf", 1, "inf"], GRID)


def test_smt_default_allowance_scales_with_degrees():
    rep = verify_second_fundamental(as_rf(0, 0, 1), [0, 1, "inf"], GRID)
    assert rep.params["c_s"] == 4.0 * (3 + 2 + 0)


# -- restricted-shape check ---------------------------------------------------------------


def test_shape_accepts_cubic_walkthrough():
    dec = claim1_shape_check(Polynomial([-1, 0, 3, 1]))
    assert (dec.m, dec.l) == (3, 2)
    assert dec.b0 == 1 and dec.bm == -1
    assert dec.R == Polynomial([3, 1])
    assert dec.F == Polynomial([0, 0, 3, 1])
    # reconstruction: Q = F + bm
    assert dec.F + Polynomial([dec.bm]) == Polynomial([-1, 0, 3, 1])


def test_shape_accepts_quartic():
    dec = claim1_shape_check(Polynomial([5, 0, 1, 0, 2]))
    assert (dec.m, dec.l) == (4, 2)
    assert dec.R == Polynomial([1, 0, 2])
    assert dec.bm == 5


def test_shape_rejections():
    with pytest.raises(LinearCoefficientNonzero):
        claim1_shape_check(Polynomial([0, 1, 0, 1]))  # z^3 + z
    with pytest.raises(DegreeTooSmall):
        claim1_shape_check(Polynomial([1, 0, 1]))
    with pytest.raises(BinomialShape) as info:
        claim1_shape_check(Polynomial([2, 0, 0, 0, 0, 1]))  # z^5 + 2
    assert info.value.degree == 5
    assert info.value.constant == 2
    with pytest.raises(BinomialShape):
        claim1_shape_check(Polynomial([0, 0, 0, 1]))  # z^3: no middle terms at all


# -- restricted-shape chain -----------------------------------------------------------------


def test_chain_cubic():
    rep = claim1_chain_report(Polynomial([-1, 0, 3, 1]), GRID)
    assert rep.verdict
    assert rep.params["ratio"] == pytest.approx(2 / 3)
    for key in ("T_F_drift", "Nbar_zl_drift", "N_R_drift"):
        assert rep.params[key] <= 1e-2
    # margin grows like 2 log r
    assert rep.series[-1] == pytest.approx(2 * math.log(GRID[-1]), abs=5e-3)


def test_chain_quartic():
    rep = claim1_chain_report(Polynomial([5, 0, 1, 0, 2]), GRID)
    assert rep.verdict
    assert rep.params["ratio"] == pytest.approx(3 / 4)
    # margin = 3 log r - (1/4) log 2 - log(5/2): the T-route constant comes
    # from F = z^2 (2z^2 + 1) via the origin-anchored mean-value identity,
    # the target-route one from the four simple roots at modulus (5/2)^(1/4)
    expected = 3 * math.log(GRID[-1]) - math.log(2) / 4 - math.log(5 / 2)
    assert rep.series[-1] == pytest.approx(expected, abs=5e-3)


def test_chain_propagates_shape_errors():
    with pytest.raises(LinearCoefficientNonzero):
        claim1_chain_report(Polynomial([0, 1, 0, 1]), GRID)


# -- remark check ----------------------------------------------------------------------------


def test_remark_z2_minus_1():
    rep = remark_fft_check(Polynomial([-1, 0, 1]), GRID)
    assert rep.verdict
    # exact once r clears both roots: N = 2 log r
    assert abs(rep.series[-1]) <= 1e-9


def test_remark_identity_map():
    rep = remark_fft_check(Polynomial([0, 1]), GRID)
    assert rep.verdict
    assert rep.sup_abs <= 1e-12


def test_remark_rejects_constant():
    with pytest.raises(ConstantPolynomial):
        remark_fft_check(Polynomial([5]), GRID)


# -- report JSON form -------------------------------------------------------------------------


def test_report_json_dict_shape():
    rep = verify_second_fundamental(as_rf(0, 0, 1), [0, 1, "inf"], GRID)
    d = rep.to_json_dict()
    assert d["theorem"] == "smt"
    assert d["verdict"] == "pass"
    assert len(d["rgrid"]) == len(d["series"]) == len(GRID)
    assert set(d) >= {"theorem", "context", "rgrid", "series", "sup_abs", "tail_drift", "verdict", "params"}


def test_fft_bounded_on_random_rational():
    rng = make_rng(61)
    f = random_rational(rng, 5, 3)
    a = f(0) - 0.7
    rep = verify_first_fundamental(f, a, GRID)
    assert math.isfinite(rep.sup_abs)
    assert rep.tail_drift <= 1e-3
    assert rep.params["jensen_gap"] <= 1e-6
