import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import latmoment as lm
from latmoment.bounds import (
    BoundReport,
    HeightHypothesis,
    ThresholdError,
    ZetaInterval,
    _quadratic_ideal_counts,
    _simplex_project,
    a2m_bound,
    alpha_M,
    ball_intersection_sum_terms,
    best_k_threshold,
    column_height_ratio_bound,
    cyclotomic_second_moment_constants,
    dedekind_zeta,
    dedekind_zeta_field,
    default_hypothesis,
    ellipsoid_intersection_bound,
    f_M,
    g_M,
    ideal_sum_bound,
    moment_bounds,
    proj_unit_sum_bound,
    second_moment_bounds,
    t0_threshold,
    unit_count_bound,
    volume_ratio_height_bound,
    voutier_hypothesis,
)
from latmoment.moments import MomentQuery
from latmoment.numberfield import fundamental_unit, make_field
from latmoment.heights import rred_matrix, weil_height

Q = make_field("Q")
QI = make_field("Q(sqrt,-1)")
Q2 = make_field("Q(sqrt,2)")
Q5 = make_field("Q(sqrt,5)")
Z5 = make_field("Q(zeta,5)")


# ---------------------------------------------------------------------------
# comparison functions


def test_f1_is_cosh():
    for x in (-2.0, -0.3, 0.0, 0.7, 5.0):
        assert f_M(1, x) == pytest.approx(math.cosh(x), rel=1e-15)


def test_f_M_values():
    assert f_M(3, 0.0) == 1.0
    assert f_M(2, 1.0) == pytest.approx(1.3104477159614374, rel=1e-12)
    assert f_M(2, 0.24) == pytest.approx(1.015030, abs=1e-6)
    assert f_M(5, 0.24) == pytest.approx(1.006153, abs=1e-6)


def test_f_M_matches_g_M_on_exponentials():
    for m in (1, 2, 4):
        for x in (-1.5, 0.2, 3.0):
            assert f_M(m, x) == pytest.approx(g_M(m, math.exp(x)), rel=1e-12)


def test_f_M_vectorized():
    x = np.linspace(-2, 2, 11)
    vals = f_M(3, x)
    assert vals.shape == x.shape
    assert vals[5] == pytest.approx(1.0)


def test_f_g_domain_errors():
    with pytest.raises(ValueError):
        f_M(0, 1.0)
    with pytest.raises(ValueError):
        g_M(2, 0.0)
    with pytest.raises(ValueError):
        g_M(0, 1.0)


@given(st.integers(1, 8), st.floats(-30, 30))
@settings(max_examples=80, deadline=None)
def test_f_M_at_least_one(m, x):
    # weighted AM-GM: the geometric mean of e^x (weight 1) and e^(-x/m)
    # (weight m) is 1
    assert f_M(m, x) >= 1.0 - 1e-12


# ---------------------------------------------------------------------------
# certified exponent


def test_alpha_certificate_samples():
    rng = np.random.default_rng(7)
    for m in (1, 2, 5):
        a = alpha_M(m, 0.24)
        assert 0 < a < 1
        xs = rng.uniform(0.12, 60.0, 300)
        assert np.all(f_M(m, xs) >= np.exp(a * xs) * (1 - 1e-9))


def test_alpha_binding_at_left_endpoint():
    # for M = 1 the constraint is tight where log cosh(x)/x is smallest,
    # the left end of the range
    a = alpha_M(1, 0.24)
    assert a == pytest.approx(math.log(math.cosh(0.12)) / 0.12, abs=2e-3)


def test_alpha_decreasing_in_M():
    vals = [alpha_M(m, 0.24) for m in (1, 2, 3, 5)]
    assert all(x > y > 0 for x, y in zip(vals, vals[1:]))


def test_alpha_increasing_in_c0():
    assert alpha_M(2, 0.5) > alpha_M(2, 0.24) > alpha_M(2, 0.1)


def test_alpha_domain_errors():
    with pytest.raises(ValueError):
        alpha_M(0, 0.24)
    with pytest.raises(ValueError):
        alpha_M(2, 0.0)


# ---------------------------------------------------------------------------
# hypotheses


def test_default_hypothesis_values():
    h = default_hypothesis(Z5)
    assert h.c0 == pytest.approx(0.5 * math.log((1 + math.sqrt(5)) / 2), rel=1e-12)
    assert h.c1 == pytest.approx(math.log(5) / 12, rel=1e-12)
    assert default_hypothesis(QI).c0 == h.c0
    hq = default_hypothesis(Q)
    assert hq.c0 == hq.c1 == pytest.approx(math.log(2), rel=1e-12)


def test_hypothesis_validation():
    with pytest.raises(ValueError):
        HeightHypothesis(0.1, 0.2)
    with pytest.raises(ValueError):
        HeightHypothesis(0.1, 0.0)
    with pytest.raises(ValueError):
        HeightHypothesis(math.inf, 0.1)


def test_voutier_floor():
    with pytest.raises(ValueError):
        voutier_hypothesis(2)
    h = voutier_hypothesis(10)
    assert 0 < h.c0 == h.c1 < 0.01
    assert h.provenance == "voutier"
    # decreasing in the degree once past the small-degree hump
    assert voutier_hypothesis(100).c0 < voutier_hypothesis(20).c0


# ---------------------------------------------------------------------------
# thresholds


TABLE = [(1, 26, 27), (2, 48, 97), (3, 70, 213), (4, 92, 372), (5, 115, 576)]
HC = HeightHypothesis(0.24, 0.12)


def test_threshold_table():
    sups = [t0_threshold(M, k, HC, rank_ratio=0.5) for M, k, _ in TABLE]
    assert sups == pytest.approx([26.5, 96.5, 210.5, 368.5, 575.5], abs=1e-9)
    for (M, k, target), sup in zip(TABLE, sups):
        assert sup < target


def test_threshold_rank_zero_is_counting_entry():
    assert t0_threshold(3, 7, HC, rank_ratio=0.0) == 21.5


def test_threshold_shifted_at_least_plain():
    for M, k, _ in TABLE:
        assert t0_threshold(M, k, HC, rank_ratio=0.5, shifted=True) >= t0_threshold(
            M, k, HC, rank_ratio=0.5
        )


def test_threshold_monotone_in_c0():
    ks = [t0_threshold(2, 10, HeightHypothesis(c, c / 2), rank_ratio=0.5)
          for c in (0.1, 0.2, 0.4, 0.8)]
    assert all(a >= b for a, b in zip(ks, ks[1:]))


def test_threshold_domain():
    with pytest.raises(ValueError):
        t0_threshold(0, 5, HC)
    with pytest.raises(ValueError):
        t0_threshold(1, 1, HC)
    with pytest.raises(ValueError):
        t0_threshold(1, 5, HC, rank_ratio=-0.1)


def test_best_k_ratio_window():
    for M in (20, 30, 40, 50, 60):
        _, t0 = best_k_threshold(M, HC, rank_ratio=0.5)
        assert 20.0 <= t0 / M**2 <= 23.0


def test_best_k_beats_fixed_k():
    k, t0 = best_k_threshold(4, HC, rank_ratio=0.5)
    assert t0 <= t0_threshold(4, 92, HC, rank_ratio=0.5) + 1e-12
    assert t0 == t0_threshold(4, k, HC, rank_ratio=0.5)


# ---------------------------------------------------------------------------
# report validation


def test_zeta_interval_validation():
    z = ZetaInterval(2.0, 1, 100, 1.5, 1.7)
    assert z.contains(1.6) and not z.contains(1.4)
    assert z.width == pytest.approx(0.2)
    with pytest.raises(ValueError):
        ZetaInterval(2.0, 1, 100, 1.7, 1.5)
    with pytest.raises(ValueError):
        ZetaInterval(2.0, 1, 100, 0.0, 1.5)


def test_bound_report_validation():
    with pytest.raises(ValueError):
        BoundReport(1.0, 0.0, 1.0, None, 1.0)
    with pytest.raises(ValueError):
        BoundReport(1.0, 0.1, 1.0, None, math.inf)
    with pytest.raises(ValueError):
        BoundReport(1.0, 0.1, "mystery", None, 1.0)
    rep = BoundReport(1.0, 0.1, "unresolved", None, 1.0)
    assert rep.C == "unresolved"


# ---------------------------------------------------------------------------
# zeta intervals


def test_zeta_rational_contains_basel():
    z = dedekind_zeta(1, 2.0, 10000)
    assert z.contains(math.pi**2 / 6)
    assert z.width < 1e-3
    z3 = dedekind_zeta(1, 3.0, 2000)
    assert z3.contains(1.2020569031595943)


def test_zeta_gaussian_value():
    z = dedekind_zeta(4, 2.0, 10000)
    assert z.width < 1e-3
    # pi^2/6 * Catalan-series L(2, chi_4)
    L = sum((-1) ** k / (2 * k + 1) ** 2 for k in range(200000))
    assert z.contains(math.pi**2 / 6 * L)


def test_zeta_conductor_normalization():
    a = dedekind_zeta(6, 2.0, 500)
    b = dedekind_zeta(3, 2.0, 500)
    assert (a.value_low, a.value_high) == (b.value_low, b.value_high)
    assert dedekind_zeta(2, 2.0, 500).conductor == 1


def test_zeta_nesting_in_P():
    for n in (1, 5, 8):
        wide = dedekind_zeta(n, 1.5, 200)
        tight = dedekind_zeta(n, 1.5, 2000)
        assert wide.value_low - 1e-12 <= tight.value_low
        assert tight.value_high <= wide.value_high + 1e-12
        assert tight.width < wide.width


def test_zeta_domain():
    with pytest.raises(ValueError):
        dedekind_zeta(5, 1.0)
    with pytest.raises(ValueError):
        dedekind_zeta(0, 2.0)


def test_zeta_power_boundedness():
    z1 = dedekind_zeta(1, 2.0, 4000)
    for n in range(3, 13):
        z = dedekind_zeta(n, 2.0, 4000)
        d = len([a for a in range(1, n) if math.gcd(a, n) == 1])
        assert z.value_high <= z1.value_high**d * 1.001


def test_zeta_thread_determinism(monkeypatch):
    monkeypatch.delenv("LATMOMENT_THREADS", raising=False)
    base = dedekind_zeta(5, 1.7, 3000)
    monkeypatch.setenv("LATMOMENT_THREADS", "4")
    threaded = dedekind_zeta(5, 1.7, 3000)
    assert (base.value_low, base.value_high) == (threaded.value_low, threaded.value_high)


# ---------------------------------------------------------------------------
# quadratic-field zeta backend


def test_quadratic_ideal_counts_gaussian():
    F = QI
    counts = _quadratic_ideal_counts(F, 10)
    assert list(counts[1:]) == [1, 1, 0, 1, 2, 0, 0, 1, 1, 2]


def test_quadratic_zeta_sqrt5():
    z = dedekind_zeta_field(Q5, 2.0, 3000)
    chi = {1: 1, 4: 1, 2: -1, 3: -1}
    L = sum(chi.get(n % 5, 0) / n**2 for n in range(1, 100000))
    assert z.contains(math.pi**2 / 6 * L)


def test_quadratic_zeta_sqrt2():
    z = dedekind_zeta_field(Q2, 2.0, 3000)
    chi = {1: 1, 7: 1, 3: -1, 5: -1}
    L = sum(chi.get(n % 8, 0) / n**2 for n in range(1, 100000))
    assert z.contains(math.pi**2 / 6 * L)


def test_quadratic_dispatch_uses_euler_for_cyclotomic_quadratics():
    za = dedekind_zeta_field(QI, 2.0, 10000)
    zb = dedekind_zeta(4, 2.0, 10000)
    assert (za.value_low, za.value_high) == (zb.value_low, zb.value_high)
    zc = dedekind_zeta_field(make_field("Q(sqrt,-3)"), 2.0, 500)
    assert zc.conductor == 3


# ---------------------------------------------------------------------------
# ellipsoid intersections


def test_ellipsoid_uniform_example():
    v = ellipsoid_intersection_bound(Q, 4, (1, 2), weights=(0.5, 0.5))
    assert v == pytest.approx(((1 + 4) / 2) ** -2, rel=1e-12)


def test_ellipsoid_optimizer_beats_uniform():
    uniform = ellipsoid_intersection_bound(Q, 4, (1, 2), weights=(0.5, 0.5))
    best = ellipsoid_intersection_bound(Q, 4, (1, 2))
    assert best <= uniform + 1e-12
    # all weight on alpha = 2 gives the true ratio 2^-4
    assert best == pytest.approx(2.0**-4, rel=1e-6)


def test_ellipsoid_weights_normalize():
    a = ellipsoid_intersection_bound(Q, 4, (1, 2), weights=(2.0, 2.0))
    b = ellipsoid_intersection_bound(Q, 4, (1, 2), weights=(0.5, 0.5))
    assert a == pytest.approx(b, rel=1e-12)


def test_ellipsoid_single_unit_is_one():
    assert ellipsoid_intersection_bound(QI, 3, (QI.one,)) == pytest.approx(1.0)


def test_ellipsoid_matrix_input():
    mat = rred_matrix(QI, [[QI.one, QI.gen + QI.one]])
    direct = ellipsoid_intersection_bound(QI, 3, (QI.one, QI.gen + QI.one))
    assert ellipsoid_intersection_bound(QI, 3, mat) == pytest.approx(direct, rel=1e-9)


def test_ellipsoid_errors():
    with pytest.raises(ValueError):
        ellipsoid_intersection_bound(Q, 4, ())
    with pytest.raises(ValueError):
        ellipsoid_intersection_bound(Q, 4, (0, 2))
    with pytest.raises(ValueError):
        ellipsoid_intersection_bound(Q, 4, (1, 2), weights=(1.0,))
    with pytest.raises(ValueError):
        ellipsoid_intersection_bound(Q, 4, (1, 2), weights=(-1.0, 2.0))


@given(st.lists(st.floats(-5, 5), min_size=1, max_size=6))
@settings(max_examples=60, deadline=None)
def test_simplex_projection_lands_on_simplex(v):
    w = _simplex_project(np.array(v))
    assert (w >= 0).all()
    assert w.sum() == pytest.approx(1.0, abs=1e-9)


def test_simplex_projection_fixes_simplex_points():
    v = np.array([0.2, 0.5, 0.3])
    assert _simplex_project(v) == pytest.approx(v, abs=1e-12)


# ---------------------------------------------------------------------------
# volume-ratio height bound


def test_volume_ratio_rational_example():
    v = volume_ratio_height_bound(Q, 4, (Q.from_rational(2),), k=2)
    assert v == pytest.approx(0.16, rel=1e-12)
    # true ratio 2^-4; the bound sits above it
    assert v >= 2.0**-4


def test_volume_ratio_silver_example():
    a = Q2.element((1, 1))
    v = volume_ratio_height_bound(Q2, 6, (a,), k=2)
    h = math.exp(2 * weil_height(Q2, a))
    expect = ((h**0.5 + h**-0.5) / 2) ** -6
    assert v == pytest.approx(expect, rel=1e-12)
    assert v == pytest.approx(0.5685424949238017, rel=1e-9)


def test_volume_ratio_torsion_is_one():
    assert volume_ratio_height_bound(QI, 4, (QI.gen,), k=2) == pytest.approx(1.0)
    assert volume_ratio_height_bound(QI, 4, (QI.gen,), k=None) == pytest.approx(1.0)


def test_volume_ratio_fallback_for_small_norm():
    # 2B contains B, so the true ratio is 1; the fallback form must sit at
    # or above it (vacuous is fine, invalid is not)
    half = Q.from_rational(Fraction(1, 2))
    v = volume_ratio_height_bound(Q, 4, (half,), k=2)
    assert math.isfinite(v) and v >= 1.0


def test_volume_ratio_errors():
    with pytest.raises(ValueError):
        volume_ratio_height_bound(Q, 4, (Q.zero,), k=2)
    with pytest.raises(ValueError):
        volume_ratio_height_bound(Q, 4, (Q.one,), k=1)


def test_column_form_matches_plain_form_at_single_entry():
    # at M=1 the gamma-ratio prefactor is 1 and the two displays coincide
    a = Q.from_rational(2)
    assert column_height_ratio_bound(Q, 4, (a,)) == pytest.approx(0.16, rel=1e-12)
    assert column_height_ratio_bound(Q, 4, (a,)) == pytest.approx(
        volume_ratio_height_bound(Q, 4, (a,), k=None), rel=1e-12)


def test_column_form_pair_value():
    v = column_height_ratio_bound(Q, 4, (Q.from_rational(2), Q.from_rational(3)))
    # (M+1)^(M t d/2) Gamma(3)^2/Gamma(5) base^(-2), base = 9 + 2*6/3 = 13
    assert v == pytest.approx(81.0 * (4.0 / 24.0) / 169.0, rel=1e-12)
    # the intersection is the smallest nested ball
    assert v >= 3.0**-4


def test_column_form_torsion_single_is_one():
    assert column_height_ratio_bound(QI, 4, (QI.gen,)) == pytest.approx(1.0)


def test_column_form_dominates_true_silver_ratio():
    a = Q2.element((1, 1))
    from latmoment.oracle import dirichlet_intersection

    assert column_height_ratio_bound(Q2, 6, [a]) >= dirichlet_intersection(Q2, 6, a)


def test_column_form_errors():
    with pytest.raises(ValueError):
        column_height_ratio_bound(Q, 4, (Q.zero,))
    with pytest.raises(ValueError):
        column_height_ratio_bound(Q, 4, ())


# ---------------------------------------------------------------------------
# unit counts


def test_unit_count_rational():
    hq = default_hypothesis(Q)
    assert unit_count_bound(Q, hq, 0.0) == 2.0
    assert unit_count_bound(Q, hq, 100.0) == 2.0


def test_unit_count_real_quadratic():
    he = weil_height(Q2, fundamental_unit(Q2))
    hyp = HeightHypothesis(he, he)
    assert unit_count_bound(Q2, hyp, he) == pytest.approx(6.0, rel=1e-12)
    assert unit_count_bound(Q2, hyp, 3 * he) == pytest.approx(14.0, rel=1e-12)


def test_unit_count_negative_norm_shift_grows():
    hyp = HeightHypothesis(0.24, 0.24)
    base = unit_count_bound(Q2, hyp, 1.0, Y=0.0)
    shifted = unit_count_bound(Q2, hyp, 1.0, Y=-2.0)
    assert shifted > base
    assert unit_count_bound(Q2, hyp, 1.0, Y=2.0) == base


def test_unit_count_tuple_form():
    hyp = HeightHypothesis(0.24, 0.24)
    scalar = unit_count_bound(Q2, hyp, 1.5)
    tup = unit_count_bound(Q2, hyp, (1.5,))
    assert tup == pytest.approx(scalar)
    Z7 = make_field("Q(zeta,7)")
    assert Z7.unit_rank == 2
    with pytest.raises(ValueError):
        unit_count_bound(Z7, hyp, (1.0,))


def test_unit_count_errors():
    hyp = HeightHypothesis(0.24, 0.24)
    with pytest.raises(ValueError):
        unit_count_bound(Q2, hyp, -1.0)
    with pytest.raises(ValueError):
        unit_count_bound(Q2, hyp, (1.0, 2.0), Y=(0.0,))


# ---------------------------------------------------------------------------
# unit-translate sum


def test_proj_unit_sum_thresholds_below_table():
    hyp = default_hypothesis(Z5)
    for M, k, target in TABLE:
        rep = proj_unit_sum_bound(Z5, hyp, float(target), tuple(Z5.one for _ in range(M)), k)
        assert rep.t0 < target
        assert rep.C > 2.0
        assert rep.bound_value > 0


def test_proj_unit_sum_decreasing_in_t():
    hyp = default_hypothesis(Z5)
    vals = [proj_unit_sum_bound(Z5, hyp, t, (Z5.one,), 26).bound_value
            for t in (30.0, 60.0, 120.0)]
    assert vals[0] > vals[1] > vals[2] > 0


def test_proj_unit_sum_threshold_error():
    hyp = default_hypothesis(Z5)
    with pytest.raises(ThresholdError) as exc:
        proj_unit_sum_bound(Z5, hyp, 5.0, (Z5.one,), 26)
    assert exc.value.t0 == pytest.approx(13.2456, abs=1e-3)
    assert "requires t >" in str(exc.value)


def test_proj_unit_sum_rejects_small_norm():
    hyp = default_hypothesis(Q)
    with pytest.raises(ValueError):
        proj_unit_sum_bound(Q, hyp, 10.0, (Q.from_rational(Fraction(1, 2)),), 4)


def test_proj_unit_sum_rank_zero_field_has_no_threshold():
    hyp = default_hypothesis(QI)
    rep = proj_unit_sum_bound(QI, hyp, 3.0, (QI.one,), 4)
    assert rep.t0 == 0.0


# ---------------------------------------------------------------------------
# ideal sums


def test_ideal_sum_rational_example():
    hyp = default_hypothesis(Q)
    rep = ideal_sum_bound(Q, hyp, 6.0, 1, 4)
    assert rep.t0 == pytest.approx(4.5)
    assert rep.epsilon == pytest.approx(0.0433, abs=1e-3)
    assert 900 < rep.bound_value < 1300
    assert rep.zeta_factor.value_high > 1


def test_ideal_sum_threshold_error_carries_value():
    hyp = default_hypothesis(QI)
    with pytest.raises(ThresholdError) as exc:
        ideal_sum_bound(QI, hyp, 3.0, 1, 3)
    assert exc.value.t0 == pytest.approx(3.5)


def test_ideal_sum_zeta_floor_dominates_for_small_k():
    # k = 2 makes the first zeta argument t/4; positivity needs t > 4
    hyp = default_hypothesis(Q)
    with pytest.raises(ThresholdError) as exc:
        ideal_sum_bound(Q, hyp, 2.7, 1, 2)
    assert exc.value.t0 == pytest.approx(4.0)


def test_ideal_sum_decreasing_in_t():
    hyp = default_hypothesis(QI)
    vals = [ideal_sum_bound(QI, hyp, t, 1, 3).bound_value for t in (4.0, 6.0, 10.0)]
    assert vals[0] > vals[1] > vals[2] > 0


def test_ball_intersection_terms_shape():
    hyp = default_hypothesis(QI)
    main, err = ball_intersection_sum_terms(QI, hyp, 4.0, 2.0, 1, 3)
    assert main == 2.0 * QI.omega_K
    assert err > 0
    main2, err2 = ball_intersection_sum_terms(QI, hyp, 8.0, 2.0, 2, 3)
    assert main2 == 2.0 * QI.omega_K**2
    assert err2 > 0


# ---------------------------------------------------------------------------
# second moment


def test_second_moment_lower_is_main():
    hyp = default_hypothesis(QI)
    rep = second_moment_bounds(QI, hyp, 8.0, 3.0)
    assert rep.lower == rep.main_term == 3.0**2 + QI.omega_K * 3.0
    assert rep.upper > rep.lower


def test_second_moment_rational_gap_window():
    hyp = default_hypothesis(Q)
    rep = second_moment_bounds(Q, hyp, 30.0, 1.0, k=4)
    gap = rep.upper - rep.lower
    assert 10 < gap < 30
    assert rep.constants["epsilon"] == pytest.approx(0.0433, abs=1e-3)


def test_second_moment_threshold():
    hyp = default_hypothesis(Q)
    with pytest.raises(ThresholdError) as exc:
        second_moment_bounds(Q, hyp, 4.5, 1.0, k=4)
    assert exc.value.t0 == pytest.approx(4.5)


def test_second_moment_epsilon_monotone_in_c1():
    eps = []
    for c1 in (0.05, 0.1, 0.2):
        rep = second_moment_bounds(Q, HeightHypothesis(0.3, c1), 20.0, 1.0)
        eps.append(rep.constants["epsilon"])
    assert eps[0] < eps[1] < eps[2]


def test_second_moment_errors():
    hyp = default_hypothesis(Q)
    with pytest.raises(ValueError):
        second_moment_bounds(Q, hyp, 20.0, 0.0)
    with pytest.raises(ValueError):
        second_moment_bounds(Q, hyp, 20.0, 1.0, k=1)


# ---------------------------------------------------------------------------
# cyclotomic-family second-moment constants


def test_cyclotomic_constants_epsilon_and_scalar():
    for F, cap in ((make_field("Q(sqrt,-3)"), 5625), (QI, 5625),
                   (Z5, 5625), (make_field("Q(zeta,8)"), 5625)):
        c = cyclotomic_second_moment_constants(F, 27.0)
        assert c["epsilon"] == 1.0 / 400.0
        assert c["epsilon_formula"] >= 1.0 / 400.0
        assert c["scalar"] <= cap
        assert c["C_low"] <= c["C_high"]
        z1, z2 = c["zeta1"], c["zeta2"]
        assert c["C_high"] <= cap * z1.value_high * z2.value_high + 1e-9


def test_cyclotomic_constants_degree_two_scalar_value():
    c = cyclotomic_second_moment_constants(QI, 27.0)
    assert c["scalar"] == pytest.approx(5624.5, abs=1.0)
    c4 = cyclotomic_second_moment_constants(Z5, 27.0)
    assert c4["scalar"] == pytest.approx(2814.5, abs=1.0)


def test_cyclotomic_constants_preconditions():
    with pytest.raises(ThresholdError):
        cyclotomic_second_moment_constants(QI, 26.0)
    with pytest.raises(ValueError):
        cyclotomic_second_moment_constants(Q, 27.0)


# ---------------------------------------------------------------------------
# pair tails


def test_a2m_rational_threshold_exact():
    hyp = default_hypothesis(Q)
    rep = a2m_bound(Q, hyp, 20.0, 3, 2)
    assert rep.t0 == 12.0
    assert rep.inputs["t0_effective"] == 12.0
    assert rep.C == "unresolved"
    assert rep.bound_value > 0
    with pytest.raises(ThresholdError) as exc:
        a2m_bound(Q, hyp, 12.0, 3, 2)
    assert exc.value.t0 == 12.0


def test_a2m_scales_with_supplied_constant():
    hyp = default_hypothesis(Q)
    one = a2m_bound(Q, hyp, 20.0, 3, 2).bound_value
    two = a2m_bound(Q, hyp, 20.0, 3, 2, C_S=2.0)
    assert two.C == 2.0
    assert two.bound_value == pytest.approx(2 * one, rel=1e-12)


def test_a2m_decreasing_in_t():
    hyp = default_hypothesis(Q)
    vals = [a2m_bound(Q, hyp, t, 3, 2).bound_value for t in (15.0, 25.0, 50.0)]
    assert vals[0] > vals[1] > vals[2] > 0


def test_a2m_unit_rank_field():
    hyp = default_hypothesis(Z5)
    rep = a2m_bound(Z5, hyp, 500.0, 3, 2)
    assert rep.t0 == pytest.approx(440.36, abs=0.5)
    assert rep.epsilon > 0
    assert math.isfinite(rep.bound_value)


def test_a2m_range_errors():
    hyp = default_hypothesis(Q)
    with pytest.raises(ValueError):
        a2m_bound(Q, hyp, 20.0, 3, 1)
    with pytest.raises(ValueError):
        a2m_bound(Q, hyp, 20.0, 3, 3)


# ---------------------------------------------------------------------------
# assembled moments


def test_moment_bounds_n2_delegates():
    hyp = default_hypothesis(QI)
    q = MomentQuery(QI, 8, 2, 3.0)
    via_assembler = moment_bounds(q, hyp)
    direct = second_moment_bounds(QI, hyp, 8.0, 3.0, k=4)
    assert via_assembler.upper == direct.upper
    assert via_assembler.lower == direct.lower


def test_moment_bounds_lower_equals_main():
    hyp = default_hypothesis(Q)
    q = MomentQuery(Q, 40, 3, 1.0)
    rep = moment_bounds(q, hyp)
    assert rep.lower == rep.main_term
    assert rep.upper > rep.main_term
    assert set(rep.components) == {"main", "torsion_tail", "rank_one_tail", "pair_tail_m2"}
    assert all(v >= 0 for v in rep.components.values())
    assert rep.constants["C_unresolved"] == 1.0


def test_moment_bounds_user_constant_resolves_flag():
    hyp = default_hypothesis(Q)
    q = MomentQuery(Q, 40, 3, 1.0)
    rep = moment_bounds(q, hyp, {"C": 2.5})
    assert rep.constants["C_unresolved"] == 0.0
    base = moment_bounds(q, hyp)
    assert rep.upper - rep.main_term == pytest.approx(
        2.5 * (base.upper - base.main_term), rel=1e-12
    )


def test_moment_bounds_threshold_reports_effective():
    hyp = default_hypothesis(Q)
    q = MomentQuery(Q, 12, 3, 1.0)
    with pytest.raises(ThresholdError) as exc:
        moment_bounds(q, hyp)
    assert exc.value.t0 == pytest.approx(12.0)


def test_moment_bounds_fixed_field_mode():
    hyp = default_hypothesis(Q)
    q = MomentQuery(Q, 40, 3, 1.0)
    rep = moment_bounds(q, hyp, {"mode": "fixed-field", "C": 5.0})
    t0 = rep.constants["t0"]
    eps = rep.constants["epsilon"]
    expect = 5.0 * 40.0**0.5 * math.exp(-eps * (40.0 - t0)) * 2.0**2
    assert rep.upper - rep.main_term == pytest.approx(expect, rel=1e-12)


def test_moment_bounds_cyclotomic_mode_threshold():
    hyp = default_hypothesis(Z5)
    q = MomentQuery(Z5, 4000, 3, 1.0)
    rep = moment_bounds(q, hyp, {"mode": "cyclotomic"})
    assert rep.constants["t0"] == pytest.approx(3699.6, abs=1.0)
    assert rep.upper > rep.main_term
    with pytest.raises(ThresholdError):
        moment_bounds(MomentQuery(Z5, 3000, 3, 1.0), hyp, {"mode": "cyclotomic"})


def test_moment_bounds_cyclotomic_threshold_growth():
    hyp = default_hypothesis(Z5)
    for n in (3, 6, 9, 12):
        t = int(40000 * n) + 1
        rep = moment_bounds(MomentQuery(Z5, t, n, 1.0), hyp, {"mode": "cyclotomic"})
        ratio = rep.constants["t0"] / (n**3 * math.log(math.log(n)))
        assert ratio < 1600


def test_moment_bounds_rank_ratio_override():
    hyp = default_hypothesis(Z5)
    q = MomentQuery(Z5, 5000, 3, 1.0)
    own = moment_bounds(q, hyp)
    fam = moment_bounds(q, hyp, {"rank_ratio": 0.5})
    assert fam.constants["t0"] > own.constants["t0"]


def test_moment_bounds_rejects_first_moment():
    hyp = default_hypothesis(Q)
    with pytest.raises(ValueError):
        moment_bounds(MomentQuery(Q, 10, 1, 1.0), hyp)
