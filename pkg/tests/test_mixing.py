from fractions import Fraction as F
from math import ceil, exp, log

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from latticewalk import lattices as lat
from latticewalk import mixing as mx
from latticewalk.errors import FormulaInapplicableError, NotApplicableError, ValidationError
from latticewalk.measures import PBinomial, Pitman, PlancherelLimit, ShiftedPlancherel, UniformLevel, ZMeasure
from latticewalk.operators import UP_DOWN, composed_kernel
from latticewalk.partitions import Partition
from latticewalk.spectral import SpectralProfile, closed_form_spectrum, schur_kernel

P = Partition.of


def test_tv_distance_extremes():
    p = [F(1, 2), F(1, 4), F(1, 4)]
    assert mx.tv_distance(p, p) == 0
    assert mx.tv_distance([1, 0], [0, 1]) == 1


def test_tv_of_rank_one_kernel_vanishes_after_one_step():
    kernel = composed_kernel(lat.kingman(), Pitman(1), 2)
    assert mx.tv_profile(kernel, P(2), 1)[1] == 0


def test_spectral_bound_dominates_tv():
    kernel = composed_kernel(lat.pascal(), PBinomial(F(1, 2)), 4)
    eig = mx.kernel_eigendata(kernel)
    exact = mx.tv_profile(kernel, 0, 8)
    for r in (0, 8):
        assert mx.tv_spectral_bound(eig, 0, r) >= float(exact[r])


def test_schur_bound_at_six():
    n, c = 6, 1.0
    r = mx.schur_theorem_steps(n, c)
    assert r == ceil(3 * log(6) + 6)
    bound = mx.schur_top_tv_bound(n, r)
    exact = mx.tv_profile(composed_kernel(lat.schur(), ShiftedPlancherel(), n), P(6), r)[r]
    assert float(exact) <= bound <= exp(-3) / 4


def test_schur_top_bound_matches_eigenbasis():
    n = 7
    eig = mx.schur_eigendata(n)
    x = schur_kernel(n).states.index(P(7))
    for r in (1, 5, 12):
        assert mx.tv_spectral_bound(eig, x, r) == pytest.approx(mx.schur_top_tv_bound(n, r))


def test_missing_eigendata():
    with pytest.raises(NotApplicableError):
        mx.tv_spectral_bound(None, 0, 1)


def test_plancherel_separation_at_three():
    kernel = composed_kernel(lat.young(), PlancherelLimit(), 3)
    result = mx.separation_bruteforce(kernel, 3)
    assert result.value == F(1, 9)
    assert set(result.argpair) == {P(3), P(1, 1, 1)}
    assert mx.closed_form_separation(lat.young(), PlancherelLimit(), 3, 3) == F(1, 9)


@pytest.mark.parametrize("p", [F(1, 4), F(1, 2)])
def test_pascal_first_step_separation(p):
    assert mx.separation_bruteforce(composed_kernel(lat.pascal(), PBinomial(p), 2), 1).value == 1


def test_rank_one_kingman_separation():
    assert mx.separation_bruteforce(composed_kernel(lat.kingman(), Pitman(1, F(1, 4)), 2), 1).value == 0


def test_closed_forms_small_cases():
    assert mx.pascal_separation(2, 3) == F(1, 4)
    assert all(mx.kingman_theta1_separation(2, r) == 0 for r in range(1, 6))
    with pytest.raises(NotApplicableError):
        mx.closed_form_separation(lat.schur(), ShiftedPlancherel(), 3, 1)


def test_separation_formula_small_cases():
    assert all(mx.separation_eigen([F(1, 2)], r) == F(1, 2) ** r for r in range(8))
    assert all(mx.separation_eigen([F(1, 3), F(0)], r) == F(1, 3) ** (r - 1) for r in range(1, 8))
    kernel = composed_kernel(lat.boolean(4), UniformLevel(), 2)
    brute = mx.separation_profile(kernel, 8).s_star
    assert all(brute[r] == 3 * F(1, 3) ** r for r in range(1, 9))


def test_separation_formula_rejects_bad_input():
    with pytest.raises(FormulaInapplicableError):
        mx.separation_eigen([F(1, 2), F(1, 2)], 3)
    with pytest.raises(FormulaInapplicableError):
        mx.separation_eigen([F(1), F(1, 2)], 3)


def test_geometric_tail_small_cases():
    assert [mx.geometric_tail([F(1, 2)], r) for r in range(6)] == [F(1, 2) ** r for r in range(6)]
    x = F(2, 5)
    assert all(mx.geometric_tail([F(0), x], r) == x ** (r - 1) for r in range(1, 8))
    with pytest.raises(ValidationError):
        mx.geometric_tail([F(1)], 2)


def test_geometric_tail_matches_formula_for_plancherel():
    distinct = closed_form_spectrum(lat.young(), PlancherelLimit(), 4).distinct_nonunit()
    tails = mx.geometric_tail_profile(distinct, 20)
    assert tails[1:] == [mx.separation_eigen(distinct, r) for r in range(1, 21)]


def test_young_brute_force_matches_formula():
    spec = ZMeasure(0, 1)
    kernel = composed_kernel(lat.young(), spec, 3)
    distinct = closed_form_spectrum(lat.young(), spec, 3).distinct_nonunit()
    assert list(mx.separation_profile(kernel, 10).s_star) == [mx.separation_eigen(distinct, r) for r in range(11)]


def test_mixing_reports():
    pascal = mx.mixing_report(closed_form_spectrum(lat.pascal(), PBinomial(F(1, 3)), 2))
    assert (pascal.expected_time, pascal.n_half, pascal.sandwich_ok) == (3, 2, True)
    young = mx.mixing_report(closed_form_spectrum(lat.young(), ZMeasure(0, 1), 3))
    assert young.expected_time == F(13, 4) == mx.inverse_square_sum(3)
    kernel = composed_kernel(lat.young(), ZMeasure(0, 1), 3)
    assert mx.mixing_report(closed_form_spectrum(lat.young(), ZMeasure(0, 1), 3), kernel).n_half == young.n_half


def test_kingman_expected_time_bounds():
    mean = float(mx.expected_time(closed_form_spectrum(lat.kingman(), Pitman(2), 5)))
    lo, hi = mx.kingman_expected_time_bounds(2, 5)
    assert lo <= mean <= hi


@pytest.mark.parametrize("s2", [F(1, 2), F(3, 2), 4])
def test_young_expected_time_bounds(s2):
    for n in range(2, 25):
        mean = float(mx.expected_time(closed_form_spectrum(lat.young(), ZMeasure(0, s2), n)))
        lo, hi = mx.young_expected_time_bounds(s2, n)
        assert lo <= mean <= hi


def test_kingman_theta_one_expected_time():
    for n in range(2, 12):
        profile = closed_form_spectrum(lat.kingman(), Pitman(1, F(1, 2)), n)
        assert mx.expected_time(profile) == mx.inverse_square_sum(n)


@pytest.mark.parametrize("family, spec", [(lat.young(), ZMeasure(0, 1)), (lat.kingman(), Pitman(1, F(1, 2)))])
def test_shift_identity(family, spec):
    check = mx.updown_shift_check(family, spec, 3, 15)
    assert check.holds and check.updown[0] == check.downup_shifted[0]


def test_shift_identity_restricted_families():
    with pytest.raises(NotApplicableError):
        mx.updown_shift_check(lat.pascal(), PBinomial(F(1, 2)), 3, 5)


@pytest.mark.parametrize("family, spec, n", [
    (lat.young(), ZMeasure(1, F(3, 2)), 5),
    (lat.kingman(), Pitman(2, F(1, 2)), 5),
    (lat.pascal(), PBinomial(F(2, 3)), 6),
    (lat.boolean(6), UniformLevel(), 3),
    (lat.subspace(4, 2), UniformLevel(), 2),
])
def test_extremal_pairs_attain(family, spec, n):
    kernel = composed_kernel(family, spec, n)
    assert mx.extremal_pairs_attain(kernel, 15)
    profile = mx.separation_profile(kernel, 6)
    assert profile.argpairs[6] in mx.extremal_pairs(kernel)


def test_argpair_tie_break_is_first_in_canonical_order():
    kernel = composed_kernel(lat.young(), PlancherelLimit(), 4)
    assert mx.separation_bruteforce(kernel, 5).argpair == (P(4), P(1, 1, 1, 1))


def test_extremal_pairs_only_for_down_up():
    with pytest.raises(NotApplicableError):
        mx.extremal_pairs(composed_kernel(lat.young(), PlancherelLimit(), 3, UP_DOWN))


def test_kingman_separation_alpha_free():
    for n in range(2, 7):
        profiles = {mx.separation_profile(composed_kernel(lat.kingman(), Pitman(F(3, 2), al), n), 10).s_star
                    for al in (0, F(1, 4), F(1, 2))}
        assert len(profiles) == 1


def test_schur_profile_is_well_behaved():
    profile = mx.separation_profile(composed_kernel(lat.schur(), ShiftedPlancherel(), 6), 12)
    assert profile.is_monotone() and profile.is_submultiplicative() and profile.dominates_tv()


def test_float_extremal_pairs():
    kernel = composed_kernel(lat.kingman(), Pitman(2, F(1, 4)), 5, backend="float")
    assert mx.extremal_pairs_attain(kernel, 10)


def test_limit_curves():
    assert mx.limit_curve(mx.COUPON_PLANCHEREL, 0) == pytest.approx(1 - 2 / np.e)
    assert mx.limit_curve(mx.COUPON_PASCAL, 0) == pytest.approx(1 - 1 / np.e)
    truncated = 2 * sum((-1) ** i * (i * i - 1) * exp(-i * i) for i in range(2, 7))
    assert mx.limit_curve(mx.KINGMAN_THETA1, 1.0) == pytest.approx(truncated, abs=1e-12)
    with pytest.raises(ValidationError):
        mx.limit_curve(mx.KINGMAN_THETA1, 0)
    with pytest.raises(ValidationError):
        mx.limit_curve("cutoff", 1)


def test_kingman_partial_sums_bracket_the_limit():
    limit = mx.limit_curve(mx.KINGMAN_THETA1, 0.3)
    sums = mx.kingman_partial_sums(0.3, 10)
    for lo_hi in zip(sums, sums[1:]):
        assert min(lo_hi) - 1e-15 <= limit <= max(lo_hi) + 1e-15


def test_kingman_trend_toward_limit():
    for c in (0.1, 0.5):
        limit = mx.limit_curve(mx.KINGMAN_THETA1, c)
        diffs = [abs(mx.finite_curve(mx.KINGMAN_THETA1, n, c) - limit) for n in (20, 40, 60)]
        assert diffs[0] > diffs[1] > diffs[2]


def test_single_slow_eigenvalue():
    # one geometric with mean 100: the tail first drops below 1/2 at ceil(log 2 / -log 0.99)
    report = mx.mixing_report(SpectralProfile(((F(1), 1), (F(99, 100), 1))))
    assert report.n_half == ceil(log(2) / -log(0.99)) and report.sandwich_ok


@settings(max_examples=20, deadline=None)
@given(st.lists(st.fractions(min_value=0, max_value=F(19, 20), max_denominator=20), min_size=1, max_size=5, unique=True),
       st.integers(0, 15))
def test_tail_equals_alternating_formula(lams, r):
    assert mx.geometric_tail(lams, r) == mx.separation_eigen(lams, r)


@settings(max_examples=15, deadline=None)
@given(st.integers(2, 6), st.fractions(min_value=F(1, 10), max_value=F(9, 10), max_denominator=10))
def test_profile_laws_on_pascal(n, p):
    profile = mx.separation_profile(composed_kernel(lat.pascal(), PBinomial(p), n), 10)
    assert profile.is_monotone() and profile.is_submultiplicative() and profile.dominates_tv()
    assert list(profile.s_star) == [mx.pascal_separation(n, r) for r in range(11)]
