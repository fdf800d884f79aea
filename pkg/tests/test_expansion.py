from fractions import Fraction as F
from math import comb, factorial

import pytest
from hypothesis import given, settings, strategies as st

from latticewalk import lattices as lat
from latticewalk.expansion import (
    a_table,
    dku_expansion_check,
    family_coefficients,
    occupancy_distribution,
    occupancy_probability,
    reconstruction_residual,
    series_coefficients,
    stirling2,
)
from latticewalk.measures import PBinomial, Pitman, PlancherelLimit, ShiftedPlancherel, UniformLevel, ZMeasure

FAMILIES = [
    (lat.young(), ZMeasure(1, 1)),
    (lat.young(), PlancherelLimit()),
    (lat.kingman(), Pitman(2, F(1, 4))),
    (lat.schur(), ShiftedPlancherel()),
    (lat.pascal(), PBinomial(F(1, 3))),
]


def test_stirling_values():
    assert [stirling2(r, r) for r in range(8)] == [1] * 8
    assert stirling2(3, 2) == 3
    assert stirling2(4, 2) == 7
    assert stirling2(2, 3) == 0


def test_initial_conditions():
    table = a_table(4, [F(1, 2)] * 4, [F(1, 2)] * 4, 3)
    assert table(0, 0) == 1
    assert all(table(0, m) == 0 for m in range(1, 5))


def test_plancherel_table_is_stirling():
    # with a = b = 1 the unnormalized table solves A(r,k) = A(r-1,k-1) + k A(r-1,k)
    for n in range(1, 7):
        table = a_table(n, [1] * n, [1] * n, 12)
        assert all(table(r, k) == stirling2(r, k) for r in range(13) for k in range(n + 1))


def test_pascal_table_formula():
    n = 3
    a, b = family_coefficients(lat.pascal(), PBinomial(F(1, 3)), n)
    table = a_table(n, a, b, 6)
    for r in range(7):
        for k in range(n + 1):
            assert table(r, k) == F(factorial(n) * stirling2(r, k), n ** r * factorial(n - k))


def test_series_plancherel_column():
    series = series_coefficients(3, 2, 5, [1] * 3, [1] * 3)
    assert series == [stirling2(r, 2) for r in range(6)]


def test_series_column_zero():
    n = 4
    a, b = family_coefficients(lat.kingman(), Pitman(2), n)
    assert series_coefficients(n, 0, 6, a, b) == [1, 0, 0, 0, 0, 0, 0]


def test_zero_coefficient_kills_later_columns():
    a = [F(1, 2), F(1, 2), 0, F(1, 2)]
    b = [F(1, 2)] * 4
    table = a_table(4, a, b, 10)
    for k in range(3, 5):
        assert series_coefficients(4, k, 10, a, b) == table.column(k) == [0] * 11


@pytest.mark.parametrize("family, spec", FAMILIES)
def test_series_equals_recurrence(family, spec):
    for n in range(1, 6):
        a, b = family_coefficients(family, spec, n)
        table = a_table(n, a, b, 40)
        for k in range(n + 1):
            assert series_coefficients(n, k, 40, a, b) == table.column(k)


@pytest.mark.parametrize("family, spec", FAMILIES + [(lat.boolean(8), UniformLevel()), (lat.subspace(4, 2), UniformLevel())])
def test_operator_reconstruction(family, spec):
    top = family.ambient // 2 if family.is_finite else 6
    for n in range(1, top + 1):
        for r in range(9):
            assert reconstruction_residual(family, spec, n, r) == 0


@pytest.mark.parametrize("family, spec, n, k", [
    (lat.schur(), ShiftedPlancherel(), 4, 2),
    (lat.young(), ZMeasure(0, 1), 3, 1),
    (lat.pascal(), PBinomial(F(1, 2)), 4, 3),
    (lat.boolean(8), UniformLevel(), 3, 2),
    (lat.subspace(5, 2), UniformLevel(), 2, 2),
])
def test_dku_expansion(family, spec, n, k):
    assert dku_expansion_check(family, spec, n, k) == 0


def test_dku_rejects_bad_k():
    with pytest.raises(ValueError):
        dku_expansion_check(lat.young(), PlancherelLimit(), 3, 4)


def test_nonnegative_when_b_complements_a():
    for family, spec in FAMILIES[2:]:
        a, b = family_coefficients(family, spec, 5)
        assert all(x >= 0 for row in a_table(5, a, b, 15).values for x in row)


def test_balls_in_boxes_identity():
    for n in range(1, 9):
        for r in range(41):
            lhs = F(factorial(n) * (stirling2(r, n - 1) + stirling2(r, n)), n ** r)
            dist = occupancy_distribution(n, r)
            assert lhs == dist[n - 1] + dist[n]
            assert dist[n] == occupancy_probability(n, r, n)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.integers(0, 12))
def test_occupancy_is_a_distribution(n, r):
    dist = occupancy_distribution(n, r)
    assert sum(dist) == 1
    assert all(dist[k] == occupancy_probability(n, r, k) for k in range(n + 1))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 25), st.integers(0, 25))
def test_stirling_recurrence(r, k):
    if r and k:
        assert stirling2(r, k) == stirling2(r - 1, k - 1) + k * stirling2(r - 1, k)
    assert sum(stirling2(r, j) * comb(k, j) * factorial(j) for j in range(r + 1)) == k ** r
