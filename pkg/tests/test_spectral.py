from fractions import Fraction as F
from math import factorial, sqrt

import numpy as np
import pytest

from latticewalk import lattices as lat
from latticewalk import linalg as la
from latticewalk.errors import CapacityError, SpectrumMismatchError, ValidationError
from latticewalk.measures import (
    PBinomial,
    Pitman,
    PlancherelLimit,
    ShiftedPlancherel,
    UniformLevel,
    ZMeasure,
)
from latticewalk.operators import DOWN_UP, UP_DOWN, composed_kernel
from latticewalk.partitions import Partition, odd_partitions, partition_count
from latticewalk.spectral import (
    SpectralProfile,
    closed_form_spectrum,
    eigenspace_structure,
    schur_eigenbasis,
    schur_kernel,
    spectrum_from_commutation,
    verify_spectrum,
)


def as_dict(profile):
    return dict(profile.pairs)


def test_differential_poset_spectrum():
    p = [partition_count(i) for i in range(5)]
    profile = spectrum_from_commutation([1] * 4, [1] * 4, p, 4)
    assert as_dict(profile) == {4: 1, 2: 1, 1: 1, 0: 2}


@pytest.mark.parametrize("family, spec, n, expected", [
    (lat.kingman(), Pitman(1), 3, {1: 1, F(5, 9): 1, 0: 1}),
    (lat.kingman(), Pitman(1, F(1, 4)), 4, {1: 1, F(3, 4): 1, F(7, 16): 1, 0: 2}),
    (lat.young(), PlancherelLimit(), 4, {1: 1, F(1, 2): 1, F(1, 4): 1, 0: 2}),
    (lat.boolean(4), UniformLevel(), 2, {1: 1, F(1, 3): 3, 0: 2}),
    (lat.pascal(), PBinomial(F(1, 3)), 5, {1 - F(i, 5): 1 for i in range(6)}),
    (lat.schur(), ShiftedPlancherel(), 5, {1: 1, F(2, 5): 1, 0: 1}),
])
def test_closed_form_spectra(family, spec, n, expected):
    assert as_dict(closed_form_spectrum(family, spec, n)) == expected


def test_young_multiplicities_count_ones():
    for n in range(1, 8):
        profile = closed_form_spectrum(lat.young(), PlancherelLimit(), n)
        for i in range(n + 1):
            ones = sum(lam.multiplicity(1) == i for lam in lat.level_states(lat.young(), n))
            assert profile.multiplicity(F(i, n)) == ones


def test_schur_multiplicities_are_odd_partition_counts():
    for n in range(1, 9):
        profile = closed_form_spectrum(lat.schur(), ShiftedPlancherel(), n)
        expected = {}
        for mu in odd_partitions(n):
            key = F(mu.multiplicity(1), n)
            expected[key] = expected.get(key, 0) + 1
        assert as_dict(profile) == expected


def test_kingman_2x2_verification():
    kernel = composed_kernel(lat.kingman(), Pitman(1), 2)
    assert la.to_lists(kernel.matrix) == [[F(1, 2), F(1, 2)], [F(1, 2), F(1, 2)]]
    verify_spectrum(kernel, SpectralProfile(((F(1), 1), (F(0), 1))))


def test_pascal_verification_and_negative_control():
    kernel = composed_kernel(lat.pascal(), PBinomial(F(1, 3)), 2)
    verify_spectrum(kernel, SpectralProfile(((F(1), 1), (F(1, 2), 1), (F(0), 1))))
    with pytest.raises(SpectrumMismatchError) as err:
        verify_spectrum(kernel, SpectralProfile(((F(1), 1), (F(1, 3), 1), (F(0), 1))))
    assert err.value.value == F(1, 3)


def test_wrong_total_multiplicity_rejected():
    kernel = composed_kernel(lat.pascal(), PBinomial(F(1, 3)), 2)
    with pytest.raises(SpectrumMismatchError):
        verify_spectrum(kernel, SpectralProfile(((F(1), 1), (F(1, 2), 1))))


@pytest.mark.parametrize("s2", [1, F(3, 2), F(5, 7)])
def test_young_updown_eigenvalues(s2):
    spec = ZMeasure(0, s2)
    for n in range(1, 6):
        profile = closed_form_spectrum(lat.young(), spec, n, UP_DOWN)
        allowed = {F(j * (s2 + 2 * n - j + 1)) / ((n + 1) * (s2 + n)) for j in range(n + 2)}
        assert set(profile.values) <= allowed
        verify_spectrum(composed_kernel(lat.young(), spec, n, UP_DOWN), profile)


def test_schur_updown_eigenvalues():
    for n in range(1, 8):
        profile = closed_form_spectrum(lat.schur(), ShiftedPlancherel(), n, UP_DOWN)
        expected = {}
        for mu in odd_partitions(n):
            key = F(mu.multiplicity(1) + 1, n + 1)
            expected[key] = expected.get(key, 0) + 1
        assert as_dict(profile) == expected
        verify_spectrum(composed_kernel(lat.schur(), ShiftedPlancherel(), n, UP_DOWN), profile)


def test_kingman_alpha_and_pascal_p_invariance():
    for n in range(1, 7):
        assert len({closed_form_spectrum(lat.kingman(), Pitman(2, al), n) for al in (0, F(1, 4), F(1, 2))}) == 1
        assert len({closed_form_spectrum(lat.pascal(), PBinomial(p), n) for p in (F(1, 4), F(1, 2), F(2, 3))}) == 1


@pytest.mark.parametrize("family, spec, n", [
    (lat.young(), ZMeasure(1, 1), 5),
    (lat.kingman(), Pitman(2, F(1, 4)), 5),
    (lat.subspace(4, 3), UniformLevel(), 2),
])
def test_float_verification(family, spec, n):
    verify_spectrum(composed_kernel(family, spec, n, backend="float"), closed_form_spectrum(family, spec, n))


def test_eigenspace_structure():
    young = eigenspace_structure(lat.young(), PlancherelLimit(), 3)
    assert young.ok and young.kernel_dimension_ok
    assert eigenspace_structure(lat.pascal(), PBinomial(F(1, 3)), 4).injective
    assert eigenspace_structure(lat.kingman(), Pitman(1), 4).images_ok
    for n in range(1, 6):
        assert eigenspace_structure(lat.young(), ZMeasure(1, F(3, 2)), n).ok


def test_eigenspace_not_applicable_at_finite_midpoint():
    report = eigenspace_structure(lat.boolean(4), UniformLevel(), 2)
    assert not report.applicable and report.reason


@pytest.mark.parametrize("n", range(1, 9))
def test_schur_eigenbasis(n):
    kernel = schur_kernel(n)
    pi = np.array(kernel.pi, dtype=float)
    basis = schur_eigenbasis(n)
    assert len(basis) == len(odd_partitions(n)) == kernel.size
    psi = np.column_stack([f.values for f in basis])
    for f in basis:
        assert np.allclose(kernel.matrix @ f.values, float(f.eigenvalue) * f.values, atol=1e-9)
    assert np.allclose(psi.T @ np.diag(pi) @ psi, np.eye(len(basis)), atol=1e-9)


def test_schur_eigenbasis_at_three_and_top_row():
    basis = schur_eigenbasis(3)
    assert sorted(f.eigenvalue for f in basis) == [0, 1]
    for n in (4, 6):
        top = Partition((n,))
        for f in schur_eigenbasis(n):
            expected = sqrt(factorial(n) / (f.mu.z() * 2 ** (n - len(f.mu))))
            assert f.values[f.states.index(top)] == pytest.approx(expected)


def test_schur_eigenbasis_capacity():
    with pytest.raises(CapacityError):
        schur_eigenbasis(9)


def test_profile_merges_and_sorts():
    profile = SpectralProfile(((F(0), 1), (F(1, 2), 2), (F(0), 1), (F(3, 4), 0)))
    assert profile.pairs == ((F(1, 2), 2), (F(0), 2))
    assert profile.to_json() == [{"value": "1/2", "multiplicity": 2}, {"value": "0/1", "multiplicity": 2}]


def test_spectrum_level_validation():
    with pytest.raises(ValidationError):
        closed_form_spectrum(lat.young(), PlancherelLimit(), 0, DOWN_UP)
    with pytest.raises(ValidationError):
        closed_form_spectrum(lat.boolean(4), UniformLevel(), 3)
