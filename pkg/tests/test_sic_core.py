from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import check_grad

from sicqb.errors import DimensionError, SicNotFoundError, UnsupportedDimensionError
from sicqb.sic_core import (
    Fiducial,
    SearchOptions,
    SicSet,
    _frame_potential,
    builtin_sic,
    fiducial_orbit,
    find_sic,
    frobenius_lower_bound,
    frobenius_objective,
    max_orbit_deviation,
    verify_sic,
    wh_displacement,
    wh_group,
)

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.diag([1, -1]).astype(complex)


def test_builtin_qubit_first_projector(sic2):
    expected = 0.5 * (np.eye(2) + (SX + SY + SZ) / np.sqrt(3))
    np.testing.assert_allclose(sic2.projectors[0], expected, atol=1e-15)
    assert np.trace(sic2.projectors[0] @ sic2.projectors[1]).real == pytest.approx(1 / 3, abs=1e-15)


def test_builtin_qutrit_first_vector(sic3):
    psi1 = np.array([0, 1, -1]) / np.sqrt(2)
    np.testing.assert_allclose(sic3.projectors[0], np.outer(psi1, psi1), atol=1e-15)
    assert np.trace(sic3.projectors[0] @ sic3.projectors[1]).real == pytest.approx(0.25, abs=1e-15)


def test_builtin_qubit_resolution_of_identity_exact(sic2):
    np.testing.assert_allclose(sic2.projectors.sum(axis=0) / 2, np.eye(2), atol=1e-15)


@pytest.mark.parametrize("d", [1, 4, 5])
def test_builtin_rejects_other_dimensions(d):
    with pytest.raises(UnsupportedDimensionError, match="2 and 3"):
        builtin_sic(d)


def _displacement_oracle(d, a, b):
    # column k of X^a Z^b is exp(2 pi i b k / d) |k + a>
    M = np.zeros((d, d), dtype=complex)
    for k in range(d):
        M[(k + a) % d, k] = np.exp(2j * np.pi * b * k / d)
    return M


class TestDisplacement:
    def test_identity(self):
        np.testing.assert_array_equal(wh_displacement(2, 0, 0), np.eye(2))

    def test_shift_is_sigma_x(self):
        np.testing.assert_array_equal(wh_displacement(2, 1, 0), SX)

    @pytest.mark.parametrize("d,a,b", [(3, 1, 1), (4, 2, 3), (5, 4, 1), (7, 3, 6)])
    def test_matches_explicit_construction_and_is_unitary(self, d, a, b):
        D = wh_displacement(d, a, b)
        np.testing.assert_allclose(D, _displacement_oracle(d, a, b), atol=1e-14)
        assert np.max(np.abs(D @ D.conj().T - np.eye(d))) < 1e-14

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            wh_displacement(3, 3, 0)
        with pytest.raises(DimensionError):
            wh_displacement(1, 0, 0)


class TestOrbit:
    def test_qubit_bloch_fiducial_reproduces_builtin(self, sic2):
        theta, phi = np.arccos(1 / np.sqrt(3)), np.pi / 4
        f = Fiducial.from_vector([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)])
        orbit = fiducial_orbit(f)
        # every orbit element equals exactly one built-in projector
        matches = [
            [np.max(np.abs(P - Q)) < 1e-12 for Q in sic2.projectors] for P in orbit.projectors
        ]
        assert all(sum(row) == 1 for row in matches)
        assert sorted(row.index(True) for row in matches) == [0, 1, 2, 3]
        np.testing.assert_allclose(orbit.gram(), sic2.gram(), atol=1e-12)

    @pytest.mark.parametrize("d", [2, 3, 4, 6, 9])
    def test_any_vector_gives_unit_traces_and_resolution(self, d, rng):
        v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        orbit = fiducial_orbit(Fiducial.from_vector(v))
        assert orbit.projectors.shape == (d * d, d, d)
        traces = np.einsum("iaa->i", orbit.projectors).real
        assert np.max(np.abs(traces - 1)) < 1e-12
        total = np.zeros((d, d), dtype=complex)
        for P in orbit.projectors:
            total += P
        assert np.max(np.abs(total - d * np.eye(d))) < 1e-10


class TestVerify:
    @pytest.mark.parametrize("d", [2, 3])
    def test_builtin_passes(self, d):
        report = verify_sic(builtin_sic(d))
        assert report.passed
        assert report.max_overlap_deviation < 1e-12

    def test_random_orbit_in_d4_fails(self, rng):
        f = Fiducial.from_vector(rng.standard_normal(4) + 1j * rng.standard_normal(4))
        report = verify_sic(fiducial_orbit(f))
        assert not report.passed
        assert report.max_overlap_deviation > 1e-3

    def test_mismatched_projectors_rejected(self):
        with pytest.raises(DimensionError):
            SicSet(2, np.zeros((4, 3, 3)))
        with pytest.raises(DimensionError):
            SicSet(2, np.zeros((3, 2, 2)))


def _frobenius_oracle(effects):
    total = 0.0
    for i, Ei in enumerate(effects):
        for j, Ej in enumerate(effects):
            t = np.trace(Ei @ Ej).real
            total += (1 - t) ** 2 if i == j else t**2
    return total


class TestFrobenius:
    # bound values worked by hand: d=2 gives 9/4 + 1/12, d=3 gives 64/9 + 1/18
    @pytest.mark.parametrize("d,bound", [(2, Fraction(7, 3)), (3, Fraction(43, 6))])
    def test_sic_attains_bound(self, d, bound):
        s = builtin_sic(d)
        assert frobenius_lower_bound(d) == pytest.approx(float(bound), abs=1e-12)
        assert frobenius_objective(s.effects) == pytest.approx(float(bound), abs=1e-12)

    def test_flat_effects_are_worse(self):
        effects = [np.eye(2) / 4] * 4
        F = frobenius_objective(effects)
        assert F == pytest.approx(_frobenius_oracle(effects), abs=1e-14)
        assert F == pytest.approx(13 / 4, abs=1e-14)
        assert F > frobenius_lower_bound(2)

    def test_padded_projective_measurement(self):
        effects = [np.diag([1, 0]), np.diag([0, 1]), np.zeros((2, 2)), np.zeros((2, 2))]
        F = frobenius_objective(effects)
        assert np.isfinite(F)
        assert F == pytest.approx(_frobenius_oracle(effects), abs=1e-14)


class TestFindSic:
    def test_gradient_matches_finite_differences(self, rng):
        D = wh_group(5)
        x = rng.standard_normal(10)
        err = check_grad(
            lambda y: _frame_potential(y, D, 5)[0], lambda y: _frame_potential(y, D, 5)[1], x
        )
        assert err < 1e-6

    @pytest.mark.parametrize("d", [2, 4])
    def test_seed_zero_overlaps(self, d):
        s = fiducial_orbit(find_sic(d, 0))
        off = s.gram()[~np.eye(d * d, dtype=bool)]
        assert np.max(np.abs(off - 1 / (d + 1))) < 1e-8

    def test_qutrit_different_seeds_all_pass(self):
        for seed in range(4):
            assert verify_sic(fiducial_orbit(find_sic(3, seed))).passed

    def test_reproducible(self):
        a = find_sic(6, 7).amplitudes
        b = find_sic(6, 7).amplitudes
        assert a.tobytes() == b.tobytes()

    def test_phase_convention(self):
        f = find_sic(5, 0)
        assert f.amplitudes[0].imag == 0.0 and f.amplitudes[0].real > 0

    def test_not_found_reports_best_residual(self):
        with pytest.raises(SicNotFoundError) as e:
            find_sic(4, 0, SearchOptions(tol=1e-300, max_restarts=2))
        assert np.isfinite(e.value.best_residual)
        assert e.value.restarts == 2

    def test_dimension_limit(self):
        with pytest.raises(UnsupportedDimensionError):
            find_sic(13, 0)
        with pytest.raises(UnsupportedDimensionError):
            find_sic(5, 0, SearchOptions(max_dimension=4))

    def test_max_orbit_deviation_agrees_with_verify(self):
        f = find_sic(4, 0)
        assert max_orbit_deviation(f) < 1e-12


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_sic_invariants(d, sic_of):
    s = sic_of(d)
    E = s.effects
    M = np.einsum("iab,jba->ij", E, E).real
    # column sums of the effect Gram matrix are tr E_j = 1/d
    assert np.max(np.abs(M.sum(axis=0) - 1 / d)) < 1e-10
    sv = np.linalg.svd(M, compute_uv=False)
    assert sv[-1] > 1e-10 * sv[0]
