import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sicqb.errors import DimensionError
from sicqb.geometry import (
    basis_distribution,
    build_max_distant_set,
    inner_bound_check,
    max_distant_gram,
    nflat_min_distance,
    order2_entropies,
    sphere_check,
    zeros_audit,
    zeros_monte_carlo,
)
from sicqb.randomness import haar_pure_state, random_density_matrix
from sicqb.state_rep import state_to_probs

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def pure_probs(v, sic):
    return state_to_probs(np.outer(v, v.conj()), sic)


class TestBasisDistribution:
    def test_qubit_first_slot(self):
        np.testing.assert_allclose(basis_distribution(2, 0), [1 / 2, 1 / 6, 1 / 6, 1 / 6], atol=1e-16)

    def test_qutrit_fifth_slot(self):
        e = basis_distribution(3, 4)
        assert e[4] == pytest.approx(1 / 3, abs=1e-16)
        np.testing.assert_allclose(np.delete(e, 4), np.full(8, 1 / 12), atol=1e-16)

    @pytest.mark.parametrize("d", range(2, 8))
    def test_purity_and_normalization(self, d):
        for k in (0, d * d - 1):
            e = basis_distribution(d, k)
            assert e.sum() == pytest.approx(1, abs=1e-14)
            assert e @ e == pytest.approx(2 / (d * (d + 1)), abs=1e-14)

    def test_index_out_of_range(self):
        with pytest.raises(IndexError):
            basis_distribution(2, 4)
        with pytest.raises(IndexError):
            basis_distribution(2, -1)

    def test_matches_sic_element(self, sic3):
        np.testing.assert_allclose(state_to_probs(sic3.projectors[6], sic3), basis_distribution(3, 6), atol=1e-15)


class TestSphere:
    def test_qubit_basis_distribution_radius(self):
        r = sphere_check(basis_distribution(2, 1), 2)
        assert r.passed
        centered = {c.name: c for c in r.checks}["centered_norm_sq"]
        assert centered.observed == pytest.approx(1 / 12, abs=1e-15)

    def test_uniform_is_at_centre(self):
        r = sphere_check(np.full(9, 1 / 9), 3)
        centered = {c.name: c for c in r.checks}["centered_norm_sq"]
        assert centered.observed == pytest.approx(0, abs=1e-16)
        assert not r.passed

    def test_random_pure_state_d4(self, sic_of, rng):
        s = sic_of(4)
        assert sphere_check(pure_probs(haar_pure_state(4, rng), s), 4).passed

    def test_report_serializes(self):
        r = sphere_check(basis_distribution(2, 0), 2)
        d = r.to_dict()
        assert d["d"] == 2 and len(d["checks"]) == 2
        assert {"name", "expected", "observed", "pass"} <= set(d["checks"][0])
        assert "sum_p_squared" in r.to_table()

    def test_wrong_length(self):
        with pytest.raises(DimensionError):
            sphere_check(np.ones(5) / 5, 2)


class TestInnerBounds:
    def test_same_pure_state_saturates_upper(self, sic3, rng):
        p = pure_probs(haar_pure_state(3, rng), sic3)
        r = inner_bound_check(p, p, 3)
        assert r.passed
        assert r.upper_margin == pytest.approx(0, abs=1e-14)

    def test_orthogonal_states_saturate_lower(self, sic3):
        p = state_to_probs(np.diag([1, 0, 0]).astype(complex), sic3)
        s = state_to_probs(np.diag([0, 0, 1]).astype(complex), sic3)
        r = inner_bound_check(p, s, 3)
        assert r.passed
        assert r.lower_margin == pytest.approx(0, abs=1e-14)

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_pure_against_uniform(self, d, sic_of, rng):
        p = pure_probs(haar_pure_state(d, rng), sic_of(d))
        r = inner_bound_check(p, np.full(d * d, 1 / d**2), d)
        assert r.inner == pytest.approx(1 / d**2, abs=1e-15)
        assert r.passed

    def test_point_mass_breaks_upper_bound(self):
        p = np.array([1.0, 0, 0, 0])
        assert not inner_bound_check(p, p, 2)


class TestNFlat:
    def test_qubit_edge_touches_sphere(self):
        r = nflat_min_distance(2, 1)
        assert r.min_distance_sq == pytest.approx(1 / 12, abs=1e-16)
        assert r.min_distance_sq == pytest.approx(r.radius_sq, abs=1e-16)
        assert not r.pokes_through

    def test_qutrit_pokes_through(self):
        r = nflat_min_distance(3, 2)
        assert r.min_distance_sq == pytest.approx(2 / 63, abs=1e-16)
        assert r.radius_sq == pytest.approx(1 / 18, abs=1e-16)
        assert r.min_distance_sq < r.radius_sq
        assert r.pokes_through

    @pytest.mark.parametrize("d", [2, 3, 5])
    def test_zero_flat(self, d):
        r = nflat_min_distance(d, 0)
        assert r.min_distance_sq == 0
        assert not r.pokes_through

    def test_qubit_never_pokes_through(self):
        assert not any(nflat_min_distance(2, n).pokes_through for n in range(4))

    def test_formula_against_projection_oracle(self):
        # distance from the centre to the face where n coordinates vanish
        d, n = 3, 4
        c = np.full(d * d, 1 / d**2)
        foot = np.concatenate([np.zeros(n), np.full(d * d - n, 1 / (d * d - n))])
        assert np.sum((foot - c) ** 2) == pytest.approx(nflat_min_distance(d, n).min_distance_sq, abs=1e-15)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            nflat_min_distance(2, 4)


class TestZeros:
    def test_state_orthogonal_to_first_sic_vector(self, sic2):
        # the antipodal Bloch state is I - Pi_1
        p = state_to_probs(np.eye(2) - sic2.projectors[0], sic2)
        a = zeros_audit(p, 2)
        assert a.count == 1 == a.bound
        assert a.passed

    @pytest.mark.parametrize("d,k", [(2, 3), (3, 0), (4, 7)])
    def test_basis_distribution_has_no_zeros(self, d, k):
        assert zeros_audit(basis_distribution(d, k), d).count == 0

    def test_qutrit_monte_carlo(self, sic3):
        a = zeros_monte_carlo(sic3, 10_000, np.random.default_rng(7))
        assert a.bound == 3
        assert a.passed

    def test_monte_carlo_counts_match_audit(self, sic2):
        rng = np.random.default_rng(3)
        a = zeros_monte_carlo(sic2, 50, rng)
        assert a.count <= 1

    def test_failure_reported(self):
        assert not zeros_audit(np.array([1.0, 0, 0, 0]), 2).passed


class TestMaxDistantGram:
    def test_qutrit_at_capacity(self):
        g = max_distant_gram(3, 3)
        assert g.lambda0 == pytest.approx(0, abs=1e-16)
        assert g.eigenvalues[0] == pytest.approx(0, abs=1e-15)
        assert g.psd

    def test_qutrit_over_capacity(self):
        g = max_distant_gram(3, 4)
        assert g.lambda0 == pytest.approx(-1 / 36, abs=1e-16)
        assert g.eigenvalues[0] == pytest.approx(-1 / 36, abs=1e-15)
        assert not g.psd

    @pytest.mark.parametrize("d", [2, 5])
    def test_single_state(self, d):
        g = max_distant_gram(d, 1)
        assert g.eigenvalues.shape == (1,)
        assert g.eigenvalues[0] == pytest.approx((d - 1) / (d**2 * (d + 1)), abs=1e-16)
        assert g.psd

    @pytest.mark.parametrize("d", range(2, 11))
    def test_flip_between_d_and_d_plus_1(self, d):
        assert max_distant_gram(d, d).psd
        assert not max_distant_gram(d, d + 1).psd
        g = max_distant_gram(d, d + 1)
        assert g.eigenvalues[0] == pytest.approx(g.lambda0, abs=1e-12)
        np.testing.assert_allclose(g.eigenvalues[1:], g.lambda_rest, atol=1e-12)


class TestMaxDistantSet:
    def test_qubit_pair(self, sic2):
        p1, p2 = build_max_distant_set(2, sic2)
        assert p1 @ p2 == pytest.approx(1 / 6, abs=1e-15)

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_pairwise_matrix_and_independence(self, d, sic_of):
        vecs = np.array(build_max_distant_set(d, sic_of(d)))
        expected = (np.eye(d) + 1) / (d * (d + 1))
        assert np.max(np.abs(vecs @ vecs.T - expected)) < 1e-10
        assert np.linalg.svd(vecs, compute_uv=False)[-1] > 1e-10
        assert all(sphere_check(v, d).passed for v in vecs)

    def test_dimension_mismatch(self, sic2):
        with pytest.raises(DimensionError):
            build_max_distant_set(3, sic2)


class TestEntropies:
    @pytest.mark.parametrize("d", [2, 3])
    def test_uniform(self, d):
        assert order2_entropies(np.full(d * d, 1 / d**2)).renyi2 == pytest.approx(math.log(d * d), abs=1e-14)

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_basis_distribution(self, d):
        h = order2_entropies(basis_distribution(d, 0))
        assert h.renyi2 == pytest.approx(-math.log(2 / (d * (d + 1))), abs=1e-14)
        assert h.daroczy2 == pytest.approx(2 * (1 - 2 / (d * (d + 1))), abs=1e-14)

    def test_deterministic(self):
        h = order2_entropies([0, 1.0, 0, 0])
        assert h.renyi2 == 0 and h.daroczy2 == 0


@pytest.mark.parametrize("d", [2, 3, 4])
@settings(max_examples=30, deadline=None)
@given(seed=seeds)
def test_minimum_overlap_of_valid_states(d, seed, sic_of):
    rng = np.random.default_rng(seed)
    s = sic_of(d)
    p = state_to_probs(random_density_matrix(d, rng), s)
    q = state_to_probs(random_density_matrix(d, rng, rank=1), s)
    assert p @ q >= 1 / (d * (d + 1)) - 1e-12


@pytest.mark.parametrize("d", [2, 3, 4, 5])
@settings(max_examples=20, deadline=None)
@given(seed=seeds)
def test_pure_states_share_one_renyi_entropy(d, seed, sic_of):
    p = pure_probs(haar_pure_state(d, np.random.default_rng(seed)), sic_of(d))
    assert abs(p @ p - 2 / (d * (d + 1))) < 1e-10
    assert order2_entropies(p).renyi2 == pytest.approx(-math.log(2 / (d * (d + 1))), abs=1e-9)


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_zeros_bound_over_haar_samples(d, sic_of):
    assert zeros_monte_carlo(sic_of(d), 10_000, np.random.default_rng(d)).passed
