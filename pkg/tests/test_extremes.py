import numpy as np
import pytest

import tailcausal as tc
from tailcausal.extremes import FRECHET2, RAW, SampleMatrix


def identity_abar(d):
    return tc.CoefficientMatrix(np.eye(d), standardized=True, alpha=2.0)


def frechet_sample(abar, n, seed, alpha=2.0):
    raw = tc.simulate(abar, n, alpha, np.random.default_rng(seed))
    return tc.pit_frechet2(raw)


class TestAngularMeasure:
    def test_identity_atoms(self):
        H = tc.angular_measure(tc.CoefficientMatrix(np.eye(3)), 2.0)
        assert np.allclose(H.atoms, np.eye(3))
        assert np.allclose(H.masses, np.ones(3))
        assert H.total_mass == pytest.approx(3.0)

    def test_standardized_total_mass_is_dimension(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            model = tc.random_lsem(9, 0.4, rng)
            abar = tc.standardize(tc.coefficient_matrix(model), 2.0)
            H = tc.angular_measure(abar, 2.0)
            assert abs(H.total_mass - 9) <= 1e-10

    def test_twin_source_atom_support(self, twin_source_abar):
        H = tc.angular_measure(twin_source_abar, 2.0)
        assert H.atoms.shape == (4, 4)
        support = np.flatnonzero(H.atoms[2]) + 1
        assert set(support) == {1, 2, 3}

    def test_rejects_zero_column(self):
        A = tc.CoefficientMatrix(np.array([[1.0, 0.0], [0.0, 0.0]]))
        with pytest.raises(ValueError, match="zero column"):
            tc.angular_measure(A, 2.0)

    def test_masses_follow_column_norms(self, twin_source_abar):
        for alpha in (1.5, 2.0, 3.0):
            H = tc.angular_measure(twin_source_abar, alpha)
            norms = np.linalg.norm(twin_source_abar.values, axis=0)
            assert np.allclose(H.masses, norms**alpha)


class TestTheoreticalScalings:
    def test_unit_diagonal_when_standardized(self, twin_source_abar):
        for i in range(1, 5):
            assert tc.theoretical_scaling(twin_source_abar, i, i) == pytest.approx(1.0, abs=1e-12)

    def test_identity_cross_terms_vanish(self):
        A = identity_abar(3)
        assert tc.theoretical_scaling(A, 1, 2) == 0.0

    def test_matches_discrete_measure_summation(self):
        rng = np.random.default_rng(1)
        model = tc.random_lsem(6, 0.5, rng)
        abar = tc.standardize(tc.coefficient_matrix(model), 2.0)
        H = tc.angular_measure(abar, 2.0)
        for i in range(1, 7):
            for j in range(1, 7):
                via_measure = float(np.sum(H.masses * H.atoms[:, i - 1] * H.atoms[:, j - 1]))
                assert tc.theoretical_scaling(abar, i, j) == pytest.approx(via_measure, abs=1e-12)

    def test_max_scaling_identity(self):
        assert tc.theoretical_max_scaling(identity_abar(3), [1, 2]) == pytest.approx(2.0)

    def test_max_scaling_singleton_consistency(self, twin_source_abar):
        for i in range(1, 5):
            assert tc.theoretical_max_scaling(twin_source_abar, [i]) == pytest.approx(
                tc.theoretical_scaling(twin_source_abar, i, i), abs=1e-14
            )

    def test_max_scaling_full_set_equals_diagonal_sum(self, twin_source_abar):
        full = tc.theoretical_max_scaling(twin_source_abar, [1, 2, 3, 4])
        assert full == pytest.approx(float((np.diag(twin_source_abar.values) ** 2).sum()), abs=1e-14)

    def test_max_scaling_monotone_in_the_set(self, twin_source_abar):
        assert tc.theoretical_max_scaling(twin_source_abar, [1]) <= tc.theoretical_max_scaling(
            twin_source_abar, [1, 2]
        ) <= tc.theoretical_max_scaling(twin_source_abar, [1, 2, 3])

    def test_rejects_empty_set(self, twin_source_abar):
        with pytest.raises(ValueError):
            tc.theoretical_max_scaling(twin_source_abar, [])


class TestScaledMaxScaling:
    def test_source_node_identity(self, twin_source_abar):
        # node 4 is a source: the rescaled-maximum difference is exactly a^2 - 1
        for a in (1.1, 1.3, 2.0):
            for i in (1, 2, 3):
                diff = tc.theoretical_scaled_max_scaling(twin_source_abar, i, 4, (), a) - \
                    tc.theoretical_max_scaling(twin_source_abar, [i, 4])
                assert diff == pytest.approx(a**2 - 1, abs=1e-12)

    def test_non_source_strictly_below(self, twin_source_abar):
        a = 1.3
        diff = tc.theoretical_scaled_max_scaling(twin_source_abar, 4, 2, (), a) - \
            tc.theoretical_max_scaling(twin_source_abar, [4, 2])
        assert diff < a**2 - 1

    def test_difference_vanishes_as_a_approaches_one(self, twin_source_abar):
        a = 1.0 + 1e-9
        diff = tc.theoretical_scaled_max_scaling(twin_source_abar, 4, 2, (), a) - \
            tc.theoretical_max_scaling(twin_source_abar, [4, 2])
        assert 0 <= diff < 1e-8

    def test_rejects_overlap(self, twin_source_abar):
        with pytest.raises(ValueError):
            tc.theoretical_scaled_max_scaling(twin_source_abar, 1, 2, (2,), 1.3)


class TestPitFrechet2:
    def test_single_row(self):
        out = tc.pit_frechet2(SampleMatrix(np.array([[7.0, 3.0]])))
        expected = (-np.log(0.5)) ** -0.5
        assert np.allclose(out.values, expected)
        assert out.margins == FRECHET2

    def test_two_rows_forced_values(self):
        out = tc.pit_frechet2(SampleMatrix(np.array([[5.0], [7.0]])))
        lo = (-np.log(1 / 3)) ** -0.5
        hi = (-np.log(2 / 3)) ** -0.5
        assert np.allclose(out.values[:, 0], [lo, hi])

    def test_invariant_under_increasing_transforms(self):
        rng = np.random.default_rng(2)
        x = rng.exponential(size=(200, 1))
        base = tc.pit_frechet2(SampleMatrix(x))
        for transform in (np.exp, np.sqrt, lambda v: 3 * v + 1):
            out = tc.pit_frechet2(SampleMatrix(transform(x)))
            assert np.array_equal(out.values, base.values)

    def test_rejects_already_standardised(self):
        std = tc.pit_frechet2(SampleMatrix(np.ones((3, 2)) * [[1.0], [2.0], [3.0]]))
        with pytest.raises(ValueError):
            tc.pit_frechet2(std)

    def test_ties_share_ranks(self):
        out = tc.pit_frechet2(SampleMatrix(np.array([[1.0], [1.0], [2.0]])))
        assert out.values[0, 0] == out.values[1, 0]
        assert out.values[2, 0] > out.values[0, 0]


class TestAngularDecomposition:
    def test_three_four_five(self):
        rep = tc.angular_decomposition(SampleMatrix(np.array([[3.0, 4.0]])))
        assert rep.radii[0] == pytest.approx(5.0)
        assert np.allclose(rep.angles[0], [0.6, 0.8])

    def test_reconstruction(self):
        rng = np.random.default_rng(3)
        X = SampleMatrix(rng.exponential(size=(50, 4)))
        rep = tc.angular_decomposition(X)
        assert np.max(np.abs(rep.radii[:, None] * rep.angles - X.values)) <= 1e-12

    def test_unit_rows_have_unit_radius(self):
        X = SampleMatrix(np.eye(3))
        assert np.allclose(tc.angular_decomposition(X).radii, 1.0)

    def test_rejects_zero_row(self):
        with pytest.raises(ValueError, match="zero row"):
            tc.angular_decomposition(SampleMatrix(np.zeros((2, 2))))


def three_row_fixture():
    values = np.array([[3.0, 4.0], [6.0, 8.0], [5.0, 12.0]])
    return SampleMatrix(values, margins=FRECHET2)


class TestEstimatorFixture:
    # a = 2, k = n = 3: every quantity is finite arithmetic done by hand
    def test_scaled_estimator_exact(self):
        X = three_row_fixture()
        est = tc.estimate_scaling_scaled(X, 1, 2, (), 2.0, 3)
        expected = (1 + 4) / 3 * (64 / 73 + 256 / 292 + 576 / 601)
        assert est == pytest.approx(expected, abs=1e-14)

    def test_unscaled_estimator_exact(self):
        X = three_row_fixture()
        est = tc.estimate_scaling_unscaled(X, 1, 2, (), 2.0, 3)
        expected = (1 + 4) / 3 * (16 / 73 + 64 / 292 + 144 / 601)
        assert est == pytest.approx(expected, abs=1e-14)

    def test_init_estimator_exact(self):
        X = three_row_fixture()
        est = tc.estimate_scaling_init(X, (1, 2), 3)
        expected = 2 / 3 * (16 / 25 + 64 / 100 + 144 / 169)
        assert est == pytest.approx(expected, abs=1e-14)

    def test_row_permutation_invariance(self):
        X = three_row_fixture()
        perm = SampleMatrix(X.values[[2, 0, 1]], margins=FRECHET2)
        for k in (1, 2, 3):
            assert tc.estimate_scaling_scaled(X, 1, 2, (), 2.0, k) == pytest.approx(
                tc.estimate_scaling_scaled(perm, 1, 2, (), 2.0, k), abs=1e-12
            )

    def test_threshold_keeps_ties(self):
        # two rows share the top radius; k = 1 keeps both but divides by 1
        values = np.array([[3.0, 4.0], [4.0, 3.0], [1.0, 1.0]])
        X = SampleMatrix(values, margins=FRECHET2)
        est = tc.estimate_scaling_init(X, (1, 2), 1)
        assert est == pytest.approx(2.0 * (16 / 25 + 16 / 25), abs=1e-14)


class TestEstimatorConsistency:
    def test_identity_pair_bands(self):
        X = frechet_sample(identity_abar(2), 50_000, seed=42)
        unscaled = tc.estimate_scaling_unscaled(X, 1, 2, (), 1.3, 500)
        scaled = tc.estimate_scaling_scaled(X, 1, 2, (), 1.3, 500)
        assert 1.8 <= unscaled <= 2.2
        assert 2.49 <= scaled <= 2.89

    def test_init_singleton_near_one(self):
        X = frechet_sample(identity_abar(2), 50_000, seed=42)
        assert tc.estimate_scaling_init(X, (1,), 500) == pytest.approx(1.0, abs=0.15)

    def test_init_pair_near_two(self):
        X = frechet_sample(identity_abar(2), 50_000, seed=42)
        assert 1.8 <= tc.estimate_scaling_init(X, (1, 2), 500) <= 2.2

    def test_unscaled_at_a_one_matches_init(self):
        X = frechet_sample(identity_abar(3), 2_000, seed=7)
        for k in (10, 50, 200):
            assert tc.estimate_scaling_unscaled(X, 1, 2, (), 1.0, k) == tc.estimate_scaling_init(
                X, (1, 2), k
            )

    def test_matches_exact_oracle_with_identified_set(self, twin_source_abar):
        # estimate sigma^2 of max(X_1, a X_2, a X_{3,4}) against the exact value
        X = frechet_sample(twin_source_abar, 50_000, seed=8)
        target = tc.theoretical_scaled_max_scaling(twin_source_abar, 1, 2, (3, 4), 1.3)
        est = tc.estimate_scaling_scaled(X, 1, 2, (3, 4), 1.3, 500)
        assert est == pytest.approx(target, abs=0.35)

    def test_requires_standardised_margins(self):
        raw = SampleMatrix(np.abs(np.random.default_rng(0).standard_normal((100, 2))))
        with pytest.raises(ValueError, match="margins"):
            tc.estimate_scaling_scaled(raw, 1, 2, (), 1.3, 10)

    def test_k_out_of_range(self):
        X = three_row_fixture()
        with pytest.raises(ValueError):
            tc.estimate_scaling_scaled(X, 1, 2, (), 1.3, 4)
        with pytest.raises(ValueError):
            tc.estimate_scaling_init(X, (1,), 0)


class TestDefaultThresholdCount:
    def test_power_law_floor(self):
        assert tc.default_threshold_count(5000) == 30
        assert tc.default_threshold_count(1000) == 15
        assert tc.default_threshold_count(1) == 1

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            tc.default_threshold_count(0)
