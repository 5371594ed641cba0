import numpy as np
import pytest

import tailcausal as tc

from conftest import make_twin_source_model
from oracles import all_labeled_dags


def model_from_weights(dag, c_entries, s):
    C = np.zeros((dag.d, dag.d))
    for (j, i), w in c_entries.items():
        C[i - 1, j - 1] = w
    return tc.LsemModel(dag, C, np.asarray(s, dtype=float))


class TestModelValidation:
    def test_rejects_weight_off_edge(self, twin_source_dag):
        C = np.zeros((4, 4))
        C[0, 1] = 0.5  # edge 2 -> 1 exists
        C[1, 0] = 0.5  # edge 1 -> 2 does not
        with pytest.raises(ValueError, match="edge set"):
            tc.LsemModel(twin_source_dag, C, np.ones(4))

    def test_rejects_zero_weight_on_edge(self, twin_source_dag):
        C = np.zeros((4, 4))
        with pytest.raises(ValueError, match="edge set"):
            tc.LsemModel(twin_source_dag, C, np.ones(4))

    def test_rejects_nonpositive_innovation_weight(self):
        with pytest.raises(ValueError, match="positive"):
            tc.LsemModel(tc.Dag(2), np.zeros((2, 2)), np.array([1.0, 0.0]))


class TestCoefficientMatrix:
    def test_identity_case(self):
        model = tc.LsemModel(tc.Dag(3), np.zeros((3, 3)), np.ones(3))
        assert np.array_equal(tc.coefficient_matrix(model).values, np.eye(3))

    def test_two_node_chain(self):
        model = model_from_weights(tc.Dag(2, [(2, 1)]), {(2, 1): 0.5}, [1.0, 1.0])
        assert np.allclose(
            tc.coefficient_matrix(model).values, [[1.0, 0.5], [0.0, 1.0]]
        )

    def test_matches_path_route_on_random_models(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            model = tc.random_lsem(10, 0.4, rng)
            direct = tc.coefficient_matrix(model).values
            paths = tc.coefficient_matrix_paths(model).values
            assert np.max(np.abs(direct - paths)) <= 1e-10


class TestCoefficientMatrixPaths:
    def test_twin_source_entry_sums_both_routes(self):
        model = make_twin_source_model()
        C, s = model.C, model.s
        A = tc.coefficient_matrix_paths(model).values
        expected_a13 = s[2] * C[0, 2] + s[2] * C[1, 2] * C[0, 1]
        assert A[0, 2] == pytest.approx(expected_a13, abs=1e-14)

    def test_edgeless_gives_diagonal(self):
        model = tc.LsemModel(tc.Dag(4), np.zeros((4, 4)), np.array([1.0, 2.0, 3.0, 4.0]))
        assert np.array_equal(tc.coefficient_matrix_paths(model).values, np.diag(model.s))

    def test_zero_pattern_follows_ancestry(self):
        rng = np.random.default_rng(1)
        model = tc.random_lsem(8, 0.3, rng)
        A = tc.coefficient_matrix_paths(model).values
        for i in range(1, 9):
            for j in range(1, 9):
                in_anc = j in model.dag.ancestors_inclusive(i)
                assert (A[i - 1, j - 1] != 0) == in_anc


class TestStandardize:
    def test_identity_fixed_point(self):
        A = tc.CoefficientMatrix(np.eye(3))
        for alpha in (1.0, 2.0, 3.5):
            assert np.array_equal(tc.standardize(A, alpha).values, np.eye(3))

    def test_forced_two_by_two(self):
        A = tc.CoefficientMatrix(np.array([[1.0, 1.0], [0.0, 1.0]]))
        out = tc.standardize(A, 2.0).values
        assert np.allclose(out, [[2**-0.5, 2**-0.5], [0.0, 1.0]], atol=1e-15)

    def test_unit_rows_and_column_dominance(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            model = tc.random_lsem(10, 0.4, rng)
            abar = tc.standardize(tc.coefficient_matrix(model), 2.0)
            V = abar.values
            assert np.max(np.abs((V**2).sum(axis=1) - 1.0)) <= 1e-12
            diag = np.diag(V)
            off = ~np.eye(10, dtype=bool)
            assert np.all(np.broadcast_to(diag, (10, 10))[off] > V[off])

    def test_idempotent(self):
        rng = np.random.default_rng(3)
        model = tc.random_lsem(7, 0.5, rng)
        once = tc.standardize(tc.coefficient_matrix(model), 2.0)
        twice = tc.standardize(once, 2.0)
        assert np.max(np.abs(once.values - twice.values)) <= 1e-12


class TestPathInequality:
    def test_chain_equality_case(self):
        model = model_from_weights(
            tc.Dag(3, [(3, 2), (2, 1)]), {(3, 2): 1.0, (2, 1): 1.0}, [1.0, 1.0, 1.0]
        )
        A = tc.coefficient_matrix(model).values
        # the only 3->1 route factors through 2, so equality holds exactly
        assert A[0, 2] == A[0, 1] * A[1, 2] / A[1, 1]
        assert tc.verify_path_inequality(tc.coefficient_matrix(model))

    def test_twin_source_strict_when_direct_edge_bypasses(self):
        A = tc.coefficient_matrix(make_twin_source_model()).values
        assert A[0, 2] > A[0, 1] * A[1, 2] / A[1, 1]

    def test_holds_on_random_models(self):
        rng = np.random.default_rng(4)
        for _ in range(100):
            model = tc.random_lsem(10, 0.4, rng)
            assert tc.verify_path_inequality(tc.coefficient_matrix(model))

    def test_dichotomy_matches_path_enumeration_exhaustively(self):
        # equality holds exactly when every j -> i route passes through k
        draw = np.random.default_rng(5)
        for d in (2, 3, 4, 5):
            for edges in all_labeled_dags(d):
                dag = tc.Dag(d, edges)
                if edges:
                    weights = {e: float(draw.uniform(0.1, 1.5)) for e in sorted(edges)}
                else:
                    weights = {}
                model = model_from_weights(dag, weights, draw.uniform(0.1, 1.5, d))
                A = tc.coefficient_matrix(model).values
                for i in range(1, d + 1):
                    for j in sorted(dag.ancestors(i)):
                        paths = tc.enumerate_paths(dag, j, i)
                        for k in dag.descendants(j) & dag.ancestors(i):
                            through_k = all(k in p for p in paths)
                            bound = A[i - 1, k - 1] * A[k - 1, j - 1] / A[k - 1, k - 1]
                            if through_k:
                                assert A[i - 1, j - 1] == pytest.approx(bound, abs=1e-12)
                            else:
                                assert A[i - 1, j - 1] > bound + 1e-12


class TestRandomLsem:
    def test_p_zero(self):
        model = tc.random_lsem(5, 0.0, np.random.default_rng(0))
        assert np.all(model.C == 0)
        assert np.all((model.s >= 0.1) & (model.s <= 1.5))

    def test_deterministic(self):
        a = tc.random_lsem(8, 0.4, np.random.default_rng(21))
        b = tc.random_lsem(8, 0.4, np.random.default_rng(21))
        assert a.dag == b.dag
        assert np.array_equal(a.C, b.C)
        assert np.array_equal(a.s, b.s)

    def test_innovation_weight_mean(self):
        rng = np.random.default_rng(6)
        draws = np.concatenate([tc.random_lsem(4, 0.5, rng).s for _ in range(1000)])
        se = draws.std() / np.sqrt(draws.size)
        assert abs(draws.mean() - 0.8) < 3 * se


class TestSimulate:
    def test_one_dimensional_nonnegative(self):
        abar = tc.CoefficientMatrix(np.eye(1), standardized=True, alpha=2.0)
        out = tc.simulate(abar, 1000, 2.0, np.random.default_rng(0))
        assert out.margins == "raw"
        assert out.values.shape == (1000, 1)
        assert np.all(out.values >= 0)

    def test_equal_margins_tail_ratio(self):
        abar = tc.CoefficientMatrix(np.eye(2), standardized=True, alpha=2.0)
        X = tc.simulate(abar, 50_000, 2.0, np.random.default_rng(3)).values
        q = float(np.quantile(X[:, 1], 0.999))
        ratio = (X[:, 0] > q).sum() / (X[:, 1] > q).sum()
        assert 0.7 <= ratio <= 1.4

    def test_nonnegativity_and_reproducibility(self, twin_source_abar):
        a = tc.simulate(twin_source_abar, 500, 2.0, np.random.default_rng(9))
        b = tc.simulate(twin_source_abar, 500, 2.0, np.random.default_rng(9))
        assert np.array_equal(a.values, b.values)
        assert np.all(a.values >= 0)

    def test_requires_standardized_matrix(self, twin_source_model):
        A = tc.coefficient_matrix(twin_source_model)
        with pytest.raises(ValueError, match="standardised"):
            tc.simulate(A, 10, 2.0, np.random.default_rng(0))


class TestModelJson:
    def test_roundtrip(self, twin_source_model):
        text = tc.model_to_json(twin_source_model)
        back = tc.model_from_json(text)
        assert back.dag == twin_source_model.dag
        assert np.array_equal(back.C, twin_source_model.C)
        assert np.array_equal(back.s, twin_source_model.s)
        assert back.alpha == twin_source_model.alpha
