import numpy as np
import pytest

import tailcausal as tc

TWIN_SOURCE_EDGES = [(4, 2), (3, 2), (3, 1), (2, 1), (4, 1)]


@pytest.fixture(scope="session")
def twin_source_dag():
    """The four-node example DAG: sources 3 and 4, sink 1."""
    return tc.Dag(4, TWIN_SOURCE_EDGES)


def make_twin_source_model(weight_seed: int = 28) -> tc.LsemModel:
    """Example DAG with a fixed seeded draw of generic weights."""
    dag = tc.Dag(4, TWIN_SOURCE_EDGES)
    rng = np.random.default_rng(weight_seed)
    C = np.zeros((4, 4))
    for j, i in sorted(dag.edges):
        C[i - 1, j - 1] = rng.uniform(0.1, 1.5)
    s = rng.uniform(0.1, 1.5, 4)
    return tc.LsemModel(dag, C, s)


@pytest.fixture(scope="session")
def twin_source_model():
    return make_twin_source_model()


@pytest.fixture(scope="session")
def twin_source_abar(twin_source_model):
    return tc.standardize(tc.coefficient_matrix(twin_source_model), 2.0)
