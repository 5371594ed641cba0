"""Causal ordering discovery for heavy-tailed linear SEMs via extremal scalings."""

__version__ = "0.1.0"

from .baseline import causal_tail_coefficient, gamma_matrix, gamma_matrix_csv, gamma_order
from .data import TimeSeriesPanel, decluster, load_csv
from .discovery import (
    AlgoParams,
    DeltaMatrix,
    OrderingResult,
    causal_order,
    delta_matrix,
    epsilon_threshold,
    select_nodes,
    theoretical_causal_order,
    theoretical_delta,
)
from .extremes import (
    AngularMeasure,
    AngularRepresentation,
    SampleMatrix,
    angular_decomposition,
    angular_measure,
    default_threshold_count,
    estimate_scaling_init,
    estimate_scaling_scaled,
    estimate_scaling_unscaled,
    pit_frechet2,
    theoretical_max_scaling,
    theoretical_scaled_max_scaling,
    theoretical_scaling,
)
from .graph import (
    Dag,
    PathCapExceeded,
    d_separated,
    dag_from_text,
    dag_to_text,
    enumerate_paths,
    is_confounder,
    random_dag,
    relabel_well_ordered,
)
from .lsem import (
    CoefficientMatrix,
    LsemModel,
    coefficient_matrix,
    coefficient_matrix_paths,
    model_from_json,
    model_to_json,
    random_lsem,
    simulate,
    standardize,
    verify_path_inequality,
)
from .metrics import SidScore, bootstrap_sid, full_dag_from_order, sid

__all__ = [
    "AlgoParams",
    "AngularMeasure",
    "AngularRepresentation",
    "CoefficientMatrix",
    "Dag",
    "DeltaMatrix",
    "LsemModel",
    "OrderingResult",
    "PathCapExceeded",
    "SampleMatrix",
    "SidScore",
    "TimeSeriesPanel",
    "angular_decomposition",
    "angular_measure",
    "bootstrap_sid",
    "causal_order",
    "causal_tail_coefficient",
    "coefficient_matrix",
    "coefficient_matrix_paths",
    "d_separated",
    "dag_from_text",
    "dag_to_text",
    "decluster",
    "default_threshold_count",
    "delta_matrix",
    "enumerate_paths",
    "epsilon_threshold",
    "estimate_scaling_init",
    "estimate_scaling_scaled",
    "estimate_scaling_unscaled",
    "full_dag_from_order",
    "gamma_matrix",
    "gamma_matrix_csv",
    "gamma_order",
    "is_confounder",
    "load_csv",
    "model_from_json",
    "model_to_json",
    "pit_frechet2",
    "random_dag",
    "random_lsem",
    "relabel_well_ordered",
    "select_nodes",
    "sid",
    "simulate",
    "standardize",
    "theoretical_causal_order",
    "theoretical_delta",
    "theoretical_max_scaling",
    "theoretical_scaled_max_scaling",
    "theoretical_scaling",
    "verify_path_inequality",
]
